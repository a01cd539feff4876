#pragma once

#include "rqnl/entanglement.hpp"
#include "rqnl/linalg.hpp"
#include "rqnl/nonlocality.hpp"
#include "rqnl/optimize.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"
