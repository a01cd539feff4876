#pragma once

#include <variant>

#include "rqnl/linalg.hpp"

namespace rqnl {

/// Bipartition of one mode against all others.
struct OneVsRest {
  Mode pivot;
};

/// Two-mode reduction (every other mode traced out), transposed on `first`.
struct ModePair {
  Mode first;
  Mode second;
};

using PartitionLabel = std::variant<OneVsRest, ModePair>;

/// N = ||rho^{T_pivot}||_1 - 1, so a Bell pair has N = 1. Rounding residue
/// below 1e-12 is reported as 0.
double negativity(const DensityOperator& rho, const PartitionLabel& partition);

struct PiTangle {
  double pi;    // mean of the three residuals; components within 1e-12 below zero count as 0
  double pi_a;  // N_A(BC)^2 - N_AB^2 - N_AC^2, unclamped
  double pi_b;
  double pi_c;
};

/// Negativity-based tripartite residual entanglement of a three-mode operator.
PiTangle pi_tangle(const DensityOperator& rho);

}  // namespace rqnl
