#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rqnl/linalg.hpp"
#include "rqnl/optimize.hpp"

namespace rqnl::driver {

/// Invalid sweep or command input; maps to exit code 2.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StateKind { singlet, gghz, ms };

/// Output quantities in their fixed CSV order.
enum class Column {
  chsh_restricted_max,
  chsh_horodecki,
  chsh_numeric,
  svetlichny_bound,
  svetlichny_envelope,
  svetlichny_numeric,
  pi_tangle,
};

StateKind parse_state(std::string_view name);
Column parse_column(std::string_view name);
std::string_view column_name(Column c);
std::string_view state_name(StateKind s);

/// Parses "0.5", "pi", "pi/4", "3pi/8", "-pi/2", "0.25*pi".
double parse_angle(std::string_view text);

/// `steps` evenly spaced points from start to stop inclusive; one point is `start`.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  double at(int i) const;
};

struct SweepSpec {
  StateKind state = StateKind::gghz;
  Grid param;
  Grid r;
  /// Defaults: mode 2 for singlet and MS, mode 3 for GGHZ.
  std::optional<int> accelerated_mode;
  std::vector<Column> columns;
  std::uint64_t seed = 0;
  int jobs = 1;
  OptimizerConfig optimizer{};
};

/// Throws SpecError with a readable message when the spec is unusable.
void validate(const SweepSpec& spec);

/// CSV with header `state_param,r,...`, one row per grid point in row-major
/// (param-major) order, 12 significant digits, "\n" line endings. Every
/// CHSH/Svetlichny value column is followed by a `<name>_violated` 0/1 flag.
/// Output depends only on the spec and seed, never on `jobs`.
std::string run_sweep(const SweepSpec& spec);

/// {r_t, cos2_rt, a_t_over_omega_c, gamma_star} as JSON, 12 significant digits.
std::string solve_threshold();

struct PiTangleRequest {
  StateKind state = StateKind::gghz;
  double param = 0.0;
  std::optional<double> r;
  std::optional<double> omega_big;  // used only when r is absent
  std::optional<int> accelerated_mode;
};

/// {"r", "pi", "pi_a", "pi_b", "pi_c"} for a damped three-mode state.
std::string pi_tangle_report(const PiTangleRequest& req);

enum class ReportLevel { summary, full };

/// Faults injected by tests to prove a check can fail.
enum class Fault { none, kraus_sign_flip };

struct VerifyOptions {
  ReportLevel level = ReportLevel::summary;
  std::uint64_t seed = 0;
  int jobs = 1;
  Fault fault = Fault::none;
};

struct CheckResult {
  std::string name;
  bool passed;
  double measured;   // worst residual or margin, per check
  double tolerance;
  std::vector<std::string> details;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string text(ReportLevel level) const;
};

/// Cross-module consistency suite: dual-path channel, CPTP, threshold,
/// damped correlation law, optimizer against closed forms and lattice
/// witnesses, and entanglement monotonicity.
VerifyReport verify(const VerifyOptions& options);

}  // namespace rqnl::driver
