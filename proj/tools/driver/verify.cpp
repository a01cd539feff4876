#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "driver.hpp"
#include "rqnl/entanglement.hpp"
#include "rqnl/nonlocality.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"

namespace rqnl::driver {

namespace {

constexpr double kPi = std::numbers::pi;

StateVector random_state(std::mt19937_64& rng, int n_modes) {
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << n_modes);
  for (auto& a : amps) a = Complex(g(rng), g(rng));
  return StateVector::normalized(std::move(amps));
}

CheckResult check_dual_path(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed ^ 0xD1A1ULL);
  std::uniform_int_distribution<int> modes(1, 3);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const int n = modes(rng);
    const auto psi = random_state(rng, n);
    const Mode mode(std::uniform_int_distribution<int>(1, n)(rng));
    for (int k = 0; k < 20; ++k) {
      const AccelerationParameter r(AccelerationParameter::kMax * k / 19.0);
      auto channel = build_channel(r);
      if (opt.fault == Fault::kraus_sign_flip) channel.kraus[0](1, 1) = -1.0;
      const auto kraus = apply_channel(DensityOperator::pure(psi), mode, channel);
      const auto dilation = apply_channel_by_dilation(psi, mode, r);
      worst = std::max(worst, max_abs_diff(kraus.matrix(), dilation.matrix()));
    }
  }
  return {"channel.dual_path", worst <= 1e-12, worst, 1e-12,
          {"200 random 1-3 mode states x 20 r values, Kraus vs dilation + trace"}};
}

CheckResult check_cptp(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed ^ 0xC97FULL);
  double worst = 0.0;
  std::vector<std::string> details;
  bool ok = true;
  for (int k = 0; k <= 20; ++k) {
    const AccelerationParameter r(AccelerationParameter::kMax * k / 20.0);
    worst = std::max(worst, build_channel(r).completeness_residual());
    for (int n = 1; n <= 3; ++n) {
      try {
        const auto out = apply_channel(DensityOperator::pure(random_state(rng, n)), Mode(n), r);
        worst = std::max(worst, std::abs(out.matrix().trace() - 1.0));
        worst = std::max(worst, out.matrix().hermiticity_residual());
      } catch (const std::exception& e) {
        ok = false;
        details.push_back(fmt::format("r={:.6f}: {}", r.value(), e.what()));
      }
    }
  }
  return {"channel.cptp", ok && worst <= 1e-12, worst, 1e-12, details};
}

CheckResult check_threshold() {
  const auto t = chsh_threshold();
  const auto r = acceleration_parameter(AccelerationSpec::from_omega(std::log(4.0) / (2.0 * kPi)));
  const double c = std::cos(t.r_t);
  const double worst = std::max({std::abs(r.value() - t.r_t), std::abs(c * c - 0.8),
                                 std::abs(chsh_restricted(r, t.gamma_star) - 2.0)});
  return {"chsh.threshold_consistency", worst <= 1e-12, worst, 1e-12,
          {fmt::format("r_t={:.12g} a_t/(omega c)={:.12g}", t.r_t, t.a_t_over_omega_c)}};
}

CheckResult check_correlation_law() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const AccelerationParameter r(AccelerationParameter::kMax * i / 19.0);
    const auto rho = apply_channel(DensityOperator::pure(singlet()), Mode(2), r);
    for (int j = 0; j < 20; ++j) {
      const double theta = kPi * j / 19.0;
      const double c = correlation(rho, MeasurementDirection::z_axis(),
                                   MeasurementDirection::from_angles(theta, 0.0));
      worst = std::max(worst, std::abs(c + r.cos() * r.cos() * std::cos(theta)));
    }
  }
  return {"correlation.damped_law", worst <= 1e-12, worst, 1e-12,
          {"C(z, b) = -cos^2 r cos theta on a 20x20 (r, theta) grid"}};
}

OptimizerConfig optimizer_for(const VerifyOptions& opt) {
  OptimizerConfig cfg;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  return cfg;
}

CheckResult check_chsh_oracle(const VerifyOptions& opt) {
  CheckResult out{"chsh.horodecki_vs_numeric", true, 0.0, 1e-4, {}};
  for (int i = 0; i <= 4; ++i) {
    const AccelerationParameter r(AccelerationParameter::kMax * i / 4.0);
    const auto rho = apply_channel(DensityOperator::pure(singlet()), Mode(2), r);
    const double closed = horodecki_max(rho);
    const auto numeric = maximize_chsh(rho, optimizer_for(opt));
    const double gap = std::abs(closed - numeric.value);
    out.measured = std::max(out.measured, gap);
    const bool witnessed = numeric.value >= numeric.lattice_witness - 0.05;
    out.passed = out.passed && gap <= out.tolerance && witnessed;
    out.details.push_back(fmt::format(
        "r={:.6f} horodecki={:.9f} numeric={:.9f} restricted={:.9f} witness={:.6f}", r.value(),
        closed, numeric.value, chsh_restricted(r, kPi / 3.0), numeric.lattice_witness));
  }
  return out;
}

CheckResult check_svetlichny_envelope(const VerifyOptions& opt) {
  CheckResult out{"svetlichny.numeric_vs_envelope", true, -1e300, 1e-6, {}};
  const double thetas[] = {kPi / 16, kPi / 8, 3 * kPi / 16, kPi / 4, 3 * kPi / 8};
  double tight_gap = 0.0;
  for (double t1 : thetas) {
    for (int i = 0; i <= 4; ++i) {
      const AccelerationParameter r(AccelerationParameter::kMax * i / 4.0);
      const auto p = StateParameter::gghz(t1);
      const auto rho = apply_channel(DensityOperator::pure(gghz(p)), Mode(3), r);
      const auto numeric = maximize_svetlichny(rho, optimizer_for(opt));
      const auto bound = svetlichny_bound_gghz(p, r);
      const double margin = numeric.value - bound.envelope;
      out.measured = std::max(out.measured, margin);
      bool ok = margin <= out.tolerance && numeric.value >= numeric.lattice_witness - 0.05;
      const double s2 = std::sin(2 * t1) * std::sin(2 * t1);
      if (i == 0 && s2 >= 0.5) {
        const double gap = std::abs(numeric.value - bound.c4_branch);
        tight_gap = std::max(tight_gap, gap);
        ok = ok && gap <= 1e-3;
      }
      out.passed = out.passed && ok;
      out.details.push_back(fmt::format(
          "theta1={:.6f} r={:.6f} numeric={:.9f} envelope={:.9f} margin={:+.3e} branch={}{}", t1,
          r.value(), numeric.value, bound.envelope, margin,
          bound.diag.branch_taken == GghzBranch::c3 ? "C3" : "C4",
          numeric.value > bound.bound + 1e-6 ? " (above selected branch)" : ""));
    }
  }
  out.details.push_back(fmt::format("inertial tightness gap vs C4 branch: {:.3e}", tight_gap));
  return out;
}

CheckResult check_ms_existence() {
  CheckResult out{"svetlichny.ms_violation_exists", true, 0.0, 0.0, {}};
  for (int i = 0; i < 32; ++i) {
    const AccelerationParameter r(AccelerationParameter::kMax * i / 32.0);
    double best1 = 0.0;
    double best2 = 0.0;
    for (int j = 0; j <= 64; ++j) {
      const auto t3 = StateParameter::ms(kPi * j / 64.0);
      best1 = std::max(best1, svetlichny_bound_ms_case1(t3, r));
      best2 = std::max(best2, svetlichny_bound_ms_case2(t3, r));
    }
    if (!violates_svetlichny(best1) || !violates_svetlichny(best2)) {
      out.passed = false;
      out.details.push_back(fmt::format("r={:.6f}: no violating theta3", r.value()));
    }
  }
  return out;
}

CheckResult check_pi_tangle() {
  CheckResult out{"entanglement.pi_tangle_monotone", true, 0.0, 0.0, {}};
  const double rs[] = {0.0, kPi / 16, kPi / 8, 3 * kPi / 16, kPi / 4 - 0.01};
  for (double rv : rs) {
    const AccelerationParameter r(rv);
    double prev = -1.0;
    for (int j = 1; j <= 32; ++j) {
      const auto rho = apply_channel(
          DensityOperator::pure(gghz(StateParameter::gghz(kPi / 4 * j / 32.0))), Mode(3), r);
      const double pi = pi_tangle(rho).pi;
      if (!(pi > prev)) {
        out.passed = false;
        out.details.push_back(fmt::format("gghz not increasing at r={:.4f}, step {}", rv, j));
      }
      prev = pi;
    }
  }
  double prev = 2.0;
  for (int i = 0; i <= 16; ++i) {
    const AccelerationParameter r(AccelerationParameter::kMax * i / 16.0);
    const double pi =
        pi_tangle(apply_channel(DensityOperator::pure(gghz(StateParameter::gghz(kPi / 4))), Mode(3), r)).pi;
    if (pi > prev + 1e-12) {
      out.passed = false;
      out.details.push_back(fmt::format("damped GHZ pi-tangle increased at r={:.4f}", r.value()));
    }
    prev = pi;
  }
  return out;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::text(ReportLevel level) const {
  std::string out;
  for (const auto& c : checks) {
    out += fmt::format("[{}] {:<34} measured={:.3e} tol={:.1e}\n", c.passed ? "PASS" : "FAIL", c.name,
                       c.measured, c.tolerance);
    if (level == ReportLevel::full || !c.passed) {
      for (const auto& d : c.details) out += fmt::format("       {}\n", d);
    }
  }
  out += passed() ? "all checks passed\n" : "verification FAILED\n";
  return out;
}

VerifyReport verify(const VerifyOptions& options) {
  VerifyReport report;
  report.checks.push_back(check_dual_path(options));
  report.checks.push_back(check_cptp(options));
  report.checks.push_back(check_threshold());
  report.checks.push_back(check_correlation_law());
  report.checks.push_back(check_chsh_oracle(options));
  report.checks.push_back(check_svetlichny_envelope(options));
  report.checks.push_back(check_ms_existence());
  report.checks.push_back(check_pi_tangle());
  return report;
}

}  // namespace rqnl::driver
