#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rqnl/nonlocality.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"

using namespace rqnl;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

DensityOperator damped_singlet(double r) {
  return apply_channel(DensityOperator::pure(singlet()), Mode(2), AccelerationParameter(r));
}

MeasurementDirection dir(const Vec3& v) { return MeasurementDirection::normalized(v); }

// Eight-term Svetlichny sum built from three-party correlators.
double svetlichny_oracle(const oracle::Mat& rho, const SvetlichnySettings& s) {
  auto e = [&](const MeasurementDirection& a, const MeasurementDirection& c, const MeasurementDirection& b) {
    const auto op = oracle::kron(oracle::kron(oracle::spin(a.vector()), oracle::spin(c.vector())),
                                 oracle::spin(b.vector()));
    return (rho * op).trace().real();
  };
  const double v = e(s.a, s.c, s.b) + e(s.a, s.c, s.b_prime) + e(s.a, s.c_prime, s.b) -
                   e(s.a, s.c_prime, s.b_prime) + e(s.a_prime, s.c, s.b) - e(s.a_prime, s.c, s.b_prime) -
                   e(s.a_prime, s.c_prime, s.b) - e(s.a_prime, s.c_prime, s.b_prime);
  return std::abs(v);
}

SvetlichnySettings random_settings(std::mt19937_64& rng) {
  auto d = [&] { return MeasurementDirection::from_vector(oracle::random_direction(rng)); };
  return {d(), d(), d(), d(), d(), d()};
}

}  // namespace

TEST(Correlation, SingletParallelZ) {
  const auto z = MeasurementDirection::z_axis();
  EXPECT_NEAR(correlation(damped_singlet(0.0), z, z), -1.0, 1e-15);
}

TEST(Correlation, SingletPerpendicular) {
  EXPECT_NEAR(correlation(damped_singlet(0.0), MeasurementDirection::z_axis(), MeasurementDirection::x_axis()),
              0.0, 1e-12);
}

TEST(Correlation, DampedParallelZ) {
  const auto z = MeasurementDirection::z_axis();
  for (int i = 0; i <= 10; ++i) {
    const double r = kPi / 4 * i / 10;
    EXPECT_NEAR(correlation(damped_singlet(r), z, z), -0.5 * (1 + std::cos(2 * r)), 1e-12);
  }
}

TEST(Correlation, DampedLawOnGrid) {
  for (int i = 0; i < 20; ++i) {
    const double r = kPi / 4 * i / 19;
    const auto rho = damped_singlet(r);
    for (int j = 0; j < 20; ++j) {
      const double theta = kPi * j / 19;
      const double got =
          correlation(rho, MeasurementDirection::z_axis(), MeasurementDirection::from_angles(theta, 0.0));
      EXPECT_NEAR(got, -std::cos(r) * std::cos(r) * std::cos(theta), 1e-12);
    }
  }
}

TEST(Correlation, AgreesWithOracleAndStaysInRange) {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 200; ++k) {
    const auto rho = oracle::random_density(rng, 2);
    const auto a = oracle::random_direction(rng);
    const auto b = oracle::random_direction(rng);
    const double got = correlation(DensityOperator(oracle::from_eigen(rho)), dir(a), dir(b));
    EXPECT_NEAR(got, oracle::correlation(rho, a, b), 1e-13);
    EXPECT_LE(std::abs(got), 1.0 + 1e-12);
  }
}

TEST(Correlation, ModeSelectionOnThreeModes) {
  std::mt19937_64 rng(102);
  const auto rho = oracle::random_density(rng, 3);
  const auto a = oracle::random_direction(rng);
  const auto b = oracle::random_direction(rng);
  const auto op = oracle::kron(oracle::kron(oracle::spin(a), oracle::id(1)), oracle::spin(b));
  EXPECT_NEAR(correlation(DensityOperator(oracle::from_eigen(rho)), dir(a), dir(b), Mode(1), Mode(3)),
              (rho * op).trace().real(), 1e-13);
}

TEST(Correlation, Errors) {
  const auto z = MeasurementDirection::z_axis();
  EXPECT_THROW(correlation(DensityOperator::maximally_mixed(1), z, z), std::invalid_argument);
  EXPECT_THROW(correlation(damped_singlet(0.0), z, z, Mode(1), Mode(1)), std::invalid_argument);
  EXPECT_THROW(correlation(damped_singlet(0.0), z, z, Mode(1), Mode(3)), std::out_of_range);
}

TEST(Chsh, OptimalSettingsOnSinglet) {
  const ChshSettings s{MeasurementDirection::z_axis(), MeasurementDirection::x_axis(), dir({-1.0, 0.0, -1.0}),
                       dir({1.0, 0.0, -1.0})};
  const auto rho = damped_singlet(0.0);
  EXPECT_NEAR(chsh_value(rho, s), 2 * kSqrt2, 1e-12);
  EXPECT_NEAR(horodecki_max(rho), chsh_value(rho, s), 1e-12);
}

TEST(Chsh, DegenerateSettingsStayClassical) {
  std::mt19937_64 rng(103);
  for (int k = 0; k < 50; ++k) {
    const auto d = dir(oracle::random_direction(rng));
    const auto rho = DensityOperator(oracle::from_eigen(oracle::random_density(rng, 2)));
    const double v = chsh_value(rho, {d, d, d, d});
    EXPECT_NEAR(v, std::abs(2 * correlation(rho, d, d)), 1e-12);
    EXPECT_LE(v, 2.0 + 1e-12);
  }
}

TEST(Chsh, TsirelsonOnRandomStatesAndSettings) {
  std::mt19937_64 rng(104);
  for (int k = 0; k < 1000; ++k) {
    const auto rho_e = oracle::random_density(rng, 2);
    const DensityOperator rho(oracle::from_eigen(rho_e));
    const ChshSettings s{dir(oracle::random_direction(rng)), dir(oracle::random_direction(rng)),
                         dir(oracle::random_direction(rng)), dir(oracle::random_direction(rng))};
    const double v = chsh_value(rho, s);
    const double want = std::abs(oracle::correlation(rho_e, s.a.vector(), s.b.vector()) +
                                 oracle::correlation(rho_e, s.a.vector(), s.b_prime.vector()) +
                                 oracle::correlation(rho_e, s.a_prime.vector(), s.b.vector()) -
                                 oracle::correlation(rho_e, s.a_prime.vector(), s.b_prime.vector()));
    EXPECT_NEAR(v, want, 1e-12);
    EXPECT_LE(v, 2 * kSqrt2 + 1e-9);
  }
}

TEST(Chsh, PureStatesObeyTsirelson) {
  std::mt19937_64 rng(105);
  for (int k = 0; k < 500; ++k) {
    const auto psi = oracle::random_state(rng, 2);
    const auto rho = DensityOperator::pure(oracle::to_state(psi));
    const ChshSettings s{dir(oracle::random_direction(rng)), dir(oracle::random_direction(rng)),
                         dir(oracle::random_direction(rng)), dir(oracle::random_direction(rng))};
    EXPECT_LE(chsh_value(rho, s), 2 * kSqrt2 + 1e-9);
  }
}

TEST(ChshRestricted, Examples) {
  EXPECT_NEAR(chsh_restricted(AccelerationParameter(0.0), 0.0), 2.0, 1e-15);
  EXPECT_NEAR(chsh_restricted(AccelerationParameter(0.0), kPi / 3), 2.5, 1e-15);
  const AccelerationParameter rt(std::acos(2.0 / std::sqrt(5.0)));
  EXPECT_NEAR(chsh_restricted(rt, kPi / 3), 2.0, 1e-15);
}

TEST(ChshRestricted, ScanFindsMaximizerAtPiOverThree) {
  double best = -1.0;
  double arg = 0.0;
  for (int k = 0; k <= 600000; ++k) {
    const double g = kPi * k / 600000;
    const double v = chsh_restricted(AccelerationParameter(0.0), g);
    if (v > best) {
      best = v;
      arg = g;
    }
  }
  EXPECT_NEAR(arg, kPi / 3, 1e-5);
  EXPECT_NEAR(best, 2.5, 1e-9);
}

TEST(ChshRestricted, CoplanarFamilyMatchesInertially) {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> gam(0.0, 2 * kPi);
  const auto rho = damped_singlet(0.0);
  for (int k = 0; k < 100; ++k) {
    const double g = gam(rng);
    EXPECT_NEAR(chsh_value(rho, restricted_chsh_settings(g)), chsh_restricted(AccelerationParameter(0.0), g),
                1e-12);
  }
}

// With the damped channel the correlation matrix is diag(-c, -c, -c^2), so the
// coplanar family picks up a c(1 - c) sin^2 g excess over the restricted formula,
// which treats every correlation as -c^2 cos(angle).
TEST(ChshRestricted, CoplanarFamilyUnderDamping) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> gam(0.0, 2.2);  // sin^2 g + cos g >= 0 here
  std::uniform_real_distribution<double> rr(0.0, kPi / 4);
  for (int k = 0; k < 100; ++k) {
    const double g = gam(rng);
    const double r = rr(rng);
    const double c = std::cos(r);
    const auto rho = damped_singlet(r);
    const auto s = restricted_chsh_settings(g);
    const double family = chsh_value(rho, s);
    const auto rho_e = oracle::to_eigen(rho.matrix());
    const double direct = std::abs(oracle::correlation(rho_e, s.a.vector(), s.b.vector()) +
                                   oracle::correlation(rho_e, s.a.vector(), s.b_prime.vector()) +
                                   oracle::correlation(rho_e, s.a_prime.vector(), s.b.vector()) -
                                   oracle::correlation(rho_e, s.a_prime.vector(), s.b_prime.vector()));
    EXPECT_NEAR(family, direct, 1e-12);
    const double formula = 2 * c * c * (std::sin(g) * std::sin(g) + std::cos(g));
    EXPECT_NEAR(family - std::abs(formula), c * (1 - c) * std::sin(g) * std::sin(g), 1e-12)
        << "r=" << r << " g=" << g;
  }
}

TEST(ChshThreshold, Values) {
  const auto t = chsh_threshold();
  EXPECT_NEAR(t.a_t_over_omega_c, 2 * kPi / std::log(4.0), 1e-12);
  EXPECT_NEAR(t.a_t_over_omega_c, 4.53236014183, 1e-11);
  EXPECT_NEAR(t.cos2_rt, 0.8, 1e-15);
  EXPECT_NEAR(t.r_t, std::acos(2 / std::sqrt(5.0)), 1e-15);
  EXPECT_NEAR(t.gamma_star, kPi / 3, 1e-15);
  const auto r = acceleration_parameter(AccelerationSpec::from_omega(std::log(4.0) / (2 * kPi)));
  EXPECT_NEAR(r.value(), t.r_t, 1e-12);
}

TEST(ChshThreshold, RestrictedMaximumAtThreshold) {
  const AccelerationParameter rt(chsh_threshold().r_t);
  double best = 0.0;
  for (int k = 0; k <= 200000; ++k) best = std::max(best, chsh_restricted(rt, kPi * k / 200000));
  EXPECT_NEAR(best, 2.0, 1e-9);
}

TEST(ChshThreshold, ViolationOnlyBelowThreshold) {
  const double rt = chsh_threshold().r_t;
  for (int i = 0; i <= 200; ++i) {
    const double r = kPi / 4 * i / 200;
    if (std::abs(r - rt) < 1e-3) continue;
    double best = 0.0;
    for (int k = 0; k <= 2000; ++k) best = std::max(best, chsh_restricted(AccelerationParameter(r), kPi * k / 2000));
    const double c2 = std::cos(r) * std::cos(r);
    EXPECT_EQ(violates_chsh(best), c2 > 0.8) << "r=" << r;
  }
}

TEST(Horodecki, SingletAndDampedSinglet) {
  EXPECT_NEAR(horodecki_max(damped_singlet(0.0)), 2 * kSqrt2, 1e-12);
  for (int i = 0; i <= 10; ++i) {
    const double r = kPi / 4 * i / 10;
    EXPECT_NEAR(horodecki_max(damped_singlet(r)), 2 * kSqrt2 * std::cos(r), 1e-12);
  }
}

TEST(Horodecki, ProductStatesStayClassical) {
  std::mt19937_64 rng(108);
  for (int k = 0; k < 100; ++k) {
    const DensityOperator rho(
        oracle::from_eigen(oracle::kron(oracle::random_density(rng, 1), oracle::random_density(rng, 1))));
    EXPECT_LE(horodecki_max(rho), 2.0 + 1e-12);
  }
}

TEST(Horodecki, MatchesEigenOracle) {
  std::mt19937_64 rng(109);
  for (int k = 0; k < 100; ++k) {
    const auto rho = oracle::random_density(rng, 2);
    Eigen::Matrix3d t;
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(i, j) = oracle::correlation(rho, axes[i], axes[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
    const double want = 2 * std::sqrt(es.eigenvalues()(1) + es.eigenvalues()(2));
    EXPECT_NEAR(horodecki_max(DensityOperator(oracle::from_eigen(rho))), want, 1e-12);
  }
}

TEST(Svetlichny, ProductStateAlongZ) {
  // All six settings along z: K' = 0, and the A(CK) and A'(-C'K) terms cancel.
  const auto z = MeasurementDirection::z_axis();
  const auto rho = DensityOperator::pure(StateVector::basis(3, 0));
  const SvetlichnySettings s{z, z, z, z, z, z};
  EXPECT_NEAR(svetlichny_expectation(rho, s), 0.0, 1e-15);
  EXPECT_NEAR(svetlichny_oracle(oracle::to_eigen(rho.matrix()), s), 0.0, 1e-15);
}

TEST(Svetlichny, GhzKnownSettingsReachAlgebraicMaximum) {
  const auto rho = DensityOperator::pure(gghz(StateParameter::gghz(kPi / 4)));
  auto xy = [](double phi) { return MeasurementDirection::from_angles(kPi / 2, phi); };
  const SvetlichnySettings s{xy(0.0), xy(kPi / 2), xy(0.0), xy(kPi / 2), xy(-kPi / 4), xy(kPi / 4)};
  EXPECT_NEAR(svetlichny_expectation(rho, s), 4 * kSqrt2, 1e-12);
}

TEST(Svetlichny, AgreesWithEightTermOracle) {
  std::mt19937_64 rng(110);
  for (int k = 0; k < 300; ++k) {
    const auto rho = oracle::random_density(rng, 3);
    const auto s = random_settings(rng);
    const DensityOperator lib(oracle::from_eigen(rho));
    const double v = svetlichny_expectation(lib, s);
    EXPECT_NEAR(v, svetlichny_oracle(rho, s), 1e-12);
    EXPECT_LE(v, 4 * kSqrt2 + 1e-9);
    const auto t = correlation_tensor(lib);
    EXPECT_NEAR(svetlichny_expectation(t, s.a.vector(), s.a_prime.vector(), s.c.vector(), s.c_prime.vector(),
                                       s.b.vector(), s.b_prime.vector()),
                v, 1e-12);
  }
}

TEST(Svetlichny, CollapsedSettingsStayBelowFour) {
  std::mt19937_64 rng(111);
  for (int k = 0; k < 300; ++k) {
    const DensityOperator rho(oracle::from_eigen(oracle::random_density(rng, 3)));
    auto s = random_settings(rng);
    s.a_prime = s.a;
    s.b_prime = s.b;
    EXPECT_LE(svetlichny_expectation(rho, s), 4.0 + 1e-12);
  }
}

TEST(Svetlichny, InvariantUnderSwappingEveryPair) {
  std::mt19937_64 rng(112);
  for (int k = 0; k < 200; ++k) {
    const DensityOperator rho(oracle::from_eigen(oracle::random_density(rng, 3)));
    const auto s = random_settings(rng);
    const SvetlichnySettings swapped{s.a_prime, s.a, s.c_prime, s.c, s.b_prime, s.b};
    EXPECT_NEAR(svetlichny_expectation(rho, s), svetlichny_expectation(rho, swapped), 1e-12);
  }
}

TEST(Svetlichny, RejectsWrongModeCount) {
  const auto z = MeasurementDirection::z_axis();
  EXPECT_THROW(svetlichny_expectation(damped_singlet(0.0), {z, z, z, z, z, z}), std::invalid_argument);
}

TEST(GghzBound, GhzInertial) {
  const auto b = svetlichny_bound_gghz(StateParameter::gghz(kPi / 4), AccelerationParameter(0.0));
  EXPECT_NEAR(b.bound, 4 * kSqrt2, 1e-12);
  EXPECT_EQ(b.diag.branch_taken, GghzBranch::c4);
  EXPECT_NEAR(b.diag.c3, 0.0, 1e-15);
  EXPECT_NEAR(b.diag.c4, 1.0, 1e-15);
}

TEST(GghzBound, ProductLimitFollowsC3Branch) {
  for (int i = 0; i <= 8; ++i) {
    const AccelerationParameter r(kPi / 4 * i / 8);
    const auto b = svetlichny_bound_gghz(StateParameter::gghz(0.0), r);
    EXPECT_EQ(b.diag.branch_taken, GghzBranch::c3);
    EXPECT_NEAR(b.bound, 4 * std::cos(2 * r.value()), 1e-12);
    EXPECT_NEAR(b.diag.c4, 0.0, 1e-15);
  }
}

TEST(GghzBound, GhzAtInfiniteAcceleration) {
  const auto b = svetlichny_bound_gghz(StateParameter::gghz(kPi / 4), AccelerationParameter::infinite());
  EXPECT_NEAR(b.bound, 4.0, 1e-12);
  EXPECT_FALSE(violates_svetlichny(b.bound));
}

TEST(GghzBound, DiagnosticsAndEnvelope) {
  for (int i = 0; i <= 16; ++i) {
    for (int j = 0; j <= 16; ++j) {
      const double t = kPi / 2 * i / 16;
      const double r = kPi / 4 * j / 16;
      const auto b = svetlichny_bound_gghz(StateParameter::gghz(t), AccelerationParameter(r));
      const double c2 = std::cos(r) * std::cos(r);
      const double c3 = std::pow(2 * std::cos(t) * std::cos(t) * c2 - 1, 2);
      const double c4 = std::pow(std::sin(2 * t), 2) * c2;
      EXPECT_NEAR(b.diag.c3, c3, 1e-14);
      EXPECT_NEAR(b.diag.c4, c4, 1e-14);
      EXPECT_NEAR(b.c3_branch, 4 * std::sqrt(c3), 1e-12);
      EXPECT_NEAR(b.c4_branch, 4 * std::sqrt(2 * c4), 1e-12);
      EXPECT_EQ(b.envelope, std::max(b.c3_branch, b.c4_branch));
      EXPECT_EQ(b.diag.branch_taken == GghzBranch::c3, c3 >= c4);
    }
  }
}

TEST(MsBound, CaseOneExamples) {
  EXPECT_NEAR(svetlichny_bound_ms_case1(StateParameter::ms(kPi / 2), AccelerationParameter(0.0)), 4 * kSqrt2, 1e-12);
  EXPECT_NEAR(svetlichny_bound_ms_case1(StateParameter::ms(kPi / 2), AccelerationParameter::infinite()), 4.0, 1e-12);
  for (int i = 0; i <= 8; ++i) {
    const AccelerationParameter r(kPi / 4 * i / 8);
    const double v = svetlichny_bound_ms_case1(StateParameter::ms(0.0), r);
    EXPECT_NEAR(v, 4 * r.cos(), 1e-12);
    EXPECT_LE(v, 4.0 + 1e-12);
  }
}

TEST(MsBound, CaseTwoExamples) {
  EXPECT_NEAR(svetlichny_bound_ms_case2(StateParameter::ms(kPi / 2), AccelerationParameter(0.0)), 4 * kSqrt2, 1e-12);
  EXPECT_NEAR(svetlichny_bound_ms_case2(StateParameter::ms(kPi / 2), AccelerationParameter::infinite()), 4.0, 1e-12);
  EXPECT_NEAR(svetlichny_bound_ms_case2(StateParameter::ms(0.0), AccelerationParameter::infinite()), 0.0, 1e-12);
}

TEST(MsBound, ViolationRegionForCaseOne) {
  for (int i = 0; i < 32; ++i) {
    const double r = kPi / 4 * i / 32;
    for (int j = 0; j <= 32; ++j) {
      const double t = kPi * j / 32;
      const double v = svetlichny_bound_ms_case1(StateParameter::ms(t), AccelerationParameter(r));
      const double s2 = std::sin(t) * std::sin(t);
      const double tan2 = std::tan(r) * std::tan(r);
      if (std::abs(s2 - tan2) > 1e-9) {
        EXPECT_EQ(v > 4.0, s2 > tan2) << "r=" << r << " t=" << t;
      }
    }
  }
}

TEST(MsBound, MonotoneInAccelerationAndViolatedNearLimit) {
  for (int j = 0; j <= 16; ++j) {
    const auto t = StateParameter::ms(kPi * j / 16);
    double p1 = INFINITY;
    double p2 = INFINITY;
    for (int i = 0; i <= 64; ++i) {
      const AccelerationParameter r(kPi / 4 * i / 64);
      const double v1 = svetlichny_bound_ms_case1(t, r);
      const double v2 = svetlichny_bound_ms_case2(t, r);
      EXPECT_LE(v1, p1 + 1e-12);
      EXPECT_LE(v2, p2 + 1e-12);
      p1 = v1;
      p2 = v2;
    }
  }
  const AccelerationParameter near(kPi / 4 - 0.01);
  const double s = std::sqrt(0.5 * (1 + std::pow(std::tan(near.value()), 2)));  // sin^2 > tan^2 r
  const auto t = StateParameter::ms(std::asin(std::min(1.0, s)));
  EXPECT_TRUE(violates_svetlichny(svetlichny_bound_ms_case1(t, near)));
  EXPECT_TRUE(violates_svetlichny(svetlichny_bound_ms_case2(StateParameter::ms(kPi / 2), near)));
}

TEST(ViolationPredicates, ToleranceIsStrict) {
  EXPECT_FALSE(violates_chsh(2.0));
  EXPECT_FALSE(violates_chsh(2.0 + 5e-10));
  EXPECT_TRUE(violates_chsh(2.0 + 2e-9));
  EXPECT_FALSE(violates_svetlichny(4.0 + 1e-10));
  EXPECT_TRUE(violates_svetlichny(4.0 + 1e-8));
}
