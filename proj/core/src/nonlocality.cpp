#include "rqnl/nonlocality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rqnl {

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
constexpr double kSvetlichnyAlgebraicMax = 4.0 * std::numbers::sqrt2;
constexpr double kBoundSlack = 1e-9;

// Sanity rails on the quantum maxima; compiled in for test builds only.
void check_quantum_bound([[maybe_unused]] double value, [[maybe_unused]] double bound,
                         [[maybe_unused]] const char* what) {
#ifdef RQNL_BOUND_CHECKS
  if (value > bound + kBoundSlack) {
    throw std::logic_error(std::string(what) + " value " + std::to_string(value) +
                           " exceeds its quantum maximum");
  }
#endif
}

std::array<ComplexMatrix, 3> paulis() { return {pauli::x(), pauli::y(), pauli::z()}; }

void require_modes(const DensityOperator& rho, int n, const char* what) {
  if (rho.n_modes() != n) {
    throw std::invalid_argument(std::string(what) + " expects a " + std::to_string(n) +
                                "-mode operator, got " + std::to_string(rho.n_modes()));
  }
}

// sum_ijk t_ijk x_i y_j z_k
double contract(const CorrelationTensor& t, const Vec3& x, const Vec3& y, const Vec3& z) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double* row = &t[9 * i + 3 * j];
      inner += y[j] * (row[0] * z[0] + row[1] * z[1] + row[2] * z[2]);
    }
    acc += x[i] * inner;
  }
  return acc;
}

double bilinear(const CorrelationMatrix& t, const Vec3& x, const Vec3& y) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) acc += x[i] * (t[i][0] * y[0] + t[i][1] * y[1] + t[i][2] * y[2]);
  return acc;
}

}  // namespace

bool violates_chsh(double value) { return value > kChshClassicalBound + kViolationTolerance; }
bool violates_svetlichny(double value) {
  return value > kSvetlichnyClassicalBound + kViolationTolerance;
}

CorrelationMatrix correlation_matrix(const DensityOperator& rho) {
  require_modes(rho, 2, "correlation_matrix");
  const auto s = paulis();
  CorrelationMatrix t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = rho.expectation(tensor(s[i], s[j])).real();
  return t;
}

CorrelationTensor correlation_tensor(const DensityOperator& rho) {
  require_modes(rho, 3, "correlation_tensor");
  const auto s = paulis();
  CorrelationTensor t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        t[9 * i + 3 * j + k] = rho.expectation(tensor({s[i], s[j], s[k]})).real();
  return t;
}

double correlation(const DensityOperator& rho, const MeasurementDirection& a,
                   const MeasurementDirection& b, Mode mode_a, Mode mode_b) {
  if (rho.n_modes() < 2) throw std::invalid_argument("correlation needs at least two modes");
  if (mode_a == mode_b) throw std::invalid_argument("correlation needs two distinct modes");
  const int n = rho.n_modes();
  const auto op = embed(spin_observable(a), mode_a, n) * embed(spin_observable(b), mode_b, n);
  return rho.expectation(op).real();
}

double chsh_value(const DensityOperator& rho, const ChshSettings& s) {
  require_modes(rho, 2, "chsh_value");
  const double v = std::abs(correlation(rho, s.a, s.b, s.alice, s.bob) +
                            correlation(rho, s.a_prime, s.b, s.alice, s.bob) +
                            correlation(rho, s.a, s.b_prime, s.alice, s.bob) -
                            correlation(rho, s.a_prime, s.b_prime, s.alice, s.bob));
  check_quantum_bound(v, kTsirelson, "CHSH");
  return v;
}

double chsh_value(const CorrelationMatrix& t, const Vec3& a, const Vec3& a_prime, const Vec3& b,
                  const Vec3& b_prime) {
  const Vec3 sum{b[0] + b_prime[0], b[1] + b_prime[1], b[2] + b_prime[2]};
  const Vec3 diff{b[0] - b_prime[0], b[1] - b_prime[1], b[2] - b_prime[2]};
  const double v = std::abs(bilinear(t, a, sum) + bilinear(t, a_prime, diff));
  check_quantum_bound(v, kTsirelson, "CHSH");
  return v;
}

ChshSettings restricted_chsh_settings(double gamma) {
  const auto z = MeasurementDirection::z_axis();
  return ChshSettings{z, MeasurementDirection::from_angles(gamma, std::numbers::pi), z,
                      MeasurementDirection::from_angles(gamma, 0.0)};
}

double chsh_restricted(AccelerationParameter r, double gamma) {
  const double c = r.cos();
  const double s = std::sin(gamma);
  return 2.0 * c * c * std::abs(s * s + std::cos(gamma));
}

ChshThreshold chsh_threshold() {
  const double ln4 = std::log(4.0);
  return ChshThreshold{std::acos(2.0 / std::sqrt(5.0)), 0.8, 2.0 * std::numbers::pi / ln4,
                       std::numbers::pi / 3.0};
}

double horodecki_max(const DensityOperator& rho) {
  const auto t = correlation_matrix(rho);
  ComplexMatrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += t[k][i] * t[k][j];
      m(i, j) = s;
    }
  const auto eig = hermitian_eigenvalues(m);
  const double top_two = std::max(0.0, eig[2] + eig[1]);
  return 2.0 * std::sqrt(top_two);
}

ComplexMatrix svetlichny_operator(const SvetlichnySettings& s) {
  const auto a = spin_observable(s.a);
  const auto ap = spin_observable(s.a_prime);
  const auto c = spin_observable(s.c);
  const auto cp = spin_observable(s.c_prime);
  const auto b = spin_observable(s.b);
  const auto bp = spin_observable(s.b_prime);
  const auto k = b + bp;
  const auto kp = b - bp;
  return tensor({a, c, k}) + tensor({a, cp, kp}) + tensor({ap, c, kp}) - tensor({ap, cp, k});
}

double svetlichny_expectation(const DensityOperator& rho, const SvetlichnySettings& s) {
  require_modes(rho, 3, "svetlichny_expectation");
  const double v = std::abs(rho.expectation(svetlichny_operator(s)).real());
  check_quantum_bound(v, kSvetlichnyAlgebraicMax, "Svetlichny");
  return v;
}

double svetlichny_expectation(const CorrelationTensor& t, const Vec3& a, const Vec3& a_prime,
                              const Vec3& c, const Vec3& c_prime, const Vec3& b,
                              const Vec3& b_prime) {
  const Vec3 k{b[0] + b_prime[0], b[1] + b_prime[1], b[2] + b_prime[2]};
  const Vec3 kp{b[0] - b_prime[0], b[1] - b_prime[1], b[2] - b_prime[2]};
  const double v = std::abs(contract(t, a, c, k) + contract(t, a, c_prime, kp) +
                            contract(t, a_prime, c, kp) - contract(t, a_prime, c_prime, k));
  check_quantum_bound(v, kSvetlichnyAlgebraicMax, "Svetlichny");
  return v;
}

GghzSvetlichnyBound svetlichny_bound_gghz(StateParameter theta1, AccelerationParameter r) {
  const double t = theta1.value();
  const double cr = r.cos();
  const double ct = std::cos(t);
  const double s2t = std::sin(2.0 * t);
  const double inner = 2.0 * ct * ct * cr * cr - 1.0;
  const double c3 = inner * inner;
  const double c4 = s2t * s2t * cr * cr;
  const double c3_branch = 4.0 * std::abs(inner);
  const double c4_branch = 4.0 * std::numbers::sqrt2 * std::abs(s2t) * cr;
  const GghzBranch taken = c3 >= c4 ? GghzBranch::c3 : GghzBranch::c4;
  return GghzSvetlichnyBound{taken == GghzBranch::c3 ? c3_branch : c4_branch, c3_branch,
                             c4_branch, std::max(c3_branch, c4_branch),
                             BranchDiagnostics{c3, c4, taken}};
}

double svetlichny_bound_ms_case1(StateParameter theta3, AccelerationParameter r) {
  const double c = std::cos(theta3.value());
  const double s = std::sin(theta3.value());
  return 4.0 * r.cos() * std::sqrt(c * c + 2.0 * s * s);
}

double svetlichny_bound_ms_case2(StateParameter theta3, AccelerationParameter r) {
  const double c = std::cos(theta3.value());
  const double s = std::sin(theta3.value());
  const double c2r = std::cos(2.0 * r.value());
  const double cr = r.cos();
  return 4.0 * std::sqrt(c * c * c2r * c2r + 2.0 * s * s * cr * cr);
}

}  // namespace rqnl
