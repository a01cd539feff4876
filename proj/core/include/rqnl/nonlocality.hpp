#pragma once

#include <array>

#include "rqnl/linalg.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"

namespace rqnl {

/// Local-realistic CHSH bound and the hybrid local/nonlocal Svetlichny bound.
inline constexpr double kChshClassicalBound = 2.0;
inline constexpr double kSvetlichnyClassicalBound = 4.0;
/// A value counts as a violation only if it clears the bound by more than this.
inline constexpr double kViolationTolerance = 1e-9;

bool violates_chsh(double value);
bool violates_svetlichny(double value);

struct ChshSettings {
  MeasurementDirection a, a_prime;  // Alice
  MeasurementDirection b, b_prime;  // Bob
  Mode alice{1};
  Mode bob{2};
};

/// Alice measures A/A' on mode 1, Charlie C/C' on mode 2, Bob B/B' on mode 3.
struct SvetlichnySettings {
  MeasurementDirection a, a_prime;
  MeasurementDirection c, c_prime;
  MeasurementDirection b, b_prime;
};

/// T_ij = Tr[rho sigma_i (x) sigma_j] for a two-mode operator.
using CorrelationMatrix = std::array<std::array<double, 3>, 3>;
/// T_ijk = Tr[rho sigma_i (x) sigma_j (x) sigma_k] for a three-mode operator,
/// flattened as 9 i + 3 j + k.
using CorrelationTensor = std::array<double, 27>;

CorrelationMatrix correlation_matrix(const DensityOperator& rho);
CorrelationTensor correlation_tensor(const DensityOperator& rho);

/// Tr[rho (a.sigma on mode_a)(b.sigma on mode_b)], identity elsewhere.
double correlation(const DensityOperator& rho, const MeasurementDirection& a,
                   const MeasurementDirection& b, Mode mode_a = Mode(1), Mode mode_b = Mode(2));

/// |C(a,b) + C(a',b) + C(a,b') - C(a',b')|.
double chsh_value(const DensityOperator& rho, const ChshSettings& s);

/// Same combination evaluated from a precomputed correlation matrix.
double chsh_value(const CorrelationMatrix& t, const Vec3& a, const Vec3& a_prime, const Vec3& b,
                  const Vec3& b_prime);

/// Coplanar family in the x-z plane with a = b = z and the primed axes tilted
/// by gamma on opposite sides, so theta_ab' = theta_a'b = gamma.
ChshSettings restricted_chsh_settings(double gamma);

/// 2 cos^2 r |sin^2 gamma + cos gamma|: the CHSH left-hand side when every
/// correlation follows -cos^2 r cos(theta) on the restricted family.
double chsh_restricted(AccelerationParameter r, double gamma);

struct ChshThreshold {
  double r_t;               // arccos(2 / sqrt 5)
  double cos2_rt;           // 4/5
  double a_t_over_omega_c;  // 2 pi / ln 4
  double gamma_star;        // pi / 3, maximizer of |sin^2 g + cos g|
};

/// Acceleration at which the restricted CHSH maximum 2.5 cos^2 r reaches 2.
ChshThreshold chsh_threshold();

/// Maximal CHSH value 2 sqrt(t1 + t2) over all settings, with t1 >= t2 the two
/// largest eigenvalues of T^T T.
double horodecki_max(const DensityOperator& rho);

/// Builds S = A(CK + C'K') + A'(CK' - C'K) with K = B + B', K' = B - B'.
ComplexMatrix svetlichny_operator(const SvetlichnySettings& s);

/// |Tr[rho S]| for a three-mode operator.
double svetlichny_expectation(const DensityOperator& rho, const SvetlichnySettings& s);

/// Same quantity from a precomputed correlation tensor. Argument order
/// follows SvetlichnySettings.
double svetlichny_expectation(const CorrelationTensor& t, const Vec3& a, const Vec3& a_prime,
                              const Vec3& c, const Vec3& c_prime, const Vec3& b,
                              const Vec3& b_prime);

enum class GghzBranch { c3, c4 };

struct BranchDiagnostics {
  double c3;  // (2 cos^2 t1 cos^2 r - 1)^2
  double c4;  // sin^2 2t1 cos^2 r
  GghzBranch branch_taken;
};

struct GghzSvetlichnyBound {
  double bound;      // branch selected by C3 >= C4
  double c3_branch;  // 4 sqrt(C3)
  double c4_branch;  // 4 sqrt(2 C4)
  double envelope;   // max of the two branches
  BranchDiagnostics diag;
};

/// Upper bound on the Svetlichny value of the GGHZ state with one damped mode.
GghzSvetlichnyBound svetlichny_bound_gghz(StateParameter theta1, AccelerationParameter r);

/// MS state with the channel on mode 1 or 2: 4 cos r sqrt(cos^2 t3 + 2 sin^2 t3).
double svetlichny_bound_ms_case1(StateParameter theta3, AccelerationParameter r);

/// MS state with the channel on mode 3: 4 sqrt(cos^2 t3 cos^2 2r + 2 sin^2 t3 cos^2 r).
double svetlichny_bound_ms_case2(StateParameter theta3, AccelerationParameter r);

}  // namespace rqnl
