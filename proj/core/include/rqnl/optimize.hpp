#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rqnl/linalg.hpp"
#include "rqnl/states.hpp"

namespace rqnl {

/// Multistart simplex settings. A fixed seed gives bit-identical results for
/// any `jobs` value.
struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 2000;  // per restart, including re-initialized polish runs
  double tolerance = 1e-10;   // spread of objective values across the simplex
  std::uint64_t seed = 0;
  int jobs = 1;               // worker threads for independent restarts
};

/// Ordered tuple of unit vectors; one factor of the product of spheres each.
using SphereProductPoint = std::vector<MeasurementDirection>;

/// Black-box objective over n unit vectors.
using SphereObjective = std::function<double(std::span<const Vec3>)>;

struct SphereMaximum {
  double value;
  SphereProductPoint argmax;
  int best_restart;          // lowest index among restarts reaching `value`
  double best_start_value;   // largest objective value among restart start points
};

class NonFiniteObjective : public std::runtime_error {
 public:
  NonFiniteObjective(const std::string& what, SphereProductPoint point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const SphereProductPoint& point() const { return point_; }

 private:
  SphereProductPoint point_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Multistart Nelder-Mead in the 2n angle coordinates (theta, phi per vector).
/// Starts are uniform on each sphere. Throws NonFiniteObjective if f returns
/// NaN or infinity.
SphereMaximum maximize_over_spheres(const SphereObjective& f, int n_vectors,
                                    const OptimizerConfig& cfg);

/// Lattice step pi / divisor.
struct AngularResolution {
  int divisor;
  double radians() const { return std::numbers::pi / divisor; }
};

inline constexpr std::uint64_t kDefaultOracleBudget = 100'000'000;

/// Unit vectors of the (theta, phi) lattice: theta in {0, res, ..., pi},
/// phi in {0, res, ..., 2 pi - res}. The poles appear once each.
std::vector<Vec3> sphere_lattice(AngularResolution res);

/// Exact maximum of f over the lattice product, by enumeration. Throws
/// BudgetExceeded when the lattice has more than `budget` points.
double grid_oracle(const SphereObjective& f, int n_vectors, AngularResolution res,
                   std::uint64_t budget = kDefaultOracleBudget);

/// Objective of the form |v1 . u + v2 . w| with (u, w) a function of the
/// remaining vectors v3..vn. Both CHSH and Svetlichny expectations have this
/// shape since each is linear in every direction.
using LeadingPairReduction = std::function<std::pair<Vec3, Vec3>(std::span<const Vec3> rest)>;

/// Exact lattice maximum for a leading-pair objective. The last n-2 vectors
/// are enumerated; v1 and v2 are maximized independently per row of theta.
/// The budget counts enumerated tuples of the last n-2 vectors.
double grid_oracle(const LeadingPairReduction& reduce, int n_vectors, AngularResolution res,
                   std::uint64_t budget = kDefaultOracleBudget);

struct CertifiedMaximum {
  double value;
  SphereProductPoint argmax;
  /// Exact lattice maximum: a lower bound on the true maximum.
  double lattice_witness;
  AngularResolution witness_resolution;
};

inline constexpr AngularResolution kChshWitnessResolution{12};
inline constexpr AngularResolution kSvetlichnyWitnessResolution{4};

/// Maximum CHSH value over (a, a', b, b') on modes 1 and 2.
CertifiedMaximum maximize_chsh(const DensityOperator& rho, const OptimizerConfig& cfg);

/// Maximum Svetlichny value; argmax ordered (a, a', c, c', b, b').
CertifiedMaximum maximize_svetlichny(const DensityOperator& rho, const OptimizerConfig& cfg);

double chsh_lattice_witness(const DensityOperator& rho, AngularResolution res,
                            std::uint64_t budget = kDefaultOracleBudget);
double svetlichny_lattice_witness(const DensityOperator& rho, AngularResolution res,
                                  std::uint64_t budget = kDefaultOracleBudget);

}  // namespace rqnl
