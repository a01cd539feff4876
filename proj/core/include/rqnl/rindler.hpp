#pragma once

#include <array>
#include <numbers>

#include "rqnl/linalg.hpp"

namespace rqnl {

/// Acceleration parameter r in [0, pi/4]: 0 is an inertial observer, pi/4 the
/// infinite-acceleration limit.
class AccelerationParameter {
 public:
  static constexpr double kMax = std::numbers::pi / 4.0;

  /// Throws std::domain_error outside [0, pi/4].
  explicit AccelerationParameter(double r);

  static AccelerationParameter inertial() { return AccelerationParameter(0.0); }
  static AccelerationParameter infinite() { return AccelerationParameter(kMax); }

  double value() const { return r_; }
  double cos() const;
  double sin() const;

 private:
  double r_;
};

/// Dimensionless Omega = omega c / a. Omega = +inf is an inertial observer and
/// Omega = 0 the infinite-acceleration limit; both are explicit factories.
class AccelerationSpec {
 public:
  /// Finite Omega > 0.
  static AccelerationSpec from_omega(double omega_big);
  /// Omega from frequency, speed of light and proper acceleration (all > 0).
  static AccelerationSpec from_physical(double omega, double c, double a);
  static AccelerationSpec inertial();
  static AccelerationSpec infinite_acceleration();

  double omega_big() const { return omega_big_; }

 private:
  explicit AccelerationSpec(double omega_big) : omega_big_(omega_big) {}
  double omega_big_;
};

/// r with cos r = 1 / sqrt(1 + exp(-2 pi Omega)), strictly decreasing in Omega.
AccelerationParameter acceleration_parameter(const AccelerationSpec& spec);

/// Single-mode fermionic Unruh channel (q_R = 1, q_L = 0) as two Kraus elements:
/// K0 = diag(cos r, 1), K1 = sin r |1><0|.
struct UnruhChannel {
  AccelerationParameter r;
  std::array<ComplexMatrix, 2> kraus;

  /// max entry of K0^H K0 + K1^H K1 - I.
  double completeness_residual() const;
};

UnruhChannel build_channel(AccelerationParameter r);

/// Rewrites `mode` in the Rindler basis: |0> -> cos r |0>_I|0>_II + sin r |1>_I|1>_II,
/// |1> -> |1>_I|0>_II. The region-I part stays at `mode`; region II is appended
/// as a new trailing mode.
StateVector dilate(const StateVector& psi, Mode mode, AccelerationParameter r);

/// Kraus action of the Unruh channel on one mode.
DensityOperator apply_channel(const DensityOperator& rho, Mode mode, AccelerationParameter r);
DensityOperator apply_channel(const DensityOperator& rho, Mode mode, const UnruhChannel& channel);

/// Reference path: dilate, then trace region II. Only defined for pure inputs.
DensityOperator apply_channel_by_dilation(const StateVector& psi, Mode mode,
                                          AccelerationParameter r);

}  // namespace rqnl
