#pragma once

#include "rqnl/linalg.hpp"

namespace rqnl {

/// Spin measurement axis, stored as a unit 3-vector.
class MeasurementDirection {
 public:
  /// (sin t cos p, sin t sin p, cos t).
  static MeasurementDirection from_angles(double theta, double phi);
  /// Rejects vectors whose norm differs from 1 by more than 1e-12.
  static MeasurementDirection from_vector(const Vec3& v);
  /// Rescales any nonzero vector onto the sphere.
  static MeasurementDirection normalized(const Vec3& v);

  static MeasurementDirection x_axis() { return from_vector({1.0, 0.0, 0.0}); }
  static MeasurementDirection y_axis() { return from_vector({0.0, 1.0, 0.0}); }
  static MeasurementDirection z_axis() { return from_vector({0.0, 0.0, 1.0}); }

  const Vec3& vector() const { return v_; }
  double theta() const;
  double phi() const;
  MeasurementDirection operator-() const { return MeasurementDirection({-v_[0], -v_[1], -v_[2]}); }

 private:
  explicit MeasurementDirection(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Entanglement-control angle of a reference state, reduced to its canonical
/// range by symmetry. GGHZ: theta1 in [0, pi/2]. MS: theta3 in [0, pi].
///
/// Reduction uses a period of the amplitudes followed, where needed, by a local
/// sigma_z flip on a single mode. Every quantity computed in this library is
/// invariant under both, including after the Unruh channel, which commutes
/// with sigma_z up to the sign of K1.
class StateParameter {
 public:
  static StateParameter gghz(double theta1);
  static StateParameter ms(double theta3);

  double value() const { return value_; }
  double requested() const { return requested_; }
  bool was_reduced() const { return value_ != requested_; }

 private:
  StateParameter(double value, double requested) : value_(value), requested_(requested) {}
  double value_;
  double requested_;
};

/// (|10> - |01>) / sqrt(2).
StateVector singlet();

/// cos t |000> + sin t |111>.
StateVector gghz(StateParameter theta1);

/// (|000> + |11>(cos t |0> + sin t |1>)) / sqrt(2). Mode 3 carries the slice angle.
StateVector ms(StateParameter theta3);

/// sin t cos p sigma_x + sin t sin p sigma_y + cos t sigma_z.
ComplexMatrix spin_observable(const MeasurementDirection& d);

double dot(const Vec3& a, const Vec3& b);

}  // namespace rqnl
