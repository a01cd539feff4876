#include "rqnl/rindler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rqnl {

AccelerationParameter::AccelerationParameter(double r) : r_(r) {
  if (!(r >= 0.0 && r <= kMax)) {
    throw std::domain_error("acceleration parameter r = " + std::to_string(r) +
                            " outside [0, pi/4]");
  }
}

double AccelerationParameter::cos() const { return std::cos(r_); }
double AccelerationParameter::sin() const { return std::sin(r_); }

AccelerationSpec AccelerationSpec::from_omega(double omega_big) {
  if (!(omega_big > 0.0) || !std::isfinite(omega_big)) {
    throw std::domain_error("Omega must be finite and positive; use inertial() or "
                            "infinite_acceleration() for the limits");
  }
  return AccelerationSpec(omega_big);
}

AccelerationSpec AccelerationSpec::from_physical(double omega, double c, double a) {
  if (!(omega > 0.0) || !(c > 0.0) || !(a > 0.0)) {
    throw std::domain_error("omega, c and a must all be positive");
  }
  return from_omega(omega * c / a);
}

AccelerationSpec AccelerationSpec::inertial() {
  return AccelerationSpec(std::numeric_limits<double>::infinity());
}

AccelerationSpec AccelerationSpec::infinite_acceleration() { return AccelerationSpec(0.0); }

AccelerationParameter acceleration_parameter(const AccelerationSpec& spec) {
  const double omega = spec.omega_big();
  if (std::isinf(omega)) return AccelerationParameter::inertial();
  if (omega == 0.0) return AccelerationParameter::infinite();
  // tan r = exp(-pi Omega) is the same relation and keeps precision for large Omega.
  return AccelerationParameter(std::atan(std::exp(-std::numbers::pi * omega)));
}

double UnruhChannel::completeness_residual() const {
  const auto sum = kraus[0].adjoint() * kraus[0] + kraus[1].adjoint() * kraus[1];
  return max_abs_diff(sum, ComplexMatrix::identity(2));
}

UnruhChannel build_channel(AccelerationParameter r) {
  ComplexMatrix k0{{r.cos(), 0.0}, {0.0, 1.0}};
  ComplexMatrix k1{{0.0, 0.0}, {r.sin(), 0.0}};
  return UnruhChannel{r, {std::move(k0), std::move(k1)}};
}

StateVector dilate(const StateVector& psi, Mode mode, AccelerationParameter r) {
  const int n = psi.n_modes();
  if (mode.index < 1 || mode.index > n) {
    throw std::out_of_range("mode " + std::to_string(mode.index) + " outside 1.." + std::to_string(n));
  }
  const std::size_t mask = std::size_t{1} << (n - mode.index);
  std::vector<Complex> out(psi.dimension() * 2);
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    const Complex amp = psi[i];
    if (amp == Complex{}) continue;
    if (i & mask) {
      out[i << 1] += amp;  // |1>_I |0>_II
    } else {
      out[i << 1] += r.cos() * amp;               // |0>_I |0>_II
      out[((i | mask) << 1) | 1] += r.sin() * amp;  // |1>_I |1>_II
    }
  }
  return StateVector::normalized(std::move(out));
}

DensityOperator apply_channel(const DensityOperator& rho, Mode mode, const UnruhChannel& channel) {
  const int n = rho.n_modes();
  const auto k0 = embed(channel.kraus[0], mode, n);
  const auto k1 = embed(channel.kraus[1], mode, n);
  return DensityOperator(k0 * rho.matrix() * k0.adjoint() + k1 * rho.matrix() * k1.adjoint());
}

DensityOperator apply_channel(const DensityOperator& rho, Mode mode, AccelerationParameter r) {
  return apply_channel(rho, mode, build_channel(r));
}

DensityOperator apply_channel_by_dilation(const StateVector& psi, Mode mode,
                                          AccelerationParameter r) {
  const auto dilated = DensityOperator::pure(dilate(psi, mode, r));
  return partial_trace(dilated, Mode(dilated.n_modes()));
}

}  // namespace rqnl
