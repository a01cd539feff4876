#include "rqnl/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rqnl {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kPi = std::numbers::pi;

double norm3(const Vec3& v) { return std::sqrt(dot(v, v)); }

double checked_angle(double t, const char* what) {
  if (!std::isfinite(t)) throw std::invalid_argument(std::string(what) + " must be finite");
  return t;
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

MeasurementDirection MeasurementDirection::from_angles(double theta, double phi) {
  checked_angle(theta, "theta");
  checked_angle(phi, "phi");
  const double st = std::sin(theta);
  return MeasurementDirection({st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
}

MeasurementDirection MeasurementDirection::from_vector(const Vec3& v) {
  const double n = norm3(v);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTol) {
    throw std::invalid_argument("measurement direction is not a unit vector (norm " +
                                std::to_string(n) + ")");
  }
  return MeasurementDirection(v);
}

MeasurementDirection MeasurementDirection::normalized(const Vec3& v) {
  const double n = norm3(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero vector");
  return MeasurementDirection({v[0] / n, v[1] / n, v[2] / n});
}

double MeasurementDirection::theta() const { return std::acos(std::clamp(v_[2], -1.0, 1.0)); }
double MeasurementDirection::phi() const {
  const double p = std::atan2(v_[1], v_[0]);
  return p < 0.0 ? p + 2.0 * kPi : p;
}

StateParameter StateParameter::gghz(double theta1) {
  checked_angle(theta1, "theta1");
  // Period pi up to a global sign, then theta -> pi - theta via sigma_z on mode 1.
  double t = std::fmod(theta1, kPi);
  if (t < 0.0) t += kPi;
  if (t > kPi / 2.0) t = kPi - t;
  return StateParameter(t, theta1);
}

StateParameter StateParameter::ms(double theta3) {
  checked_angle(theta3, "theta3");
  // Period 2 pi, then theta -> 2 pi - theta via sigma_z on mode 3.
  double t = std::fmod(theta3, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t > kPi) t = 2.0 * kPi - t;
  return StateParameter(t, theta3);
}

StateVector singlet() {
  const double h = 1.0 / std::numbers::sqrt2;
  return StateVector({0.0, -h, h, 0.0});
}

StateVector gghz(StateParameter theta1) {
  std::vector<Complex> amps(8);
  amps[0] = std::cos(theta1.value());
  amps[7] = std::sin(theta1.value());
  return StateVector::normalized(std::move(amps));
}

StateVector ms(StateParameter theta3) {
  const double h = 1.0 / std::numbers::sqrt2;
  std::vector<Complex> amps(8);
  amps[0] = h;
  amps[6] = h * std::cos(theta3.value());
  amps[7] = h * std::sin(theta3.value());
  return StateVector::normalized(std::move(amps));
}

ComplexMatrix spin_observable(const MeasurementDirection& d) {
  const auto& v = d.vector();
  return ComplexMatrix{{v[2], Complex(v[0], -v[1])}, {Complex(v[0], v[1]), -v[2]}};
}

}  // namespace rqnl
