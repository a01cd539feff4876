#include "rqnl/entanglement.hpp"

#include <stdexcept>
#include <string>

namespace rqnl {

namespace {

constexpr double kClampTol = 1e-12;

void check_mode(Mode m, int n) {
  if (m.index < 1 || m.index > n) {
    throw std::out_of_range("partition mode " + std::to_string(m.index) + " outside 1.." +
                            std::to_string(n));
  }
}

double clamp_residue(double v) { return (v < 0.0 && v > -kClampTol) ? 0.0 : v; }

double pivot_negativity(const DensityOperator& rho, Mode pivot) {
  return clamp_residue(trace_norm(partial_transpose(rho, pivot)) - 1.0);
}

}  // namespace

double negativity(const DensityOperator& rho, const PartitionLabel& partition) {
  const int n = rho.n_modes();
  if (n < 2) throw std::invalid_argument("negativity needs at least two modes");

  if (const auto* one = std::get_if<OneVsRest>(&partition)) {
    check_mode(one->pivot, n);
    return pivot_negativity(rho, one->pivot);
  }

  const auto& pair = std::get<ModePair>(partition);
  check_mode(pair.first, n);
  check_mode(pair.second, n);
  if (pair.first == pair.second) throw std::invalid_argument("pair partition needs two distinct modes");

  // Trace out everything else, highest mode first so lower indices stay put.
  DensityOperator reduced = rho;
  for (int m = n; m >= 1; --m) {
    if (m != pair.first.index && m != pair.second.index) reduced = partial_trace(reduced, Mode(m));
  }
  const Mode pivot(pair.first.index < pair.second.index ? 1 : 2);
  return pivot_negativity(reduced, pivot);
}

PiTangle pi_tangle(const DensityOperator& rho) {
  if (rho.n_modes() != 3) {
    throw std::invalid_argument("pi-tangle needs a three-mode operator, got " +
                                std::to_string(rho.n_modes()));
  }
  auto residual = [&](int a, int b, int c) {
    const double whole = negativity(rho, OneVsRest{Mode(a)});
    const double ab = negativity(rho, ModePair{Mode(a), Mode(b)});
    const double ac = negativity(rho, ModePair{Mode(a), Mode(c)});
    return whole * whole - ab * ab - ac * ac;
  };
  PiTangle out{};
  out.pi_a = residual(1, 2, 3);
  out.pi_b = residual(2, 1, 3);
  out.pi_c = residual(3, 1, 2);
  out.pi = (clamp_residue(out.pi_a) + clamp_residue(out.pi_b) + clamp_residue(out.pi_c)) / 3.0;
  return out;
}

}  // namespace rqnl
