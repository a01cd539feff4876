#include "rqnl/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "rqnl/nonlocality.hpp"

namespace rqnl {

namespace {

constexpr double kInitialStep = 0.5;
constexpr double kPolishStep = 0.1;

// splitmix64; one independent stream per restart.
class RestartRng {
 public:
  RestartRng(std::uint64_t seed, int restart)
      : state_(seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(restart) + 1)) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

Vec3 direction(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double wrap(double angle, double period) {
  double a = std::fmod(angle, period);
  return a < 0.0 ? a + period : a;
}

SphereProductPoint to_point(std::span<const double> angles) {
  SphereProductPoint out;
  out.reserve(angles.size() / 2);
  for (std::size_t i = 0; i + 1 < angles.size(); i += 2) {
    out.push_back(MeasurementDirection::from_angles(wrap(angles[i], 2.0 * std::numbers::pi),
                                                    wrap(angles[i + 1], 2.0 * std::numbers::pi)));
  }
  return out;
}

// Negated objective in angle coordinates, with the finiteness contract.
class AngleObjective {
 public:
  AngleObjective(const SphereObjective& f, int n) : f_(f), dirs_(static_cast<std::size_t>(n)) {}

  double operator()(std::span<const double> x) {
    for (std::size_t i = 0; i < dirs_.size(); ++i) dirs_[i] = direction(x[2 * i], x[2 * i + 1]);
    const double v = f_(dirs_);
    if (!std::isfinite(v)) {
      throw NonFiniteObjective("objective returned a non-finite value", to_point(x));
    }
    return -v;
  }

 private:
  const SphereObjective& f_;
  std::vector<Vec3> dirs_;
};

struct RestartResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> angles;
  double start_value = -std::numeric_limits<double>::infinity();
};

// One Nelder-Mead descent with adaptive coefficients. Updates `best` /
// `best_value` in place; returns the iterations used.
int nelder_mead(AngleObjective& g, std::vector<double>& best, double& best_value, double step,
                int max_iterations, double tolerance) {
  const std::size_t d = best.size();
  const double dn = static_cast<double>(d);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 1.0 / (2.0 * dn);
  const double sigma = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> x(d + 1, best);
  std::vector<double> fx(d + 1);
  fx[0] = best_value;
  for (std::size_t i = 1; i <= d; ++i) {
    x[i][i - 1] += step;
    fx[i] = g(x[i]);
  }

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  auto along = [&](std::vector<double>& out, double t, const std::vector<double>& from) {
    for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
  };

  int it = 0;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t ib = order.front();
    const std::size_t iw = order.back();
    const std::size_t is = order[d - 1];
    if (fx[iw] - fx[ib] <= tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == iw) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += x[i][k];
    }
    for (auto& c : centroid) c /= dn;

    along(xr, -alpha, x[iw]);
    const double fr = g(xr);
    if (fr < fx[ib]) {
      along(xe, -alpha * gamma, x[iw]);
      const double fe = g(xe);
      if (fe < fr) {
        x[iw] = xe;
        fx[iw] = fe;
      } else {
        x[iw] = xr;
        fx[iw] = fr;
      }
      continue;
    }
    if (fr < fx[is]) {
      x[iw] = xr;
      fx[iw] = fr;
      continue;
    }
    const bool outside = fr < fx[iw];
    along(xc, outside ? -alpha * rho : rho, x[iw]);
    const double fc = g(xc);
    if (outside ? fc <= fr : fc < fx[iw]) {
      x[iw] = xc;
      fx[iw] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == ib) continue;
      for (std::size_t k = 0; k < d; ++k) x[i][k] = x[ib][k] + sigma * (x[i][k] - x[ib][k]);
      fx[i] = g(x[i]);
    }
  }

  const auto ib = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  if (fx[ib] < best_value) {
    best = x[ib];
    best_value = fx[ib];
  }
  return it;
}

RestartResult run_restart(const SphereObjective& f, int n, const OptimizerConfig& cfg, int index) {
  RestartRng rng(cfg.seed, index);
  std::vector<double> x(2 * static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const double z = 1.0 - 2.0 * rng.uniform();
    x[2 * v] = std::acos(z);
    x[2 * v + 1] = 2.0 * std::numbers::pi * rng.uniform();
  }
  AngleObjective g(f, n);
  double gx = g(x);

  RestartResult out;
  out.start_value = -gx;
  int remaining = cfg.max_iterations;
  double step = kInitialStep;
  while (remaining > 0) {
    const double before = gx;
    remaining -= nelder_mead(g, x, gx, step, remaining, cfg.tolerance) + 1;
    // Re-initialize around the incumbent until a fresh simplex stops improving.
    if (step == kPolishStep && before - gx <= cfg.tolerance) break;
    step = kPolishStep;
  }
  out.value = -gx;
  out.angles = std::move(x);
  return out;
}

void validate(int n_vectors, const OptimizerConfig& cfg) {
  if (n_vectors < 1) throw std::invalid_argument("need at least one direction");
  if (cfg.restarts < 1 || cfg.max_iterations < 1 || !(cfg.tolerance > 0.0) || cfg.jobs < 1) {
    throw std::invalid_argument("optimizer config values must be positive");
  }
}

// Lattice maximum of v . w, scanning one or two azimuths per theta row.
class LatticeRowMax {
 public:
  explicit LatticeRowMax(AngularResolution res) : res_(res), lattice_(sphere_lattice(res)) {}

  double operator()(const Vec3& w) const {
    double best = std::max(w[2], -w[2]);  // poles
    const int n_phi = 2 * res_.divisor;
    const double step = res_.radians();
    double phi_w = std::atan2(w[1], w[0]);
    if (phi_w < 0.0) phi_w += 2.0 * std::numbers::pi;
    const int j0 = static_cast<int>(std::floor(phi_w / step)) % n_phi;
    const int j1 = (j0 + 1) % n_phi;
    for (int i = 1; i < res_.divisor; ++i) {
      const std::size_t row = 1 + static_cast<std::size_t>(i - 1) * n_phi;
      best = std::max(best, dot(lattice_[row + j0], w));
      best = std::max(best, dot(lattice_[row + j1], w));
    }
    return best;
  }

 private:
  AngularResolution res_;
  std::vector<Vec3> lattice_;
};

std::uint64_t checked_power(std::uint64_t base, int exponent, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (total > budget / base) {
      throw BudgetExceeded("lattice needs more than " + std::to_string(budget) + " evaluations");
    }
    total *= base;
  }
  return total;
}

// Visits every tuple of `count` lattice indices in odometer order.
template <typename Visit>
void for_each_tuple(const std::vector<Vec3>& lattice, int count, Visit&& visit) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(count), 0);
  std::vector<Vec3> tuple(static_cast<std::size_t>(count), lattice.front());
  while (true) {
    visit(std::span<const Vec3>(tuple));
    int k = count - 1;
    for (; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      if (++idx[ku] < lattice.size()) {
        tuple[ku] = lattice[idx[ku]];
        break;
      }
      idx[ku] = 0;
      tuple[ku] = lattice.front();
    }
    if (k < 0) return;
  }
}

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 times(const CorrelationMatrix& t, const Vec3& v) {
  return {dot(t[0], v), dot(t[1], v), dot(t[2], v)};
}

// u_i = sum_jk t_ijk y_j z_k
Vec3 contract_last(const CorrelationTensor& t, const Vec3& y, const Vec3& z) {
  Vec3 u{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double* row = &t[9 * i + 3 * j];
      u[i] += y[j] * (row[0] * z[0] + row[1] * z[1] + row[2] * z[2]);
    }
  return u;
}

LeadingPairReduction chsh_reduction(const CorrelationMatrix& t) {
  return [t](std::span<const Vec3> rest) {
    return std::pair{times(t, add(rest[0], rest[1])), times(t, sub(rest[0], rest[1]))};
  };
}

// rest = (c, c', b, b'); S = a.(T(c,K) + T(c',K')) + a'.(T(c,K') - T(c',K)).
LeadingPairReduction svetlichny_reduction(const CorrelationTensor& t) {
  return [t](std::span<const Vec3> rest) {
    const Vec3 k = add(rest[2], rest[3]);
    const Vec3 kp = sub(rest[2], rest[3]);
    return std::pair{add(contract_last(t, rest[0], k), contract_last(t, rest[1], kp)),
                     sub(contract_last(t, rest[0], kp), contract_last(t, rest[1], k))};
  };
}

}  // namespace

SphereMaximum maximize_over_spheres(const SphereObjective& f, int n_vectors,
                                    const OptimizerConfig& cfg) {
  validate(n_vectors, cfg);
  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
  std::vector<std::exception_ptr> errors(results.size());

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.restarts; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = run_restart(f, n_vectors, cfg, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(cfg.jobs, cfg.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Strictly-greater comparison keeps the lowest restart index on ties.
  std::size_t best = 0;
  double best_start = results[0].start_value;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value > results[best].value) best = i;
    best_start = std::max(best_start, results[i].start_value);
  }
  return SphereMaximum{results[best].value, to_point(results[best].angles),
                       static_cast<int>(best), best_start};
}

std::vector<Vec3> sphere_lattice(AngularResolution res) {
  if (res.divisor < 1) throw std::invalid_argument("lattice divisor must be positive");
  const double step = res.radians();
  std::vector<Vec3> out;
  out.push_back({0.0, 0.0, 1.0});
  for (int i = 1; i < res.divisor; ++i)
    for (int j = 0; j < 2 * res.divisor; ++j) out.push_back(direction(i * step, j * step));
  out.push_back({0.0, 0.0, -1.0});
  return out;
}

double grid_oracle(const SphereObjective& f, int n_vectors, AngularResolution res,
                   std::uint64_t budget) {
  if (n_vectors < 1) throw std::invalid_argument("need at least one direction");
  const auto lattice = sphere_lattice(res);
  checked_power(lattice.size(), n_vectors, budget);
  double best = -std::numeric_limits<double>::infinity();
  for_each_tuple(lattice, n_vectors, [&](std::span<const Vec3> v) {
    const double value = f(v);
    if (!std::isfinite(value)) throw std::runtime_error("objective returned a non-finite value");
    best = std::max(best, value);
  });
  return best;
}

double grid_oracle(const LeadingPairReduction& reduce, int n_vectors, AngularResolution res,
                   std::uint64_t budget) {
  if (n_vectors < 3) throw std::invalid_argument("leading-pair oracle needs at least three directions");
  const auto lattice = sphere_lattice(res);
  checked_power(lattice.size(), n_vectors - 2, budget);
  const LatticeRowMax row_max(res);
  double best = -std::numeric_limits<double>::infinity();
  for_each_tuple(lattice, n_vectors - 2, [&](std::span<const Vec3> rest) {
    const auto [u, w] = reduce(rest);
    const double up = row_max(u) + row_max(w);
    const double down = row_max({-u[0], -u[1], -u[2]}) + row_max({-w[0], -w[1], -w[2]});
    best = std::max({best, up, down});
  });
  return best;
}

double chsh_lattice_witness(const DensityOperator& rho, AngularResolution res,
                            std::uint64_t budget) {
  return grid_oracle(chsh_reduction(correlation_matrix(rho)), 4, res, budget);
}

double svetlichny_lattice_witness(const DensityOperator& rho, AngularResolution res,
                                  std::uint64_t budget) {
  return grid_oracle(svetlichny_reduction(correlation_tensor(rho)), 6, res, budget);
}

CertifiedMaximum maximize_chsh(const DensityOperator& rho, const OptimizerConfig& cfg) {
  const auto t = correlation_matrix(rho);
  const SphereObjective f = [&t](std::span<const Vec3> v) {
    return chsh_value(t, v[0], v[1], v[2], v[3]);
  };
  auto best = maximize_over_spheres(f, 4, cfg);
  const double witness = grid_oracle(chsh_reduction(t), 4, kChshWitnessResolution);
  return CertifiedMaximum{best.value, std::move(best.argmax), witness, kChshWitnessResolution};
}

CertifiedMaximum maximize_svetlichny(const DensityOperator& rho, const OptimizerConfig& cfg) {
  const auto t = correlation_tensor(rho);
  const SphereObjective f = [&t](std::span<const Vec3> v) {
    return svetlichny_expectation(t, v[0], v[1], v[2], v[3], v[4], v[5]);
  };
  auto best = maximize_over_spheres(f, 6, cfg);
  const double witness = grid_oracle(svetlichny_reduction(t), 6, kSvetlichnyWitnessResolution);
  return CertifiedMaximum{best.value, std::move(best.argmax), witness,
                          kSvetlichnyWitnessResolution};
}

}  // namespace rqnl
