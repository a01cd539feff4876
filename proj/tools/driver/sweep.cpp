#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "driver.hpp"
#include "rqnl/entanglement.hpp"
#include "rqnl/nonlocality.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"

namespace rqnl::driver {

namespace {

constexpr Column kAllColumns[] = {
    Column::chsh_restricted_max, Column::chsh_horodecki,     Column::chsh_numeric,
    Column::svetlichny_bound,    Column::svetlichny_envelope, Column::svetlichny_numeric,
    Column::pi_tangle,
};

bool is_chsh(Column c) {
  return c == Column::chsh_restricted_max || c == Column::chsh_horodecki ||
         c == Column::chsh_numeric;
}

bool is_svetlichny(Column c) {
  return c == Column::svetlichny_bound || c == Column::svetlichny_envelope ||
         c == Column::svetlichny_numeric;
}

std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  return fmt::format("{:.12g}", v);
}

double round12(double v) { return std::stod(fmt12(v)); }

int default_mode(StateKind s) { return s == StateKind::gghz ? 3 : 2; }

StateVector build_state(StateKind kind, double param) {
  switch (kind) {
    case StateKind::singlet:
      return singlet();
    case StateKind::gghz:
      return gghz(StateParameter::gghz(param));
    case StateKind::ms:
      return ms(StateParameter::ms(param));
  }
  throw SpecError("unknown state");
}

AccelerationParameter checked_r(double r) {
  try {
    return AccelerationParameter(r);
  } catch (const std::domain_error& e) {
    throw SpecError(e.what());
  }
}

// Values for one grid point, in the order of `columns`.
std::vector<double> evaluate_point(const SweepSpec& spec, const std::vector<Column>& columns,
                                   double param, double r_value) {
  const auto r = checked_r(r_value);
  const Mode mode(spec.accelerated_mode.value_or(default_mode(spec.state)));
  const auto rho = apply_channel(DensityOperator::pure(build_state(spec.state, param)), mode, r);
  OptimizerConfig cfg = spec.optimizer;
  cfg.seed = spec.seed;
  cfg.jobs = 1;

  std::vector<double> out;
  out.reserve(columns.size());
  for (Column c : columns) {
    switch (c) {
      case Column::chsh_restricted_max:
        out.push_back(chsh_restricted(r, chsh_threshold().gamma_star));
        break;
      case Column::chsh_horodecki:
        out.push_back(horodecki_max(rho));
        break;
      case Column::chsh_numeric:
        out.push_back(maximize_chsh(rho, cfg).value);
        break;
      case Column::svetlichny_bound:
      case Column::svetlichny_envelope:
        if (spec.state == StateKind::gghz) {
          const auto b = svetlichny_bound_gghz(StateParameter::gghz(param), r);
          out.push_back(c == Column::svetlichny_bound ? b.bound : b.envelope);
        } else if (mode.index == 3) {
          out.push_back(svetlichny_bound_ms_case2(StateParameter::ms(param), r));
        } else {
          out.push_back(svetlichny_bound_ms_case1(StateParameter::ms(param), r));
        }
        break;
      case Column::svetlichny_numeric:
        out.push_back(maximize_svetlichny(rho, cfg).value);
        break;
      case Column::pi_tangle:
        out.push_back(pi_tangle(rho).pi);
        break;
    }
  }
  return out;
}

}  // namespace

StateKind parse_state(std::string_view name) {
  if (name == "singlet") return StateKind::singlet;
  if (name == "gghz") return StateKind::gghz;
  if (name == "ms") return StateKind::ms;
  throw SpecError(fmt::format("unknown state '{}' (expected singlet, gghz or ms)", name));
}

std::string_view state_name(StateKind s) {
  switch (s) {
    case StateKind::singlet: return "singlet";
    case StateKind::gghz: return "gghz";
    case StateKind::ms: return "ms";
  }
  return "?";
}

Column parse_column(std::string_view name) {
  for (Column c : kAllColumns)
    if (column_name(c) == name) return c;
  throw SpecError(fmt::format("unknown column '{}'", name));
}

std::string_view column_name(Column c) {
  switch (c) {
    case Column::chsh_restricted_max: return "chsh_restricted_max";
    case Column::chsh_horodecki: return "chsh_horodecki";
    case Column::chsh_numeric: return "chsh_numeric";
    case Column::svetlichny_bound: return "svetlichny_bound";
    case Column::svetlichny_envelope: return "svetlichny_envelope";
    case Column::svetlichny_numeric: return "svetlichny_numeric";
    case Column::pi_tangle: return "pi_tangle";
  }
  return "?";
}

double parse_angle(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw SpecError(fmt::format("cannot parse angle '{}'", text));
    }
    return v;
  };
  std::string_view s = text;
  if (s.empty()) throw SpecError("empty angle");
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos) return number(s);

  double factor = 1.0;
  std::string_view head = s.substr(0, pi_pos);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  if (head == "-") factor = -1.0;
  else if (!head.empty() && head != "+") factor = number(head);

  std::string_view tail = s.substr(pi_pos + 2);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw SpecError(fmt::format("cannot parse angle '{}'", text));
    divisor = number(tail.substr(1));
    if (divisor == 0.0) throw SpecError("angle divisor is zero");
  }
  return factor * std::numbers::pi / divisor;
}

double Grid::at(int i) const {
  if (steps == 1 || i == 0) return start;
  if (i == steps - 1) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void validate(const SweepSpec& spec) {
  for (const auto* g : {&spec.param, &spec.r}) {
    if (g->steps < 1) throw SpecError("grid steps must be at least 1");
    if (!std::isfinite(g->start) || !std::isfinite(g->stop)) throw SpecError("grid bounds must be finite");
    if (g->stop < g->start) throw SpecError("grid stop must not be below start");
  }
  if (spec.r.start < 0.0 || spec.r.stop > AccelerationParameter::kMax) {
    throw SpecError("r grid must lie within [0, pi/4]");
  }
  if (spec.columns.empty()) throw SpecError("no output columns requested");
  if (spec.jobs < 1) throw SpecError("--jobs must be positive");

  const int n_modes = spec.state == StateKind::singlet ? 2 : 3;
  const int mode = spec.accelerated_mode.value_or(default_mode(spec.state));
  if (mode < 1 || mode > n_modes) {
    throw SpecError(fmt::format("--mode {} invalid for a {}-mode state", mode, n_modes));
  }
  if (spec.state == StateKind::singlet && spec.param.steps != 1) {
    throw SpecError("the singlet has no state parameter; use --param-steps 1");
  }
  for (Column c : spec.columns) {
    if (is_chsh(c) && spec.state != StateKind::singlet) {
      throw SpecError(fmt::format("column {} needs --state singlet", column_name(c)));
    }
    if ((is_svetlichny(c) || c == Column::pi_tangle) && spec.state == StateKind::singlet) {
      throw SpecError(fmt::format("column {} needs a three-mode state", column_name(c)));
    }
  }
}

std::string run_sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<Column> columns;
  for (Column c : kAllColumns)
    if (std::find(spec.columns.begin(), spec.columns.end(), c) != spec.columns.end())
      columns.push_back(c);

  const int n_param = spec.param.steps;
  const int n_r = spec.r.steps;
  const auto total = static_cast<std::size_t>(n_param) * static_cast<std::size_t>(n_r);
  std::vector<std::vector<double>> rows(total);
  std::vector<std::exception_ptr> errors(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const int i = static_cast<int>(k / static_cast<std::size_t>(n_r));
      const int j = static_cast<int>(k % static_cast<std::size_t>(n_r));
      try {
        rows[k] = evaluate_point(spec, columns, spec.param.at(i), spec.r.at(j));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::string csv = "state_param,r";
  for (Column c : columns) {
    csv += fmt::format(",{}", column_name(c));
    if (is_chsh(c) || is_svetlichny(c)) csv += fmt::format(",{}_violated", column_name(c));
  }
  csv += '\n';
  for (std::size_t k = 0; k < total; ++k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(n_r));
    const int j = static_cast<int>(k % static_cast<std::size_t>(n_r));
    csv += fmt12(spec.param.at(i));
    csv += ',';
    csv += fmt12(spec.r.at(j));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double v = rows[k][c];
      if (!std::isfinite(v)) throw std::runtime_error("non-finite value in sweep output");
      csv += ',';
      csv += fmt12(v);
      if (is_chsh(columns[c])) csv += violates_chsh(v) ? ",1" : ",0";
      if (is_svetlichny(columns[c])) csv += violates_svetlichny(v) ? ",1" : ",0";
    }
    csv += '\n';
  }
  return csv;
}

std::string solve_threshold() {
  const auto t = chsh_threshold();
  nlohmann::ordered_json j;
  j["r_t"] = round12(t.r_t);
  j["cos2_rt"] = round12(t.cos2_rt);
  j["a_t_over_omega_c"] = round12(t.a_t_over_omega_c);
  j["gamma_star"] = round12(t.gamma_star);
  return j.dump(2) + "\n";
}

std::string pi_tangle_report(const PiTangleRequest& req) {
  if (req.state == StateKind::singlet) throw SpecError("the pi-tangle needs a three-mode state");
  const int mode = req.accelerated_mode.value_or(default_mode(req.state));
  if (mode < 1 || mode > 3) throw SpecError(fmt::format("--mode {} invalid for a 3-mode state", mode));

  AccelerationParameter r = AccelerationParameter::inertial();
  if (req.r) {
    r = checked_r(*req.r);
  } else if (req.omega_big) {
    try {
      r = acceleration_parameter(*req.omega_big == 0.0 ? AccelerationSpec::infinite_acceleration()
                                                       : AccelerationSpec::from_omega(*req.omega_big));
    } catch (const std::domain_error& e) {
      throw SpecError(e.what());
    }
  }
  const auto rho = apply_channel(DensityOperator::pure(build_state(req.state, req.param)), Mode(mode), r);
  const auto p = pi_tangle(rho);
  nlohmann::ordered_json j;
  j["state"] = std::string(state_name(req.state));
  j["param"] = round12(req.param);
  j["r"] = round12(r.value());
  j["mode"] = mode;
  j["pi"] = round12(p.pi);
  j["pi_a"] = round12(p.pi_a);
  j["pi_b"] = round12(p.pi_b);
  j["pi_c"] = round12(p.pi_c);
  return j.dump(2) + "\n";
}

}  // namespace rqnl::driver
