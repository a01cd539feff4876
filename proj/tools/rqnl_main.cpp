#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "driver/driver.hpp"

namespace drv = rqnl::driver;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RQNL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw drv::SpecError("RQNL_SEED is not an unsigned integer");
    }
  }
  return 0;
}

std::vector<drv::Column> parse_columns(const std::string& list) {
  std::vector<drv::Column> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(drv::parse_column(item));
  }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermionic Unruh damping and Bell-type nonlocality"};
  app.require_subcommand(1);

  std::string seed_text;
  int jobs = 1;
  std::string out_path;

  auto* sweep = app.add_subcommand("sweep", "Tabulate quantities over a (param, r) grid as CSV");
  std::string state = "gghz";
  std::string param_start = "0";
  std::string param_stop = "0";
  int param_steps = 1;
  std::string r_start = "0";
  std::string r_stop = "pi/4";
  int r_steps = 5;
  std::optional<int> mode;
  std::string columns;
  int restarts = rqnl::OptimizerConfig{}.restarts;
  sweep->add_option("--state", state, "singlet | gghz | ms")->capture_default_str();
  sweep->add_option("--param-start", param_start, "State parameter start (e.g. pi/16)");
  sweep->add_option("--param-stop", param_stop, "State parameter stop");
  sweep->add_option("--param-steps", param_steps, "Number of parameter points")->capture_default_str();
  sweep->add_option("--r-start", r_start, "Acceleration parameter start")->capture_default_str();
  sweep->add_option("--r-stop", r_stop, "Acceleration parameter stop")->capture_default_str();
  sweep->add_option("--r-steps", r_steps, "Number of r points")->capture_default_str();
  sweep->add_option("--mode", mode, "Accelerated mode (1-based)");
  sweep->add_option("--columns", columns, "Comma-separated column list")->required();
  sweep->add_option("--restarts", restarts, "Optimizer restarts per point")->capture_default_str();
  sweep->add_option("--seed", seed_text, "RNG seed (default: $RQNL_SEED or 0)");
  sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  sweep->add_option("--out", out_path, "Output file (default stdout)");

  auto* threshold = app.add_subcommand("threshold", "Print the restricted-CHSH threshold as JSON");
  threshold->add_option("--out", out_path, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the cross-module consistency checks");
  std::string report = "summary";
  verify->add_option("--report", report, "summary | full")
      ->check(CLI::IsMember({"summary", "full"}))
      ->capture_default_str();
  verify->add_option("--seed", seed_text, "RNG seed (default: $RQNL_SEED or 0)");
  verify->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

  auto* tangle = app.add_subcommand("pi-tangle", "Pi-tangle of a damped three-mode state as JSON");
  std::string t_state = "gghz";
  std::string t_param = "pi/4";
  std::optional<std::string> t_r;
  std::optional<double> t_omega;
  std::optional<int> t_mode;
  tangle->add_option("--state", t_state, "gghz | ms")->capture_default_str();
  tangle->add_option("--param", t_param, "State parameter")->capture_default_str();
  auto* r_opt = tangle->add_option("--r", t_r, "Acceleration parameter in [0, pi/4]");
  tangle->add_option("--omega", t_omega, "Dimensionless frequency omega c / a (0 = infinite acceleration)")
      ->excludes(r_opt);
  tangle->add_option("--mode", t_mode, "Accelerated mode (1-based)");
  tangle->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const std::uint64_t seed = seed_text.empty() ? default_seed() : [&] {
      try {
        return static_cast<std::uint64_t>(std::stoull(seed_text));
      } catch (const std::exception&) {
        throw drv::SpecError("--seed must be an unsigned integer");
      }
    }();

    if (*sweep) {
      drv::SweepSpec spec;
      spec.state = drv::parse_state(state);
      spec.param = {drv::parse_angle(param_start), drv::parse_angle(param_stop), param_steps};
      if (param_steps == 1) spec.param.stop = spec.param.start;
      spec.r = {drv::parse_angle(r_start), drv::parse_angle(r_stop), r_steps};
      if (r_steps == 1) spec.r.stop = spec.r.start;
      spec.accelerated_mode = mode;
      spec.columns = parse_columns(columns);
      spec.seed = seed;
      spec.jobs = jobs;
      if (restarts < 1) throw drv::SpecError("--restarts must be positive");
      spec.optimizer.restarts = restarts;
      emit(drv::run_sweep(spec), out_path);
    } else if (*threshold) {
      emit(drv::solve_threshold(), out_path);
    } else if (*verify) {
      if (jobs < 1) throw drv::SpecError("--jobs must be positive");
      drv::VerifyOptions opt;
      opt.level = report == "full" ? drv::ReportLevel::full : drv::ReportLevel::summary;
      opt.seed = seed;
      opt.jobs = jobs;
      const auto result = drv::verify(opt);
      std::cout << result.text(opt.level);
      return result.passed() ? 0 : 1;
    } else if (*tangle) {
      drv::PiTangleRequest req;
      req.state = drv::parse_state(t_state);
      req.param = drv::parse_angle(t_param);
      if (t_r) req.r = drv::parse_angle(*t_r);
      req.omega_big = t_omega;
      req.accelerated_mode = t_mode;
      emit(drv::pi_tangle_report(req), out_path);
    }
  } catch (const drv::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
