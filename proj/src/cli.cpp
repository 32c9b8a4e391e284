#include "annulus/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "annulus/errors.hpp"
#include "annulus/field.hpp"
#include "annulus/metric.hpp"
#include "annulus/radial_solver.hpp"
#include "annulus/verify.hpp"

namespace annulus::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kDefaultTol = 1e-9;

struct CliConfig {
  std::string command;
  std::string metric_spec;
  double q = 0.0;
  double Q = 0.0;
  double r = 0.0;
  double tol = kDefaultTol;
  int grid_s = 32;
  int grid_t = 64;
  double r_min = 0.0;
  double r_max = 0.0;
  int r_steps = 0;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 42;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with a header row; empty optional cells stay empty.
using Cell = std::variant<std::monostate, double, std::string>;

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<Cell>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      if (const double* d = std::get_if<double>(&row[k])) os << number(*d);
      if (const std::string* s = std::get_if<std::string>(&row[k])) os << *s;
    }
    os << '\n';
  }
}

Json to_json(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return *d;
  if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
  return nullptr;
}

void write_table(std::ostream& os, const std::string& format,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows) {
  if (format == "csv") {
    write_csv(os, header, rows);
    return;
  }
  Json out = Json::array();
  for (const auto& row : rows) {
    Json obj = Json::object();
    for (std::size_t k = 0; k < header.size(); ++k) obj[header[k]] = to_json(row[k]);
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

void write_object(std::ostream& os, const std::string& format, const Json& obj) {
  if (format == "csv") {
    std::vector<std::string> header;
    std::vector<Cell> row;
    for (const auto& [key, value] : obj.items()) {
      header.push_back(key);
      if (value.is_number()) {
        row.emplace_back(value.get<double>());
      } else if (value.is_string()) {
        row.emplace_back(value.get<std::string>());
      } else if (value.is_boolean()) {
        row.emplace_back(std::string(value.get<bool>() ? "true" : "false"));
      } else {
        row.emplace_back();
      }
    }
    write_csv(os, header, {row});
    return;
  }
  os << obj.dump(2) << '\n';
}

Json critical_r_json(double r) { return r > 0.0 ? Json(r) : Json(nullptr); }

SolverConfig solver_config(const CliConfig& cfg) {
  SolverConfig config;
  config.tol_c = cfg.tol;
  config.seed = cfg.seed;
  return config;
}

ProblemSpec problem(const CliConfig& cfg) {
  ProblemSpec spec{parse_metric(cfg.metric_spec), cfg.q, cfg.Q, cfg.r};
  spec.validate();
  return spec;
}

int below_critical(std::ostream& os, const std::string& format, const BelowCriticalError& e) {
  Json obj = Json::object();
  obj["error"] = "BelowCritical";
  obj["critical_r"] = critical_r_json(e.critical_r());
  write_object(os, format, obj);
  return kBelowCritical;
}

int cmd_solve(const CliConfig& cfg, std::ostream& os) {
  const ProblemSpec spec = problem(cfg);
  const SolverConfig config = solver_config(cfg);
  const MinimizerProfile profile = solve(spec, config);
  const LipschitzBounds lb = lipschitz_constant(profile);
  const QuasiconformalConstants kk = kk_constants(profile);
  Json obj = Json::object();
  obj["c"] = profile.c();
  obj["hopf_constant"] = profile.hopf_constant();
  obj["classification"] = std::string(to_string(profile.classification()));
  obj["modulus_domain"] = std::log(1.0 / spec.r);
  obj["modulus_target"] = std::log(spec.Q / spec.q);
  obj["energy"] = energy(profile);
  obj["energy_lower_bound"] = 2.0 * area(spec.metric, spec.q, spec.Q);
  obj["lipschitz_sup"] = lb.sup_op;
  obj["lonorm_inf"] = lb.inf_lo;
  obj["K"] = kk.K;
  obj["K_prime"] = kk.K_prime;
  obj["critical_c"] = profile.critical_c();
  obj["critical_r"] =
      critical_r_json(critical_inner_radius(spec.metric, spec.q, spec.Q, config.tol_quad));
  write_object(os, cfg.format, obj);
  return kOk;
}

int cmd_critical(const CliConfig& cfg, std::ostream& os) {
  const RadialMetric metric = parse_metric(cfg.metric_spec);
  require_annulus(metric, cfg.q, cfg.Q);
  const SolverConfig config = solver_config(cfg);
  Json obj = Json::object();
  obj["critical_c"] = critical_constant(metric, cfg.q, cfg.Q);
  obj["critical_r"] = critical_r_json(critical_inner_radius(metric, cfg.q, cfg.Q, config.tol_quad));
  write_object(os, cfg.format, obj);
  return kOk;
}

int cmd_eval(const CliConfig& cfg, std::ostream& os) {
  const ProblemSpec spec = problem(cfg);
  const MinimizerProfile profile = solve(spec, solver_config(cfg));
  const PolarGrid grid{cfg.grid_s, cfg.grid_t, spec.r};
  const std::vector<FieldSample> samples = export_grid(profile, grid);
  std::vector<std::vector<Cell>> rows;
  rows.reserve(samples.size());
  for (int i = 0; i < grid.n_s; ++i) {
    for (int j = 0; j < grid.n_t; ++j) {
      const FieldSample& f = samples[static_cast<std::size_t>(i) * grid.n_t + j];
      rows.push_back({grid.s(i), grid.t(j), f.w.real(), f.w.imag(), f.wz.real(), f.wz.imag(),
                      f.wzb.real(), f.wzb.imag(), f.jac, f.opnorm, f.lonorm, f.hopf.real(),
                      f.hopf.imag()});
    }
  }
  write_table(os, cfg.format,
              {"s", "t", "re_w", "im_w", "re_wz", "im_wz", "re_wzb", "im_wzb", "jac", "opnorm",
               "lonorm", "re_hopf", "im_hopf"},
              rows);
  return kOk;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& os) {
  if (!(cfg.r_min > 0.0 && cfg.r_min < cfg.r_max && cfg.r_max < 1.0) || cfg.r_steps < 2) {
    throw UsageError("sweep needs 0 < r_min < r_max < 1 and r_steps >= 2");
  }
  const RadialMetric metric = parse_metric(cfg.metric_spec);
  require_annulus(metric, cfg.q, cfg.Q);
  const SolverConfig config = solver_config(cfg);
  std::vector<std::vector<Cell>> rows;
  for (int k = 0; k < cfg.r_steps; ++k) {
    const double r = cfg.r_min + (cfg.r_max - cfg.r_min) * k / (cfg.r_steps - 1.0);
    try {
      const MinimizerProfile profile = solve(ProblemSpec{metric, cfg.q, cfg.Q, r}, config);
      const LipschitzBounds lb = lipschitz_constant(profile);
      rows.push_back({r, profile.c(), std::string(to_string(profile.classification())),
                      energy(profile), lb.sup_op, lb.inf_lo, std::log(1.0 / r),
                      std::log(cfg.Q / cfg.q)});
    } catch (const BelowCriticalError&) {
      rows.push_back({r, {}, std::string("none"), {}, {}, {}, {}, {}});
    }
  }
  write_table(os, cfg.format,
              {"r", "c", "classification", "energy", "lipschitz_sup", "lonorm_inf", "mod_domain",
               "mod_target"},
              rows);
  return kOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& os) {
  const ProblemSpec spec = problem(cfg);
  SuiteOptions options;
  options.grid_s = cfg.grid_s;
  options.grid_t = cfg.grid_t;
  options.tolerance_scale = cfg.tol / kDefaultTol;
  const VerificationReport report = run_full_suite(spec, solver_config(cfg), options);
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    Json entry = Json::object();
    entry["name"] = c.name;
    entry["measured"] = c.measured;
    entry["tolerance"] = c.tolerance;
    entry["passed"] = c.passed;
    entry["detail"] = c.detail;
    checks.push_back(std::move(entry));
  }
  Json obj = Json::object();
  obj["checks"] = std::move(checks);
  obj["all_passed"] = report.all_passed();
  os << obj.dump(2) << '\n';
  if (report.all_passed()) return kOk;
  const CheckResult* solved = report.find("solve");
  if (solved && !solved->passed && solved->detail.starts_with("BelowCritical")) {
    return kBelowCritical;
  }
  return kVerificationFailed;
}

int dispatch(const CliConfig& cfg, std::ostream& os) {
  try {
    if (cfg.command == "solve") return cmd_solve(cfg, os);
    if (cfg.command == "critical") return cmd_critical(cfg, os);
    if (cfg.command == "eval") return cmd_eval(cfg, os);
    if (cfg.command == "sweep") return cmd_sweep(cfg, os);
    return cmd_verify(cfg, os);
  } catch (const BelowCriticalError& e) {
    return below_critical(os, cfg.format, e);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-minimal radial harmonic maps between annuli", "annulus"};
  app.require_subcommand(1);
  CliConfig cfg;

  const auto add_target = [&cfg](CLI::App* sub) {
    sub->add_option("--metric", cfg.metric_spec,
                    "euclidean | inverse_r | sphere | hyperbolic | power:a")
        ->required();
    sub->add_option("--q", cfg.q, "inner radius of the target annulus")->required();
    sub->add_option("--Q", cfg.Q, "outer radius of the target annulus")->required();
  };
  const auto add_grid = [&cfg](CLI::App* sub) {
    sub->add_option("--grid_s", cfg.grid_s, "radial grid size")->check(CLI::PositiveNumber);
    sub->add_option("--grid_t", cfg.grid_t, "angular grid size")->check(CLI::PositiveNumber);
  };

  struct Sub {
    const char* name;
    const char* help;
    const char* format;
  };
  const Sub subs[] = {{"solve", "solve for the radial minimizer", "json"},
                      {"critical", "critical constant and inner radius", "json"},
                      {"eval", "export the map on a polar grid", "csv"},
                      {"verify", "run the verification suite", "json"},
                      {"sweep", "solve along a ladder of inner radii", "csv"}};
  std::vector<std::pair<CLI::App*, const char*>> commands;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_target(sub);
    commands.emplace_back(sub, s.format);
    const std::string name = s.name;
    if (name == "solve" || name == "eval" || name == "verify") {
      sub->add_option("--r", cfg.r, "inner radius of the domain annulus")->required();
    }
    if (name == "eval" || name == "verify") add_grid(sub);
    if (name == "sweep") {
      sub->add_option("--r_min", cfg.r_min, "smallest r")->required();
      sub->add_option("--r_max", cfg.r_max, "largest r")->required();
      sub->add_option("--r_steps", cfg.r_steps, "number of radii")->required();
    }
  }
  // Every subcommand shares --tol/--out/--format/--seed; the default format
  // depends on the command, so it is filled in after parsing.
  std::string format_flag;
  for (auto& [sub, fmt] : commands) {
    sub->add_option("--tol", cfg.tol, "solver tolerance on c")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", format_flag, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "seed of the minimality probes");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? kOk : kUsage;
  }
  for (auto& [sub, fmt] : commands) {
    if (sub->parsed()) {
      cfg.command = sub->get_name();
      cfg.format = format_flag.empty() ? fmt : format_flag;
    }
  }

  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot open " << cfg.out_path << '\n';
      return kUsage;
    }
  }
  std::ostream& os = cfg.out_path.empty() ? out : file;

  try {
    return dispatch(cfg, os);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace annulus::cli
