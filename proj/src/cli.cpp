#include "hermite/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hermite/golden.hpp"
#include "hermite/ousim.hpp"
#include "hermite/ratio.hpp"
#include "hermite/specfun.hpp"

namespace hermite::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Raised for argument problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json number_or_marker(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json report(const std::string& command, json params, json results, bool pass) {
  return json{{"command", command}, {"params", std::move(params)}, {"results", std::move(results)},
              {"verdict", pass ? "pass" : "fail"}};
}

struct Common {
  std::string format;  // empty: the command's default
  std::string out_path;
  QuadratureConfig quad;
};

void add_quadrature_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--quad-tol", c.quad.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  cmd->add_option("--max-subdiv", c.quad.max_subdivisions, "Quadrature interval budget")->capture_default_str();
  cmd->add_option("--tail-sigma", c.quad.tail_sigma, "Gaussian tail truncation distance")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format (csv | json)")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out_path, "Write the report to this file instead of stdout");
}

// Opens --out when given; otherwise returns the default stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

// Splices "--key value" pairs from a JSON config file in front of the user's
// own flags. Every option takes its last occurrence, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  std::ifstream in(*path);
  if (!in) throw UsageError("cannot open config file " + *path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
    } else if (value.is_number()) {
      injected.push_back("--" + key);
      injected.push_back(value.is_number_float() ? format_number(value.get<double>()) : value.dump());
    } else if (value.is_string()) {
      injected.push_back("--" + key);
      injected.push_back(value.get<std::string>());
    } else {
      throw UsageError("config key '" + key + "' must be a scalar");
    }
  }
  // Subcommand names lead the argument list.
  std::size_t lead = 0;
  while (lead < rest.size() && lead < 2 && !rest[lead].empty() && rest[lead][0] != '-') ++lead;
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(lead), injected.begin(), injected.end());
  return rest;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  const char* strict = std::getenv("CI_STRICT");
  if (strict != nullptr && std::string(strict) == "1")
    throw UsageError("CI_STRICT=1: randomized commands require an explicit --seed");
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  err << "seed: " << s << '\n';
  return s;
}

ScanTarget parse_target(const std::string& which) {
  if (which == "ratioH") return ScanTarget::RatioHermite;
  if (which == "ratioD") return ScanTarget::RatioCylinder;
  if (which == "turan") return ScanTarget::TuranMargin;
  return ScanTarget::CapitalPsi;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite / parabolic cylinder function ratios and OU hitting-time checks", "hturan"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  Common common;

  // eval
  std::string fn = "H";
  double nu_v = -1.0, x = 0.0;
  auto* eval = app.add_subcommand("eval", "Evaluate H_nu(x) or D_nu(x)");
  eval->add_option("--fn", fn, "Function")->check(CLI::IsMember({"H", "D"}))->capture_default_str();
  eval->add_option("--nu", nu_v, "Order (< 0)")->required();
  eval->add_option("--x", x, "Argument")->required();

  // scan
  std::string which = "ratioH";
  double x_min = -30.0, x_max = 30.0, mu = 0.0, sigma = 1.0;
  int n_points = 241;
  std::string summary_path;
  auto* scan_cmd = app.add_subcommand("scan", "Scan a ratio for monotonicity and bounds");
  scan_cmd->add_option("--which", which, "Quantity")
      ->check(CLI::IsMember({"ratioH", "ratioD", "turan", "psi"}))
      ->capture_default_str();
  scan_cmd->add_option("--nu", nu_v, "Order (< 0)")->required();
  scan_cmd->add_option("--xmin", x_min)->capture_default_str();
  scan_cmd->add_option("--xmax", x_max)->capture_default_str();
  scan_cmd->add_option("--n", n_points, "Grid points")->capture_default_str();
  scan_cmd->add_option("--mu", mu, "OU mean (psi only)")->capture_default_str();
  scan_cmd->add_option("--sigma", sigma, "OU volatility (psi only)")->capture_default_str();
  scan_cmd->add_option("--summary", summary_path, "Summary JSON file (csv mode; default stderr)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check an identity or run a Monte Carlo verification");
  verify->require_subcommand(1);
  int k = 0;
  double y = 1.0;
  std::int64_t paths = 100000;
  double dt = 1e-3, t_max = 200.0, z_max = 4.0, tol = -1.0;
  std::optional<std::uint64_t> seed;
  bool no_bridge = false;
  unsigned threads = 0;

  auto add_sim = [&](CLI::App* c) {
    c->add_option("--x", x, "Start level")->required();
    c->add_option("--y", y, "Hitting level (> x)")->required();
    c->add_option("--mu", mu)->capture_default_str();
    c->add_option("--sigma", sigma)->capture_default_str();
    c->add_option("--paths", paths)->capture_default_str();
    c->add_option("--dt", dt)->capture_default_str();
    c->add_option("--tmax", t_max, "Censoring horizon")->capture_default_str();
    c->add_option("--seed", seed, "RNG seed (required when CI_STRICT=1)");
    c->add_flag("--no-bridge", no_bridge, "Disable the Brownian-bridge crossing correction");
    c->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  };
  auto* v_eq5 = verify->add_subcommand("eq5", "E[exp((nu-k) tau_y)] against psi^(k)(x)/psi^(k)(y)");
  v_eq5->add_option("--nu", nu_v)->required();
  v_eq5->add_option("--k", k)->check(CLI::Range(0, 2))->capture_default_str();
  v_eq5->add_option("--z-max", z_max, "Acceptance band on |z|")->capture_default_str();
  add_sim(v_eq5);
  auto* v_holder = verify->add_subcommand("holder", "Strict Hoelder inequality on a common sample");
  v_holder->add_option("--nu", nu_v)->required();
  add_sim(v_holder);
  auto* v_gen = verify->add_subcommand("generator", "OU generator residual of psi");
  v_gen->add_option("--nu", nu_v)->required();
  v_gen->add_option("--x", x)->required();
  v_gen->add_option("--mu", mu)->capture_default_str();
  v_gen->add_option("--sigma", sigma)->capture_default_str();
  v_gen->add_option("--tol", tol, "Residual tolerance (default 1e-9)");
  auto* v_id = verify->add_subcommand("identity", "D_nu(x) against its Hermite form");
  v_id->add_option("--nu", nu_v)->required();
  v_id->add_option("--x", x)->required();
  v_id->add_option("--tol", tol, "Residual tolerance (default 1e-10)");

  // golden
  std::string input;
  double golden_tol = 1e-10;
  auto* golden = app.add_subcommand("golden", "Compare against a golden reference file");
  golden->add_option("--input", input, "Golden JSON file")->required();
  golden->add_option("--rel-tol", golden_tol, "Allowed |log difference|")->capture_default_str();

  for (CLI::App* c : {eval, scan_cmd, v_eq5, v_holder, v_gen, v_id, golden}) add_quadrature_flags(c, common);
  for (CLI::App* c : {eval, scan_cmd, v_eq5, v_holder, v_gen, v_id, golden}) add_output_flags(c, common);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (common.format.empty()) common.format = *verify ? "json" : "csv";

  try {
    common.quad.validate();

    if (*eval) {
      const Order nu(nu_v);
      if (!std::isfinite(x)) throw UsageError("--x must be finite");
      const EvalResult r = fn == "H" ? hermite(nu, x, common.quad) : dnu(nu, x, common.quad);
      const double value = r.value.to_double();
      Sink sink(common.out_path, out);
      if (common.format == "csv") {
        sink.get() << "nu,x,fn,log_value,value,rel_err\n"
                   << format_number(nu_v) << ',' << format_number(x) << ',' << fn << ','
                   << format_number(r.value.log_mag) << ',' << format_number(value) << ','
                   << format_number(r.abs_err_log) << '\n';
      } else {
        write_json(sink.get(), json{{"nu", nu_v}, {"x", x}, {"fn", fn}, {"log_value", r.value.log_mag},
                                    {"value", number_or_marker(value)}, {"rel_err", r.abs_err_log}});
      }
      return kOk;
    }

    if (*scan_cmd) {
      const Order nu(nu_v);
      const ScanTarget target = parse_target(which);
      const ScanReport rep = scan(target, nu, x_min, x_max, n_points, common.quad, OUParams(mu, sigma));
      const TargetShape shape = target_shape(target, nu);

      json mono = json::array();
      for (const auto& [i, j] : rep.monotone_violations) mono.push_back({i, j});
      json summary{{"monotone_violations", mono},
                   {"bound_violations", rep.bound_violations},
                   {"left_limit_gap", rep.left_limit_gap},
                   {"right_limit_gap", rep.right_limit_gap},
                   {"lower_bound", shape.range.lower},
                   {"upper_bound", shape.range.upper},
                   {"decreasing", shape.decreasing}};
      json params{{"which", which}, {"nu", nu_v}, {"xmin", x_min}, {"xmax", x_max}, {"n", n_points}};
      if (target == ScanTarget::CapitalPsi) {
        params["mu"] = mu;
        params["sigma"] = sigma;
      }

      Sink sink(common.out_path, out);
      if (common.format == "csv") {
        auto& os = sink.get();
        os << "x,value,rel_err\n";
        for (const auto& p : rep.points)
          os << format_number(p.x) << ',' << format_number(p.r) << ',' << format_number(p.rel_err) << '\n';
        const json doc = report("scan", params, summary, rep.clean());
        if (summary_path.empty()) {
          write_json(err, doc);
        } else {
          Sink s2(summary_path, err);
          write_json(s2.get(), doc);
        }
      } else {
        json points = json::array();
        for (const auto& p : rep.points) points.push_back({{"x", p.x}, {"value", p.r}, {"rel_err", p.rel_err}});
        summary["points"] = std::move(points);
        write_json(sink.get(), report("scan", params, summary, rep.clean()));
      }
      return rep.clean() ? kOk : kPropertyViolation;
    }

    if (*v_eq5 || *v_holder) {
      const Order nu(nu_v);
      const OUParams params(mu, sigma);
      SimConfig sim;
      sim.dt = dt;
      sim.t_max = t_max;
      sim.n_paths = paths;
      sim.bridge_correction = !no_bridge;
      sim.threads = threads;
      sim.validate();
      if (!(y > x)) throw UsageError("--y must exceed --x");
      sim.seed = resolve_seed(seed, err);

      json jparams{{"nu", nu_v}, {"x", x}, {"y", y}, {"mu", mu}, {"sigma", sigma}, {"paths", paths},
                   {"dt", dt}, {"t_max", t_max}, {"seed", sim.seed}, {"bridge_correction", sim.bridge_correction}};
      Sink sink(common.out_path, out);
      if (*v_eq5) {
        jparams["k"] = k;
        const auto samples = sample_hitting_times(x, y, params, sim);
        const Eq5Report r = eq5_from_samples(samples, x, y, nu, k, params, t_max, common.quad);
        const HitTimeStats st = laplace_from_samples(samples, {}, t_max);
        const bool pass = std::fabs(r.z_score) <= z_max;
        write_json(sink.get(), report("verify eq5", jparams,
                                      {{"analytic", r.analytic},
                                       {"mc", r.mc},
                                       {"stderr", r.std_error},
                                       {"z_score", number_or_marker(r.z_score)},
                                       {"z_max", z_max},
                                       {"censored_bound", r.censored_bound},
                                       {"n_hit", st.n_hit},
                                       {"n_censored", st.n_censored}},
                                      pass));
        return pass ? kOk : kBandViolation;
      }
      const HolderReport r = verify_holder(x, y, nu, params, sim, common.quad);
      const bool pass = r.gap > 3.0 * r.std_error;
      write_json(sink.get(), report("verify holder", jparams,
                                    {{"lhs", r.lhs},
                                     {"rhs", r.rhs},
                                     {"gap", r.gap},
                                     {"stderr", r.std_error},
                                     {"analytic_gap", r.analytic_gap}},
                                    pass));
      return pass ? kOk : kBandViolation;
    }

    if (*v_gen || *v_id) {
      const Order nu(nu_v);
      const bool is_gen = v_gen->parsed();
      const double limit = tol > 0.0 ? tol : (is_gen ? 1e-9 : 1e-10);
      json jparams{{"nu", nu_v}, {"x", x}, {"tol", limit}};
      double residual = 0.0;
      if (is_gen) {
        jparams["mu"] = mu;
        jparams["sigma"] = sigma;
        residual = generator_residual(x, OUParams(mu, sigma), nu, common.quad);
      } else {
        residual = identity_residual(nu, x, common.quad);
      }
      const bool pass = residual <= limit;
      Sink sink(common.out_path, out);
      write_json(sink.get(), report(is_gen ? "verify generator" : "verify identity", jparams,
                                    {{"residual", residual}}, pass));
      return pass ? kOk : kBandViolation;
    }

    if (*golden) {
      GoldenFile file;
      try {
        file = load_golden(input);
      } catch (const GoldenFormatError& e) {
        err << "error: malformed golden file: " << e.what() << '\n';
        return kUsage;
      }
      if (file.entries.empty()) err << "warning: golden file has no entries; nothing to compare\n";
      const auto checks = check_golden(file, golden_tol, common.quad);
      std::size_t failed = 0;
      Sink sink(common.out_path, out);
      if (common.format == "csv") {
        auto& os = sink.get();
        os << "fn,nu,x,expected_log,computed_log,abs_diff,status\n";
        for (const auto& c : checks) {
          os << c.entry.fn << ',' << format_number(c.entry.nu) << ',' << format_number(c.entry.x) << ','
             << format_number(c.entry.log_value) << ',' << format_number(c.computed_log) << ','
             << format_number(c.abs_diff) << ',' << (c.ok ? "pass" : "FAIL") << '\n';
          failed += c.ok ? 0 : 1;
        }
      } else {
        json rows = json::array();
        for (const auto& c : checks) {
          rows.push_back({{"fn", c.entry.fn}, {"nu", c.entry.nu}, {"x", c.entry.x},
                          {"expected_log", c.entry.log_value}, {"computed_log", c.computed_log},
                          {"abs_diff", c.abs_diff}, {"ok", c.ok}});
          failed += c.ok ? 0 : 1;
        }
        write_json(sink.get(), report("golden", {{"input", input}, {"rel_tol", golden_tol}},
                                      {{"entries", rows}, {"failed", failed}}, failed == 0));
      }
      if (failed != 0) err << failed << " of " << checks.size() << " golden entries out of tolerance\n";
      return failed == 0 ? kOk : kGoldenMismatch;
    }
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (achieved " << format_number(e.best().abs_err_log) << ")\n";
    return kConvergence;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace hermite::cli
