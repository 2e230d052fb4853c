#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "polydense/conditions.hpp"
#include "polydense/errors.hpp"
#include "polydense/io.hpp"
#include "polydense/laplace.hpp"
#include "polydense/measure.hpp"
#include "polydense/orthopoly.hpp"
#include "polydense/projection.hpp"
#include "polydense/test_functions.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polydense;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitHypothesisFail = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitNumeric = 5;

// Raised for anything wrong with the config document; the message names
// the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct AppConfig {
  WeightDensity weight = WeightDensity::gaussian(0.0, 1.0);
  int max_degree = 20;
  std::vector<std::string> test_functions;
  QuadraturePlan plan;
  CertifyOptions certify;
  double drift_tol = 1e-8;
  fs::path output_dir = ".";
  json echo;  // the parsed document, replayed into outputs
};

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok)
      throw ConfigError(std::string(where) + ": unknown field \"" + key + "\"");
  }
}

double require_number(const json& obj, const char* where, const char* field) {
  if (!obj.contains(field))
    throw ConfigError(std::string(where) + ": missing field \"" + field + "\"");
  if (!obj[field].is_number())
    throw ConfigError(std::string(where) + ": field \"" + field +
                      "\" must be a number");
  return obj[field].get<double>();
}

double optional_number(const json& obj, const char* where, const char* field,
                       double fallback) {
  if (!obj.contains(field)) return fallback;
  if (!obj[field].is_number())
    throw ConfigError(std::string(where) + ": field \"" + field +
                      "\" must be a number");
  return obj[field].get<double>();
}

WeightDensity parse_weight(const json& w, const fs::path& config_dir) {
  if (!w.is_object()) throw ConfigError("weight: must be an object");
  if (!w.contains("family") || !w["family"].is_string())
    throw ConfigError("weight: missing string field \"family\"");
  const std::string family = w["family"].get<std::string>();

  if (family == "gaussian") {
    reject_unknown_keys(w, "weight", {"family", "mean", "sigma"});
    return WeightDensity::gaussian(require_number(w, "weight", "mean"),
                                   require_number(w, "weight", "sigma"));
  }
  if (family == "double_exponential") {
    reject_unknown_keys(w, "weight", {"family", "scale"});
    return WeightDensity::double_exponential(
        require_number(w, "weight", "scale"));
  }
  if (family == "uniform") {
    reject_unknown_keys(w, "weight", {"family", "lo", "hi"});
    return WeightDensity::uniform(require_number(w, "weight", "lo"),
                                  require_number(w, "weight", "hi"));
  }
  if (family == "lognormal") {
    reject_unknown_keys(w, "weight", {"family", "mu", "sigma"});
    return WeightDensity::lognormal(require_number(w, "weight", "mu"),
                                    require_number(w, "weight", "sigma"));
  }
  if (family == "tabulated") {
    reject_unknown_keys(w, "weight", {"family", "csv", "points"});
    if (w.contains("csv") == w.contains("points"))
      throw ConfigError(
          "weight: tabulated needs exactly one of \"csv\" or \"points\"");
    if (w.contains("csv")) {
      if (!w["csv"].is_string())
        throw ConfigError("weight: field \"csv\" must be a string path");
      fs::path p = w["csv"].get<std::string>();
      if (p.is_relative()) p = config_dir / p;
      return WeightDensity::tabulated_from_csv(p.string());
    }
    if (!w["points"].is_array())
      throw ConfigError("weight: field \"points\" must be an array of [x, a]");
    std::vector<TabPoint> pts;
    for (const auto& row : w["points"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
          !row[1].is_number())
        throw ConfigError("weight: each entry of \"points\" must be [x, a]");
      pts.push_back(TabPoint{row[0].get<double>(), row[1].get<double>()});
    }
    return WeightDensity::tabulated(std::move(pts));
  }
  throw ConfigError(
      "weight: unknown family \"" + family +
      "\"; expected gaussian, double_exponential, uniform, lognormal or "
      "tabulated");
}

BaseMeasure parse_base(const json& b) {
  if (!b.is_object()) throw ConfigError("base: must be an object");
  reject_unknown_keys(b, "base", {"kind", "grid"});
  if (!b.contains("kind") || !b["kind"].is_string())
    throw ConfigError("base: missing string field \"kind\"");
  const std::string kind = b["kind"].get<std::string>();
  if (kind == "lebesgue") return BaseMeasure::lebesgue();
  if (kind == "counting") {
    if (!b.contains("grid") || !b["grid"].is_array())
      throw ConfigError("base: counting requires an array field \"grid\"");
    std::vector<double> grid;
    for (const auto& v : b["grid"]) {
      if (!v.is_number())
        throw ConfigError("base: grid entries must be numbers");
      grid.push_back(v.get<double>());
    }
    return BaseMeasure::counting(std::move(grid));
  }
  throw ConfigError("base: unknown kind \"" + kind +
                    "\"; expected lebesgue or counting");
}

QuadraturePlan parse_plan(const json& q) {
  QuadraturePlan plan;
  if (q.is_null()) return plan;
  if (!q.is_object()) throw ConfigError("quadrature: must be an object");
  reject_unknown_keys(q, "quadrature",
                      {"rel_tol", "abs_tol", "initial_radius", "max_doublings",
                       "max_panels", "divergence_growth"});
  plan.rel_tol = optional_number(q, "quadrature", "rel_tol", plan.rel_tol);
  plan.abs_tol = optional_number(q, "quadrature", "abs_tol", plan.abs_tol);
  plan.initial_radius =
      optional_number(q, "quadrature", "initial_radius", plan.initial_radius);
  plan.max_doublings = static_cast<int>(optional_number(
      q, "quadrature", "max_doublings", plan.max_doublings));
  plan.max_panels = static_cast<int>(
      optional_number(q, "quadrature", "max_panels", plan.max_panels));
  plan.divergence_growth = optional_number(q, "quadrature", "divergence_growth",
                                           plan.divergence_growth);
  try {
    plan.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return plan;
}

CertifyOptions parse_certify(const json& c) {
  CertifyOptions opts;
  if (c.is_null()) return opts;
  if (!c.is_object()) throw ConfigError("certify: must be an object");
  reject_unknown_keys(
      c, "certify",
      {"s_max", "eps_s", "delta_probe", "k_max", "x_start", "n_probes"});
  opts.s_max = optional_number(c, "certify", "s_max", opts.s_max);
  opts.eps_s = optional_number(c, "certify", "eps_s", opts.eps_s);
  opts.delta_probe =
      optional_number(c, "certify", "delta_probe", opts.delta_probe);
  opts.k_max =
      static_cast<int>(optional_number(c, "certify", "k_max", opts.k_max));
  opts.x_start = optional_number(c, "certify", "x_start", opts.x_start);
  opts.n_probes =
      static_cast<int>(optional_number(c, "certify", "n_probes", opts.n_probes));
  return opts;
}

AppConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(doc, "config",
                      {"weight", "base", "max_degree", "test_functions",
                       "quadrature", "certify", "drift_tol", "output_dir"});
  if (!doc.contains("weight"))
    throw ConfigError("config: missing field \"weight\"");

  AppConfig cfg;
  cfg.echo = doc;
  cfg.weight = parse_weight(doc["weight"], path.parent_path());
  if (doc.contains("base"))
    cfg.weight = cfg.weight.with_base(parse_base(doc["base"]));

  if (doc.contains("max_degree")) {
    if (!doc["max_degree"].is_number_integer())
      throw ConfigError("config: max_degree must be an integer");
    cfg.max_degree = doc["max_degree"].get<int>();
  }
  if (cfg.max_degree < 1 || cfg.max_degree > kMaxSupportedDegree)
    throw ConfigError("config: max_degree must be in [1, " +
                      std::to_string(kMaxSupportedDegree) + "] (got " +
                      std::to_string(cfg.max_degree) + ")");

  if (doc.contains("test_functions")) {
    if (!doc["test_functions"].is_array())
      throw ConfigError("config: test_functions must be an array of names");
    for (const auto& v : doc["test_functions"]) {
      if (!v.is_string())
        throw ConfigError("config: test_functions entries must be strings");
      const std::string name = v.get<std::string>();
      if (!is_test_function(name)) {
        std::string known;
        for (const auto& n : test_function_names()) {
          if (!known.empty()) known += ", ";
          known += n;
        }
        throw ConfigError("config: test_functions: unknown name \"" + name +
                          "\"; expected one of: " + known);
      }
      cfg.test_functions.push_back(name);
    }
  }

  cfg.plan = parse_plan(doc.contains("quadrature") ? doc["quadrature"]
                                                   : json(nullptr));
  cfg.certify =
      parse_certify(doc.contains("certify") ? doc["certify"] : json(nullptr));
  if (doc.contains("drift_tol")) {
    cfg.drift_tol = optional_number(doc, "config", "drift_tol", cfg.drift_tol);
    if (!(cfg.drift_tol > 0.0))
      throw ConfigError("config: drift_tol must be positive");
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string())
      throw ConfigError("config: output_dir must be a string path");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  return cfg;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

int run_certify(const AppConfig& cfg, bool quiet) {
  ConditionReport report = certify(cfg.weight, cfg.plan, cfg.certify);
  json j = to_json(report);
  j["weight"] = describe_weight(cfg.weight);
  j["config"] = cfg.echo;
  write_json(cfg.output_dir / "certify.json", j);
  if (!quiet) {
    std::cout << "certify: weight=" << to_string(cfg.weight.family())
              << " positivity=" << (report.positivity_ok ? "ok" : "FAIL")
              << " laplace=" << (report.laplace_ok ? "ok" : "FAIL")
              << " tail_decay=" << (report.tail_decay_ok ? "ok" : "fail")
              << " polynomial_tail="
              << (report.polynomial_tail_ok ? "ok" : "fail") << "\n";
    for (const auto& w : report.warnings)
      std::cout << "certify: warning: " << w << "\n";
  }
  return report.exit_code();
}

int run_approx(const AppConfig& cfg, bool quiet) {
  json report;
  report["config"] = cfg.echo;
  report["weight"] = describe_weight(cfg.weight);

  OrthonormalBasis basis = [&] {
    try {
      return build_basis(cfg.weight, cfg.max_degree, cfg.plan, cfg.drift_tol);
    } catch (const Error& e) {
      report["error"] = e.what();
      write_json(cfg.output_dir / "report.json", report);
      std::cerr << "approx: " << e.what() << "\n";
      std::exit(kExitNumeric);
    }
  }();

  write_json(cfg.output_dir / "basis.json", to_json(basis));
  report["basis"] = {{"max_degree", basis.max_degree},
                     {"orthogonality_drift", basis.orthogonality_drift},
                     {"valid", basis.valid}};
  if (!basis.valid) {
    report["error"] = "orthogonality drift " +
                      format_double(basis.orthogonality_drift) +
                      " exceeds tolerance " + format_double(basis.drift_tolerance);
    write_json(cfg.output_dir / "report.json", report);
    std::cerr << "approx: " << report["error"].get<std::string>() << "\n";
    return kExitNumeric;
  }
  if (!quiet)
    std::cout << "approx: basis degree " << basis.max_degree << " drift "
              << format_double(basis.orthogonality_drift) << "\n";

  json residuals = json::object();
  for (const std::string& name : cfg.test_functions) {
    ProjectionResult pr = [&] {
      try {
        return project(test_function(name), basis, cfg.plan);
      } catch (const Error& e) {
        report["error"] = std::string("projection of ") + name + ": " + e.what();
        write_json(cfg.output_dir / "report.json", report);
        std::cerr << "approx: " << report["error"].get<std::string>() << "\n";
        std::exit(kExitNumeric);
      }
    }();
    write_text(cfg.output_dir / ("projection_" + name + ".csv"),
               projection_csv(pr));
    residuals[name] = {{"relative_residual", pr.relative_residual},
                       {"f_norm_sq", pr.f_norm_sq}};
    if (!quiet)
      std::cout << "approx: " << name
                << " rel_residual=" << format_double(pr.relative_residual)
                << "\n";
  }
  report["projections"] = residuals;
  // The projections witness density only for the functions probed; a finite
  // file cannot certify every element of the space.
  report["note"] =
      "residuals witness completeness on the probed functions only";
  write_json(cfg.output_dir / "report.json", report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "weighted-L2 polynomial approximation: hypothesis certification and "
      "projection experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir_override;
  bool quiet = false;

  CLI::App* cmd_certify = app.add_subcommand(
      "certify", "check the density hypotheses for a weight");
  CLI::App* cmd_approx = app.add_subcommand(
      "approx", "build a basis and project test functions");
  for (CLI::App* cmd : {cmd_certify, cmd_approx}) {
    cmd->add_option("--config", config_path, "JSON experiment config")
        ->required();
    cmd->add_option("--output-dir", output_dir_override,
                    "directory for result files (overrides config)");
    cmd->add_flag("--quiet", quiet, "suppress progress output");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    AppConfig cfg = load_config(config_path);
    if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
      throw ConfigError("config: cannot create output_dir " +
                        cfg.output_dir.string() + ": " + ec.message());
    if (cmd_certify->parsed()) return run_certify(cfg, quiet);
    return run_approx(cfg, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
