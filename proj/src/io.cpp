#include "polydense/io.hpp"

#include <charconv>
#include <cmath>

namespace polydense {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON cannot carry inf/nan as numbers; fall back to the string form.
nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

nlohmann::json describe_weight(const WeightDensity& d) {
  nlohmann::json j;
  j["family"] = to_string(d.family());
  switch (d.family()) {
    case Family::gaussian:
      j["mean"] = d.param1();
      j["sigma"] = d.param2();
      break;
    case Family::double_exponential:
      j["scale"] = d.param1();
      break;
    case Family::uniform:
      j["lo"] = d.param1();
      j["hi"] = d.param2();
      break;
    case Family::lognormal:
      j["mu"] = d.param1();
      j["sigma"] = d.param2();
      break;
    case Family::tabulated: {
      nlohmann::json pts = nlohmann::json::array();
      for (const TabPoint& p : d.points()) pts.push_back({p.x, p.a});
      j["points"] = pts;
      break;
    }
  }
  if (d.base().kind == BaseMeasure::Kind::counting)
    j["base"] = {{"kind", "counting"}, {"grid", d.base().grid}};
  else
    j["base"] = {{"kind", "lebesgue"}};
  return j;
}

nlohmann::json to_json(const IntegralOutcome& out) {
  nlohmann::json j;
  j["value"] = json_number(out.value);
  j["error"] = json_number(out.error_estimate);
  j["verdict"] = to_string(out.verdict);
  if (!out.truncations_used.empty()) {
    nlohmann::json ts = nlohmann::json::array();
    for (const Truncation& t : out.truncations_used)
      ts.push_back({{"radius", t.radius},
                    {"partial_value", json_number(t.partial_value)}});
    j["truncations"] = ts;
  }
  return j;
}

nlohmann::json to_json(const LaplaceReport& report) {
  nlohmann::json j;
  nlohmann::json s_grid = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::array();
  for (const ProbeResult& p : report.probes) {
    s_grid.push_back(p.s);
    values.push_back({{"s", p.s},
                      {"value", json_number(p.value)},
                      {"error", json_number(p.error_estimate)},
                      {"verdict", to_string(p.verdict)}});
  }
  j["s_grid"] = s_grid;
  j["values"] = values;
  j["delta_hat"] =
      report.unbounded ? nlohmann::json("unbounded") : json_number(report.delta_hat);
  j["delta_resolution"] = report.delta_resolution;
  j["probe_limit"] = report.probe_limit;
  auto side = [](const SideBoundary& s) {
    return nlohmann::json{{"last_converged", s.last_converged},
                          {"boundary", s.boundary},
                          {"resolution", s.resolution},
                          {"unbounded", s.unbounded},
                          {"decisive", s.decisive}};
  };
  j["positive_side"] = side(report.positive_side);
  j["negative_side"] = side(report.negative_side);
  j["has_inconclusive"] = report.has_inconclusive;
  return j;
}

nlohmann::json to_json(const OrthonormalBasis& b) {
  nlohmann::json j;
  j["family"] = to_string(b.weight.family());
  j["weight"] = describe_weight(b.weight);
  j["max_degree"] = b.max_degree;
  j["alpha"] = b.alpha;
  j["beta"] = b.beta;
  j["norm0"] = b.norm0;
  j["orthogonality_drift"] = b.orthogonality_drift;
  j["drift_tolerance"] = b.drift_tolerance;
  j["valid"] = b.valid;
  return j;
}

nlohmann::json to_json(const ProjectionResult& r) {
  nlohmann::json j;
  j["coefficients"] = r.coefficients;
  j["residuals"] = r.residuals;
  j["f_norm_sq"] = r.f_norm_sq;
  j["relative_residual"] = r.relative_residual;
  return j;
}

nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json j;
  j["positivity_ok"] = r.positivity_ok;
  j["laplace_ok"] = r.laplace_ok;
  j["tail_decay_ok"] = r.tail_decay_ok;
  j["polynomial_tail_ok"] = r.polynomial_tail_ok;
  j["laplace_failure_observed"] = r.laplace_failure_observed;
  j["has_inconclusive"] = r.has_inconclusive;
  j["delta_probe"] = r.delta_probe;
  j["laplace"] = to_json(r.laplace);
  nlohmann::json rows = nlohmann::json::array();
  for (const EvidenceRow& row : r.rows)
    rows.push_back({{"check", row.check},
                    {"x", row.x},
                    {"rate", row.rate},
                    {"value", json_number(row.value)},
                    {"ok", row.ok}});
  j["evidence"] = rows;
  j["warnings"] = r.warnings;
  j["exit_code"] = r.exit_code();
  return j;
}

std::string projection_csv(const ProjectionResult& r) {
  std::string out = "n,c_n,r_n,rel_residual\n";
  const double denom = r.f_norm_sq;
  for (std::size_t n = 0; n < r.coefficients.size(); ++n) {
    const double rel = denom > 0.0 ? r.residuals[n] / denom : 0.0;
    out += std::to_string(n);
    out += ',';
    out += format_double(r.coefficients[n]);
    out += ',';
    out += format_double(r.residuals[n]);
    out += ',';
    out += format_double(rel);
    out += '\n';
  }
  return out;
}

}  // namespace polydense
