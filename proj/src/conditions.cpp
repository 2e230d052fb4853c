#include "polydense/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydense/errors.hpp"

namespace polydense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp in log space: t past the overflow edge becomes +inf rather than
// trapping, and -inf maps to an exact zero.
double exp_guarded(double t) {
  if (t == -kInf) return 0.0;
  if (t > 709.0) return kInf;
  return std::exp(t);
}

// One dominance sequence: values u_j at geometrically spaced probes, which
// must become non-increasing and end near zero.
bool sequence_passes(const std::vector<double>& u) {
  for (double v : u)
    if (std::isinf(v)) return false;
  std::size_t last_rise = 0;
  bool rose = false;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    if (u[j + 1] > u[j]) {
      last_rise = j + 1;
      rose = true;
    }
  }
  if (rose && last_rise + 1 >= u.size()) return false;  // still rising at end
  const double final_bound = 1e-12 * (u.front() + 1.0);
  return u.back() <= final_bound;
}

TailCheckResult run_tail_sequences(double rate_label, const char* check_name,
                                   const std::vector<double>& xs,
                                   const RealFn& log_u) {
  TailCheckResult out;
  std::vector<double> right, left;
  for (double x : xs) {
    right.push_back(exp_guarded(log_u(x)));
    left.push_back(exp_guarded(log_u(-x)));
  }
  const bool right_ok = sequence_passes(right);
  const bool left_ok = sequence_passes(left);
  out.pass = right_ok && left_ok;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    out.rows.push_back(
        EvidenceRow{check_name, xs[j], rate_label, right[j], right_ok});
    out.rows.push_back(
        EvidenceRow{check_name, -xs[j], rate_label, left[j], left_ok});
  }
  return out;
}

std::vector<double> probe_points(double x_start, int n_probes) {
  if (!(x_start > 0.0) || !std::isfinite(x_start))
    throw DomainError("tail check: x_start must be finite and positive");
  if (n_probes < 4)
    throw DomainError("tail check: needs at least 4 probes");
  std::vector<double> xs;
  double x = x_start;
  for (int j = 0; j < n_probes; ++j, x *= 2.0) xs.push_back(x);
  return xs;
}

}  // namespace

TailCheckResult tail_decay_check(const WeightDensity& d, double delta,
                                 double x_start, int n_probes) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("tail_decay_check: delta must be finite and positive");
  const std::vector<double> xs = probe_points(x_start, n_probes);
  // The candidate rate must dominate the weight in both tails: s = +delta
  // stresses the right tail, s = -delta the left, and u(x) = e^{s x} a(x)
  // at x of the matching sign is exp(delta*|x|) * a(x).
  return run_tail_sequences(delta, "tail_decay", xs, [&](double x) {
    return delta * std::abs(x) + d.log_density(x);
  });
}

TailCheckResult polynomial_tail_check(const WeightDensity& d, int k_max,
                                      double x_start, int n_probes) {
  if (k_max < 1)
    throw DomainError("polynomial_tail_check: k_max must be at least 1");
  const std::vector<double> xs = probe_points(x_start, n_probes);
  TailCheckResult out;
  out.pass = true;
  for (int k = 1; k <= k_max; ++k) {
    TailCheckResult one =
        run_tail_sequences(static_cast<double>(k), "polynomial_tail", xs,
                           [&](double x) {
                             return k * std::log(std::abs(x)) +
                                    d.log_density(x);
                           });
    out.pass = out.pass && one.pass;
    for (auto& row : one.rows) out.rows.push_back(row);
  }
  return out;
}

int ConditionReport::exit_code() const {
  const bool definite_failure =
      !positivity_ok || (!laplace_ok && laplace_failure_observed);
  if (definite_failure) return 3;
  if (has_inconclusive || !laplace_ok) return 4;
  return 0;
}

ConditionReport certify(const WeightDensity& d, const QuadraturePlan& plan,
                        const CertifyOptions& opts) {
  plan.validate();
  ConditionReport report;

  // Positivity needs the density to live on the whole line; a grid of log
  // densities must all be finite. Linear density would underflow far out
  // and report false zeros.
  const bool whole_line = d.support().lo == -kInf && d.support().hi == kInf &&
                          d.base().kind == BaseMeasure::Kind::lebesgue;
  report.positivity_ok = whole_line;
  if (whole_line) {
    constexpr int kGrid = 1001;
    for (int i = 0; i < kGrid; ++i) {
      const double x = -50.0 + 100.0 * i / (kGrid - 1);
      if (d.log_density(x) == -kInf) {
        report.positivity_ok = false;
        report.rows.push_back(EvidenceRow{"positivity", x, 0.0, 0.0, false});
        if (report.rows.size() >= 8) break;
      }
    }
  } else {
    report.rows.push_back(
        EvidenceRow{"positivity", d.support().lo, 0.0, 0.0, false});
  }

  report.laplace = estimate_delta(d, opts.s_max, opts.eps_s, plan);
  report.laplace_ok = report.laplace.unbounded ||
                      report.laplace.delta_hat > report.laplace.delta_resolution;
  for (const auto& p : report.laplace.probes)
    if (p.verdict == Verdict::divergent) report.laplace_failure_observed = true;
  report.has_inconclusive = report.laplace.has_inconclusive;

  report.delta_probe = opts.delta_probe;
  if (!(report.delta_probe > 0.0)) {
    report.delta_probe = report.laplace.unbounded
                             ? opts.s_max / 2.0
                             : std::max(report.laplace.delta_hat / 2.0, 1e-6);
  }

  TailCheckResult tail =
      tail_decay_check(d, report.delta_probe, opts.x_start, opts.n_probes);
  report.tail_decay_ok = tail.pass;
  for (auto& row : tail.rows) report.rows.push_back(row);

  TailCheckResult poly =
      polynomial_tail_check(d, opts.k_max, opts.x_start, opts.n_probes);
  report.polynomial_tail_ok = poly.pass;
  for (auto& row : poly.rows) report.rows.push_back(row);

  // Cross-checks between the two routes to finiteness. A passing tail
  // bound at rate delta promises converged exponential probes strictly
  // inside (-delta, delta); probe both sides directly.
  if (report.tail_decay_ok) {
    const double inset = std::min(opts.eps_s, report.delta_probe / 4.0);
    for (double sign : {+1.0, -1.0}) {
      const double s = sign * (report.delta_probe - inset);
      IntegralOutcome probe = laplace_transform(d, s, plan);
      report.rows.push_back(EvidenceRow{"tail_vs_laplace", s, report.delta_probe,
                                        probe.value,
                                        probe.verdict == Verdict::converged});
      if (probe.verdict == Verdict::divergent)
        report.warnings.push_back(
            "tail bound passed at rate " + std::to_string(report.delta_probe) +
            " but the exponential probe diverged at s = " + std::to_string(s) +
            "; the tail probes missed where the mass lives");
      if (probe.verdict == Verdict::inconclusive) report.has_inconclusive = true;
    }
    if (!report.polynomial_tail_ok)
      report.warnings.push_back(
          "tail bound passed but a polynomial tail failed; an exponential "
          "bound must dominate every polynomial");
  }

  return report;
}

}  // namespace polydense
