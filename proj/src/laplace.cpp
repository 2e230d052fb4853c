#include "polydense/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polydense/errors.hpp"

namespace polydense {

namespace {

ProbeResult probe_at(const WeightDensity& d, double s,
                     const QuadraturePlan& plan) {
  IntegralOutcome out = laplace_transform(d, s, plan);
  return ProbeResult{s, out.value, out.error_estimate, out.verdict};
}

struct SideSearch {
  SideBoundary boundary;
  std::vector<ProbeResult> probes;
};

// One side of the axis: sign = +1 probes s > 0, sign = -1 probes s < 0.
// Invariant of the bracket [lo, hi]: a probe at sign*lo converged (lo = 0
// counts via total mass) and a probe at sign*hi diverged.
SideSearch search_side(const WeightDensity& d, int sign, double s_max,
                       double eps_s, const QuadraturePlan& plan) {
  SideSearch out;
  auto run = [&](double magnitude) {
    ProbeResult p = probe_at(d, sign * magnitude, plan);
    out.probes.push_back(p);
    return p.verdict;
  };

  const Verdict at_limit = run(s_max);
  if (at_limit == Verdict::converged) {
    out.boundary = SideBoundary{s_max, s_max, eps_s, true, true};
    return out;
  }

  double lo = 0.0;
  double hi = s_max;
  bool decisive = (at_limit == Verdict::divergent);
  if (decisive) {
    while (hi - lo > eps_s) {
      // Midpoint first; if it is inconclusive, try the quarter points
      // before giving up on this bracket.
      const double w = hi - lo;
      const double candidates[3] = {lo + 0.5 * w, lo + 0.25 * w,
                                    lo + 0.75 * w};
      bool narrowed = false;
      for (double c : candidates) {
        const Verdict v = run(c);
        if (v == Verdict::converged) {
          lo = c;
          narrowed = true;
          break;
        }
        if (v == Verdict::divergent) {
          hi = c;
          narrowed = true;
          break;
        }
      }
      if (!narrowed) {
        decisive = false;  // all three probes inconclusive
        break;
      }
    }
  }
  out.boundary.last_converged = lo;
  out.boundary.boundary = decisive ? 0.5 * (lo + hi) : lo;
  out.boundary.resolution = decisive ? 0.5 * (hi - lo) : (hi - lo);
  out.boundary.unbounded = false;
  out.boundary.decisive = decisive;
  return out;
}

}  // namespace

IntegralOutcome laplace_transform(const WeightDensity& d, double s,
                                  const QuadraturePlan& plan) {
  if (!std::isfinite(s))
    throw DomainError("laplace_transform: s must be finite");
  return d.integrate_exp_monomial(0, s, plan);
}

RealFn SignedFunction::plus() const {
  RealFn g = f;
  return [g](double x) { return std::max(g(x), 0.0); };
}

RealFn SignedFunction::minus() const {
  RealFn g = f;
  return [g](double x) { return std::max(-g(x), 0.0); };
}

SignedValue signed_laplace(const WeightDensity& d, const SignedFunction& f,
                           double s, const QuadraturePlan& plan) {
  if (!std::isfinite(s))
    throw DomainError("signed_laplace: s must be finite");
  const RealFn fp = f.plus();
  const RealFn fm = f.minus();
  SignedValue out;
  out.plus_part =
      d.integrate_against([&](double x) { return fp(x) * std::exp(s * x); }, plan);
  out.minus_part =
      d.integrate_against([&](double x) { return fm(x) * std::exp(s * x); }, plan);

  const Verdict vp = out.plus_part.verdict;
  const Verdict vm = out.minus_part.verdict;
  if (vp == Verdict::divergent && vm == Verdict::divergent) {
    // inf - inf: the signed integral does not exist.
    out.status = SignedValue::Status::undefined;
    return out;
  }
  if (vp == Verdict::inconclusive || vm == Verdict::inconclusive) {
    out.status = SignedValue::Status::inconclusive;
    return out;
  }
  out.status = SignedValue::Status::defined;
  if (vp == Verdict::divergent)
    out.value = std::numeric_limits<double>::infinity();
  else if (vm == Verdict::divergent)
    out.value = -std::numeric_limits<double>::infinity();
  else
    out.value = out.plus_part.value - out.minus_part.value;
  return out;
}

LaplaceReport estimate_delta(const WeightDensity& d, double s_max,
                             double eps_s, const QuadraturePlan& plan) {
  if (!(s_max > 0.0) || !std::isfinite(s_max))
    throw DomainError("estimate_delta: s_max must be finite and positive");
  if (!(eps_s > 0.0) || !(eps_s < s_max))
    throw DomainError("estimate_delta: eps_s must lie in (0, s_max)");

  LaplaceReport report;
  report.probe_limit = s_max;

  // s = 0 is the total mass; record it as a probe for completeness.
  report.probes.push_back(probe_at(d, 0.0, plan));

  SideSearch pos = search_side(d, +1, s_max, eps_s, plan);
  SideSearch neg = search_side(d, -1, s_max, eps_s, plan);
  report.positive_side = pos.boundary;
  report.negative_side = neg.boundary;
  for (const auto& p : pos.probes) report.probes.push_back(p);
  for (const auto& p : neg.probes) report.probes.push_back(p);
  std::sort(report.probes.begin(), report.probes.end(),
            [](const ProbeResult& a, const ProbeResult& b) { return a.s < b.s; });

  report.unbounded = pos.boundary.unbounded && neg.boundary.unbounded;
  if (report.unbounded) {
    report.delta_hat = std::numeric_limits<double>::infinity();
    report.delta_resolution = eps_s;
  } else {
    double hat = std::numeric_limits<double>::infinity();
    double res = 0.0;
    for (const SideBoundary* side : {&report.positive_side,
                                     &report.negative_side}) {
      if (side->unbounded) continue;
      if (side->boundary < hat) hat = side->boundary;
      res = std::max(res, side->resolution);
    }
    report.delta_hat = hat;
    report.delta_resolution = res;
  }
  for (const auto& p : report.probes)
    if (p.verdict == Verdict::inconclusive) report.has_inconclusive = true;
  return report;
}

IntegralOutcome moment(const WeightDensity& d, int k, const QuadraturePlan& plan,
                       std::optional<double> certified_delta) {
  if (k < 0) throw DomainError("moment: order must be nonnegative");
  IntegralOutcome out = d.integrate_exp_monomial(k, 0.0, plan);
  if (certified_delta && *certified_delta > 0.0 &&
      out.verdict == Verdict::divergent)
    throw InconsistencyError(
        "moment: order " + std::to_string(k) +
        " diverged although the exponential probe is finite near 0; "
        "finiteness there forces every moment to be finite");
  return out;
}

MonomialCheck check_weighted_monomial_at(const WeightDensity& d, int n,
                                         std::span<const double> probes,
                                         const QuadraturePlan& plan) {
  if (n < 0)
    throw DomainError("check_weighted_monomial: degree must be nonnegative");
  if (probes.empty())
    throw DomainError("check_weighted_monomial: needs at least one probe");
  MonomialCheck out;
  out.degree = n;
  out.pass = true;
  for (double s : probes) {
    if (!std::isfinite(s))
      throw DomainError("check_weighted_monomial: probes must be finite");
    IntegralOutcome o = d.integrate_exp_monomial(n, s, plan);
    out.probes.push_back(MonomialProbe{s, o.value, o.verdict});
    if (o.verdict != Verdict::converged) out.pass = false;
    if (o.verdict == Verdict::inconclusive) out.has_inconclusive = true;
  }
  return out;
}

MonomialCheck check_weighted_monomial(const WeightDensity& d, int n,
                                      double delta, const QuadraturePlan& plan,
                                      double eps_s) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("check_weighted_monomial: delta must be finite, positive");
  double edge = delta / 2.0 - eps_s;
  if (!(edge > 0.0)) edge = delta / 4.0;  // eps_s too coarse for this delta
  const double probes[5] = {-edge, -delta / 4.0, 0.0, delta / 4.0, edge};
  return check_weighted_monomial_at(d, n, probes, plan);
}

}  // namespace polydense
