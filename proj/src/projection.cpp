#include "polydense/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polydense/errors.hpp"

namespace polydense {

IntegralOutcome inner_product(const RealFn& f, const RealFn& g,
                              const WeightDensity& d,
                              const QuadraturePlan& plan) {
  return d.integrate_against([&](double x) { return f(x) * g(x); }, plan);
}

ProjectionResult project(const RealFn& f, const OrthonormalBasis& b,
                         const QuadraturePlan& plan) {
  IntegralOutcome norm_out = inner_product(f, f, b.weight, plan);
  if (norm_out.verdict != Verdict::converged)
    throw DomainError(std::string("project: |f|^2 ") +
                      to_string(norm_out.verdict) +
                      "; f is not certified square-integrable here");

  ProjectionResult result;
  // The integrand f^2 is pointwise nonnegative; tiny negative totals are
  // quadrature roundoff on an essentially-zero function.
  result.f_norm_sq = std::max(norm_out.value, 0.0);

  for (int k = 0; k <= b.max_degree; ++k) {
    IntegralOutcome ck = inner_product(
        f, [&](double x) { return eval_basis(b, k, x); }, b.weight, plan);
    if (ck.verdict != Verdict::converged)
      throw InconsistencyError("project: coefficient " + std::to_string(k) +
                               " " + to_string(ck.verdict) +
                               " although |f|^2 converged");
    result.coefficients.push_back(ck.value);
  }

  const double slack =
      10.0 * std::max(plan.abs_tol, plan.rel_tol * result.f_norm_sq);
  double remaining = result.f_norm_sq;
  for (int n = 0; n <= b.max_degree; ++n) {
    remaining -= result.coefficients[n] * result.coefficients[n];
    if (remaining < -slack)
      throw InconsistencyError(
          "project: residual at degree " + std::to_string(n) +
          " fell below zero beyond roundoff (" + std::to_string(remaining) +
          "); coefficients exceed the norm they must be bounded by");
    result.residuals.push_back(std::max(remaining, 0.0));
  }
  result.relative_residual =
      result.f_norm_sq > 0.0 ? result.residuals.back() / result.f_norm_sq : 0.0;
  return result;
}

ProjectionResult counterexample_audit(const OrthonormalBasis& b,
                                      const QuadraturePlan& plan) {
  const WeightDensity& d = b.weight;
  if (d.family() != Family::lognormal || d.param1() != 0.0 ||
      d.param2() != 1.0)
    throw DomainError(
        "counterexample_audit: requires the lognormal weight with mu = 0, "
        "sigma = 1");
  if (d.base().kind != BaseMeasure::Kind::lebesgue)
    throw DomainError("counterexample_audit: requires the lebesgue base");
  if (b.max_degree < 10)
    throw DomainError(
        "counterexample_audit: needs degree >= 10 to be persuasive");
  RealFn f = [](double x) {
    return x > 0.0 ? std::sin(2.0 * std::numbers::pi * std::log(x)) : 0.0;
  };
  return project(f, b, plan);
}

std::vector<ResidualPoint> completeness_curve(const RealFn& f,
                                              const WeightDensity& d,
                                              int max_degree,
                                              const QuadraturePlan& plan) {
  OrthonormalBasis b = build_basis(d, max_degree, plan);
  ProjectionResult pr = project(f, b, plan);
  std::vector<ResidualPoint> curve;
  curve.reserve(pr.residuals.size());
  for (int n = 0; n <= max_degree; ++n)
    curve.push_back(ResidualPoint{n, pr.residuals[n]});
  return curve;
}

}  // namespace polydense
