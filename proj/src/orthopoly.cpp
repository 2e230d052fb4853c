#include "polydense/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polydense/errors.hpp"

namespace polydense {

namespace {

// e_k(x) from coefficient prefixes. Usable mid-construction, when only the
// first k alphas and betas exist.
double eval_prefix(const std::vector<double>& alpha,
                   const std::vector<double>& beta, double norm0, int k,
                   double x) {
  double prev = 0.0;
  double cur = 1.0 / norm0;
  for (int j = 0; j < k; ++j) {
    const double next =
        ((x - alpha[j]) * cur - (j > 0 ? beta[j - 1] * prev : 0.0)) / beta[j];
    prev = cur;
    cur = next;
  }
  return cur;
}

double require_converged(const IntegralOutcome& out, const std::string& what) {
  if (out.verdict != Verdict::converged)
    throw InconsistencyError("build_basis: " + what + " integral " +
                             to_string(out.verdict) +
                             "; cannot certify the recurrence");
  return out.value;
}

}  // namespace

OrthonormalBasis build_basis(const WeightDensity& d, int max_degree,
                             const QuadraturePlan& plan, double drift_tol) {
  if (max_degree < 0)
    throw DomainError("build_basis: max_degree must be nonnegative");
  if (max_degree > kMaxSupportedDegree)
    throw DomainError("build_basis: max_degree capped at " +
                      std::to_string(kMaxSupportedDegree) +
                      "; recurrence coefficients lose orthogonality beyond it");
  if (!(drift_tol > 0.0))
    throw DomainError("build_basis: drift_tol must be positive");

  if (d.base().kind == BaseMeasure::Kind::counting) {
    // On finitely many points the monomials 1, x, ..., x^{m-1} already span
    // every function of the support, so the first impossible degree is known
    // exactly and does not need to be discovered numerically. (Numerically
    // it shows up as a residual that is pure cancellation noise, whose size
    // is amplified by the whole recurrence history and has no reliable
    // floor.)
    int charged = 0;
    for (double x : d.base().grid)
      if (d.density(x) > 0.0) ++charged;
    if (max_degree >= charged)
      throw DegeneracyError(
          "build_basis: the measure charges only " + std::to_string(charged) +
              " points, so independent polynomials stop at degree " +
              std::to_string(charged - 1),
          charged);
  }

  OrthonormalBasis b{d, max_degree, {}, {}, 1.0, 0.0, drift_tol, false};
  const double mass = d.total_mass(plan);
  if (!(mass > 0.0))
    throw DegeneracyError("build_basis: weighted measure has zero mass", 0);
  b.norm0 = std::sqrt(mass);

  const double eps = std::numeric_limits<double>::epsilon();
  double scale = 0.0;  // running magnitude of the coefficients seen so far

  for (int k = 0; k < max_degree; ++k) {
    auto ek = [&](double x) {
      return eval_prefix(b.alpha, b.beta, b.norm0, k, x);
    };
    const double alpha_k = require_converged(
        d.integrate_against(
            [&](double x) {
              const double e = ek(x);
              return x * e * e;
            },
            plan),
        "alpha[" + std::to_string(k) + "]");
    b.alpha.push_back(alpha_k);
    scale = std::max(scale, std::abs(alpha_k));

    const double beta_prev = k > 0 ? b.beta[k - 1] : 0.0;
    auto residual = [&](double x) {
      const double e = ek(x);
      const double em1 =
          k > 0 ? eval_prefix(b.alpha, b.beta, b.norm0, k - 1, x) : 0.0;
      return (x - alpha_k) * e - beta_prev * em1;
    };
    const double beta_sq = require_converged(
        d.integrate_against([&](double x) {
          const double r = residual(x);
          return r * r;
        },
                            plan),
        "beta[" + std::to_string(k + 1) + "]^2");
    const double beta_next = std::sqrt(std::max(beta_sq, 0.0));
    const double floor = 1e3 * eps * std::max(scale, 1e-100);
    if (beta_next <= floor)
      throw DegeneracyError(
          "build_basis: residual norm vanished at degree " +
              std::to_string(k + 1) +
              "; the measure cannot support independent polynomials past "
              "degree " +
              std::to_string(k),
          k + 1);
    b.beta.push_back(beta_next);
    scale = std::max(scale, beta_next);
  }

  b.orthogonality_drift = orthogonality_audit(b, plan);
  b.valid = b.orthogonality_drift <= drift_tol;
  return b;
}

double eval_basis(const OrthonormalBasis& b, int k, double x) {
  if (k < 0 || k > b.max_degree)
    throw DomainError("eval_basis: degree " + std::to_string(k) +
                      " outside [0, " + std::to_string(b.max_degree) + "]");
  if (!std::isfinite(x))
    throw DomainError("eval_basis: x must be finite");
  return eval_prefix(b.alpha, b.beta, b.norm0, k, x);
}

double orthogonality_audit(const OrthonormalBasis& b,
                           const QuadraturePlan& plan) {
  double drift = 0.0;
  for (int i = 0; i <= b.max_degree; ++i) {
    for (int j = i; j <= b.max_degree; ++j) {
      IntegralOutcome out = b.weight.integrate_against(
          [&](double x) { return eval_basis(b, i, x) * eval_basis(b, j, x); },
          plan);
      if (out.verdict != Verdict::converged)
        throw InconsistencyError(
            "orthogonality_audit: <e_" + std::to_string(i) + ", e_" +
            std::to_string(j) + "> " + to_string(out.verdict));
      const double target = i == j ? 1.0 : 0.0;
      drift = std::max(drift, std::abs(out.value - target));
    }
  }
  return drift;
}

}  // namespace polydense
