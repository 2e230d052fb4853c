#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace polydense {

using RealFn = std::function<double(double)>;

// Tri-state outcome of a numeric integral. "inconclusive" is an honest
// answer: the budget ran out before either stability or growth was seen.
enum class Verdict { converged, divergent, inconclusive };

const char* to_string(Verdict v);

enum class PanelRule { gauss_kronrod_15 };

struct QuadraturePlan {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // Half-width of the first truncation window on unbounded domains.
  double initial_radius = 8.0;
  int max_doublings = 12;
  PanelRule panel_rule = PanelRule::gauss_kronrod_15;
  int max_panels = 4096;
  // Successive truncations growing by at least this factor, three times in
  // a row, are declared divergent. Kept below 2 so that integrands whose
  // partial integrals double minus a constant (exponential growth against
  // an exponential weight) are still caught.
  double divergence_growth = 1.75;

  void validate() const;  // throws DomainError naming the offending field
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval whole();
  static Interval bounded(double lo, double hi);
  static Interval right_unbounded(double lo);  // [lo, +inf)
  static Interval left_unbounded(double hi);   // (-inf, hi]

  bool is_bounded() const;
  bool contains(double x) const;
};

struct Truncation {
  double radius = 0.0;
  double partial_value = 0.0;
};

struct IntegralOutcome {
  double value = 0.0;
  double error_estimate = 0.0;
  Verdict verdict = Verdict::inconclusive;
  // Expanding-window partial integrals, in probe order. Empty for bounded
  // domains and counting sums.
  std::vector<Truncation> truncations_used;

  bool converged() const { return verdict == Verdict::converged; }
};

// Adaptive panel integration on bounded domains; expanding truncation
// windows on unbounded ones. Deterministic: identical inputs produce
// bit-identical outcomes. NaN from the integrand throws EvaluationError
// carrying the point; an infinite partial integral yields "divergent".
IntegralOutcome integrate(const RealFn& g, const Interval& domain,
                          const QuadraturePlan& plan);

// Compensated sum of g over an explicit finite grid (counting measure).
// Throws EvaluationError if g is non-finite at a grid point.
double integrate_counting(const RealFn& g, std::span<const double> grid);

}  // namespace polydense
