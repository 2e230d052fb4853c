#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "polydense/quadrature.hpp"

namespace polydense {

enum class Family { gaussian, double_exponential, uniform, lognormal, tabulated };

const char* to_string(Family f);

// Reference measure the weight density multiplies: Lebesgue on the support,
// or unit point masses on an explicit finite grid.
struct BaseMeasure {
  enum class Kind { lebesgue, counting };

  Kind kind = Kind::lebesgue;
  std::vector<double> grid;  // counting only; finite, strictly increasing

  static BaseMeasure lebesgue();
  static BaseMeasure counting(std::vector<double> grid);
};

struct TabPoint {
  double x;
  double a;
};

// Nonnegative weight density a(x) over a base measure. All integrals the
// library computes against the weight flow through integrate_against, which
// owns the change of variables for weights on (0, inf) and the exact
// summation for counting bases.
class WeightDensity {
public:
  static WeightDensity gaussian(double mean, double sigma);
  static WeightDensity double_exponential(double scale);
  static WeightDensity uniform(double lo, double hi);
  static WeightDensity lognormal(double mu, double sigma);
  static WeightDensity tabulated(std::vector<TabPoint> points);
  static WeightDensity tabulated_from_csv(const std::string& path);

  WeightDensity(const WeightDensity& other);
  WeightDensity& operator=(const WeightDensity& other);

  // Same density over a different base measure.
  WeightDensity with_base(BaseMeasure base) const;

  Family family() const { return family_; }
  const BaseMeasure& base() const { return base_; }
  const Interval& support() const { return support_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  const std::vector<TabPoint>& points() const { return points_; }

  // a(x); zero outside the support. Throws DomainError on non-finite x.
  double density(double x) const;

  // log a(x); -inf where the density vanishes. Stays finite far into tails
  // where density() itself underflows to zero.
  double log_density(double x) const;

  // Integral of the density against its base measure. Cached after the
  // first call; concurrent callers recompute the same value harmlessly.
  double total_mass(const QuadraturePlan& plan = QuadraturePlan{}) const;

  // Integral of h against the weighted measure, i.e. of h * a d(base).
  // h is never evaluated where the density is exactly zero.
  IntegralOutcome integrate_against(const RealFn& h,
                                    const QuadraturePlan& plan) const;

  // Integral of x^n * exp(s*x) against the weighted measure, composed in
  // log space as exp(n*ln|x| + s*x + log a(x)). The exponential factor and
  // the density routinely overflow and underflow separately at points
  // where their product is moderate; composing the logs first keeps probes
  // honest arbitrarily far into the tails.
  IntegralOutcome integrate_exp_monomial(int n, double s,
                                         const QuadraturePlan& plan) const;

private:
  WeightDensity(Family family, double p1, double p2, Interval support);

  Family family_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  Interval support_;
  BaseMeasure base_;
  std::vector<TabPoint> points_;
  mutable std::atomic<double> mass_cache_;
};

}  // namespace polydense
