#include "polydense/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "polydense/errors.hpp"

using namespace polydense;

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Closed form for the double-exponential boundary integrand cut at [-L, L]:
// integral of e^x * (1/2)e^{-|x|} splits into (1/4)(1 - e^{-2L}) + L/2.
double de_boundary_partial(double L) {
  return 0.25 * (1.0 - std::exp(-2.0 * L)) + 0.5 * L;
}

}  // namespace

TEST_CASE("bounded panels hit smooth closed forms") {
  QuadraturePlan plan;
  auto one = integrate([](double) { return 1.0; }, Interval::bounded(0, 1), plan);
  CHECK(one.verdict == Verdict::converged);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.truncations_used.empty());

  auto x2 = integrate([](double x) { return x * x; }, Interval::bounded(0, 1),
                      plan);
  CHECK(x2.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  auto s = integrate([](double x) { return std::sin(x); },
                     Interval::bounded(0, std::acos(-1.0)), plan);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("converged verdicts keep the promised error bound") {
  QuadraturePlan plan;
  const Interval domains[] = {Interval::bounded(0, 1), Interval::whole(),
                              Interval::right_unbounded(0)};
  const RealFn fns[] = {
      [](double x) { return std::cos(3 * x); },
      [](double x) { return std_normal_pdf(x); },
      [](double x) { return std::exp(-x); },
  };
  for (int i = 0; i < 3; ++i) {
    auto out = integrate(fns[i], domains[i], plan);
    REQUIRE(out.verdict == Verdict::converged);
    CHECK(out.error_estimate <=
          std::max(plan.abs_tol, plan.rel_tol * std::abs(out.value)));
  }
}

TEST_CASE("whole-line gaussian mass is 1") {
  QuadraturePlan plan;
  auto out = integrate(std_normal_pdf, Interval::whole(), plan);
  CHECK(out.verdict == Verdict::converged);
  CHECK(out.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(!out.truncations_used.empty());
  // Windows double in radius.
  for (std::size_t i = 1; i < out.truncations_used.size(); ++i)
    CHECK(out.truncations_used[i].radius ==
          doctest::Approx(2.0 * out.truncations_used[i - 1].radius));
}

TEST_CASE("half-line exponentials") {
  QuadraturePlan plan;
  auto right = integrate([](double x) { return std::exp(-x); },
                         Interval::right_unbounded(0), plan);
  CHECK(right.verdict == Verdict::converged);
  CHECK(right.value == doctest::Approx(1.0).epsilon(1e-10));

  auto left = integrate([](double x) { return std::exp(x); },
                        Interval::left_unbounded(0), plan);
  CHECK(left.verdict == Verdict::converged);
  CHECK(left.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mass far from the origin is found by the expanding windows") {
  QuadraturePlan plan;
  auto out = integrate([](double x) { return std_normal_pdf(x - 100.0); },
                       Interval::whole(), plan);
  CHECK(out.verdict == Verdict::converged);
  CHECK(out.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exponential growth against the weight is declared divergent") {
  QuadraturePlan plan;
  auto out = integrate(
      [](double x) { return std::exp(x) * 0.5 * std::exp(-std::abs(x)); },
      Interval::whole(), plan);
  REQUIRE(out.verdict == Verdict::divergent);

  // Partial integrals must track the closed form of the cut integral.
  for (const Truncation& t : out.truncations_used)
    CHECK(t.partial_value ==
          doctest::Approx(de_boundary_partial(t.radius)).epsilon(1e-8));

  // Divergent verdicts require the last three partials strictly growing.
  const auto& ts = out.truncations_used;
  REQUIRE(ts.size() >= 3);
  for (std::size_t i = ts.size() - 2; i < ts.size(); ++i)
    CHECK(std::abs(ts[i].partial_value) > std::abs(ts[i - 1].partial_value));
}

TEST_CASE("constant over the whole line diverges") {
  QuadraturePlan plan;
  auto out = integrate([](double) { return 1.0; }, Interval::whole(), plan);
  CHECK(out.verdict == Verdict::divergent);
}

TEST_CASE("slow heavy-tail growth is inconclusive, not divergent") {
  QuadraturePlan plan;
  // Partial integrals approach pi like 2/L: increments never fall under the
  // tolerance and the growth ratio stays near 1.
  auto out = integrate([](double x) { return 1.0 / (1.0 + x * x); },
                       Interval::whole(), plan);
  CHECK(out.verdict == Verdict::inconclusive);
  CHECK(out.value == doctest::Approx(std::acos(-1.0)).epsilon(1e-3));
}

TEST_CASE("NaN from the integrand raises an evaluation error with location") {
  QuadraturePlan plan;
  try {
    integrate(
        [](double x) {
          return x > 2.0 && x < 3.0 ? std::numeric_limits<double>::quiet_NaN()
                                    : 1.0;
        },
        Interval::bounded(0, 4), plan);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.where() > 2.0);
    CHECK(e.where() < 3.0);
  }
}

TEST_CASE("an infinite integrand value forces a divergent verdict") {
  QuadraturePlan plan;
  auto out = integrate(
      [](double x) {
        return x > 0.4 && x < 0.6 ? std::numeric_limits<double>::infinity()
                                  : 1.0;
      },
      Interval::bounded(0, 1), plan);
  CHECK(out.verdict == Verdict::divergent);
}

TEST_CASE("plan and domain validation") {
  QuadraturePlan plan;
  plan.rel_tol = 0.0;
  CHECK_THROWS_AS(plan.validate(), DomainError);
  plan = QuadraturePlan{};
  plan.max_doublings = 0;
  CHECK_THROWS_AS(plan.validate(), DomainError);
  plan = QuadraturePlan{};
  plan.divergence_growth = 1.0;
  CHECK_THROWS_AS(plan.validate(), DomainError);
  CHECK_THROWS_AS(Interval::bounded(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(
      integrate([](double) { return 0.0; }, Interval{4.0, 2.0}, QuadraturePlan{}),
      DomainError);
}

TEST_CASE("integration is linear within tolerance budgets") {
  QuadraturePlan plan;
  std::mt19937 rng(20260817u);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  const RealFn g = [](double x) { return std::sin(x); };
  const RealFn h = [](double x) { return std::exp(-x * x); };
  const Interval dom = Interval::bounded(-2.0, 5.0);
  const double Ig = integrate(g, dom, plan).value;
  const double Ih = integrate(h, dom, plan).value;
  for (int trial = 0; trial < 25; ++trial) {
    const double a = coeff(rng);
    const double b = coeff(rng);
    auto combined = integrate(
        [&](double x) { return a * g(x) + b * h(x); }, dom, plan);
    REQUIRE(combined.verdict == Verdict::converged);
    const double expect = a * Ig + b * Ih;
    const double budget =
        20.0 * (plan.abs_tol +
                plan.rel_tol * (std::abs(a * Ig) + std::abs(b * Ih)));
    CHECK(std::abs(combined.value - expect) <= budget);
  }
}

TEST_CASE("integrals add over adjacent intervals") {
  QuadraturePlan plan;
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> mid(-1.5, 1.5);
  const RealFn g = [](double x) { return std::cos(2.0 * x) + x; };
  const double whole = integrate(g, Interval::bounded(-2, 2), plan).value;
  for (int trial = 0; trial < 25; ++trial) {
    const double m = mid(rng);
    const double left = integrate(g, Interval::bounded(-2, m), plan).value;
    const double right = integrate(g, Interval::bounded(m, 2), plan).value;
    CHECK(std::abs(whole - (left + right)) <=
          20.0 * (plan.abs_tol + plan.rel_tol * std::abs(whole)));
  }
}

TEST_CASE("identical inputs give bit-identical outcomes") {
  QuadraturePlan plan;
  const RealFn g = [](double x) { return std::exp(-x * x) * std::sin(3 * x + 1); };
  auto a = integrate(g, Interval::whole(), plan);
  auto b = integrate(g, Interval::whole(), plan);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.verdict == b.verdict);
  REQUIRE(a.truncations_used.size() == b.truncations_used.size());
  for (std::size_t i = 0; i < a.truncations_used.size(); ++i)
    CHECK(a.truncations_used[i].partial_value ==
          b.truncations_used[i].partial_value);
}

TEST_CASE("counting sums are exact and compensated") {
  const double grid3[] = {-1.0, 0.0, 1.0};
  CHECK(integrate_counting([](double x) { return x * x; }, grid3) == 2.0);
  CHECK(integrate_counting([](double x) { return x; }, grid3) == 0.0);

  const double grid2[] = {0.0, std::log(2.0)};
  CHECK(integrate_counting([](double x) { return std::exp(x); }, grid2) ==
        doctest::Approx(3.0).epsilon(1e-15));

  // Many small contributions: compensation keeps the sum tight.
  std::vector<double> many(10000);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = double(i);
  const double s =
      integrate_counting([](double) { return 0.1; }, many);
  CHECK(s == doctest::Approx(1000.0).epsilon(1e-13));

  CHECK_THROWS_AS(
      integrate_counting(
          [](double) { return std::numeric_limits<double>::infinity(); },
          grid3),
      EvaluationError);
}
