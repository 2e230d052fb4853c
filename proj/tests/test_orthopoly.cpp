#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "oracle_rational_gs.hpp"
#include "polydense/errors.hpp"
#include "polydense/orthopoly.hpp"

using namespace polydense;

namespace {

const QuadraturePlan kPlan;

}  // namespace

TEST_CASE("gaussian basis reproduces the hermite recurrence up to degree 20") {
  auto g = WeightDensity::gaussian(0.0, 1.0);
  OrthonormalBasis b = build_basis(g, 20, kPlan);
  CHECK(b.norm0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.valid);
  CHECK(b.orthogonality_drift <= 1e-8);
  for (int k = 0; k < 20; ++k) {
    CHECK(std::abs(b.alpha[k]) <= 1e-8);
    // x e_k = sqrt(k+1) e_{k+1} + sqrt(k) e_{k-1} for the unit gaussian.
    CHECK(std::abs(b.beta[k] - std::sqrt(double(k + 1))) <= 1e-7);
  }
}

TEST_CASE("uniform weight on [-1,1] reproduces the legendre recurrence") {
  auto u = WeightDensity::uniform(-1.0, 1.0);
  OrthonormalBasis b = build_basis(u, 5, kPlan);
  CHECK(b.valid);
  // beta_k = k / sqrt(4k^2 - 1).
  const double expected[5] = {0.5773502691896258, 0.5163977794943222,
                              0.5070925528371099, 0.5039526306789696,
                              0.5025189076296060};
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(b.alpha[k]) <= 1e-12);
    CHECK(std::abs(b.beta[k] - expected[k]) <= 1e-8);
  }
}

TEST_CASE("double exponential recurrence is symmetric with known betas") {
  auto de = WeightDensity::double_exponential(1.0);
  OrthonormalBasis b = build_basis(de, 6, kPlan);
  CHECK(b.valid);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(b.alpha[k]) <= 1e-12);
  // Even moments (2k)! give ||pi_1||^2 = 2, ||pi_2||^2/||pi_1||^2 = 10,
  // ||pi_3||^2/||pi_2||^2 = 432/20.
  CHECK(b.beta[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(b.beta[1] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-9));
  CHECK(b.beta[2] == doctest::Approx(std::sqrt(21.6)).epsilon(1e-9));
}

TEST_CASE("lognormal basis matches coefficients derived from exact moments") {
  auto ln = WeightDensity::lognormal(0.0, 1.0);
  OrthonormalBasis b = build_basis(ln, 10, kPlan);
  CHECK(b.valid);
  CHECK(b.orthogonality_drift <= 1e-8);
  // From the moments m_k = e^{k^2/2}: alpha_0 = m_1, beta_1^2 = m_2 - m_1^2,
  // and the next pair from one step of the monic recurrence.
  CHECK(b.alpha[0] == doctest::Approx(1.6487212707001282).epsilon(1e-12));
  CHECK(b.beta[0] == doctest::Approx(2.1611974158950878).epsilon(1e-12));
  CHECK(b.alpha[1] == doctest::Approx(15.015461760341410).epsilon(1e-12));
  CHECK(b.beta[1] == doctest::Approx(18.677008418362692).epsilon(1e-12));
  // The coefficient ladder grows strictly: this weight's polynomial family
  // is far from the classical ones and the growth is what eventually makes
  // the basis fail to span the whole space.
  for (int k = 1; k < 10; ++k) {
    CHECK(b.alpha[k] > b.alpha[k - 1]);
    CHECK(b.beta[k] > b.beta[k - 1]);
  }
}

TEST_CASE("basis evaluation matches closed forms at specific points") {
  auto g = WeightDensity::gaussian(0.0, 1.0);
  OrthonormalBasis hb = build_basis(g, 4, kPlan);
  CHECK(eval_basis(hb, 0, 3.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_basis(hb, 1, 2.5) == doctest::Approx(2.5).epsilon(1e-10));
  // e_2(x) = (x^2 - 1)/sqrt(2).
  CHECK(eval_basis(hb, 2, 0.0) ==
        doctest::Approx(-0.7071067811865475).epsilon(1e-8));

  auto u = WeightDensity::uniform(-1.0, 1.0);
  OrthonormalBasis lb = build_basis(u, 2, kPlan);
  // e_1(x) = sqrt(3) x.
  CHECK(eval_basis(lb, 1, 1.0) ==
        doctest::Approx(1.7320508075688772).epsilon(1e-8));
}

TEST_CASE("three point support degenerates exactly at degree 3") {
  auto d = WeightDensity::uniform(-2.0, 2.0)
               .with_base(BaseMeasure::counting({-1.0, 0.0, 1.0}));
  OrthonormalBasis b = build_basis(d, 2, kPlan);
  CHECK(b.valid);
  CHECK(b.orthogonality_drift <= 1e-12);
  // Equal masses 1/4 at -1, 0, 1: mass 3/4, beta_1^2 = 2/3, beta_2^2 = 1/3.
  CHECK(b.norm0 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK(b.beta[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-10));
  CHECK(b.beta[1] == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-10));

  try {
    build_basis(d, 3, kPlan);
    FAIL("expected DegeneracyError at degree 3");
  } catch (const DegeneracyError& e) {
    CHECK(e.degree() == 3);
  }
}

TEST_CASE("eval_basis rejects out-of-range degrees and non-finite points") {
  auto g = WeightDensity::gaussian(0.0, 1.0);
  OrthonormalBasis b = build_basis(g, 3, kPlan);
  CHECK_THROWS_AS(eval_basis(b, -1, 0.0), DomainError);
  CHECK_THROWS_AS(eval_basis(b, 4, 0.0), DomainError);
  CHECK_THROWS_AS(
      eval_basis(b, 2, std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(eval_basis(b, 2, std::nan("")), DomainError);
}

TEST_CASE("build_basis validates its arguments") {
  auto g = WeightDensity::gaussian(0.0, 1.0);
  CHECK_THROWS_AS(build_basis(g, -1, kPlan), DomainError);
  CHECK_THROWS_AS(build_basis(g, kMaxSupportedDegree + 1, kPlan), DomainError);
  CHECK_THROWS_AS(build_basis(g, 3, kPlan, 0.0), DomainError);

  OrthonormalBasis b0 = build_basis(g, 0, kPlan);
  CHECK(b0.alpha.empty());
  CHECK(b0.beta.empty());
  CHECK(b0.norm0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b0.valid);
}

TEST_CASE("tampered recurrence coefficients are caught by the audit") {
  auto g = WeightDensity::gaussian(0.0, 1.0);
  OrthonormalBasis b = build_basis(g, 5, kPlan);
  REQUIRE(b.orthogonality_drift <= 1e-10);
  OrthonormalBasis bad = b;
  bad.beta[1] *= 1.05;  // mis-normalizes e_2 and everything above it
  const double drift = orthogonality_audit(bad, kPlan);
  CHECK(drift >= 0.01);
}

TEST_CASE("leading coefficients stay positive") {
  // For x far beyond the roots the sign of e_k(x) is the sign of its
  // leading coefficient.
  auto g = WeightDensity::gaussian(0.0, 1.0);
  OrthonormalBasis hb = build_basis(g, 8, kPlan);
  for (int k = 0; k <= 8; ++k) CHECK(eval_basis(hb, k, 50.0) > 0.0);

  auto u = WeightDensity::uniform(-1.0, 1.0);
  OrthonormalBasis lb = build_basis(u, 5, kPlan);
  for (int k = 0; k <= 5; ++k) CHECK(eval_basis(lb, k, 10.0) > 0.0);
}

TEST_CASE("symmetric weights give vanishing alphas") {
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> sigma_dist(0.5, 3.0);
  for (int trial = 0; trial < 3; ++trial) {
    auto g = WeightDensity::gaussian(0.0, sigma_dist(rng));
    OrthonormalBasis b = build_basis(g, 6, kPlan);
    for (double a : b.alpha) CHECK(std::abs(a) <= 1e-10);
  }
}

TEST_CASE("recurrence matches exact rational arithmetic on discrete measures") {
  // The production path integrates with quadrature and doubles; the oracle
  // runs the same Stieltjes process in exact rational arithmetic on the
  // point masses the production code actually uses. Agreement to 1e-10 on
  // random measures means the builder computes the right thing, not merely
  // a self-consistent thing.
  std::mt19937 rng(20260817u);
  std::uniform_int_distribution<int> node_count(4, 9);
  std::uniform_int_distribution<int> node_pick(-16, 16);
  std::uniform_int_distribution<int> mass_pick(1, 32);

  for (int trial = 0; trial < 8; ++trial) {
    const int m = node_count(rng);
    std::set<int> raw;
    while (static_cast<int>(raw.size()) < m) raw.insert(node_pick(rng));
    std::vector<double> grid;
    for (int r : raw) grid.push_back(r / 8.0);

    WeightDensity d = WeightDensity::uniform(-2.0, 2.0);
    if (trial % 2 == 1) {
      // Unequal masses: a piecewise-linear table whose knots are the grid
      // nodes themselves, so the density at each node is a table value.
      std::vector<TabPoint> knots;
      for (double x : grid)
        knots.push_back(TabPoint{x, mass_pick(rng) / 16.0});
      d = WeightDensity::tabulated(knots);
    }
    d = d.with_base(BaseMeasure::counting(grid));

    // Feed the oracle the exact doubles the production measure reports.
    std::vector<oracle::WeightedPoint> pts;
    for (double x : grid)
      pts.push_back(oracle::WeightedPoint{oracle::Rational(x),
                                          oracle::Rational(d.density(x))});

    const int n = m - 1;
    OrthonormalBasis b = build_basis(d, n, kPlan);
    oracle::ExactRecurrence exact = oracle::exact_recurrence(pts, n);

    CHECK(b.norm0 ==
          doctest::Approx(std::sqrt(double(exact.mass))).epsilon(1e-12));
    for (int k = 0; k < n; ++k) {
      const double ea = static_cast<double>(exact.alpha[k]);
      const double eb = std::sqrt(static_cast<double>(exact.beta_sq[k]));
      CAPTURE(trial);
      CAPTURE(k);
      CHECK(b.alpha[k] == doctest::Approx(ea).epsilon(1e-10));
      CHECK(b.beta[k] == doctest::Approx(eb).epsilon(1e-10));
    }

    // One degree past the support size must degenerate, and at exactly the
    // right degree.
    try {
      build_basis(d, m, kPlan);
      FAIL("expected DegeneracyError past the support size");
    } catch (const DegeneracyError& e) {
      CHECK(e.degree() == m);
    }
  }
}

TEST_CASE("audit drift is tiny for healthy bases across families") {
  auto de = WeightDensity::double_exponential(0.7);
  OrthonormalBasis b1 = build_basis(de, 10, kPlan);
  CHECK(b1.valid);
  CHECK(b1.orthogonality_drift <= 1e-10);

  auto u = WeightDensity::uniform(0.0, 3.0);
  OrthonormalBasis b2 = build_basis(u, 10, kPlan);
  CHECK(b2.valid);
  CHECK(b2.orthogonality_drift <= 1e-10);
  // Asymmetric support: alphas sit at the interval midpoint.
  for (double a : b2.alpha) CHECK(a == doctest::Approx(1.5).epsilon(1e-8));
}
