#pragma once

// Exact recurrence coefficients for finitely supported measures, computed in
// rational arithmetic. Used as an independent cross-check of the quadrature
// driven builder: for a measure on finitely many points with dyadic weights
// and nodes, every quantity below is exact, so any disagreement beyond
// floating-point noise is a bug in the production path.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct WeightedPoint {
  Rational x;
  Rational a;  // point mass, must be >= 0
};

// Three-term recurrence data in the orthonormal convention
//   x e_k = beta[k+1] e_{k+1} + alpha[k] e_k + beta[k] e_{k-1}.
// alpha[k] is exact; the orthonormal beta[k+1] is sqrt(beta_sq[k]), with
// beta_sq[k] = ||pi_{k+1}||^2 / ||pi_k||^2 exact for the monic family pi.
struct ExactRecurrence {
  std::vector<Rational> alpha;    // alpha[k], k = 0..n-1
  std::vector<Rational> beta_sq;  // beta[k+1]^2, k = 0..n-1
  Rational mass;                  // ||pi_0||^2
};

// Runs the monic Stieltjes recurrence pi_{k+1} = (x - a_k) pi_k - b_k pi_{k-1}
// with a_k = <x pi_k, pi_k>/<pi_k, pi_k>, b_k = <pi_k, pi_k>/<pi_{k-1}, pi_{k-1}>,
// representing each pi_k by its exact values on the support. Requires n at
// most the number of distinct support points with positive mass minus one;
// beyond that <pi_k, pi_k> would be zero and the family stops existing.
inline ExactRecurrence exact_recurrence(const std::vector<WeightedPoint>& pts,
                                        int n) {
  const std::size_t m = pts.size();
  std::vector<Rational> prev(m, Rational(0));  // pi_{-1} on the support
  std::vector<Rational> cur(m, Rational(1));   // pi_0 on the support
  Rational norm_prev(0);
  Rational norm_cur(0);
  for (const auto& p : pts) norm_cur += p.a;

  ExactRecurrence out;
  out.mass = norm_cur;
  for (int k = 0; k < n; ++k) {
    Rational xpp(0);
    for (std::size_t i = 0; i < m; ++i)
      xpp += pts[i].a * pts[i].x * cur[i] * cur[i];
    const Rational a_k = xpp / norm_cur;
    out.alpha.push_back(a_k);

    std::vector<Rational> next(m);
    const Rational b_k = k > 0 ? norm_cur / norm_prev : Rational(0);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = (pts[i].x - a_k) * cur[i];
      if (k > 0) next[i] -= b_k * prev[i];
    }
    Rational norm_next(0);
    for (std::size_t i = 0; i < m; ++i)
      norm_next += pts[i].a * next[i] * next[i];
    out.beta_sq.push_back(norm_next / norm_cur);

    prev = std::move(cur);
    cur = std::move(next);
    norm_prev = norm_cur;
    norm_cur = norm_next;
  }
  return out;
}

}  // namespace oracle
