#pragma once

#include <vector>

#include "polydense/orthopoly.hpp"

namespace polydense {

// Orthogonal projection of f onto polynomials of degree <= max_degree in
// the weighted L2 space. residuals[n] is the squared distance from f to
// the degree-n partial sum, computed from the norm and coefficients:
// r_n = |f|^2 - sum_{k<=n} c_k^2. It is clamped at zero when roundoff
// pushes it slightly negative and must otherwise stay nonnegative and
// non-increasing in n.
struct ProjectionResult {
  std::vector<double> coefficients;  // c_0..c_max_degree
  std::vector<double> residuals;     // r_0..r_max_degree
  double f_norm_sq = 0.0;
  double relative_residual = 0.0;  // r_max_degree / |f|^2, 0 for |f| = 0
};

IntegralOutcome inner_product(const RealFn& f, const RealFn& g,
                              const WeightDensity& d,
                              const QuadraturePlan& plan);

// Throws DomainError when |f|^2 fails to converge (f outside the space)
// and InconsistencyError when a residual dips below zero by more than
// roundoff allows.
ProjectionResult project(const RealFn& f, const OrthonormalBasis& b,
                         const QuadraturePlan& plan);

// The moment-problem counterexample, packaged: on a weight whose
// exponential probe is finite on no neighbourhood of 0, an oscillation can
// be orthogonal to every polynomial at once. Projects
// f(x) = sin(2*pi*ln x) onto the given basis, which must be built from the
// standard lognormal weight (mu = 0, sigma = 1) with degree >= 10; every
// coefficient vanishes while |f|^2 stays at 1/2, so the residual never
// moves.
ProjectionResult counterexample_audit(const OrthonormalBasis& b,
                                      const QuadraturePlan& plan);

struct ResidualPoint {
  int degree = 0;
  double residual = 0.0;
};

// Builds a basis of the given degree and reports r_n for n = 0..max_degree.
std::vector<ResidualPoint> completeness_curve(const RealFn& f,
                                              const WeightDensity& d,
                                              int max_degree,
                                              const QuadraturePlan& plan);

}  // namespace polydense
