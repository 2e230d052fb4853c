#pragma once

#include <vector>

#include "polydense/measure.hpp"
#include "polydense/quadrature.hpp"

namespace polydense {

// Orthonormal polynomial family for a weighted measure, held as recurrence
// coefficients:
//
//   x e_k(x) = beta[k+1] e_{k+1}(x) + alpha[k] e_k(x) + beta[k] e_{k-1}(x)
//
// with e_0 = 1/norm0 and beta stored as beta[1..max_degree] (index shifted
// down by one in the vector). Leading coefficients are positive.
struct OrthonormalBasis {
  WeightDensity weight;
  int max_degree = 0;
  std::vector<double> alpha;  // alpha[k], k = 0..max_degree-1
  std::vector<double> beta;   // beta[k+1], k = 0..max_degree-1
  double norm0 = 1.0;         // sqrt of total mass
  double orthogonality_drift = 0.0;
  double drift_tolerance = 0.0;
  bool valid = false;  // audit passed within drift_tolerance
};

inline constexpr int kMaxSupportedDegree = 40;

// Builds coefficients degree by degree with quadrature inner products:
// alpha[k] as the weighted mean of x against e_k^2, beta[k+1] as the norm
// of the recurrence residual (x - alpha[k]) e_k - beta[k] e_{k-1}. The norm
// is integrated directly rather than recovered by subtracting squared
// norms, which would cancel catastrophically near degeneracy. Always runs
// the orthogonality audit before returning.
//
// Throws DegeneracyError when the residual norm underflows the running
// coefficient scale (measure supported on too few points) and
// InconsistencyError when an inner product fails to converge.
OrthonormalBasis build_basis(const WeightDensity& d, int max_degree,
                             const QuadraturePlan& plan,
                             double drift_tol = 1e-8);

// e_k(x) by forward recurrence. Throws DomainError if k is outside
// [0, max_degree].
double eval_basis(const OrthonormalBasis& b, int k, double x);

// Max over 0 <= i <= j <= max_degree of |<e_i, e_j> - delta_ij|.
double orthogonality_audit(const OrthonormalBasis& b,
                           const QuadraturePlan& plan);

}  // namespace polydense
