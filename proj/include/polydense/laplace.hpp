#pragma once

#include <optional>
#include <vector>

#include "polydense/measure.hpp"
#include "polydense/quadrature.hpp"

namespace polydense {

// Exponential-moment probe M(s) = integral of exp(s*x) against the weighted
// measure. Finiteness of M near s = 0 is the certificate the rest of the
// library leans on: it forces every power of x to be integrable.

struct ProbeResult {
  double s = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct SideBoundary {
  // Largest |s| on this side with a converged probe, 0 if none beyond s=0.
  double last_converged = 0.0;
  // Estimated finiteness boundary for |s| on this side.
  double boundary = 0.0;
  // Half-width of the final bracket around the boundary.
  double resolution = 0.0;
  bool unbounded = false;  // probe at s_max converged; no boundary below it
  bool decisive = true;    // false if inconclusive probes stalled the search
};

struct LaplaceReport {
  std::vector<ProbeResult> probes;  // sorted by s
  SideBoundary positive_side;
  SideBoundary negative_side;
  double probe_limit = 0.0;  // s_max used
  // min of the two side boundaries; +inf when both sides are unbounded.
  double delta_hat = 0.0;
  double delta_resolution = 0.0;
  bool unbounded = false;
  bool has_inconclusive = false;
};

IntegralOutcome laplace_transform(const WeightDensity& d, double s,
                                  const QuadraturePlan& plan);

// f split into positive and negative parts so each one-signed integral has
// a clean tri-state verdict before the difference is formed.
struct SignedFunction {
  RealFn f;
  RealFn plus() const;
  RealFn minus() const;
};

struct SignedValue {
  enum class Status { defined, undefined, inconclusive };
  Status status = Status::inconclusive;
  // Meaningful only when status == defined; may be +-inf if exactly one
  // part diverges.
  double value = 0.0;
  IntegralOutcome plus_part;
  IntegralOutcome minus_part;
};

SignedValue signed_laplace(const WeightDensity& d, const SignedFunction& f,
                           double s, const QuadraturePlan& plan);

// Bisect each side of s = 0 for the boundary between converged and
// divergent probes, down to bracket width eps_s.
LaplaceReport estimate_delta(const WeightDensity& d, double s_max,
                             double eps_s, const QuadraturePlan& plan);

// k-th power moment. If certified_delta > 0 the caller asserts the
// exponential probe is finite on a neighbourhood of 0, which makes every
// moment finite; a divergent verdict then raises InconsistencyError.
IntegralOutcome moment(const WeightDensity& d, int k, const QuadraturePlan& plan,
                       std::optional<double> certified_delta = std::nullopt);

struct MonomialProbe {
  double s = 0.0;
  double value = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct MonomialCheck {
  int degree = 0;
  bool pass = false;
  bool has_inconclusive = false;
  std::vector<MonomialProbe> probes;
};

// Probes M(s; x^n * a) at explicit points s.
MonomialCheck check_weighted_monomial_at(const WeightDensity& d, int n,
                                         std::span<const double> probes,
                                         const QuadraturePlan& plan);

// Default probe set for a certified half-width delta: s = 0, +-delta/4 and
// +-(delta/2 - eps_s), all strictly inside (-delta/2, delta/2).
MonomialCheck check_weighted_monomial(const WeightDensity& d, int n,
                                      double delta, const QuadraturePlan& plan,
                                      double eps_s = 0.05);

}  // namespace polydense
