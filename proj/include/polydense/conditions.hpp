#pragma once

#include <string>
#include <vector>

#include "polydense/laplace.hpp"
#include "polydense/measure.hpp"

namespace polydense {

// Evidence row backing one probe of one check: the point probed, the rate
// or degree it was probed at, and the value seen there.
struct EvidenceRow {
  std::string check;
  double x = 0.0;
  double rate = 0.0;  // exponential rate s, or polynomial degree k
  double value = 0.0;
  bool ok = true;
};

struct TailCheckResult {
  bool pass = false;
  std::vector<EvidenceRow> rows;
};

// Dominance probe for the tail bound: u_j = exp(delta*|x_j|) * a(+-x_j)
// along x_j = x_start * 2^j must become non-increasing and end negligibly
// small on both sides. Computed in log space so tails that underflow the
// density itself still register correctly; overflow to +inf fails the
// check and records the offending probe.
TailCheckResult tail_decay_check(const WeightDensity& d, double delta,
                                 double x_start = 8.0, int n_probes = 6);

// Same probe shape for |x|^k * a(x), k = 1..k_max: every polynomial against
// the weight must die in the tails.
TailCheckResult polynomial_tail_check(const WeightDensity& d, int k_max = 8,
                                      double x_start = 8.0, int n_probes = 6);

struct CertifyOptions {
  double s_max = 4.0;
  double eps_s = 0.05;
  double delta_probe = 0.0;  // <= 0 means derive from the estimated boundary
  int k_max = 8;
  double x_start = 8.0;
  int n_probes = 6;
};

// Full hypothesis report for a weighted measure. positivity_ok and
// laplace_ok are the two hypotheses that buy density of polynomials;
// the tail checks are the sufficient condition probed independently, and
// the consistency warning fires when the two routes disagree.
struct ConditionReport {
  bool positivity_ok = false;
  bool laplace_ok = false;
  bool tail_decay_ok = false;
  bool polynomial_tail_ok = false;
  bool laplace_failure_observed = false;  // a probe conclusively diverged
  bool has_inconclusive = false;
  double delta_probe = 0.0;
  LaplaceReport laplace;
  std::vector<EvidenceRow> rows;
  std::vector<std::string> warnings;

  // 0: hypotheses hold. 3: a hypothesis conclusively fails.
  // 4: probes were inconclusive and nothing failed conclusively.
  int exit_code() const;
};

ConditionReport certify(const WeightDensity& d, const QuadraturePlan& plan,
                        const CertifyOptions& opts = CertifyOptions{});

}  // namespace polydense
