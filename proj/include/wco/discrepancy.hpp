#pragma once
// Extreme discrepancy of point sequences in [0,1).
//
// D_N = sup over intervals [a,b) of |#{n <= N : x_n in [a,b)}/N - (b-a)|.
// Two evaluators are provided: an O(N^2) oracle that enumerates candidate
// endpoints with every inclusion pattern, and the closed-form sorted-sample
// expression 1/N + max_i(i/N - x_(i)) - min_i(i/N - x_(i)). Both return a
// realized half-open witness interval whose counted value reproduces D_N to
// 1e-12. Orbit-sourced sequences carry their generator so the evaluators can
// rerun the orbit at a different precision and reject drift (the audit).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wco/irrational.hpp"

namespace wco {

struct PointSequence {
  std::vector<double> points;  // all in [0,1)
  std::string source = "explicit";

  // Set when generated from a rotation orbit; enables the precision audit.
  std::optional<IrrationalSpec> gen_alpha;
  double gen_x0 = 0.0;
  bool gen_forward = true;
  unsigned gen_bits = 0;

  static PointSequence from_points(std::vector<double> pts);
  // tau^{+-k}(x0) for k = 1..N.
  static PointSequence orbit(const IrrationalSpec& alpha, double x0, long N,
                             bool forward, unsigned bits = 192);
};

struct DiscrepancyReport {
  long N = 0;
  double D_N = 0.0;
  double witness_lo = 0.0;  // realized half-open witness [lo, hi)
  double witness_hi = 0.0;
  double achieved = 0.0;  // |count/N - (hi-lo)| at the witness
  std::string method;     // "oracle" or "closed-form"
};

// Exhaustive candidate-endpoint evaluation (quadratic in N).
DiscrepancyReport discrepancy_oracle(const PointSequence& seq, long N);

// Sorted-sample closed form (N log N); equals the oracle on every input.
DiscrepancyReport discrepancy_fast(const PointSequence& seq, long N);

// max over starting points of D_N of the forward orbit. For rotations the
// per-start values are rigid translates and must agree: the call throws
// LabError if max/min exceeds 1.01, and reports max-min through `spread`.
double sup_discrepancy_over_x(const IrrationalSpec& alpha, long N,
                              const std::vector<double>& x_grid,
                              double* spread = nullptr, unsigned bits = 192);

// 3 * (1/m + (1/N) * sum_{h<=m} 1/(h<h alpha>)).
double kn_bound(const IrrationalSpec& alpha, long N, long m);

// Minimizing (m, bound) over m in [m_lo, m_hi].
std::pair<long, double> kn_best(const IrrationalSpec& alpha, long N, long m_lo, long m_hi);

// floor(ln^(3+eps/2)(N ln^(-3-eps/3) N)), clamped to at least 1.
long kn_proof_m(long N, double eps);

}  // namespace wco
