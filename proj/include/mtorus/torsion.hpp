// Lefschetz numbers and zeta functions of the gluing isometry, the analytic
// torsion of the mapping torus, and the Witten-deformed torsion, each with
// two independent computational routes that the test suites compare.
#pragma once

#include <vector>

#include "mtorus/fredholm.hpp"
#include "mtorus/spectral_model.hpp"

namespace mtorus {

// sum_q (-1)^q Tr(A_q^k), rounded to the nearest integer; a residual above
// 1e-9 signals a corrupted action set and throws.
long long lefschetz_number(const HarmonicActionSet& actions, int k);

// Memoized Lefschetz sequence of one action set.  Construction recomputes
// the first number along both routes (alternating trace of the actions and
// the incremental power chain) and requires exact agreement.
class LefschetzData {
 public:
  explicit LefschetzData(HarmonicActionSet actions);
  long long number(int k) const;
  const HarmonicActionSet& actions() const { return actions_; }

 private:
  HarmonicActionSet actions_;
  mutable std::vector<Matrix> powers_;  // current A_q^k per degree
  mutable std::vector<long long> memo_;
};

// log zeta_phi(t) for |t| < 1, computed by the power series in the
// Lefschetz numbers and cross-checked against the rational closed form
// sum_q (-1)^{q+1} log det(I - t A_q); disagreement beyond 1e-12 throws.
double lefschetz_zeta_log(const HarmonicActionSet& actions, double t);

// Closed-form analytic torsion of the mapping torus:
//   (log 2/2) chi(M) + (1/2) log(a^2/2) sum (-1)^q ell_q
//   + (1/2) sum (-1)^q log det(I - (A_q + A_q^T)/2) on the moved subspace.
double analytic_torsion(const MappingTorusSpec& spec);

// The defining alternating sum (1/2) sum_q (-1)^{q+1} q log Det* Delta^q
// assembled from the modified determinants of every degree.
double torsion_from_definition(const MappingTorusSpec& spec,
                               const TruncationPolicy& policy);

// Deformed torsion (a/2) chi(M) t - log zeta_phi(e^{-a t}).
double witten_torsion(const MappingTorusSpec& spec, double t);

// The same quantity assembled from the deformed circle determinant and the
// alternating matrix Fredholm factors over the harmonic blocks at shift t^2;
// the nonharmonic contributions cancel degreewise and never enter.
double witten_torsion_assembled(const MappingTorusSpec& spec, double t,
                                const TruncationPolicy& policy);

}  // namespace mtorus
