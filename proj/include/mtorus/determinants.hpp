// Log-determinant assembly.  Closed forms for the massive circle, the
// rectangular torus and products with a circle; the gluing constant c0; and
// the mapping-torus determinants through two routes:
//
//   shifted:   log Det(Delta^q + lambda) = product determinant (from the
//              explicit product spectrum through the zeta oracle) plus the
//              Fredholm correction series at shift lambda;
//   modified:  log Det* Delta^q = -(b~ - l~) log(a^2/2) + product Det*
//              + finite harmonic block + kernel-excluded Fredholm series.
#pragma once

#include <map>
#include <vector>

#include "mtorus/fredholm.hpp"
#include "mtorus/spectral_model.hpp"

namespace mtorus {

// Small-t heat coefficients of the block operator on degree q and q-1
// combined; flat bases have a bare leading term and no corrections.
struct HeatCoefficients {
  std::vector<double> coeffs;  // a_j, j = 0, 1, ...
  int base_dim = 1;
};

HeatCoefficients heat_coefficients(const ManifoldSpec& base, int q);

// a t + 2 log(1 - e^{-a t}): log Det of the massive circle Laplacian.
double circle_det_massive(double a, double t);

// log Det* of the scalar Laplacian on the flat torus with periods (a, 2 pi rho).
double rect_torus_det(double a, double rho);

// log Det* of the scalar Laplacian on base x S^1(a / 2 pi):
//   2 b0 log a + a zeta_base(-1/2) + 2 sum_{mu > 0} log(1 - e^{-a sqrt(mu)}).
double product_with_circle_det(const ManifoldSpec& base, double a,
                               const TruncationPolicy& policy);

// zeta_base(-1/2) of the scalar Laplacian; closed form for circles, the
// continuation oracle (cached per geometry) for tori.
double base_zeta_half(const ManifoldSpec& base);

// Gluing constant: -log 2 sum_k (-1)^k/k! a_{(m-1)/2-k} lambda^k for odd
// total dimension m, zero for even m.
double c0_coefficient(const HeatCoefficients& heat, double lambda, int m);

// log 2 times the zero heat coefficient of the twice-shifted operator,
// the double sum in lambda and mu; zero for even m.
double zeta_zero_shifted(const HeatCoefficients& heat, double lambda, double mu,
                         int m);

DetResult mapping_torus_det_shifted(const MappingTorusSpec& spec, int q,
                                    double lambda, const TruncationPolicy& policy);

DetResult mapping_torus_det_modified(const MappingTorusSpec& spec, int q,
                                     const TruncationPolicy& policy);

// Klein bottle scalar Det*, closed form (interval a, circle radius rho).
double klein_bottle_det(double a, double rho);

// Multiplicities of the eigenvalues kappa in {0, 1, 2} of the symmetrized
// swap-shift perturbation on a lattice shell, by the parity classes of the
// shell's index pairs.  Empty map when the shell has no lattice points.
std::map<int, int> t2_phi_action_multiplicities(int shell_value);

// log Det* of the scalar Laplacian on the swap-shift mapping torus over the
// unit two-torus (interval length 2 pi): the product value plus the
// kappa-weighted correction series.  The lattice-sum expression printed in
// the source derivation double-counts the two-dimensional swap blocks; the
// detailed result reports that value and the discrepancy in diagnostics.
double t2_phi_det(const TruncationPolicy& policy);
DetResult t2_phi_det_detailed(const TruncationPolicy& policy);

}  // namespace mtorus
