// Independent brute-force validators.  Log-determinants are recomputed from
// raw eigenvalue lists by analytic continuation of the spectral zeta
// function: the Mellin integral is split at t = 1, the upper half summed
// through exponential integrals over the enumerated spectrum, the lower
// half resummed through the Poisson duals of the per-geometry theta
// families.  A Chebyshev collocation solver provides the two-point boundary
// value oracle for the Dirichlet-to-Neumann blocks.
//
// Nothing here touches the production determinant pathway; the two sides
// meet only in tests and in the verification suites.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mtorus/linalg.hpp"

namespace mtorus {

// One lattice theta factor  sum_k w(k) exp(-t omega^2 (k+sigma)^2)  with
// w = 1, or w(k) = (-1)^k when alternating.  Its Poisson dual is
//   sqrt(pi)/(omega sqrt t) sum_j w'(j) exp(-pi^2 (j - tau)^2/(omega^2 t)),
// where the roles of offset and sign swap between the two sides.
struct ThetaFactor {
  double omega = 1.0;
  double sigma = 0.0;
  bool alternating = false;
};

struct ThetaFamily {
  double coeff = 1.0;
  std::vector<ThetaFactor> factors;
};

struct SpectralMode {
  double value = 0.0;
  double multiplicity = 0.0;
};

// power/coefficient pairs of the small-t algebraic part  sum c_p t^{-p}
struct AlgebraicTerm {
  double power = 0.0;
  double coeff = 0.0;
};

class RawSpectrum {
 public:
  using Enumerator = std::function<std::vector<SpectralMode>(double)>;

  // Infinite spectrum described by theta families plus a closed-form
  // enumerator that must list exactly the same eigenvalues.
  RawSpectrum(std::string name, int dimension, double weyl_constant,
              std::vector<ThetaFamily> families, Enumerator enumerate,
              std::size_t kernel_dim);

  // Finite explicit list; the zeta function is an honest finite sum.
  static RawSpectrum finite(std::vector<SpectralMode> modes);

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  double weyl_constant() const { return weyl_constant_; }
  std::size_t kernel_dimension() const { return kernel_dim_; }
  bool is_finite() const { return finite_; }

  std::vector<SpectralMode> enumerate(double cutoff) const;
  const std::vector<AlgebraicTerm>& algebraic() const { return algebraic_; }

  // H(t) - sum_p c_p t^{-p}, from the dual tails; exponentially small as
  // t -> 0 and valid on (0, 1].
  double remainder(double t) const;
  // slowest dual decay rate: remainder(1/y) = O(e^{-rate y})
  double dual_decay_rate() const;
  // direct eigenvalue sum of the heat trace with certified truncation
  double heat_trace_direct(double t) const;

 private:
  RawSpectrum() = default;
  std::string name_;
  int dimension_ = 0;
  double weyl_constant_ = 0.0;
  std::vector<ThetaFamily> families_;
  Enumerator enumerate_;
  std::size_t kernel_dim_ = 0;
  std::vector<AlgebraicTerm> algebraic_;
  std::vector<SpectralMode> finite_modes_;
  bool finite_ = false;
};

// ---- spectrum catalog ------------------------------------------------------

// Scalar Laplacian modes (2 pi k / circumference)^2 of a flat circle.
RawSpectrum circle_modes_raw(double circumference);
// Scalar spectrum of the rectangular torus with the given periods.
RawSpectrum rect_torus_raw(double period1, double period2);
// Klein bottle scalar spectrum (interval a, circle radius rho).
RawSpectrum klein_bottle_raw(double a, double rho);
// Scalar spectrum of T^2(periods) x S^1(a / 2 pi).
RawSpectrum product_t2_s1_raw(double period1, double period2, double a);
// Scalar spectrum of the swap-shift mapping torus over the unit T^2,
// assembled from the brute-force eigenvalue classification of the
// pull-back on each lattice shell and the twisted interval modes.
RawSpectrum t2_phi_raw();

// Brute-force kappa multiplicities {0, 1, 2} of a swap-shift lattice shell,
// from a Jacobi eigendecomposition of the signed permutation action.
// Returns {n0, n1, n2}; all zero when the shell is empty.
std::array<int, 3> swap_shift_shell_kappa(int shell_value);

// ---- zeta continuation -----------------------------------------------------

// log Det (or log Det* when drop_kernel) of the shifted spectrum,
// i.e. -zeta'(0) of sum (lambda_j + shift)^{-s}.
double zeta_det_oracle(const RawSpectrum& spectrum, double shift,
                       bool drop_kernel);

// zeta(-1/2) of the spectrum, zero modes excluded.  Only the unshifted
// value is well defined for every catalog geometry (the shifted zeta of a
// one-dimensional spectrum has a pole at -1/2).
double zeta_at_minus_half(const RawSpectrum& spectrum);

// zeta(0); reads off the algebraic t^0 coefficient minus the kernel.
double zeta_at_zero(const RawSpectrum& spectrum);

// ---- heat trace ------------------------------------------------------------

// Tr e^{-t Delta}; direct eigenvalue sum for t >= 1, Poisson-dual branch
// below.  Both branches agree at the crossover to ~1e-12.
double heat_trace(const RawSpectrum& spectrum, double t);

// Difference of two heat traces whose algebraic expansions coincide; the
// algebraic parts are cancelled exactly so the exponentially small
// remainder difference survives in double precision.  Throws when the
// algebraic parts differ beyond roundoff.
double heat_trace_difference(const RawSpectrum& a, const RawSpectrum& b,
                             double t);

// Relative deviation of the eigenvalue count at the cutoff from the Weyl
// prediction weyl_constant * cutoff^{dim/2}.
double weyl_deviation(const RawSpectrum& spectrum, double cutoff);

// ---- two-point boundary value oracle ----------------------------------------

// Dirichlet-to-Neumann block recomputed by solving the boundary problem
// numerically (Chebyshev collocation) per fundamental solution and
// differencing the normal derivatives.
Matrix dtn_ode_oracle(double nu2, double shift, double a, const Matrix& action);

}  // namespace mtorus
