// Base manifolds (flat circles and rectangular tori), their Laplacian
// spectra on q-forms enumerated per eigenvalue, and the orthogonal matrices
// of the isometry pull-back on each eigenspace.  Everything downstream
// (Dirichlet-to-Neumann blocks, Fredholm series, torsion) consumes these
// blocks; spectra are exact closed forms, never numerically diagonalized.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mtorus/linalg.hpp"

namespace mtorus {

enum class BaseKind { Circle, RectTorus };
enum class IsometryKind { Identity, CircleReflection, CircleRotation, TorusSwapShift };

struct ManifoldSpec {
  BaseKind kind = BaseKind::Circle;
  double radius = 1.0;   // circle only
  double period1 = 0.0;  // torus only
  double period2 = 0.0;
  int dimension = 1;

  static ManifoldSpec circle(double rho);
  static ManifoldSpec rect_torus(double l1, double l2);
  double volume() const;
};

struct IsometrySpec {
  IsometryKind kind = IsometryKind::Identity;
  double angle = 0.0;  // CircleRotation only
  ManifoldSpec base;

  static IsometrySpec identity(const ManifoldSpec& base);
  static IsometrySpec circle_reflection(const ManifoldSpec& base);
  static IsometrySpec circle_rotation(const ManifoldSpec& base, double angle);
  static IsometrySpec torus_swap_shift(const ManifoldSpec& base);
  bool orientation_preserving() const;
};

struct MappingTorusSpec {
  ManifoldSpec base;
  IsometrySpec isometry;
  double interval_length = 1.0;

  MappingTorusSpec(const ManifoldSpec& b, const IsometrySpec& iso, double a);
};

// One Laplacian eigenvalue nu^2 on the base together with the matrix of the
// pull-back restricted to that eigenspace in a real orthonormal eigenbasis.
struct EigenBlock {
  double nu2 = 0.0;
  std::size_t multiplicity = 0;
  Matrix action;
  Matrix inverse_action;

  EigenBlock(double nu2_, Matrix action_, Matrix inverse_action_);
};

struct SpectrumStream {
  std::vector<EigenBlock> blocks;  // sorted by nu2, one block per eigenvalue
  double cutoff = 0.0;
  int form_degree = 0;
  ManifoldSpec base;            // for Weyl-law tail bounds
  std::size_t frame_mult = 1;   // q-form frame dimension carried by blocks
};

// Pull-back matrices on harmonic q-forms for every degree, with Betti
// numbers b_q, fixed-subspace dimensions ell_q, and the positive definite
// block of I - (phi* + phi^{-1*})/2 on the moved complement.
struct HarmonicActionSet {
  int dimension = 1;
  std::vector<Matrix> action;       // index q = 0..dimension
  std::vector<int> betti;           // b_q
  std::vector<int> fixed_dim;       // ell_q
  std::vector<Matrix> moved_block;  // diagonalized S^q block; empty when none
};

SpectrumStream circle_spectrum(double rho, int q, const IsometrySpec& isometry,
                               double cutoff);
SpectrumStream torus_spectrum(double l1, double l2, int q,
                              const IsometrySpec& isometry, double cutoff);

// Degree-q spectrum of the base named by the mapping torus spec.
SpectrumStream base_spectrum(const MappingTorusSpec& spec, int q, double cutoff);

// q-forms restricted to a slice split as alpha + du ^ beta, so the relevant
// operator acts on degree q and q-1 together; blocks with equal nu2 merge.
SpectrumStream tilde_spectrum(const MappingTorusSpec& spec, int q, double cutoff);

HarmonicActionSet harmonic_actions(const MappingTorusSpec& spec);

// (b_q, ell_q) per degree; ell via the eigenvalue-1 subspace with
// clustering tolerance 1e-10.
std::vector<std::pair<int, int>> fixed_dims(const HarmonicActionSet& h);

// Binomial frame multiplicity of q-forms on a flat base of this dimension.
std::size_t frame_multiplicity(const ManifoldSpec& base, int q);

}  // namespace mtorus
