// Fredholm-determinant corrections as error-bounded series over eigenblocks:
//
//   sum over blocks of  log det[ I + g(a sqrt(nu^2 + lambda)) (I - (A+A^T)/2) ],
//   g(x) = 2 e^x/(e^x - 1)^2,
//
// with a certified tail bound from Weyl counting, plus finite log-dets for
// harmonic blocks.  Terms are accumulated in ascending eigenvalue order
// through compensated summation, so results are deterministic.
#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

#include "mtorus/spectral_model.hpp"

namespace mtorus {

struct TruncationPolicy {
  double cutoff = 400.0;    // only blocks with nu2 <= cutoff enter the sum
  double tail_tol = 1e-12;  // the tail bound at the cutoff must be below this
  std::size_t max_blocks = 100000;

  static TruncationPolicy defaults() { return TruncationPolicy{}; }
};

struct DetResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t blocks_used = 0;
  std::map<std::string, double> diagnostics;
};

// Raised when a series cannot meet the requested tail tolerance at the
// policy cutoff; maps to CLI exit code 2.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Certified upper bound on the discarded series tail beyond the cutoff:
//   circle:  8 F e^{-a sqrt(cutoff+lambda)} / ((1-e^{-X0})^2 (1-e^{-a s0}))
//   torus:   (2 F L1 L2 / pi) [ (sqrt(cutoff)+h)/(a s0) + 1/(a s0)^2 ]
//              e^{-a sqrt(cutoff+lambda)} / (1-e^{-X0})^2
// with X0 = a sqrt(cutoff+lambda), s0 = sqrt(cutoff/(cutoff+lambda)) times
// the minimal frequency step, h the half-diagonal of a dual lattice cell,
// and F the q-form frame multiplicity.
double tail_bound(double cutoff, double a, double lambda,
                  const ManifoldSpec& base, std::size_t frame_mult = 1);

// log det_Fr of the series factor over the stream; lambda = 0 requires
// exclude_kernel (the nu2 = 0 factor is singular there).
DetResult fredholm_correction(const SpectrumStream& spectrum, double a,
                              double lambda, const TruncationPolicy& policy,
                              bool exclude_kernel);

// log det of a finite symmetric positive definite block; empty block gives 0.
double finite_block_logdet(const Matrix& block);

}  // namespace mtorus
