#include "mtorus/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "mtorus/numerics.hpp"

namespace mtorus {

double tail_bound(double cutoff, double a, double lambda,
                  const ManifoldSpec& base, std::size_t frame_mult) {
  if (!(cutoff > 0.0)) throw std::domain_error("tail_bound: cutoff must be positive");
  if (!(a > 0.0)) throw std::domain_error("tail_bound: interval length must be positive");
  if (lambda < 0.0) throw std::domain_error("tail_bound: negative shift");

  const double f = static_cast<double>(frame_mult);
  const double root = std::sqrt(cutoff + lambda);
  const double x0 = a * root;
  const double damp = -std::expm1(-x0);  // 1 - e^{-X0}
  const double slope_ratio = std::sqrt(cutoff / (cutoff + lambda));

  if (base.kind == BaseKind::Circle) {
    const double s0 = slope_ratio / base.radius;
    return 8.0 * f * std::exp(-x0) /
           (damp * damp * (-std::expm1(-a * s0)));
  }
  const double w1 = 2.0 * kPi / base.period1;
  const double w2 = 2.0 * kPi / base.period2;
  const double h = 0.5 * std::sqrt(w1 * w1 + w2 * w2);
  const double s0 = slope_ratio;
  const double area = base.period1 * base.period2;
  return (2.0 * f * area / kPi) *
         ((std::sqrt(cutoff) + h) / (a * s0) + 1.0 / (a * s0 * a * s0)) *
         std::exp(-x0) / (damp * damp);
}

DetResult fredholm_correction(const SpectrumStream& spectrum, double a,
                              double lambda, const TruncationPolicy& policy,
                              bool exclude_kernel) {
  if (!(a > 0.0))
    throw std::domain_error("fredholm_correction: interval length must be positive");
  if (lambda < 0.0)
    throw std::domain_error("fredholm_correction: negative shift");
  if (lambda == 0.0 && !exclude_kernel) {
    for (const auto& b : spectrum.blocks)
      if (b.nu2 == 0.0)
        throw std::domain_error(
            "fredholm_correction: lambda = 0 with a kernel block included");
  }

  const double effective_cutoff = std::min(policy.cutoff, spectrum.cutoff);
  const double tail =
      tail_bound(effective_cutoff, a, lambda, spectrum.base, spectrum.frame_mult);
  if (tail > policy.tail_tol)
    throw TruncationError(
        "fredholm_correction: tail bound " + std::to_string(tail) +
        " exceeds tolerance at cutoff " + std::to_string(effective_cutoff));

  std::vector<const EigenBlock*> active;
  double last_block = 0.0;
  for (const auto& block : spectrum.blocks) {
    if (block.nu2 > effective_cutoff) break;
    if (exclude_kernel && block.nu2 == 0.0) continue;
    if (active.size() >= policy.max_blocks)
      throw TruncationError("fredholm_correction: block budget exhausted");
    if (orthogonality_defect(block.action) > 1e-8)
      throw std::invalid_argument("fredholm_correction: non-orthogonal action");
    active.push_back(&block);
    last_block = block.nu2;
  }

  auto block_logdet = [&](const EigenBlock& block) {
    const double v = block.nu2 + lambda;
    const double g = fredholm_factor(a * std::sqrt(v));
    Matrix sym = Matrix::identity(block.multiplicity) -
                 0.5 * (block.action + block.inverse_action);
    double out = 0.0;
    for (double kappa : symmetric_eigenvalues(sym))
      if (kappa > 0.0) out += std::log1p(g * kappa);
    return out;
  };

  // Per-block contributions may be computed on worker threads; the final
  // reduction always runs in ascending eigenvalue order.
  std::vector<double> contributions(active.size(), 0.0);
  const unsigned workers =
      std::min<unsigned>(thread_budget(), std::max<std::size_t>(active.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < active.size(); ++i)
      contributions[i] = block_logdet(*active[i]);
  } else {
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < active.size(); i += workers)
          contributions[i] = block_logdet(*active[i]);
      }));
    for (auto& fut : futures) fut.get();
  }

  KahanSum sum;
  for (double c : contributions) sum.add(c);
  const std::size_t used = active.size();

  DetResult result;
  result.value = sum.value();
  result.blocks_used = used;
  result.tail_bound = tail;
  result.diagnostics["last_block_nu2"] = last_block;
  return result;
}

double finite_block_logdet(const Matrix& block) {
  if (block.empty()) return 0.0;
  if (block.rows() != block.cols())
    throw std::invalid_argument("finite_block_logdet: square block required");
  if (block.rows() == 1) {
    if (!(block(0, 0) > 0.0))
      throw std::domain_error("finite_block_logdet: block not positive definite");
    return std::log(block(0, 0));
  }
  if (block.rows() == 2) {
    double det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    if (!(block(0, 0) > 0.0 && det > 0.0))
      throw std::domain_error("finite_block_logdet: block not positive definite");
    return std::log(det);
  }
  return spd_logdet(block);
}

}  // namespace mtorus
