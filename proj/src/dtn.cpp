#include "mtorus/dtn.hpp"

#include <cmath>
#include <stdexcept>

#include "mtorus/numerics.hpp"

namespace mtorus {

namespace {

void check_block_inputs(double a, const Matrix& action,
                        const Matrix& inverse_action) {
  if (!(a > 0.0)) throw std::domain_error("dtn: interval length must be positive");
  if (action.rows() != action.cols() ||
      inverse_action.rows() != action.rows() ||
      inverse_action.cols() != action.cols())
    throw std::invalid_argument("dtn: action shape mismatch");
  if (orthogonality_defect(action) > 1e-8)
    throw std::invalid_argument("dtn: action is not orthogonal");
}

}  // namespace

std::vector<double> BoundarySolution::value(double u) const {
  // sinh(sqrt(v)(a-u))/sinh(a sqrt(v)) and sinh(sqrt(v) u)/sinh(a sqrt(v)),
  // each written with the e^{a sqrt(v)} factor cancelled.
  const double s = std::sqrt(nu2 + shift);
  const double a = interval_length;
  const double den = -std::expm1(-2.0 * a * s);
  const double cl = std::exp(-u * s) * (-std::expm1(-2.0 * s * (a - u))) / den;
  const double cr = std::exp(-(a - u) * s) * (-std::expm1(-2.0 * s * u)) / den;
  std::vector<double> out(datum.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cl * datum[i] + cr * transported[i];
  return out;
}

std::vector<double> BoundarySolution::derivative(double u) const {
  const double s = std::sqrt(nu2 + shift);
  const double a = interval_length;
  const double den = -std::expm1(-2.0 * a * s);
  // d/du of the two profiles: -s cosh(s(a-u))/sinh(sa), s cosh(su)/sinh(sa)
  const double dl = -s * std::exp(-u * s) * (1.0 + std::exp(-2.0 * s * (a - u))) / den;
  const double dr = s * std::exp(-(a - u) * s) * (1.0 + std::exp(-2.0 * s * u)) / den;
  std::vector<double> out(datum.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = dl * datum[i] + dr * transported[i];
  return out;
}

BoundarySolution boundary_solution(double nu2, double shift, double a,
                                   std::vector<double> datum,
                                   std::vector<double> transported) {
  if (!(nu2 + shift > 0.0))
    throw std::domain_error(
        "boundary_solution: degenerate case nu^2 + shift = 0 (use dtn_zero_mode)");
  if (!(a > 0.0))
    throw std::domain_error("boundary_solution: interval length must be positive");
  if (datum.size() != transported.size())
    throw std::invalid_argument("boundary_solution: boundary data size mismatch");
  BoundarySolution sol;
  sol.nu2 = nu2;
  sol.shift = shift;
  sol.interval_length = a;
  sol.datum = std::move(datum);
  sol.transported = std::move(transported);
  return sol;
}

DtnBlock dtn_block(double nu2, double shift, double a, const Matrix& action,
                   const Matrix& inverse_action) {
  if (!(nu2 + shift > 0.0))
    throw std::domain_error("dtn_block: requires nu^2 + shift > 0");
  check_block_inputs(a, action, inverse_action);

  const std::size_t n = action.rows();
  const double v = nu2 + shift;
  const double x = a * std::sqrt(v);
  const double scale = 2.0 * std::sqrt(v) * tanh_half(x);
  const double g = fredholm_factor(x);

  Matrix sym = Matrix::identity(n) - 0.5 * (action + inverse_action);
  // Exact symmetry: the inverse action equals A^T up to roundoff.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = 0.5 * (sym(i, j) + sym(j, i));
      sym(i, j) = m;
      sym(j, i) = m;
    }

  DtnBlock block;
  block.nu2 = nu2;
  block.shift = shift;
  block.interval_length = a;
  block.matrix = scale * (Matrix::identity(n) + g * sym);
  return block;
}

DtnBlock dtn_zero_mode(double a, const Matrix& action,
                       const Matrix& inverse_action) {
  check_block_inputs(a, action, inverse_action);
  const std::size_t n = action.rows();
  Matrix sym = Matrix::identity(n) - 0.5 * (action + inverse_action);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = 0.5 * (sym(i, j) + sym(j, i));
      sym(i, j) = m;
      sym(j, i) = m;
    }
  DtnBlock block;
  block.nu2 = 0.0;
  block.shift = 0.0;
  block.interval_length = a;
  block.matrix = (2.0 / a) * sym;
  return block;
}

}  // namespace mtorus
