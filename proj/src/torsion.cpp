#include "mtorus/torsion.hpp"

#include <cmath>
#include <stdexcept>

#include "mtorus/determinants.hpp"
#include "mtorus/numerics.hpp"

namespace mtorus {

namespace {

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Matrix matrix_power(const Matrix& a, int k) {
  Matrix p = Matrix::identity(a.rows());
  for (int i = 0; i < k; ++i) p = p * a;
  return p;
}

int euler_characteristic(const HarmonicActionSet& h) {
  int chi = 0;
  for (std::size_t q = 0; q < h.betti.size(); ++q)
    chi += (q % 2 == 0) ? h.betti[q] : -h.betti[q];
  return chi;
}

// log det(I + g (I - (A + A^T)/2)) over one harmonic block.
double harmonic_fredholm_logdet(const Matrix& a, double g) {
  if (a.empty()) return 0.0;
  Matrix sym = Matrix::identity(a.rows()) - 0.5 * (a + transpose(a));
  double out = 0.0;
  for (double kappa : symmetric_eigenvalues(sym))
    if (kappa > 0.0) out += std::log1p(g * kappa);
  return out;
}

}  // namespace

long long lefschetz_number(const HarmonicActionSet& actions, int k) {
  if (k < 1) throw std::domain_error("lefschetz_number: k must be >= 1");
  double sum = 0.0;
  for (std::size_t q = 0; q < actions.action.size(); ++q) {
    double t = trace(matrix_power(actions.action[q], k));
    sum += (q % 2 == 0) ? t : -t;
  }
  double rounded = std::round(sum);
  if (std::abs(sum - rounded) > 1e-9)
    throw std::logic_error("lefschetz_number: trace sum is not an integer");
  return static_cast<long long>(rounded);
}

LefschetzData::LefschetzData(HarmonicActionSet actions)
    : actions_(std::move(actions)) {
  for (const Matrix& a : actions_.action)
    powers_.push_back(Matrix::identity(a.rows()));
  if (number(1) != lefschetz_number(actions_, 1))
    throw std::logic_error("LefschetzData: routes disagree on the first number");
}

long long LefschetzData::number(int k) const {
  if (k < 1) throw std::domain_error("LefschetzData::number: k must be >= 1");
  while (static_cast<int>(memo_.size()) < k) {
    double sum = 0.0;
    for (std::size_t q = 0; q < actions_.action.size(); ++q) {
      powers_[q] = powers_[q] * actions_.action[q];
      double t = trace(powers_[q]);
      sum += (q % 2 == 0) ? t : -t;
    }
    double rounded = std::round(sum);
    if (std::abs(sum - rounded) > 1e-9)
      throw std::logic_error("LefschetzData: trace sum is not an integer");
    memo_.push_back(static_cast<long long>(rounded));
  }
  return memo_[static_cast<std::size_t>(k) - 1];
}

double lefschetz_zeta_log(const HarmonicActionSet& actions, double t) {
  if (!(std::abs(t) < 1.0))
    throw std::domain_error("lefschetz_zeta_log: requires |t| < 1");

  double betti_sum = 0.0;
  for (int b : actions.betti) betti_sum += b;

  // Power series sum_k L(phi^k) t^k / k with tail bound |L_k| <= sum b_q.
  LefschetzData data(actions);
  KahanSum series;
  double tk = 1.0;
  for (int k = 1; k <= 100000; ++k) {
    tk *= t;
    series.add(static_cast<double>(data.number(k)) * tk / k);
    double tail = betti_sum * std::pow(std::abs(t), k + 1) /
                  ((k + 1) * (1.0 - std::abs(t)));
    if (tail < 1e-15) break;
  }

  // Rational closed form sum_q (-1)^{q+1} log det(I - t A_q).
  double rational = 0.0;
  for (std::size_t q = 0; q < actions.action.size(); ++q) {
    const Matrix& a = actions.action[q];
    Matrix m = Matrix::identity(a.rows()) - t * a;
    double det = determinant(m);
    if (!(det > 0.0))
      throw std::logic_error("lefschetz_zeta_log: nonpositive determinant");
    rational += ((q % 2 == 0) ? -1.0 : 1.0) * std::log(det);
  }

  if (std::abs(series.value() - rational) > 1e-12)
    throw std::logic_error(
        "lefschetz_zeta_log: series and rational form disagree");
  return series.value();
}

double analytic_torsion(const MappingTorusSpec& spec) {
  HarmonicActionSet h = harmonic_actions(spec);
  const double a = spec.interval_length;
  double value = 0.5 * std::log(2.0) * euler_characteristic(h);
  double alt_fixed = 0.0;
  double moved = 0.0;
  for (std::size_t q = 0; q < h.action.size(); ++q) {
    double sign = (q % 2 == 0) ? 1.0 : -1.0;
    alt_fixed += sign * h.fixed_dim[q];
    moved += sign * finite_block_logdet(h.moved_block[q]);
  }
  value += 0.5 * std::log(a * a / 2.0) * alt_fixed;
  value += 0.5 * moved;
  return value;
}

double torsion_from_definition(const MappingTorusSpec& spec,
                               const TruncationPolicy& policy) {
  const int m = spec.base.dimension + 1;
  KahanSum sum;
  for (int q = 1; q <= m; ++q) {
    double det = mapping_torus_det_modified(spec, q, policy).value;
    double sign = (q % 2 == 0) ? -1.0 : 1.0;  // (-1)^{q+1}
    sum.add(sign * q * det);
  }
  return 0.5 * sum.value();
}

double witten_torsion(const MappingTorusSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("witten_torsion: t must be positive");
  HarmonicActionSet h = harmonic_actions(spec);
  const double a = spec.interval_length;
  return 0.5 * a * euler_characteristic(h) * t -
         lefschetz_zeta_log(h, std::exp(-a * t));
}

double witten_torsion_assembled(const MappingTorusSpec& spec, double t,
                                const TruncationPolicy& policy) {
  (void)policy;
  if (!(t > 0.0))
    throw std::domain_error("witten_torsion_assembled: t must be positive");
  HarmonicActionSet h = harmonic_actions(spec);
  const double a = spec.interval_length;
  const int dim = spec.base.dimension;
  const int chi = euler_characteristic(h);

  double value = 0.5 * chi * circle_det_massive(a, t);

  // Alternating Fredholm sum at shift t^2.  Away from the harmonic blocks
  // the degree-q and degree-(q-1) factors cancel in the alternating sum, so
  // only the harmonic actions contribute; there nu = 0 and the factor
  // argument is a t.
  const double g = fredholm_factor(a * t);
  std::vector<double> f(dim + 2, 0.0);
  for (int r = 0; r <= dim; ++r)
    f[r] = harmonic_fredholm_logdet(h.action[r], g);
  KahanSum sum;
  for (int q = 0; q <= dim + 1; ++q) {
    double sign = (q % 2 == 0) ? -1.0 : 1.0;  // (-1)^{q+1}
    double tilde = (q <= dim ? f[q] : 0.0) + (q >= 1 ? f[q - 1] : 0.0);
    sum.add(sign * q * tilde);
  }
  return value + 0.5 * sum.value();
}

}  // namespace mtorus
