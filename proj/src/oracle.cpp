#include "mtorus/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "mtorus/numerics.hpp"

namespace mtorus {

namespace {

constexpr double kExpCut = 120.0;  // e^{-120} is negligible at double scale

// Dual tail of one factor: full dual sum minus its j = 0 term (the j = 0
// term exists only for non-alternating factors).
double factor_dual_tail(const ThetaFactor& f, double t) {
  // runs to the edge of double range: differences of remainders between
  // isospectral-expansion geometries must stay representable
  KahanSum s;
  for (long long j = 1;; ++j) {
    double off = f.alternating ? (static_cast<double>(j) - 0.5)
                               : static_cast<double>(j);
    double x = kPi * kPi * off * off / (f.omega * f.omega * t);
    if (x > 700.0) break;
    double w =
        f.alternating ? 1.0 : std::cos(2.0 * kPi * f.sigma * static_cast<double>(j));
    s.add(2.0 * w * std::exp(-x));
  }
  return s.value();
}

double factor_dual_rate(const ThetaFactor& f) {
  double first = f.alternating ? 0.5 : 1.0;
  return kPi * kPi * first * first / (f.omega * f.omega);
}

// V_p(kappa) = int_1^inf t^{-1-p} e^{-kappa t} dt for p in {0, 1/2, 1, 3/2, 2}.
double upper_tail_vp(double p, double kappa) {
  if (std::abs(p) < 1e-12) return exp_integral_e1(kappa);
  if (std::abs(p - 0.5) < 1e-12)
    return 2.0 * std::exp(-kappa) -
           2.0 * std::sqrt(kPi * kappa) * std::erfc(std::sqrt(kappa));
  return (std::exp(-kappa) - kappa * upper_tail_vp(p - 1.0, kappa)) / p;
}

double digamma_small_int(int n) {
  // psi(n) for n >= 1
  double v = -kEulerGamma;
  for (int k = 1; k < n; ++k) v += 1.0 / k;
  return v;
}

double gamma_negative_half_integer(double p) {
  // Gamma(-p) for p in {1/2, 3/2, 5/2}
  if (std::abs(p - 0.5) < 1e-12) return -2.0 * kSqrtPi;
  if (std::abs(p - 1.5) < 1e-12) return 4.0 * kSqrtPi / 3.0;
  if (std::abs(p - 2.5) < 1e-12) return -8.0 * kSqrtPi / 15.0;
  throw std::domain_error("gamma_negative_half_integer: unsupported order");
}

bool is_nonneg_integer(double p) {
  return p >= -1e-12 && std::abs(p - std::round(p)) < 1e-12;
}

}  // namespace

RawSpectrum::RawSpectrum(std::string name, int dimension, double weyl_constant,
                         std::vector<ThetaFamily> families, Enumerator enumerate,
                         std::size_t kernel_dim)
    : name_(std::move(name)),
      dimension_(dimension),
      weyl_constant_(weyl_constant),
      families_(std::move(families)),
      enumerate_(std::move(enumerate)),
      kernel_dim_(kernel_dim) {
  // Collect the algebraic part: a family contributes coeff * prod
  // sqrt(pi)/omega at power (#factors)/2 unless one factor alternates.
  std::map<double, double> merged;
  for (const auto& fam : families_) {
    bool algebraic = true;
    for (const auto& f : fam.factors)
      if (f.alternating) algebraic = false;
    if (!algebraic) continue;
    double c = fam.coeff;
    for (const auto& f : fam.factors) c *= kSqrtPi / f.omega;
    merged[static_cast<double>(fam.factors.size()) / 2.0] += c;
  }
  for (const auto& [p, c] : merged)
    if (c != 0.0) algebraic_.push_back({p, c});
}

RawSpectrum RawSpectrum::finite(std::vector<SpectralMode> modes) {
  RawSpectrum s;
  s.name_ = "finite";
  s.finite_ = true;
  std::sort(modes.begin(), modes.end(),
            [](const SpectralMode& a, const SpectralMode& b) {
              return a.value < b.value;
            });
  for (const auto& m : modes)
    if (m.value == 0.0) s.kernel_dim_ += static_cast<std::size_t>(m.multiplicity);
  s.finite_modes_ = std::move(modes);
  return s;
}

std::vector<SpectralMode> RawSpectrum::enumerate(double cutoff) const {
  if (finite_) {
    std::vector<SpectralMode> out;
    for (const auto& m : finite_modes_)
      if (m.value <= cutoff) out.push_back(m);
    return out;
  }
  auto out = enumerate_(cutoff);
  std::sort(out.begin(), out.end(),
            [](const SpectralMode& a, const SpectralMode& b) {
              return a.value < b.value;
            });
  return out;
}

double RawSpectrum::remainder(double t) const {
  if (finite_)
    throw std::logic_error("RawSpectrum::remainder: finite spectra have no dual form");
  KahanSum total;
  for (const auto& fam : families_) {
    double pref = fam.coeff;
    std::vector<double> zs, es;
    for (const auto& f : fam.factors) {
      pref *= kSqrtPi / (f.omega * std::sqrt(t));
      zs.push_back(f.alternating ? 0.0 : 1.0);
      es.push_back(factor_dual_tail(f, t));
    }
    // prod(z + e) - prod(z) expanded over nonempty subsets, so the
    // exponentially small part never cancels against the algebraic part.
    const std::size_t n = fam.factors.size();
    double expansion = 0.0;
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
      double term = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        term *= ((mask >> i) & 1u) ? es[i] : zs[i];
      expansion += term;
    }
    total.add(pref * expansion);
  }
  return total.value();
}

double RawSpectrum::dual_decay_rate() const {
  double rate = 1e300;
  for (const auto& fam : families_)
    for (const auto& f : fam.factors) rate = std::min(rate, factor_dual_rate(f));
  return rate;
}

double RawSpectrum::heat_trace_direct(double t) const {
  if (!(t > 0.0)) throw std::domain_error("heat_trace_direct: t must be positive");
  double cutoff = kExpCut / t + 1.0;
  KahanSum s;
  for (const auto& m : enumerate(cutoff)) s.add(m.multiplicity * std::exp(-m.value * t));
  return s.value();
}

// ---- zeta continuation -----------------------------------------------------

double zeta_det_oracle(const RawSpectrum& spectrum, double shift,
                       bool drop_kernel) {
  if (shift < 0.0) throw std::domain_error("zeta_det_oracle: negative shift");

  if (spectrum.is_finite()) {
    KahanSum s;
    for (const auto& m : spectrum.enumerate(1e300)) {
      double v = m.value + shift;
      if (v <= 0.0) {
        if (!drop_kernel)
          throw std::domain_error("zeta_det_oracle: zero mode with no kernel drop");
        continue;
      }
      s.add(m.multiplicity * std::log(v));
    }
    return s.value();
  }

  const std::size_t n0 = spectrum.kernel_dimension();
  if (shift == 0.0 && n0 > 0 && !drop_kernel)
    throw std::domain_error("zeta_det_oracle: kernel present; use drop_kernel");

  const double enum_cutoff = 60.0;
  double zp = 0.0;  // zeta'(0)

  if (shift > 0.0) {
    for (const auto& [p, c] : spectrum.algebraic()) {
      if (is_nonneg_integer(p)) {
        int pi_ = static_cast<int>(std::round(p));
        double fact = 1.0;
        for (int k = 2; k <= pi_; ++k) fact *= k;
        zp += c * std::pow(-shift, pi_) / fact *
              (digamma_small_int(pi_ + 1) + kEulerGamma - std::log(shift));
      } else {
        zp += c * gamma_negative_half_integer(p) * std::pow(shift, p);
      }
      zp -= c * upper_tail_vp(p, shift);
    }
    zp += integrate_exponential_tail(
        [&](double y) {
          return (1.0 / y) * std::exp(-shift / y) * spectrum.remainder(1.0 / y);
        },
        1.0, spectrum.dual_decay_rate(), 1e-17);
    KahanSum e1sum;
    for (const auto& m : spectrum.enumerate(enum_cutoff))
      e1sum.add(m.multiplicity * exp_integral_e1(m.value + shift));
    zp += e1sum.value();
  } else {
    double c0 = 0.0;
    for (const auto& [p, c] : spectrum.algebraic()) {
      if (std::abs(p) < 1e-12)
        c0 += c;
      else
        zp += -c / p;
    }
    zp += kEulerGamma * (c0 - static_cast<double>(n0));
    zp += integrate_exponential_tail(
        [&](double y) { return (1.0 / y) * spectrum.remainder(1.0 / y); }, 1.0,
        spectrum.dual_decay_rate(), 1e-17);
    KahanSum e1sum;
    for (const auto& m : spectrum.enumerate(enum_cutoff))
      if (m.value > 0.0) e1sum.add(m.multiplicity * exp_integral_e1(m.value));
    zp += e1sum.value();
  }
  return -zp;
}

double zeta_at_minus_half(const RawSpectrum& spectrum) {
  if (spectrum.is_finite()) {
    KahanSum s;
    for (const auto& m : spectrum.enumerate(1e300))
      if (m.value > 0.0) s.add(m.multiplicity * std::sqrt(m.value));
    return s.value();
  }
  double total = 0.0;
  for (const auto& [p, c] : spectrum.algebraic()) total += c / (-0.5 - p);
  total += integrate_exponential_tail(
      [&](double y) { return std::sqrt(y) / y * spectrum.remainder(1.0 / y); },
      1.0, spectrum.dual_decay_rate(), 1e-17);
  total += 2.0 * static_cast<double>(spectrum.kernel_dimension());
  KahanSum upper;
  for (const auto& m : spectrum.enumerate(60.0)) {
    if (m.value <= 0.0) continue;
    double root = std::sqrt(m.value);
    // sqrt(lam) Gamma(-1/2, lam) = 2 e^{-lam} - 2 sqrt(pi lam) erfc(sqrt(lam))
    upper.add(m.multiplicity *
              (2.0 * std::exp(-m.value) - 2.0 * kSqrtPi * root * std::erfc(root)));
  }
  total += upper.value();
  return total / (-2.0 * kSqrtPi);
}

double zeta_at_zero(const RawSpectrum& spectrum) {
  if (spectrum.is_finite()) {
    double count = 0.0;
    for (const auto& m : spectrum.enumerate(1e300))
      if (m.value > 0.0) count += m.multiplicity;
    return count;
  }
  double c0 = 0.0;
  for (const auto& [p, c] : spectrum.algebraic())
    if (std::abs(p) < 1e-12) c0 += c;
  return c0 - static_cast<double>(spectrum.kernel_dimension());
}

// ---- heat trace ------------------------------------------------------------

double heat_trace(const RawSpectrum& spectrum, double t) {
  if (!(t > 0.0)) throw std::domain_error("heat_trace: t must be positive");
  if (spectrum.is_finite() || t >= 1.0) return spectrum.heat_trace_direct(t);
  double algebraic = 0.0;
  for (const auto& [p, c] : spectrum.algebraic()) algebraic += c * std::pow(t, -p);
  return algebraic + spectrum.remainder(t);
}

double heat_trace_difference(const RawSpectrum& a, const RawSpectrum& b,
                             double t) {
  if (!(t > 0.0)) throw std::domain_error("heat_trace_difference: t must be positive");
  if (a.is_finite() || b.is_finite() || t >= 1.0)
    return heat_trace(a, t) - heat_trace(b, t);
  std::map<double, double> coeffs;
  for (const auto& [p, c] : a.algebraic()) coeffs[p] += c;
  for (const auto& [p, c] : b.algebraic()) coeffs[p] -= c;
  double scale = 0.0;
  for (const auto& [p, c] : a.algebraic()) scale = std::max(scale, std::abs(c));
  double diff = 0.0;
  for (const auto& [p, c] : coeffs) {
    if (std::abs(c) > 1e-10 * std::max(1.0, scale))
      throw std::domain_error(
          "heat_trace_difference: algebraic heat expansions differ");
    diff += c * std::pow(t, -p);
  }
  return diff + a.remainder(t) - b.remainder(t);
}

double weyl_deviation(const RawSpectrum& spectrum, double cutoff) {
  double count = 0.0;
  for (const auto& m : spectrum.enumerate(cutoff)) count += m.multiplicity;
  if (count == 0.0) return 1.0;
  double predicted = spectrum.weyl_constant() *
                     std::pow(cutoff, 0.5 * spectrum.dimension());
  return std::abs(count - predicted) / count;
}

// ---- spectrum catalog ------------------------------------------------------

RawSpectrum circle_modes_raw(double circumference) {
  if (!(circumference > 0.0))
    throw std::domain_error("circle_modes_raw: circumference must be positive");
  const double w = 2.0 * kPi / circumference;
  std::vector<ThetaFamily> fams = {{1.0, {{w, 0.0, false}}}};
  auto enumerate = [w](double cutoff) {
    std::vector<SpectralMode> out{{0.0, 1.0}};
    for (long long k = 1;; ++k) {
      double v = w * w * static_cast<double>(k) * static_cast<double>(k);
      if (v > cutoff) break;
      out.push_back({v, 2.0});
    }
    return out;
  };
  return RawSpectrum("circle", 1, circumference / kPi, std::move(fams),
                     std::move(enumerate), 1);
}

RawSpectrum rect_torus_raw(double period1, double period2) {
  if (!(period1 > 0.0 && period2 > 0.0))
    throw std::domain_error("rect_torus_raw: periods must be positive");
  const double w1 = 2.0 * kPi / period1;
  const double w2 = 2.0 * kPi / period2;
  std::vector<ThetaFamily> fams = {{1.0, {{w1, 0.0, false}, {w2, 0.0, false}}}};
  auto enumerate = [w1, w2](double cutoff) {
    std::vector<SpectralMode> out;
    int mmax = static_cast<int>(std::sqrt(cutoff) / w1) + 1;
    int nmax = static_cast<int>(std::sqrt(cutoff) / w2) + 1;
    for (int m = -mmax; m <= mmax; ++m)
      for (int n = -nmax; n <= nmax; ++n) {
        double v = w1 * w1 * m * m + w2 * w2 * n * n;
        if (v <= cutoff) out.push_back({v, 1.0});
      }
    return out;
  };
  return RawSpectrum("rect_torus", 2, period1 * period2 / (4.0 * kPi),
                     std::move(fams), std::move(enumerate), 1);
}

RawSpectrum klein_bottle_raw(double a, double rho) {
  if (!(a > 0.0 && rho > 0.0))
    throw std::domain_error("klein_bottle_raw: dimensions must be positive");
  const double w1 = 2.0 * kPi / a;  // interval direction
  const double w2 = 1.0 / rho;      // circle direction
  const ThetaFactor t1{w1, 0.0, false};
  const ThetaFactor t1h{w1, 0.5, false};
  const ThetaFactor t2{w2, 0.0, false};
  // Tr e^{-t Delta_K} = (1/2) Th1 Th2 + (1/2) Th1h Th2 + (1/2) Th1 - (1/2) Th1h,
  // the four eigenvalue families resummed separately.
  std::vector<ThetaFamily> fams = {{0.5, {t1, t2}},
                                   {0.5, {t1h, t2}},
                                   {0.5, {t1}},
                                   {-0.5, {t1h}}};
  auto enumerate = [a, rho](double cutoff) {
    std::vector<SpectralMode> out{{0.0, 1.0}};
    auto fx = [a](double m) { return 4.0 * kPi * kPi * m * m / (a * a); };
    auto fy = [rho](double n) { return n * n / (rho * rho); };
    for (int m = 1; fx(m) <= cutoff; ++m) out.push_back({fx(m), 2.0});
    for (int n = 1; fy(n) <= cutoff; ++n) out.push_back({fy(n), 1.0});
    for (int m = 1; fx(m) <= cutoff; ++m)
      for (int n = 1; fx(m) + fy(n) <= cutoff; ++n)
        out.push_back({fx(m) + fy(n), 2.0});
    for (int m = 1; fx(m - 0.5) <= cutoff; ++m)
      for (int n = 1; fx(m - 0.5) + fy(n) <= cutoff; ++n)
        out.push_back({fx(m - 0.5) + fy(n), 2.0});
    return out;
  };
  return RawSpectrum("klein_bottle", 2, a * rho / 2.0, std::move(fams),
                     std::move(enumerate), 1);
}

RawSpectrum product_t2_s1_raw(double period1, double period2, double a) {
  if (!(period1 > 0.0 && period2 > 0.0 && a > 0.0))
    throw std::domain_error("product_t2_s1_raw: dimensions must be positive");
  const double w1 = 2.0 * kPi / period1;
  const double w2 = 2.0 * kPi / period2;
  const double w3 = 2.0 * kPi / a;
  std::vector<ThetaFamily> fams = {
      {1.0, {{w1, 0.0, false}, {w2, 0.0, false}, {w3, 0.0, false}}}};
  auto enumerate = [w1, w2, w3](double cutoff) {
    std::vector<SpectralMode> out;
    int mmax = static_cast<int>(std::sqrt(cutoff) / w1) + 1;
    int nmax = static_cast<int>(std::sqrt(cutoff) / w2) + 1;
    int kmax = static_cast<int>(std::sqrt(cutoff) / w3) + 1;
    for (int m = -mmax; m <= mmax; ++m)
      for (int n = -nmax; n <= nmax; ++n)
        for (int k = -kmax; k <= kmax; ++k) {
          double v = w1 * w1 * m * m + w2 * w2 * n * n + w3 * w3 * k * k;
          if (v <= cutoff) out.push_back({v, 1.0});
        }
    return out;
  };
  double vol = period1 * period2 * a;
  return RawSpectrum("product_t2_s1", 3, vol / (6.0 * kPi * kPi),
                     std::move(fams), std::move(enumerate), 1);
}

std::array<int, 3> swap_shift_shell_kappa(int shell_value) {
  std::array<int, 3> counts{0, 0, 0};
  if (shell_value < 0) return counts;
  std::vector<std::pair<int, int>> pts;
  int r = static_cast<int>(std::sqrt(static_cast<double>(shell_value))) + 1;
  for (int m = -r; m <= r; ++m)
    for (int n = -r; n <= r; ++n)
      if (m * m + n * n == shell_value) pts.emplace_back(m, n);
  if (pts.empty()) return counts;

  // Signed permutation matrix of the pull-back on the shell: the basis
  // function indexed (m, n) maps to (-1)^n times the one indexed (n, m).
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = i;
  Matrix action(pts.size(), pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    auto [m, n] = pts[j];
    action(index.at({n, m}), j) = (n % 2 == 0) ? 1.0 : -1.0;
  }
  Matrix sym = Matrix::identity(pts.size()) - 0.5 * (action + transpose(action));
  for (double kappa : symmetric_eigenvalues(sym)) {
    if (std::abs(kappa) < 1e-10)
      ++counts[0];
    else if (std::abs(kappa - 1.0) < 1e-10)
      ++counts[1];
    else if (std::abs(kappa - 2.0) < 1e-10)
      ++counts[2];
    else
      throw std::logic_error("swap_shift_shell_kappa: eigenvalue outside {0,1,2}");
  }
  return counts;
}

RawSpectrum t2_phi_raw() {
  // Group-trace resummation of the heat trace over the unit T^2 with the
  // swap-shift gluing (interval length 2 pi):
  //   theta_0 (Th^2 - 2 Th_e Th_o + Th_d)/2
  // + theta_{1/2} (Th^2 - 2 Th_e Th_o - Th_d)/2
  // + theta_{1/4} (2 Th_e Th_o),
  // where theta_sigma carries the twisted interval modes (j+sigma)^2, Th is
  // the unit theta, Th_e/Th_o its even/odd splits, and Th_d the alternating
  // trace of the pull-back against the heat kernel.
  const ThetaFactor u0{1.0, 0.0, false};
  const ThetaFactor uh{1.0, 0.5, false};
  const ThetaFactor uq{1.0, 0.25, false};
  const ThetaFactor th{1.0, 0.0, false};
  const ThetaFactor the{2.0, 0.0, false};
  const ThetaFactor tho{2.0, 0.5, false};
  const ThetaFactor thd{std::sqrt(2.0), 0.0, true};
  std::vector<ThetaFamily> fams = {
      {0.5, {u0, th, th}},  {-1.0, {u0, the, tho}}, {0.5, {u0, thd}},
      {0.5, {uh, th, th}},  {-1.0, {uh, the, tho}}, {-0.5, {uh, thd}},
      {2.0, {uq, the, tho}}};
  auto enumerate = [](double cutoff) {
    std::vector<SpectralMode> out;
    auto add_family = [&](int shell, double sigma, int count) {
      if (count == 0) return;
      for (long long j = 0;; ++j) {
        double up = (static_cast<double>(j) + sigma);
        double um = (static_cast<double>(-j - 1) + sigma);
        bool any = false;
        double vp = shell + up * up;
        if (vp <= cutoff) {
          out.push_back({vp, static_cast<double>(count)});
          any = true;
        }
        double vm = shell + um * um;
        if (vm <= cutoff) {
          out.push_back({vm, static_cast<double>(count)});
          any = true;
        }
        if (!any) break;
      }
    };
    for (int shell = 0; shell <= static_cast<int>(cutoff); ++shell) {
      auto counts = swap_shift_shell_kappa(shell);
      if (counts[0] + counts[1] + counts[2] == 0) continue;
      add_family(shell, 0.0, counts[0]);
      add_family(shell, 0.5, counts[2]);
      add_family(shell, 0.25, counts[1]);
    }
    return out;
  };
  double vol = 8.0 * kPi * kPi * kPi;
  return RawSpectrum("t2_phi", 3, vol / (6.0 * kPi * kPi), std::move(fams),
                     std::move(enumerate), 1);
}

// ---- two-point boundary value oracle ----------------------------------------

namespace {

// Chebyshev-Gauss-Lobatto differentiation matrix on [-1, 1].
Matrix chebyshev_diff(const std::vector<double>& x) {
  const std::size_t n = x.size() - 1;
  Matrix d(n + 1, n + 1);
  auto c = [&](std::size_t j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  for (std::size_t i = 0; i <= n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == j) continue;
      double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = (c(i) / c(j)) * sign / (x[i] - x[j]);
      row += d(i, j);
    }
    d(i, i) = -row;
  }
  return d;
}

}  // namespace

Matrix dtn_ode_oracle(double nu2, double shift, double a, const Matrix& action) {
  if (!(nu2 + shift > 0.0))
    throw std::domain_error("dtn_ode_oracle: requires nu^2 + shift > 0");
  if (!(a > 0.0))
    throw std::domain_error("dtn_ode_oracle: interval length must be positive");
  if (orthogonality_defect(action) > 1e-8)
    throw std::invalid_argument("dtn_ode_oracle: action is not orthogonal");

  const double v = nu2 + shift;
  const std::size_t n = 64;
  std::vector<double> x(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    x[j] = std::cos(kPi * static_cast<double>(j) / static_cast<double>(n));
  Matrix d = chebyshev_diff(x);
  Matrix d2 = d * d;

  // -psi'' + v psi = 0 on u = a (x + 1)/2; row 0 is u = a, row n is u = 0.
  const double scale = 2.0 / a;
  Matrix sys(n + 1, n + 1);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j <= n; ++j)
      sys(i, j) = -scale * scale * d2(i, j) + (i == j ? v : 0.0);
  sys(0, 0) = 1.0;
  sys(n, n) = 1.0;

  auto solve_fundamental = [&](double at_zero, double at_a) {
    std::vector<double> rhs(n + 1, 0.0);
    rhs[0] = at_a;
    rhs[n] = at_zero;
    std::vector<double> y = lu_solve(sys, rhs);
    double d_at_a = 0.0, d_at_zero = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      d_at_a += d(0, j) * y[j];
      d_at_zero += d(n, j) * y[j];
    }
    return std::pair<double, double>(scale * d_at_zero, scale * d_at_a);
  };

  auto [y0p0, y0pa] = solve_fundamental(1.0, 0.0);
  auto [y1p0, y1pa] = solve_fundamental(0.0, 1.0);

  // R = y0'(a) A + (y1'(a) - y0'(0)) I - y1'(0) A^T
  const std::size_t m = action.rows();
  Matrix r = y0pa * action;
  Matrix at = transpose(action);
  for (std::size_t i = 0; i < m; ++i) {
    r(i, i) += y1pa - y0p0;
    for (std::size_t j = 0; j < m; ++j) r(i, j) -= y1p0 * at(i, j);
  }
  return r;
}

}  // namespace mtorus
