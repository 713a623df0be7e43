#include "mtorus/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "mtorus/determinants.hpp"
#include "mtorus/dtn.hpp"
#include "mtorus/numerics.hpp"
#include "mtorus/oracle.hpp"
#include "mtorus/torsion.hpp"

namespace mtorus::verify {

namespace {

// Deterministic random stream (splitmix64 + Box-Muller); the verification
// checks must reproduce identical residuals for a given seed on every
// platform, so no standard-library distributions are used.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  double uniform() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Matrix orthogonal(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = normal();
    // modified Gram-Schmidt on columns
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += a(i, k) * a(i, j);
        for (std::size_t i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm += a(i, j) * a(i, j);
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm;
    }
    return a;
  }

 private:
  std::uint64_t state_;
};

MappingTorusSpec klein_spec(double a, double rho) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_reflection(base), a);
}

MappingTorusSpec t2_phi_spec() {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  return MappingTorusSpec(base, IsometrySpec::torus_swap_shift(base), 2.0 * kPi);
}

MappingTorusSpec rotation_spec(double a, double rho, double angle) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_rotation(base, angle), a);
}

double rational_lefschetz_log(const HarmonicActionSet& h, double t) {
  double out = 0.0;
  for (std::size_t q = 0; q < h.action.size(); ++q) {
    const Matrix& a = h.action[q];
    double det = determinant(Matrix::identity(a.rows()) - t * a);
    out += ((q % 2 == 0) ? -1.0 : 1.0) * std::log(det);
  }
  return out;
}

double series_lefschetz_log(const HarmonicActionSet& h, double t) {
  KahanSum s;
  double betti_sum = 0.0;
  for (int b : h.betti) betti_sum += b;
  double tk = 1.0;
  for (int k = 1; k <= 100000; ++k) {
    tk *= t;
    s.add(static_cast<double>(lefschetz_number(h, k)) * tk / k);
    if (betti_sum * std::pow(std::abs(t), k + 1) /
            ((k + 1) * (1.0 - std::abs(t))) <
        1e-16)
      break;
  }
  return s.value();
}

struct CheckDef {
  double tolerance;
  std::function<double(std::uint64_t, std::string&)> residual;
};

// residual functions return the worst measured deviation; `detail` reports
// what was compared.

double check_calibration(std::uint64_t, std::string& detail) {
  double worst = 0.0;
  for (double a : {1.0, 2.0 * kPi})
    for (double t : {0.25, 1.0, 4.0}) {
      RawSpectrum modes = circle_modes_raw(a);
      double got = zeta_det_oracle(modes, t * t, false);
      double want = circle_det_massive(a, t);
      worst = std::max(worst, std::abs(got - want));
    }
  detail = "zeta oracle vs closed massive-circle determinant, 6 instances";
  return worst;
}

double check_klein_det(std::uint64_t, std::string& detail) {
  double worst = 0.0;
  for (auto [a, rho] : {std::pair{2.0 * kPi, 1.0}, std::pair{3.0, 0.7}}) {
    double closed = klein_bottle_det(a, rho);
    double oracle = zeta_det_oracle(klein_bottle_raw(a, rho), 0.0, true);
    worst = std::max(worst, std::abs(closed - oracle));
  }
  detail = "Klein bottle closed form vs eigenvalue-list continuation";
  return worst;
}

double check_twisted_torus_det(std::uint64_t, std::string& detail) {
  double closed = t2_phi_det(TruncationPolicy::defaults());
  double oracle = zeta_det_oracle(t2_phi_raw(), 0.0, true);
  detail = "swap-shift mapping torus closed form vs brute-force spectrum";
  return std::abs(closed - oracle);
}

double check_shift_decomposition(std::uint64_t, std::string& detail) {
  double worst = 0.0;
  MappingTorusSpec spec = klein_spec(2.0 * kPi, 1.0);
  RawSpectrum klein = klein_bottle_raw(2.0 * kPi, 1.0);
  for (double lambda : {0.5, 1.0, 2.0}) {
    double lhs = zeta_det_oracle(klein, lambda, false);
    double rhs =
        mapping_torus_det_shifted(spec, 0, lambda, TruncationPolicy::defaults())
            .value;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  detail = "shifted Klein determinant vs product + Fredholm correction";
  return worst;
}

double check_modified_pathway(std::uint64_t, std::string& detail) {
  TruncationPolicy policy = TruncationPolicy::defaults();
  double klein_generic =
      mapping_torus_det_modified(klein_spec(2.0 * kPi, 1.0), 0, policy).value;
  double klein_closed = klein_bottle_det(2.0 * kPi, 1.0);
  double r1 = std::abs(klein_generic - klein_closed);

  double phi_generic = mapping_torus_det_modified(t2_phi_spec(), 0, policy).value;
  double phi_closed = t2_phi_det(policy);
  double r2 = std::abs(phi_generic - phi_closed);
  detail = "generic modified-determinant pathway vs both closed forms";
  // the Klein comparison carries the tighter tolerance; scale the swap-shift
  // residual onto it so one number certifies both
  return std::max(r1, r2 * 1e-2);
}

double check_heat_asymptotics(std::uint64_t, std::string& detail) {
  RawSpectrum klein = klein_bottle_raw(2.0 * kPi, 1.0);
  RawSpectrum torus = rect_torus_raw(2.0 * kPi, 2.0 * kPi);
  double worst = 0.0;
  std::vector<double> log_diff, inv_t;
  for (double t : {0.05, 0.1, 0.2}) {
    worst = std::max(worst, std::abs(heat_trace(klein, t) - heat_trace(torus, t)));
    double refined = std::abs(heat_trace_difference(klein, torus, t));
    log_diff.push_back(std::log(refined));
    inv_t.push_back(1.0 / t);
  }
  // least-squares slope of log|difference| against 1/t; exponential
  // smallness means a negative slope (c > 0 in C e^{-c/t})
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < inv_t.size(); ++i) mx += inv_t[i], my += log_diff[i];
  mx /= inv_t.size();
  my /= log_diff.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < inv_t.size(); ++i) {
    num += (inv_t[i] - mx) * (log_diff[i] - my);
    den += (inv_t[i] - mx) * (inv_t[i] - mx);
  }
  double slope = num / den;
  detail = "heat trace difference Klein vs torus; regression slope " +
           std::to_string(slope) + " per unit 1/t";
  if (slope >= 0.0) return 1.0;  // force failure: decay is not exponential
  return worst;
}

double check_torsion_dual(std::uint64_t, std::string& detail) {
  TruncationPolicy policy = TruncationPolicy::defaults();
  double worst = 0.0;
  for (auto [a, rho] : {std::pair{2.0 * kPi, 1.0}, std::pair{3.0, 0.7}}) {
    MappingTorusSpec spec = klein_spec(a, rho);
    double closed = analytic_torsion(spec);
    double assembled = torsion_from_definition(spec, policy);
    double expected = std::log(a / 2.0);
    worst = std::max(worst, std::abs(closed - assembled));
    worst = std::max(worst, std::abs(closed - expected));
    worst = std::max(worst, std::abs(assembled - expected));
  }
  MappingTorusSpec rot = rotation_spec(2.0, 1.0, 0.7);
  double r1 = std::abs(analytic_torsion(rot));
  double r2 = std::abs(torsion_from_definition(rot, policy));
  detail = "analytic torsion closed form vs defining assembly; Klein log(a/2), "
           "rotation zero";
  // rotation instances must vanish at 1e-10; fold with a factor of 100
  return std::max({worst, r1 * 1e2, r2 * 1e2});
}

double check_witten_dual(std::uint64_t, std::string& detail) {
  TruncationPolicy policy = TruncationPolicy::defaults();
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (auto spec : {klein_spec(2.0 * kPi, 1.0), rotation_spec(2.0, 1.0, 0.7)}) {
      double direct = witten_torsion(spec, t);
      double assembled = witten_torsion_assembled(spec, t, policy);
      worst = std::max(worst, std::abs(direct - assembled));
    }
    // orientation-preserving odd case: both routes must be exactly the
    // linear term, which vanishes for a circle base
    MappingTorusSpec rot = rotation_spec(1.5, 0.8, 1.1);
    if (witten_torsion(rot, t) != 0.0) return 1.0;
    if (witten_torsion_assembled(rot, t, policy) != 0.0) return 1.0;
  }
  detail = "deformed torsion: Lefschetz route vs harmonic-block assembly";
  return worst;
}

double check_lefschetz_dual(std::uint64_t, std::string& detail) {
  double worst = 0.0;
  std::vector<MappingTorusSpec> specs = {
      klein_spec(2.0 * kPi, 1.0),
      rotation_spec(2.0, 1.0, 0.7),
      rotation_spec(2.0, 1.0, kPi / 3.0),
      t2_phi_spec(),
      MappingTorusSpec(ManifoldSpec::circle(1.0),
                       IsometrySpec::identity(ManifoldSpec::circle(1.0)), 1.0)};
  for (const auto& spec : specs) {
    HarmonicActionSet h = harmonic_actions(spec);
    HarmonicActionSet ht = h;
    for (auto& m : ht.action) m = transpose(m);
    for (double t : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
      worst = std::max(worst, std::abs(series_lefschetz_log(h, t) -
                                       rational_lefschetz_log(h, t)));
    }
    for (int k = 1; k <= 12; ++k)
      if (lefschetz_number(h, k) != lefschetz_number(ht, k)) return 1.0;
  }
  detail = "Lefschetz zeta power series vs rational form; L(phi) = L(phi^{-1})";
  return worst;
}

double check_dtn_oracle(std::uint64_t seed, std::string& detail) {
  RandomStream rng(seed == 0 ? 42 : seed);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    double nu2 = rng.uniform() * 9.0;
    double shift = 0.05 + rng.uniform() * 4.0;
    double a = 0.5 + rng.uniform() * 1.5;
    Matrix q = rng.orthogonal(n);
    Matrix direct = dtn_block(nu2, shift, a, q, transpose(q)).matrix;
    Matrix numeric = dtn_ode_oracle(nu2, shift, a, q);
    worst = std::max(worst, max_abs(direct - numeric));
  }
  detail = "Dirichlet-to-Neumann blocks vs collocation solver, 100 seeded draws";
  return worst;
}

double check_properties(std::uint64_t, std::string& detail) {
  TruncationPolicy policy = TruncationPolicy::defaults();
  double worst = 0.0;

  // period swap symmetry of the torus determinant
  for (auto [a, rho] : {std::pair{2.0 * kPi, 1.0}, std::pair{3.0, 0.7}})
    worst = std::max(worst, std::abs(rect_torus_det(a, rho) -
                                     rect_torus_det(2.0 * kPi * rho, a / (2.0 * kPi))));

  // identity correction vanishes identically; nontrivial ones are positive
  {
    ManifoldSpec base = ManifoldSpec::circle(1.0);
    MappingTorusSpec id_spec(base, IsometrySpec::identity(base), 2.0);
    DetResult id_corr = fredholm_correction(tilde_spectrum(id_spec, 0, 400.0),
                                            2.0, 0.7, policy, false);
    if (id_corr.value != 0.0) return 1.0;
    MappingTorusSpec klein = klein_spec(2.0 * kPi, 1.0);
    DetResult corr = fredholm_correction(tilde_spectrum(klein, 0, 400.0),
                                         2.0 * kPi, 0.0, policy, true);
    if (!(corr.value >= 0.0)) return 1.0;
  }

  // tail bounds dominate the measured remainder at a doubled cutoff
  {
    MappingTorusSpec klein = klein_spec(3.0, 0.7);
    TruncationPolicy loose = policy;
    loose.cutoff = 60.0;
    loose.tail_tol = 1.0;
    TruncationPolicy fine = policy;
    fine.cutoff = 240.0;
    fine.tail_tol = 1.0;
    SpectrumStream wide = tilde_spectrum(klein, 0, 240.0);
    double v1 = fredholm_correction(wide, 3.0, 0.0, loose, true).value;
    double v2 = fredholm_correction(wide, 3.0, 0.0, fine, true).value;
    double bound = tail_bound(60.0, 3.0, 0.0, klein.base, 1);
    if (std::abs(v2 - v1) > bound) return 1.0;
    MappingTorusSpec phi = t2_phi_spec();
    SpectrumStream wide2 = tilde_spectrum(phi, 0, 160.0);
    loose.cutoff = 40.0;
    fine.cutoff = 160.0;
    double w1 = fredholm_correction(wide2, 2.0 * kPi, 0.0, loose, true).value;
    double w2 = fredholm_correction(wide2, 2.0 * kPi, 0.0, fine, true).value;
    double bound2 = tail_bound(40.0, 2.0 * kPi, 0.0, phi.base, 1);
    if (std::abs(w2 - w1) > bound2) return 1.0;
  }

  // monotonicity of the shifted determinant in the shift, in the
  // kernel-dominated regime where the resolvent finite part stays positive
  {
    MappingTorusSpec klein = klein_spec(1.0, 0.3);
    TruncationPolicy wide = policy;
    wide.cutoff = 2000.0;
    double previous = -1e300;
    for (double lambda : {0.5, 1.0, 2.0}) {
      double value = mapping_torus_det_shifted(klein, 0, lambda, wide).value;
      if (!(value > previous)) return 1.0;
      previous = value;
    }
  }

  detail = "period swap, correction positivity, tail domination, monotonicity";
  return worst;
}

const std::vector<std::pair<std::string, CheckDef>>& registry() {
  static const std::vector<std::pair<std::string, CheckDef>> checks = {
      {"calibration", {1e-10, check_calibration}},
      {"klein-det", {1e-8, check_klein_det}},
      {"twisted-torus-det", {1e-6, check_twisted_torus_det}},
      {"shift-decomposition", {1e-10, check_shift_decomposition}},
      {"modified-pathway", {1e-10, check_modified_pathway}},
      {"heat-asymptotics", {1e-8, check_heat_asymptotics}},
      {"torsion-dual", {1e-8, check_torsion_dual}},
      {"witten-dual", {1e-8, check_witten_dual}},
      {"lefschetz-dual", {1e-12, check_lefschetz_dual}},
      {"dtn-oracle", {1e-8, check_dtn_oracle}},
      {"properties", {1e-10, check_properties}},
  };
  return checks;
}

}  // namespace

CheckResult run_check(const std::string& name, std::uint64_t seed) {
  for (const auto& [check_name, def] : registry()) {
    if (check_name != name) continue;
    CheckResult result;
    result.name = check_name;
    result.tolerance = def.tolerance;
    auto start = std::chrono::steady_clock::now();
    result.residual = def.residual(seed, result.detail);
    auto stop = std::chrono::steady_clock::now();
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    result.passed = result.residual <= def.tolerance;
    return result;
  }
  throw std::invalid_argument("verify: unknown check '" + name + "'");
}

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& [name, def] : registry()) names.push_back(name);
  return names;
}

std::vector<CheckResult> run_all(const std::string& filter, std::uint64_t seed) {
  std::vector<CheckResult> results;
  for (const auto& [name, def] : registry()) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    results.push_back(run_check(name, seed));
  }
  return results;
}

}  // namespace mtorus::verify
