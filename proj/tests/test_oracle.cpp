#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mtorus/determinants.hpp"
#include "mtorus/numerics.hpp"
#include "mtorus/oracle.hpp"

using namespace mtorus;

// Calibration gate: every other oracle result is trusted only because the
// continuation machinery reproduces the closed massive-circle determinant
// first.  This case runs before the others in this file.
TEST_CASE("calibration: massive circle determinant to 1e-10") {
  for (double a : {1.0, 2.0 * kPi})
    for (double t : {0.25, 1.0, 4.0}) {
      double got = zeta_det_oracle(circle_modes_raw(a), t * t, false);
      double want = a * t + 2.0 * log1mexp(a * t);
      CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("single eigenvalue reduces to a plain logarithm") {
  auto one = RawSpectrum::finite({{3.7, 1.0}});
  CHECK(zeta_det_oracle(one, 0.0, false) == doctest::Approx(std::log(3.7)));
  auto repeated = RawSpectrum::finite({{2.0, 3.0}, {0.0, 1.0}});
  CHECK(zeta_det_oracle(repeated, 0.0, true) ==
        doctest::Approx(3.0 * std::log(2.0)));
  CHECK_THROWS_AS(zeta_det_oracle(repeated, 0.0, false), std::domain_error);
}

TEST_CASE("round circle determinant matches the classical value") {
  // log Det* = 2 log(2 pi rho)
  for (double rho : {1.0, 0.4}) {
    double got = zeta_det_oracle(circle_modes_raw(2.0 * kPi * rho), 0.0, true);
    CHECK(got == doctest::Approx(2.0 * std::log(2.0 * kPi * rho)).epsilon(1e-12));
  }
}

TEST_CASE("heat trace branches overlap at the crossover for every catalog") {
  std::vector<RawSpectrum> catalog;
  catalog.push_back(circle_modes_raw(1.0));
  catalog.push_back(circle_modes_raw(2.0 * kPi));
  catalog.push_back(rect_torus_raw(2.0 * kPi, 2.0 * kPi));
  catalog.push_back(rect_torus_raw(3.0, 2.0 * kPi * 0.7));
  catalog.push_back(klein_bottle_raw(2.0 * kPi, 1.0));
  catalog.push_back(klein_bottle_raw(3.0, 0.7));
  catalog.push_back(product_t2_s1_raw(2.0 * kPi, 2.0 * kPi, 2.0 * kPi));
  catalog.push_back(t2_phi_raw());
  for (const auto& spec : catalog) {
    double direct = spec.heat_trace_direct(1.0);
    double dual = 0.0;
    for (const auto& [p, c] : spec.algebraic()) dual += c;  // t = 1
    dual += spec.remainder(1.0);
    INFO(spec.name());
    CHECK(std::abs(direct - dual) < 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("heat trace counts the kernel as t grows") {
  CHECK(heat_trace(klein_bottle_raw(2.0 * kPi, 1.0), 60.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(heat_trace(t2_phi_raw(), 80.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("circle heat trace: dual representation at small t") {
  // Poisson self-check: at t = 0.1 the direct sum still converges quickly
  RawSpectrum circle = circle_modes_raw(2.0 * kPi);
  double direct = circle.heat_trace_direct(0.1);
  double dual = heat_trace(circle, 0.1);
  CHECK(std::abs(direct - dual) < 1e-14 * direct);
}

TEST_CASE("Weyl deviation is small at large cutoff") {
  CHECK(weyl_deviation(circle_modes_raw(2.0 * kPi), 400.0) < 0.2);
  CHECK(weyl_deviation(rect_torus_raw(2.0 * kPi, 2.0 * kPi), 400.0) < 0.2);
  CHECK(weyl_deviation(klein_bottle_raw(2.0 * kPi, 1.0), 400.0) < 0.2);
  CHECK(weyl_deviation(t2_phi_raw(), 400.0) < 0.2);
}

TEST_CASE("enumerators are prefix-consistent under cutoff growth") {
  for (const auto& spec :
       {klein_bottle_raw(3.0, 0.7), rect_torus_raw(2.0 * kPi, kPi)}) {
    auto small = spec.enumerate(40.0);
    auto large = spec.enumerate(90.0);
    REQUIRE(large.size() >= small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
      CHECK(small[i].value == doctest::Approx(large[i].value).epsilon(1e-14));
      CHECK(small[i].multiplicity == large[i].multiplicity);
    }
  }
}

TEST_CASE("zeta at -1/2: frozen multiprecision references") {
  // circle of radius rho: -1/(6 rho), from the Riemann zeta at -1
  CHECK(zeta_at_minus_half(circle_modes_raw(2.0 * kPi)) ==
        doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(zeta_at_minus_half(circle_modes_raw(2.0 * kPi * 0.7)) ==
        doctest::Approx(-1.0 / (6.0 * 0.7)).epsilon(1e-12));
  // unit two-torus: 4 zeta(-1/2) beta(-1/2), frozen from a 40-digit
  // evaluation of both Dirichlet series via their functional equations
  CHECK(zeta_at_minus_half(rect_torus_raw(2.0 * kPi, 2.0 * kPi)) ==
        doctest::Approx(-0.22882431037721895335).epsilon(1e-12));
}

TEST_CASE("zeta at 0 equals minus the kernel dimension on flat geometries") {
  CHECK(zeta_at_zero(rect_torus_raw(2.0 * kPi, 2.0 * kPi)) == doctest::Approx(-1.0));
  CHECK(zeta_at_zero(klein_bottle_raw(2.0 * kPi, 1.0)) == doctest::Approx(-1.0));
  CHECK(zeta_at_zero(circle_modes_raw(2.0 * kPi)) == doctest::Approx(-1.0));
}

TEST_CASE("swap-shift shell classification by brute force") {
  auto shell0 = swap_shift_shell_kappa(0);
  CHECK(shell0 == std::array<int, 3>{1, 0, 0});
  auto shell1 = swap_shift_shell_kappa(1);
  CHECK(shell1 == std::array<int, 3>{0, 4, 0});
  auto shell2 = swap_shift_shell_kappa(2);
  CHECK(shell2 == std::array<int, 3>{1, 0, 3});
  auto shell3 = swap_shift_shell_kappa(3);  // not a sum of two squares
  CHECK(shell3 == std::array<int, 3>{0, 0, 0});
  // counts always exhaust the shell
  for (int e = 0; e <= 50; ++e) {
    auto k = swap_shift_shell_kappa(e);
    int r2 = 0;
    int r = static_cast<int>(std::sqrt(static_cast<double>(e))) + 1;
    for (int m = -r; m <= r; ++m)
      for (int n = -r; n <= r; ++n)
        if (m * m + n * n == e) ++r2;
    CHECK(k[0] + k[1] + k[2] == r2);
  }
}

TEST_CASE("heat trace difference: algebraic parts cancel exactly") {
  RawSpectrum klein = klein_bottle_raw(2.0 * kPi, 1.0);
  RawSpectrum torus = rect_torus_raw(2.0 * kPi, 2.0 * kPi);
  for (double t : {0.05, 0.1, 0.2}) {
    double refined = heat_trace_difference(klein, torus, t);
    CHECK(std::abs(refined) < 1e-8);
    CHECK(std::abs(refined) > 0.0);  // exponentially small, not identically zero
    // plain difference is dominated by roundoff of the large common part
    CHECK(std::abs(heat_trace(klein, t) - heat_trace(torus, t)) < 1e-8);
  }
  // mismatched expansions are rejected
  CHECK_THROWS_AS(
      heat_trace_difference(klein, rect_torus_raw(2.0 * kPi, kPi), 0.1),
      std::domain_error);
}

TEST_CASE("shifted torus determinant against the column decomposition") {
  // Every lattice column is exactly a massive circle, so the determinant
  // decomposes as sum_m [ L w_m + 2 log(1 - e^{-L w_m}) ] with a divergent
  // linear part that regularization absorbs.  A second difference in the
  // shift kills the linear part absolutely, leaving a convergent identity
  // the continuation must reproduce.
  const double l1 = 2.0 * kPi, l2 = 2.0 * kPi;
  const double shifts[3] = {0.9, 1.3, 1.7};
  const double weights[3] = {1.0, -2.0, 1.0};
  RawSpectrum torus = rect_torus_raw(l1, l2);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i)
    lhs += weights[i] * zeta_det_oracle(torus, shifts[i], false);
  KahanSum rhs;
  for (int m = -2000; m <= 2000; ++m) {
    double base = std::pow(2.0 * kPi * m / l1, 2);
    double combo = 0.0;
    for (int i = 0; i < 3; ++i) {
      double w = std::sqrt(base + shifts[i]);
      combo += weights[i] * (l2 * w + 2.0 * log1mexp(l2 * w));
    }
    rhs.add(combo);
  }
  CHECK(lhs == doctest::Approx(rhs.value()).epsilon(5e-7));
}
