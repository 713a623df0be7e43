#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mtorus/numerics.hpp"
#include "mtorus/determinants.hpp"
#include "mtorus/torsion.hpp"

using namespace mtorus;

namespace {

MappingTorusSpec klein_spec(double a, double rho) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_reflection(base), a);
}

MappingTorusSpec rotation_spec(double a, double rho, double angle) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_rotation(base, angle), a);
}

MappingTorusSpec identity_circle(double a, double rho) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::identity(base), a);
}

MappingTorusSpec swap_spec() {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  return MappingTorusSpec(base, IsometrySpec::torus_swap_shift(base), 2.0 * kPi);
}

}  // namespace

TEST_CASE("Lefschetz numbers of the model isometries") {
  auto identity = harmonic_actions(identity_circle(1.0, 1.0));
  for (int k : {1, 2, 5}) CHECK(lefschetz_number(identity, k) == 0);

  auto reflection = harmonic_actions(klein_spec(1.0, 1.0));
  for (int k = 1; k <= 10; ++k)
    CHECK(lefschetz_number(reflection, k) == (k % 2 == 1 ? 2 : 0));

  auto swap = harmonic_actions(swap_spec());
  for (int k = 1; k <= 8; ++k) CHECK(lefschetz_number(swap, k) == 0);

  ManifoldSpec t2 = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  auto torus_id =
      harmonic_actions(MappingTorusSpec(t2, IsometrySpec::identity(t2), 1.0));
  for (int k : {1, 3, 7}) CHECK(lefschetz_number(torus_id, k) == 0);

  CHECK_THROWS_AS(lefschetz_number(reflection, 0), std::domain_error);
}

TEST_CASE("memoized Lefschetz sequence matches the direct route") {
  auto h = harmonic_actions(klein_spec(1.0, 1.0));
  LefschetzData data(h);
  for (int k : {1, 2, 3, 10, 25})
    CHECK(data.number(k) == lefschetz_number(h, k));
  CHECK_THROWS_AS(data.number(0), std::domain_error);
}

TEST_CASE("Lefschetz numbers are invariant under inverting the map") {
  for (const auto& spec :
       {klein_spec(1.0, 1.0), rotation_spec(1.0, 1.0, 0.9), swap_spec()}) {
    auto h = harmonic_actions(spec);
    auto ht = h;
    for (auto& a : ht.action) a = transpose(a);
    for (int k = 1; k <= 50; ++k)
      CHECK(lefschetz_number(h, k) == lefschetz_number(ht, k));
  }
}

TEST_CASE("Lefschetz zeta of the reflection resums to a logarithm") {
  auto h = harmonic_actions(klein_spec(1.0, 1.0));
  for (double t : {-0.9, -0.3, 0.1, 0.5, 0.9}) {
    double expected = std::log((1.0 + t) / (1.0 - t));
    CHECK(lefschetz_zeta_log(h, t) == doctest::Approx(expected).epsilon(1e-13));
  }
  auto id = harmonic_actions(identity_circle(1.0, 1.0));
  for (double t : {-0.5, 0.4}) CHECK(lefschetz_zeta_log(id, t) == 0.0);
  CHECK_THROWS_AS(lefschetz_zeta_log(h, 1.0), std::domain_error);
}

TEST_CASE("analytic torsion closed form on the model geometries") {
  // reflection gluing: log(a/2)
  for (double a : {2.0 * kPi, 3.0, 0.5})
    CHECK(analytic_torsion(klein_spec(a, 1.0)) ==
          doctest::Approx(std::log(a / 2.0)).epsilon(1e-15));
  // orientation-preserving circle gluings vanish
  CHECK(analytic_torsion(rotation_spec(2.0, 1.0, 0.7)) == 0.0);
  CHECK(analytic_torsion(identity_circle(2.0, 1.0)) == 0.0);
  // swap-shift torus: all terms cancel
  CHECK(analytic_torsion(swap_spec()) == doctest::Approx(0.0));
}

TEST_CASE("defining assembly agrees with the closed form") {
  TruncationPolicy policy;
  for (auto [a, rho] : {std::pair{2.0 * kPi, 1.0}, std::pair{3.0, 0.7}}) {
    double closed = analytic_torsion(klein_spec(a, rho));
    double assembled = torsion_from_definition(klein_spec(a, rho), policy);
    CHECK(std::abs(closed - assembled) < 1e-8);
  }
  CHECK(std::abs(torsion_from_definition(rotation_spec(2.0, 1.0, 0.7), policy)) <
        1e-10);
  CHECK(std::abs(torsion_from_definition(identity_circle(2.0, 0.9), policy)) <
        1e-10);
  CHECK(std::abs(torsion_from_definition(swap_spec(), policy)) < 1e-8);
}

TEST_CASE("alternating determinant sum over all degrees vanishes") {
  // the same cancellation that collapses the torsion assembly: products,
  // prefactors, harmonic blocks and corrections all telescope degreewise
  TruncationPolicy policy;
  for (const auto& spec : {klein_spec(2.0 * kPi, 1.0), klein_spec(3.0, 0.7),
                           rotation_spec(2.0, 1.0, 0.7), swap_spec()}) {
    KahanSum alternating;
    for (int q = 0; q <= spec.base.dimension + 1; ++q) {
      double sign = (q % 2 == 0) ? 1.0 : -1.0;
      alternating.add(sign * mapping_torus_det_modified(spec, q, policy).value);
    }
    CHECK(std::abs(alternating.value()) < 1e-10);
  }
}

TEST_CASE("deformed torsion of the reflection gluing") {
  for (double a : {2.0 * kPi, 3.0})
    for (double t : {0.5, 1.0, 2.0}) {
      double expected =
          -std::log((1.0 + std::exp(-a * t)) / (1.0 - std::exp(-a * t)));
      CHECK(witten_torsion(klein_spec(a, 1.0), t) ==
            doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("deformed torsion pathways agree at several parameters") {
  TruncationPolicy policy;
  for (double t : {0.5, 1.0, 2.0}) {
    for (const auto& spec : {klein_spec(2.0 * kPi, 1.0), klein_spec(3.0, 0.7),
                             swap_spec()}) {
      double direct = witten_torsion(spec, t);
      double assembled = witten_torsion_assembled(spec, t, policy);
      CHECK(std::abs(direct - assembled) < 1e-8);
    }
  }
}

TEST_CASE("orientation-preserving circle gluings keep only the linear term") {
  TruncationPolicy policy;
  for (double t : {0.5, 1.0, 2.0}) {
    // chi of the circle vanishes, so both routes return exactly zero
    CHECK(witten_torsion(rotation_spec(1.5, 0.8, 1.1), t) == 0.0);
    CHECK(witten_torsion_assembled(rotation_spec(1.5, 0.8, 1.1), t, policy) == 0.0);
  }
}

TEST_CASE("deformed torsion approaches the linear term exponentially") {
  MappingTorusSpec spec = klein_spec(2.0, 1.0);
  double previous = 1.0;
  for (double t : {2.0, 3.0, 4.0}) {
    double deviation = std::abs(witten_torsion(spec, t));  // chi = 0
    CHECK(deviation < 3.0 * std::exp(-2.0 * t));
    CHECK(deviation < previous);
    previous = deviation;
  }
}
