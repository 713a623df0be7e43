#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mtorus/fredholm.hpp"
#include "mtorus/numerics.hpp"

using namespace mtorus;

namespace {

MappingTorusSpec klein_spec(double a, double rho) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_reflection(base), a);
}

MappingTorusSpec swap_spec() {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  return MappingTorusSpec(base, IsometrySpec::torus_swap_shift(base), 2.0 * kPi);
}

}  // namespace

TEST_CASE("identity gluing contributes nothing, exactly") {
  ManifoldSpec base = ManifoldSpec::circle(0.8);
  MappingTorusSpec spec(base, IsometrySpec::identity(base), 1.7);
  TruncationPolicy policy;
  auto result = fredholm_correction(tilde_spectrum(spec, 0, policy.cutoff), 1.7,
                                    0.9, policy, false);
  CHECK(result.value == 0.0);
}

TEST_CASE("reflection series matches its closed form") {
  // one invariant and one reversed direction per shell resums to
  // 2 sum_k log(1 + 2/(e^{a k/rho} - 1))
  for (auto [a, rho] : {std::pair{2.0 * kPi, 1.0}, std::pair{3.0, 0.7}}) {
    TruncationPolicy policy;
    auto spec = klein_spec(a, rho);
    auto stream = base_spectrum(spec, 0, policy.cutoff);
    double series =
        fredholm_correction(stream, a, 0.0, policy, true).value;
    KahanSum closed;
    for (int k = 1; k * a / rho < 60.0; ++k)
      closed.add(2.0 * std::log1p(2.0 / std::expm1(a * k / rho)));
    CHECK(series == doctest::Approx(closed.value()).epsilon(1e-13));
  }
}

TEST_CASE("kernel handling at zero shift") {
  TruncationPolicy policy;
  auto spec = klein_spec(2.0, 1.0);
  auto stream = tilde_spectrum(spec, 0, policy.cutoff);
  CHECK_THROWS_AS(fredholm_correction(stream, 2.0, 0.0, policy, false),
                  std::domain_error);
  CHECK_NOTHROW(fredholm_correction(stream, 2.0, 0.0, policy, true));
  CHECK_NOTHROW(fredholm_correction(stream, 2.0, 0.5, policy, false));
}

TEST_CASE("correction is nonnegative and invariant under inverting the gluing") {
  TruncationPolicy policy;
  auto stream = base_spectrum(swap_spec(), 0, policy.cutoff);
  auto swapped = stream;
  for (auto& b : swapped.blocks) std::swap(b.action, b.inverse_action);
  double forward = fredholm_correction(stream, 2.0 * kPi, 0.4, policy, false).value;
  double backward =
      fredholm_correction(swapped, 2.0 * kPi, 0.4, policy, false).value;
  CHECK(forward >= 0.0);
  CHECK(forward == backward);  // depends only on the symmetrized action
}

TEST_CASE("doubling the cutoff moves the value by less than the tail bound") {
  auto spec = klein_spec(3.0, 0.7);
  auto stream = tilde_spectrum(spec, 0, 300.0);
  TruncationPolicy narrow;
  narrow.cutoff = 70.0;
  narrow.tail_tol = 1.0;
  TruncationPolicy wide;
  wide.cutoff = 280.0;
  wide.tail_tol = 1.0;
  double v1 = fredholm_correction(stream, 3.0, 0.0, narrow, true).value;
  double v2 = fredholm_correction(stream, 3.0, 0.0, wide, true).value;
  double bound = tail_bound(70.0, 3.0, 0.0, spec.base, stream.frame_mult);
  CHECK(std::abs(v2 - v1) <= bound);
  CHECK(std::abs(v2 - v1) > 0.0);  // the tail is real
}

TEST_CASE("tail bound is monotone and decays with the interval") {
  ManifoldSpec circle = ManifoldSpec::circle(1.0);
  ManifoldSpec torus = ManifoldSpec::rect_torus(2.0 * kPi, kPi);
  for (const ManifoldSpec& base : {circle, torus}) {
    double previous = 1e300;
    for (double cutoff : {20.0, 40.0, 80.0, 160.0}) {
      double bound = tail_bound(cutoff, 2.0, 0.5, base);
      CHECK(bound < previous);
      previous = bound;
    }
    CHECK(tail_bound(50.0, 8.0, 0.0, base) < tail_bound(50.0, 2.0, 0.0, base));
    CHECK(tail_bound(50.0, 40.0, 0.0, base) < 1e-60);
  }
}

TEST_CASE("insufficient cutoff fails loudly") {
  auto spec = klein_spec(1.0, 1.0);
  auto stream = tilde_spectrum(spec, 0, 4.0);
  TruncationPolicy tight;
  tight.cutoff = 4.0;
  tight.tail_tol = 1e-12;  // unreachable at this cutoff for a = 1
  CHECK_THROWS_AS(fredholm_correction(stream, 1.0, 0.0, tight, true),
                  TruncationError);
}

TEST_CASE("repeated evaluation is bit-identical") {
  TruncationPolicy policy;
  auto stream = base_spectrum(swap_spec(), 0, policy.cutoff);
  double first = fredholm_correction(stream, 2.0 * kPi, 0.0, policy, true).value;
  for (int i = 0; i < 3; ++i) {
    double again = fredholm_correction(stream, 2.0 * kPi, 0.0, policy, true).value;
    CHECK(again == first);
  }
}

TEST_CASE("finite block log-determinants") {
  CHECK(finite_block_logdet(Matrix()) == 0.0);
  Matrix two(1, 1);
  two(0, 0) = 2.0;
  CHECK(finite_block_logdet(two) == doctest::Approx(std::log(2.0)));
  CHECK(finite_block_logdet(Matrix::diagonal({0.5, 3.0})) ==
        doctest::Approx(std::log(0.5) + std::log(3.0)).epsilon(1e-15));
  Matrix bad(1, 1);
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(finite_block_logdet(bad), std::domain_error);
  Matrix spd(3, 3);
  spd(0, 0) = 2.0;
  spd(1, 1) = 3.0;
  spd(2, 2) = 4.0;
  spd(0, 1) = spd(1, 0) = 0.5;
  CHECK(finite_block_logdet(spd) ==
        doctest::Approx(std::log(2.0 * 3.0 - 0.25) + std::log(4.0)).epsilon(1e-14));
}
