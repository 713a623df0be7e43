#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "mtorus/numerics.hpp"
#include "mtorus/spectral_model.hpp"

using namespace mtorus;

namespace {

MappingTorusSpec klein_spec(double a, double rho) {
  ManifoldSpec base = ManifoldSpec::circle(rho);
  return MappingTorusSpec(base, IsometrySpec::circle_reflection(base), a);
}

}  // namespace

TEST_CASE("circle spectrum with identity action") {
  ManifoldSpec base = ManifoldSpec::circle(1.0);
  auto s = circle_spectrum(1.0, 0, IsometrySpec::identity(base), 4.5);
  REQUIRE(s.blocks.size() == 3);
  CHECK(s.blocks[0].nu2 == 0.0);
  CHECK(s.blocks[1].nu2 == doctest::Approx(1.0));
  CHECK(s.blocks[2].nu2 == doctest::Approx(4.0));
  for (const auto& b : s.blocks) {
    CHECK(max_abs(b.action - Matrix::identity(b.multiplicity)) == 0.0);
  }
  CHECK(s.blocks[1].multiplicity == 2);
  CHECK(s.blocks[0].multiplicity == 1);
}

TEST_CASE("circle reflection fixes cosines and negates sines") {
  ManifoldSpec base = ManifoldSpec::circle(1.0);
  auto s = circle_spectrum(1.0, 0, IsometrySpec::circle_reflection(base), 1.5);
  REQUIRE(s.blocks.size() == 2);
  const auto& b = s.blocks[1];
  CHECK(b.nu2 == doctest::Approx(1.0));
  CHECK(b.action(0, 0) == 1.0);
  CHECK(b.action(1, 1) == -1.0);
  CHECK(b.action(0, 1) == 0.0);
}

TEST_CASE("circle one-forms flip under reflection") {
  // pull-back of the coframe under theta -> -theta reverses orientation
  ManifoldSpec base = ManifoldSpec::circle(1.0);
  auto s = circle_spectrum(1.0, 1, IsometrySpec::circle_reflection(base), 0.5);
  REQUIRE(s.blocks.size() == 1);
  CHECK(s.blocks[0].nu2 == 0.0);
  CHECK(s.blocks[0].multiplicity == 1);
  CHECK(s.blocks[0].action(0, 0) == -1.0);
}

TEST_CASE("circle spectrum input validation") {
  ManifoldSpec base = ManifoldSpec::circle(1.0);
  ManifoldSpec torus = ManifoldSpec::rect_torus(1.0, 1.0);
  CHECK_THROWS_AS(circle_spectrum(1.0, 0, IsometrySpec::identity(base), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(circle_spectrum(-1.0, 0, IsometrySpec::identity(base), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(circle_spectrum(1.0, 2, IsometrySpec::identity(base), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(circle_spectrum(1.0, 0, IsometrySpec::identity(torus), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(IsometrySpec::circle_reflection(torus), std::invalid_argument);
  CHECK_THROWS_AS(IsometrySpec::torus_swap_shift(base), std::invalid_argument);
  CHECK_THROWS_AS(IsometrySpec::torus_swap_shift(ManifoldSpec::rect_torus(1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("torus shells merge with the expected multiplicities") {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  auto s = torus_spectrum(2.0 * kPi, 2.0 * kPi, 0, IsometrySpec::identity(base), 1.5);
  REQUIRE(s.blocks.size() == 2);
  CHECK(s.blocks[0].nu2 == 0.0);
  CHECK(s.blocks[0].multiplicity == 1);
  CHECK(s.blocks[1].nu2 == doctest::Approx(1.0));
  CHECK(s.blocks[1].multiplicity == 4);
}

TEST_CASE("torus shell counting matches direct lattice enumeration") {
  for (auto [l1, l2] : {std::pair{2.0 * kPi, kPi},
                        std::pair{2.0 * kPi, std::exp(1.0)}}) {
  ManifoldSpec base = ManifoldSpec::rect_torus(l1, l2);
  for (double cutoff : {7.0, 23.0, 61.5}) {
    auto s = torus_spectrum(l1, l2, 0, IsometrySpec::identity(base), cutoff);
    std::size_t total = 0;
    for (const auto& b : s.blocks) total += b.multiplicity;
    std::size_t direct = 0;
    for (int m = -40; m <= 40; ++m)
      for (int n = -40; n <= 40; ++n) {
        double v = std::pow(2.0 * kPi * m / l1, 2) + std::pow(2.0 * kPi * n / l2, 2);
        if (v <= cutoff) ++direct;
      }
    CHECK(total == direct);
    // blocks are sorted with strictly increasing eigenvalues
    for (std::size_t i = 1; i < s.blocks.size(); ++i)
      CHECK(s.blocks[i].nu2 > s.blocks[i - 1].nu2);
  }
  }
}

TEST_CASE("swap-shift shell actions decompose into integer kappa classes") {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  auto iso = IsometrySpec::torus_swap_shift(base);
  auto s = torus_spectrum(2.0 * kPi, 2.0 * kPi, 0, iso, 2.5);

  // shell nu2 = 2 decomposes as one invariant and three reversed directions
  const auto& shell2 = s.blocks.back();
  CHECK(shell2.nu2 == doctest::Approx(2.0));
  Matrix sym = Matrix::identity(shell2.multiplicity) -
               0.5 * (shell2.action + shell2.inverse_action);
  auto kappa = symmetric_eigenvalues(sym);
  REQUIRE(kappa.size() == 4);
  CHECK(kappa[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kappa[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(kappa[3] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("every swap-shift block is orthogonal with kappa in {0,1,2}") {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  auto iso = IsometrySpec::torus_swap_shift(base);
  for (int q : {0, 1, 2}) {
    auto s = torus_spectrum(2.0 * kPi, 2.0 * kPi, q, iso, 30.0);
    for (const auto& b : s.blocks) {
      CHECK(orthogonality_defect(b.action) < 1e-12);
      CHECK(max_abs(b.inverse_action - transpose(b.action)) < 1e-12);
      Matrix sym = Matrix::identity(b.multiplicity) -
                   0.5 * (b.action + b.inverse_action);
      for (double kappa : symmetric_eigenvalues(sym)) {
        bool classified = std::abs(kappa) < 1e-10 || std::abs(kappa - 1.0) < 1e-10 ||
                          std::abs(kappa - 2.0) < 1e-10;
        CHECK(classified);
      }
    }
  }
}

TEST_CASE("harmonic actions of the Klein gluing") {
  auto h = harmonic_actions(klein_spec(2.0 * kPi, 1.0));
  CHECK(h.betti[0] == 1);
  CHECK(h.fixed_dim[0] == 1);
  CHECK(h.moved_block[0].empty());
  CHECK(h.betti[1] == 1);
  CHECK(h.fixed_dim[1] == 0);
  REQUIRE(h.moved_block[1].rows() == 1);
  CHECK(h.moved_block[1](0, 0) == doctest::Approx(2.0));
}

TEST_CASE("harmonic actions of the swap-shift torus") {
  ManifoldSpec base = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  MappingTorusSpec spec(base, IsometrySpec::torus_swap_shift(base), 2.0 * kPi);
  auto h = harmonic_actions(spec);
  CHECK(h.betti == std::vector<int>{1, 2, 1});
  CHECK(h.fixed_dim == std::vector<int>{1, 1, 0});
  CHECK(h.moved_block[0].empty());
  CHECK(h.moved_block[1](0, 0) == doctest::Approx(2.0));
  CHECK(h.moved_block[2](0, 0) == doctest::Approx(2.0));
  // alternating Betti sum vanishes for the flat bases
  CHECK(h.betti[0] - h.betti[1] + h.betti[2] == 0);
}

TEST_CASE("fixed dimensions per degree") {
  ManifoldSpec torus = ManifoldSpec::rect_torus(2.0 * kPi, 2.0 * kPi);
  MappingTorusSpec id_spec(torus, IsometrySpec::identity(torus), 1.0);
  auto dims = fixed_dims(harmonic_actions(id_spec));
  REQUIRE(dims.size() == 3);
  CHECK(dims[0] == std::pair<int, int>{1, 1});
  CHECK(dims[1] == std::pair<int, int>{2, 2});
  CHECK(dims[2] == std::pair<int, int>{1, 1});

  auto refl = fixed_dims(harmonic_actions(klein_spec(1.0, 1.0)));
  CHECK(refl[0] == std::pair<int, int>{1, 1});
  CHECK(refl[1] == std::pair<int, int>{1, 0});
}

TEST_CASE("tilde spectrum merges degrees on shared shells") {
  MappingTorusSpec spec = klein_spec(2.0, 1.0);
  auto tilde = tilde_spectrum(spec, 1, 9.5);
  // shells 0, 1, 4, 9 each carry the functions and the one-forms
  REQUIRE(tilde.blocks.size() == 4);
  CHECK(tilde.blocks[0].multiplicity == 2);  // constants + d theta
  CHECK(tilde.blocks[1].multiplicity == 4);
  CHECK(tilde.frame_mult == 2);
  for (const auto& b : tilde.blocks)
    CHECK(orthogonality_defect(b.action) < 1e-12);
}

TEST_CASE("rotation blocks commute with their inverses") {
  ManifoldSpec base = ManifoldSpec::circle(1.3);
  auto iso = IsometrySpec::circle_rotation(base, 0.7);
  auto s = circle_spectrum(1.3, 0, iso, 20.0);
  for (const auto& b : s.blocks) {
    CHECK(orthogonality_defect(b.action) < 1e-12);
    CHECK(max_abs(b.action * b.inverse_action -
                  Matrix::identity(b.multiplicity)) < 1e-12);
  }
}

TEST_CASE("frame multiplicities are binomial") {
  ManifoldSpec torus = ManifoldSpec::rect_torus(1.0, 1.0);
  CHECK(frame_multiplicity(torus, 0) == 1);
  CHECK(frame_multiplicity(torus, 1) == 2);
  CHECK(frame_multiplicity(torus, 2) == 1);
  CHECK(frame_multiplicity(torus, 3) == 0);
  CHECK(frame_multiplicity(torus, -1) == 0);
}
