#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kahler/cones.hpp"
#include "kahler/errors.hpp"
#include "kahler/models.hpp"
#include "oracles.hpp"

using namespace kahler;

TEST_CASE("Fubini-Study components") {
  const auto t = fubini_study(2, 4);
  CHECK(t(0, 0, 0, 0) == Complex(4.0));
  CHECK(t(0, 0, 1, 1) == Complex(2.0));
  CHECK(t(0, 1, 1, 0) == Complex(2.0));
  CHECK(t(0, 1, 0, 1) == Complex(0.0));
  for (int n = 1; n <= 4; ++n) CHECK(max_abs_difference(fubini_study(n, 3.0), oracle::fs(n, 1.5)) == 0.0);
}

TEST_CASE("surface and flat") {
  const auto s = riemann_surface(-4);
  CHECK(s.dim() == 1);
  CHECK(s(0, 0, 0, 0) == Complex(-4.0));
  CHECK(holomorphic_sectional(s, CVector::Unit(1, 0)) == doctest::Approx(-4.0));
  CHECK(flat(3).norm() == 0.0);
  CHECK_THROWS(flat(0));
}

TEST_CASE("product keeps blocks apart") {
  const auto a = riemann_surface(-4), b = fubini_study(2, 4);
  const auto p = product(a, b);
  REQUIRE(p.dim() == 3);
  CHECK(p(0, 0, 0, 0) == Complex(-4.0));
  CHECK(p(1, 1, 2, 2) == Complex(2.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const bool first = i == 0 && j == 0 && k == 0 && l == 0;
          const bool second = i > 0 && j > 0 && k > 0 && l > 0;
          if (!first && !second) CHECK(p(i, j, k, l) == Complex(0.0));
        }
  CHECK(evaluate_bisectional(p, CVector::Unit(3, 0), CVector::Unit(3, 1)) == 0.0);
  CHECK(p == example_1_2(2));
  // associativity
  const auto c = flat(1);
  CHECK(product(product(a, b), c) == product(a, product(b, c)));
}

TEST_CASE("cross-block diagonal sums are kappa plus holomorphic sectional") {
  const auto p = product(riemann_surface(-1.5), fubini_study(2, 3.0));
  const auto d = derived_inequalities(p, 1e-12);
  for (const auto& pr : d.pairs) {
    if (pr.alpha == 0 || pr.beta == 0) CHECK(pr.diagonal == doctest::Approx(1.5));
  }
}

TEST_CASE("make_model dispatches on the spec") {
  CHECK(make_model(FubiniStudySpec{3, 4.0}) == fubini_study(3, 4.0));
  CHECK(make_model(SurfaceSpec{2.0}) == riemann_surface(2.0));
  CHECK(make_model(FlatSpec{2}) == flat(2));
}

TEST_CASE("random_symmetric is symmetric and deterministic") {
  const auto a = random_symmetric(42, 3), b = random_symmetric(42, 3), c = random_symmetric(43, 3);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(oracle::symmetry_defect(a) < 1e-14);
}

TEST_CASE("cone samples certify, have unit norm and are reproducible") {
  for (int n = 2; n <= 3; ++n)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto s = sample_cone_detailed(seed, n);
      CHECK(s.tensor.norm() == doctest::Approx(1.0));
      CHECK(s.shift >= 0.0);
      CHECK(oracle::symmetry_defect(s.tensor) < 1e-13);
      CertifyOptions o;
      o.seed = 1000 + seed;
      CHECK(certify(s.tensor, Condition::OHB, o).min_value >= -1e-8);
      CHECK(sample_cone(seed, n) == s.tensor);
    }
  CHECK_THROWS_AS(sample_cone(0, 1), PreconditionError);
}
