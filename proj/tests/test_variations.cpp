#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "kahler/errors.hpp"
#include "kahler/models.hpp"
#include "kahler/variations.hpp"
#include "oracles.hpp"

using namespace kahler;

namespace {

std::vector<VariationFamily> first_order_families(int n, int a, int b) {
  std::vector<VariationFamily> out{VariationFamily::rotation_real(n, a, b), VariationFamily::rotation_imag(n, a, b)};
  for (int m = 0; m < n; ++m) {
    if (m == a || m == b) continue;
    out.push_back(VariationFamily::translation_real(n, a, b, m));
    out.push_back(VariationFamily::translation_imag(n, a, b, m));
    out.push_back(VariationFamily::translation_beta_slot(n, a, b, m));
  }
  return out;
}

// u along the curve by the direct contraction, then a five-point stencil.
double oracle_derivative(const KahlerCurvatureTensor& t, const VariationFamily& f, int order) {
  const double h = 1e-3;
  auto u = [&](double s) {
    const auto fr = frame_curve(f, s);
    return oracle::bisectional(t, fr.x, fr.y).real();
  };
  if (order == 1) return (-u(2 * h) + 8 * u(h) - 8 * u(-h) + u(-2 * h)) / (12 * h);
  return 0.5 * (-u(2 * h) + 16 * u(h) - 30 * u(0) + 16 * u(-h) - u(-2 * h)) / (12 * h * h);
}

VariationFamily random_second_order(std::mt19937_64& g, int n, int a, int b) {
  CVector wa = oracle::gaussian(g, n), wb = oracle::gaussian(g, n);
  wa[a] = wa[b] = wb[a] = wb[b] = 0.0;
  return VariationFamily::second_order(a, b, wa.normalized(), wb.normalized());
}

}  // namespace

TEST_CASE("frames along rotation and translation curves stay orthonormal") {
  for (const auto& f : first_order_families(4, 1, 3))
    for (double s : {-0.3, 0.0, 0.2, 1.0}) CHECK(frame_curve(f, s).defect() < 1e-14);
}

TEST_CASE("second-order curve is orthonormal to third order") {
  std::mt19937_64 g(1);
  const auto f = random_second_order(g, 4, 0, 2);
  const double d1 = frame_curve(f, 1e-2).defect(), d2 = frame_curve(f, 5e-3).defect();
  CHECK(d1 < 1e-4);
  CHECK(d1 / d2 > 7.0);
}

TEST_CASE("first variations match the stencil") {
  std::mt19937_64 g(2);
  for (int n = 2; n <= 4; ++n) {
    const auto t = oracle::generic(g, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        for (const auto& f : first_order_families(n, a, b)) {
          INFO(to_string(f.kind), " ", a, " ", b, " ", f.mu);
          CHECK(first_variation(t, f) == doctest::Approx(oracle_derivative(t, f, 1)).epsilon(1e-7).scale(t.norm()));
        }
        if (n >= 3) {
          const auto f = random_second_order(g, n, a, b);
          CHECK(first_variation(t, f) == doctest::Approx(oracle_derivative(t, f, 1)).epsilon(1e-7).scale(t.norm()));
          CHECK(second_variation(t, f) == doctest::Approx(oracle_derivative(t, f, 2)).epsilon(1e-6).scale(t.norm()));
        }
      }
  }
}

TEST_CASE("library stencils converge at second order") {
  std::mt19937_64 g(3);
  const auto t = oracle::generic(g, 3);
  const auto f = random_second_order(g, 3, 0, 1);
  const double exact = second_variation(t, f);
  const double e1 = std::abs(finite_difference_second(t, f, 2e-3) - exact);
  const double e2 = std::abs(finite_difference_second(t, f, 1e-3) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  const auto r = VariationFamily::rotation_real(3, 0, 1);
  const double x = first_variation(t, r);
  CHECK(std::abs(finite_difference_first(t, r, 2e-3) - x) / std::abs(finite_difference_first(t, r, 1e-3) - x) ==
        doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rotations are stationary on Fubini-Study") {
  const auto t = fubini_study(3, 4);
  for (const auto& f : first_order_families(3, 0, 1)) CHECK(std::abs(first_variation(t, f)) < 1e-14);
}

TEST_CASE("variation family preconditions") {
  CHECK_THROWS_AS(VariationFamily::rotation_real(3, 1, 1), PreconditionError);
  CHECK_THROWS_AS(VariationFamily::translation_real(3, 0, 1, 1), PreconditionError);
  CHECK_THROWS_AS(VariationFamily::translation_imag(3, 0, 1, 5), PreconditionError);
  CVector w = CVector::Ones(3);
  CHECK_THROWS_AS(VariationFamily::second_order(0, 1, w, CVector::Zero(3)), PreconditionError);
  CHECK_THROWS_AS(VariationFamily::second_order(0, 1, CVector::Zero(3), CVector::Zero(4)), StructuralError);
  CHECK_THROWS_AS(second_variation(fubini_study(3, 4), VariationFamily::rotation_real(3, 0, 1)), PreconditionError);
  CHECK_THROWS_AS(first_variation(fubini_study(2, 4), VariationFamily::rotation_real(3, 0, 1)), StructuralError);
}

TEST_CASE("block gap") {
  CHECK(block_psd_gap(fubini_study(3, 4), 0, 1) == doctest::Approx(4.0));
  std::mt19937_64 g(4);
  const auto t = oracle::generic(g, 4);
  Complex direct{};
  for (int m = 2; m < 4; ++m)
    for (int v = 2; v < 4; ++v) direct += t(0, 0, m, v) * t(v, m, 1, 1) - std::norm(t(0, m, 1, v));
  CHECK(block_psd_gap(t, 0, 1) == doctest::Approx(direct.real()).epsilon(1e-12));
  CHECK_THROWS_AS(block_psd_gap(fubini_study(2, 4), 0, 1), PreconditionError);
}

TEST_CASE("rotation propagation on split tensors") {
  std::mt19937_64 g(5);
  const auto t = product(oracle::generic(g, 2), oracle::generic(g, 2));
  for (double th : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
    const auto r = rotation_propagation(t, 0, 3, th, 1e-12);
    CHECK(r.residual < 1e-12);
    CVector x = CVector::Zero(4), y = CVector::Zero(4);
    x[0] = std::sin(th), x[3] = -std::cos(th);
    y[0] = std::cos(th), y[3] = std::sin(th);
    CHECK(r.expansion_value == doctest::Approx(oracle::bisectional(t, x, y).real()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rotation_propagation(fubini_study(2, 4), 0, 1, 0.3, 1e-12), PreconditionError);
}

TEST_CASE("zero-set chain") {
  const auto split = product(riemann_surface(0.7), riemann_surface(-0.7));
  auto rep = zero_set_chain(split, 1e-12);
  CHECK(rep.all_pairs_zero_set);
  CHECK(rep.rotated_zeros);
  CHECK(std::abs(rep.scalar) < 1e-12);
  CHECK(rep.consistent);

  rep = zero_set_chain(product(product(riemann_surface(1), riemann_surface(1)), riemann_surface(1)), 1e-12);
  CHECK(rep.all_pairs_zero_set);
  CHECK_FALSE(rep.rotated_zeros);
  CHECK(rep.consistent);

  rep = zero_set_chain(fubini_study(2, 4), 1e-12);
  CHECK_FALSE(rep.all_pairs_zero_set);
}
