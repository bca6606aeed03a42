#include <doctest.h>

#include <random>

#include "crosswitch/error.hpp"
#include "crosswitch/fields.hpp"
#include "crosswitch/polynomial.hpp"
#include "crosswitch/roots.hpp"
#include "support.hpp"

using namespace crosswitch;
using namespace testsupport;

TEST_CASE("polynomial canonical form merges and drops terms") {
  const Polynomial p{{1.0, 1, 0}, {2.0, 0, 1}, {-1.0, 1, 0}, {1e-17, 2, 2}};
  REQUIRE(p.terms().size() == 1);
  CHECK(p.coeff(0, 1) == 2.0);
  CHECK(p.coeff(1, 0) == 0.0);
  CHECK(Polynomial{{0.0, 3, 3}}.is_zero());
  CHECK(Polynomial{{1.0, 2, 1}, {1.0, 0, 0}}.total_degree() == 3);
}

TEST_CASE("evaluation and derivatives of x1^2 x2 + 3 x2 - 1") {
  const Polynomial p{{1.0, 2, 1}, {3.0, 0, 1}, {-1.0, 0, 0}};
  CHECK(p(2.0, -1.0) == doctest::Approx(-4.0 - 3.0 - 1.0));
  CHECK(p.derivative(1) == Polynomial{{2.0, 1, 1}});
  CHECK(p.derivative(2) == Polynomial{{1.0, 2, 0}, {3.0, 0, 0}});
  CHECK(p.restrict_to_zero(1) == UniPoly{-1.0, 3.0});
  CHECK(p.restrict_to_zero(2) == UniPoly{-1.0});
  CHECK(p.swapped() == Polynomial{{1.0, 1, 2}, {3.0, 1, 0}, {-1.0, 0, 0}});
}

TEST_CASE("polynomial ring operations agree with pointwise arithmetic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n < 200; ++n) {
    const Polynomial p = random_poly(rng, 3), q = random_poly(rng, 2);
    const double x1 = u(rng), x2 = u(rng);
    CHECK((p + q)(x1, x2) == doctest::Approx(p(x1, x2) + q(x1, x2)).epsilon(1e-12));
    CHECK((p - q)(x1, x2) == doctest::Approx(p(x1, x2) - q(x1, x2)).epsilon(1e-12));
    CHECK((p * q)(x1, x2) == doctest::Approx(p(x1, x2) * q(x1, x2)).epsilon(1e-12));
    // derivative against a central difference
    const double e = 1e-6;
    CHECK(p.derivative(1)(x1, x2) == doctest::Approx((p(x1 + e, x2) - p(x1 - e, x2)) / (2 * e)).epsilon(1e-6));
    CHECK(p.derivative(2)(x1, x2) == doctest::Approx((p(x1, x2 + e) - p(x1, x2 - e)) / (2 * e)).epsilon(1e-6));
  }
}

TEST_CASE("univariate polynomial arithmetic") {
  const UniPoly p{1.0, -3.0, 2.0};  // (1 - x)(1 - 2x)
  CHECK(p(1.0) == 0.0);
  CHECK(p(0.5) == 0.0);
  CHECK(p.derivative() == UniPoly{-3.0, 4.0});
  CHECK((p * UniPoly{0.0, 1.0}) == UniPoly{0.0, 1.0, -3.0, 2.0});
  CHECK((p - p).is_zero());
  CHECK(UniPoly{0.0, 0.0}.degree() == -1);
}

TEST_CASE("scan_roots finds simple roots and flags the zero polynomial") {
  const UniPoly p{-0.06, 0.11, -0.6 + 0.6, 0.0};  // linear after trimming
  auto r = scan_roots(UniPoly{0.06, -0.5, 1.0}, -1.0, 1.0);  // (x - 0.2)(x - 0.3)
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.roots[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(scan_roots(UniPoly{}, -1, 1).identically_zero);
  CHECK(scan_roots(p, -1, 1).roots.size() == 1);
  // a root sitting on a grid node
  auto node = scan_roots(UniPoly{0.0, 1.0}, -1.0, 1.0);
  REQUIRE(node.roots.size() == 1);
  CHECK(node.roots[0] == 0.0);
}

TEST_CASE("field construction validates degree and finiteness") {
  CHECK_THROWS_AS(FieldSpec(Polynomial{{1.0, 9, 0}}, Polynomial{}), Error);
  try {
    FieldSpec(Polynomial{{std::nan(""), 0, 0}}, Polynomial{});
    FAIL("expected InvalidField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidField);
  }
  const FieldSpec f(Polynomial{{1.0, 1, 0}}, Polynomial{{2.0, 0, 0}});
  CHECK(f.negated()(Point2{3.0, 0.0})[0] == -3.0);
  CHECK(f.swapped()(Point2{0.0, 3.0})[1] == 3.0);
}

TEST_CASE("regions and active field") {
  CHECK(region_of({1, 1}) == RegionLabel::UplusPlus);
  CHECK(region_of({-1, -1}) == RegionLabel::UplusMinus);
  CHECK(region_of({1, -1}) == RegionLabel::UminusMinus);
  CHECK(region_of({-1, 1}) == RegionLabel::UminusPlus);
  CHECK(region_of({0, 2}) == RegionLabel::Sigma1Plus);
  CHECK(region_of({-2, 0}) == RegionLabel::Sigma2Minus);
  CHECK(region_of({0, 0}) == RegionLabel::Origin);
  CHECK(active_side({1, 1}) == Side::X);
  CHECK(active_side({-1, -1}) == Side::X);
  CHECK(active_side({-1, 1}) == Side::Y);
  const auto z = constant_system(1, 2, 3, 4);
  CHECK(z.det_at({0, 0}) == 1 * 4 - 2 * 3);
}
