#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcq/roots.hpp"

using tcq::real_roots;

TEST_CASE("linear and quadratic closed forms") {
  auto r = real_roots({-6.0, 2.0});  // 2x - 6
  REQUIRE(r.roots.size() == 1);
  CHECK(r.roots[0] == doctest::Approx(3.0));

  r = real_roots({2.0, -3.0, 1.0});  // (x-1)(x-2)
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == doctest::Approx(1.0));
  CHECK(r.roots[1] == doctest::Approx(2.0));

  r = real_roots({1.0, 0.0, 1.0});  // x^2 + 1
  CHECK(r.roots.empty());

  r = real_roots({});
  CHECK(r.identically_zero);
  r = real_roots({0.0, 0.0});
  CHECK(r.identically_zero);
}

TEST_CASE("double roots are recovered to full accuracy") {
  // (3x - 1)^2 = 9x^2 - 6x + 1, the slack polynomial of the worked example
  auto r = real_roots({1.0, -6.0, 9.0});
  REQUIRE(r.roots.size() >= 1);
  CHECK(std::abs(r.roots.front() - 1.0 / 3.0) < 1e-9);

  // cubic with a double root: (x-2)^2 (x+1)
  r = real_roots({4.0, 0.0, -3.0, 1.0});
  REQUIRE(r.roots.size() >= 2);
  CHECK(std::abs(r.roots.front() + 1.0) < 1e-9);
  CHECK(std::abs(r.roots.back() - 2.0) < 1e-8);
}

TEST_CASE("companion-matrix path for higher degrees") {
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
  auto r = real_roots({-6.0, 11.0, -6.0, 1.0});
  REQUIRE(r.roots.size() == 3);
  CHECK(r.roots[0] == doctest::Approx(1.0));
  CHECK(r.roots[1] == doctest::Approx(2.0));
  CHECK(r.roots[2] == doctest::Approx(3.0));

  // x^4 - 1: two real roots
  r = real_roots({-1.0, 0.0, 0.0, 0.0, 1.0});
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == doctest::Approx(-1.0));
  CHECK(r.roots[1] == doctest::Approx(1.0));
}

TEST_CASE("real_roots_in filters the open interval") {
  const auto roots = tcq::real_roots_in({-6.0, 11.0, -6.0, 1.0}, 1.5, 10.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(2.0));
  CHECK(roots[1] == doctest::Approx(3.0));
}

TEST_CASE("bisection locates a sign change") {
  const double x =
      tcq::bisect([](double t) { return t * t * t - 2.0; }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(x - std::cbrt(2.0)) < 1e-10);
}

TEST_CASE("power_roots honors exponent parity") {
  auto r = tcq::power_roots(8.0, 3);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0));
  r = tcq::power_roots(-8.0, 3);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(-2.0));

  r = tcq::power_roots(4.0, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(-2.0));
  CHECK(tcq::power_roots(-4.0, 2).empty());
  r = tcq::power_roots(0.0, 2);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 0.0);
}
