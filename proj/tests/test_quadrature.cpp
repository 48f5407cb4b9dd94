#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cauchycr/quadrature.hpp"
#include "cauchycr/util.hpp"

using namespace cauchycr;

namespace {

double seg_integral(const std::array<double, 2>& a, const std::array<double, 2>& b, int degree,
                    double (*f)(double, double)) {
  double s = 0.0;
  for (const auto& q : face_quadrature(a, b, degree)) s += q.w * f(q.x, q.y);
  return s;
}

// closed form for x^p y^q over the unit triangle: p! q! / (p+q+2)!
double unit_tri_monomial(int p, int q) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(p) * fact(q) / fact(p + q + 2);
}

} // namespace

TEST_CASE("segment rule: degree 1 is the midpoint rule") {
  const auto rule = face_quadrature({0.0, 0.0}, {1.0, 0.0}, 1);
  REQUIRE(rule.size() == 1);
  CHECK(rule[0].x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rule[0].w == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("segment rule integrates monomials exactly up to the declared degree") {
  for (int degree = 1; degree <= 10; ++degree) {
    const auto rule = face_quadrature({0.25, -1.0}, {2.25, 0.5}, degree);
    const double len = std::hypot(2.0, 1.5);
    for (int p = 0; p <= degree; ++p) {
      double got = 0.0;
      for (const auto& q : rule) {
        const double s = (q.x - 0.25) / 2.0; // arc parameter in [0,1]
        got += q.w * std::pow(s, p);
      }
      const double expect = len / (p + 1);
      CHECK(std::abs(got - expect) <= 1e-13 * expect);
    }
  }
}

TEST_CASE("segment weights sum to the length") {
  for (int degree : {1, 4, 9}) {
    double s = 0.0;
    for (const auto& q : face_quadrature({0.0, 0.0}, {M_PI, 0.0}, degree)) s += q.w;
    CHECK(s == doctest::Approx(M_PI).epsilon(1e-14));
  }
}

TEST_CASE("triangle rule: weights sum to the area") {
  for (int degree = 1; degree <= 10; ++degree) {
    double s = 0.0;
    for (const auto& q : triangle_quadrature({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, degree)) s += q.w;
    CHECK(s == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("triangle rule integrates monomials exactly up to the declared degree") {
  for (int degree = 1; degree <= 10; ++degree) {
    const auto rule = triangle_quadrature({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, degree);
    for (int p = 0; p <= degree; ++p) {
      for (int q = 0; p + q <= degree; ++q) {
        double got = 0.0;
        for (const auto& pt : rule) got += pt.w * std::pow(pt.x, p) * std::pow(pt.y, q);
        const double expect = unit_tri_monomial(p, q);
        CHECK(std::abs(got - expect) <= 1e-13);
      }
    }
  }
}

TEST_CASE("sin^2 over (0,pi) via degree-9 faces on 32 subdivisions") {
  double s = 0.0;
  for (int k = 0; k < 32; ++k) {
    const double x0 = M_PI * k / 32.0, x1 = M_PI * (k + 1) / 32.0;
    s += seg_integral({x0, 0.0}, {x1, 0.0}, 9,
                      [](double x, double) { return std::sin(x) * std::sin(x); });
  }
  CHECK(std::abs(s - M_PI / 2.0) <= 1e-10);
}

TEST_CASE("unsupported degrees are rejected") {
  CHECK_THROWS_AS(face_quadrature({0.0, 0.0}, {1.0, 0.0}, 0), ValidationError);
  CHECK_THROWS_AS(face_quadrature({0.0, 0.0}, {1.0, 0.0}, 11), ValidationError);
  CHECK_THROWS_AS(triangle_quadrature({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, 11), ValidationError);
}
