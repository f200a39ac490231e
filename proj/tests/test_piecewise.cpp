#include <doctest.h>

#include <cmath>
#include <complex>

#include "specshift/piecewise.hpp"

using namespace specshift;

namespace {
const cplx I(0.0, 1.0);

PiecewisePolynomial indicator01() {
  return PiecewisePolynomial({0.0, 1.0}, {{1.0}}, 0.0, 0.0);
}

PiecewisePolynomial ramp01() {  // 1 - t on [0, 1)
  return PiecewisePolynomial({0.0, 1.0}, {{1.0, -1.0}}, 0.0, 0.0);
}
}  // namespace

TEST_CASE("evaluation and interval convention") {
  PiecewisePolynomial P = indicator01();
  CHECK(P(-0.5) == 0.0);
  CHECK(P(0.0) == 1.0);  // left-closed
  CHECK(P(0.5) == 1.0);
  CHECK(P(1.0) == 0.0);
  CHECK(P.degree() == 0);
  CHECK(P.compactly_supported());
}

TEST_CASE("integral and antiderivative") {
  PiecewisePolynomial P = indicator01();
  CHECK(P.integral() == doctest::Approx(1.0).epsilon(1e-14));
  PiecewisePolynomial A = P.antiderivative();
  CHECK(A(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(A(-1.0) == 0.0);
  CHECK(A(5.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ramp01().integral() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("combine on merged grids") {
  PiecewisePolynomial Q({0.5, 2.0}, {{2.0}}, 0.0, 0.0);
  PiecewisePolynomial S = PiecewisePolynomial::combine(indicator01(), 1.0, Q, 0.5);
  CHECK(S(0.25) == doctest::Approx(1.0));
  CHECK(S(0.75) == doctest::Approx(2.0));
  CHECK(S(1.5) == doctest::Approx(1.0));
  CHECK(S(3.0) == 0.0);
}

TEST_CASE("plus_constant, scaled, with_tails") {
  PiecewisePolynomial P = indicator01().plus_constant(1.0);
  CHECK(P(-1.0) == 1.0);
  CHECK(P(0.5) == 2.0);
  CHECK(P.scaled(3.0)(0.5) == 6.0);
  CHECK(P.with_tails(0.0, 0.0)(-1.0) == 0.0);
}

TEST_CASE("coefficient comparison detects mismatch") {
  CHECK(PiecewisePolynomial::max_coefficient_deviation(indicator01(), indicator01()) ==
        0.0);
  PiecewisePolynomial Q({0.0, 1.0}, {{1.0, 1e-3}}, 0.0, 0.0);
  CHECK(PiecewisePolynomial::max_coefficient_deviation(indicator01(), Q) ==
        doctest::Approx(1e-3));
}

TEST_CASE("local coefficients are re-centered") {
  PiecewisePolynomial P = ramp01();
  std::vector<double> c = P.local_coefficients(0.25, 0.75);
  REQUIRE(c.size() >= 2);
  CHECK(c[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("integration: polynomial integrand") {
  // density 1 on (0,1) against f' with f(lambda) = lambda
  cplx r = piecewise_integrate(indicator01(), FunctionSpec::monomial(1), 1);
  CHECK(std::abs(r - cplx(1.0)) < 1e-14);
}

TEST_CASE("integration: resolvent integrand matches scalar Taylor identity") {
  // integral 2 (1-t) / (2i-t)^3 dt over (0,1) equals f(1) - f(0) - f'(0)
  FunctionSpec f = FunctionSpec::resolvent(2.0 * I);
  cplx lhs = piecewise_integrate(ramp01(), f, 2);
  cplx z = 2.0 * I;
  cplx rhs = 1.0 / (z - 1.0) - 1.0 / z - 1.0 / (z * z);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("integration: exponential integrand") {
  double s = 1.7;
  cplx lhs = piecewise_integrate(indicator01(), FunctionSpec::exponential(s), 0);
  cplx rhs = (std::exp(I * s) - 1.0) / (I * s);
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("integration rejects non-integrable tails") {
  PiecewisePolynomial step({0.0}, {}, 1.0, 0.0);
  CHECK_THROWS_AS(piecewise_integrate(step, FunctionSpec::monomial(1), 1),
                  validation_error);
  // order >= 2 resolvent decay makes constant tails integrable
  cplx r = piecewise_integrate(step, FunctionSpec::resolvent(I), 1);
  CHECK(std::isfinite(r.real()));
}
