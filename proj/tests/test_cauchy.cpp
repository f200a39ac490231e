#include <doctest.h>

#include <cmath>
#include <complex>

#include "specshift/cauchy.hpp"
#include "specshift/ssf_engine.hpp"
#include "specshift/taylor_remainder.hpp"

using namespace specshift;

namespace {
const cplx I(0.0, 1.0);

MeasureSpec uniform01() {
  return MeasureSpec::from_density(PiecewisePolynomial({0.0, 1.0}, {{1.0}}, 0.0, 0.0));
}
}  // namespace

TEST_CASE("transform of a point mass at the origin") {
  MeasureSpec m = MeasureSpec::point_mass(0.0);
  for (cplx z : {I, 2.0 * I, cplx(1.5, 0.7)})
    CHECK(std::abs(cauchy_transform(m, z) - 1.0 / z) < 1e-14);
  CHECK(std::abs(cauchy_transform(MeasureSpec{}, I)) == 0.0);
  CHECK_THROWS_AS(cauchy_transform(m, cplx(0.5, 0.0)), validation_error);
}

TEST_CASE("transform of the uniform density in closed form") {
  cplx z = cplx(0.4, 1.3);
  cplx expect = std::log(z) - std::log(z - 1.0) + 0.5 * std::log(2.0);
  CHECK(std::abs(cauchy_transform(uniform01(), z) - expect) < 1e-12);
}

TEST_CASE("transform derivatives") {
  MeasureSpec m = MeasureSpec::point_mass(0.0);
  cplx z = cplx(0.3, 0.9);
  CHECK(std::abs(cauchy_derivative(m, z, 1) + 1.0 / (z * z)) < 1e-13);
  CHECK(std::abs(cauchy_derivative(m, z, 2) - 2.0 / (z * z * z)) < 1e-13);
}

TEST_CASE("second derivative reproduces the scalar second-order remainder") {
  // density eta_2 = 1 - t on (0,1); G''(z) = trace R_2(f_z) for the pair ([0],[1])
  MeasureSpec m =
      MeasureSpec::from_density(PiecewisePolynomial({0.0, 1.0}, {{1.0, -1.0}}, 0.0, 0.0));
  cplx z = 2.0 * I;
  cplx remainder = 1.0 / (z - 1.0) - 1.0 / z - 1.0 / (z * z);
  CHECK(std::abs(cauchy_derivative(m, z, 2) - remainder) < 1e-12);
}

TEST_CASE("Herglotz sign") {
  for (double y : {0.3, 1.0, 4.0})
    for (double x : {-2.0, 0.0, 1.5}) {
      CHECK(cauchy_transform(uniform01(), cplx(x, y)).imag() < 0.0);
      CHECK(cauchy_transform(MeasureSpec::point_mass(0.5, 2.0), cplx(x, y)).imag() < 0.0);
    }
}

TEST_CASE("Stieltjes inversion recovers the uniform density") {
  auto G = [](cplx z) { return cauchy_transform(uniform01(), z); };
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  InversionResult in = stieltjes_invert(G, 0.5, eps);
  CHECK(in.converged);
  CHECK(in.value == doctest::Approx(1.0).epsilon(1e-3));
  InversionResult off = stieltjes_invert(G, -5.0, eps);
  CHECK(std::abs(off.value) < 1e-4);
}

TEST_CASE("inversion flags an atom as non-convergent") {
  auto G = [](cplx z) { return cauchy_transform(MeasureSpec::point_mass(0.0), z); };
  InversionResult in = stieltjes_invert(G, 0.0, {1e-2, 1e-3, 1e-4});
  CHECK_FALSE(in.converged);
  CHECK(in.value > 1e2);  // ~ 1/(pi eps)
}

TEST_CASE("integration by parts identity") {
  CHECK(integration_by_parts_check(MeasureSpec::point_mass(0.0), I).residual < 1e-12);
  CHECK(integration_by_parts_check(uniform01(), 2.0 * I).residual < 1e-10);
  CHECK(integration_by_parts_check(MeasureSpec{}, I).residual < 1e-14);
}

TEST_CASE("log transform closed form on (0,1)") {
  cplx z = 2.0 * I;
  cplx expect = z * std::log(z) - (z - 1.0) * std::log(z - 1.0) - 1.0;
  CHECK(std::abs(log_transform(NodeMultiset({0.0, 1.0}), z) - expect) < 1e-12);
  CHECK(log_transform(NodeMultiset({0.0, 1.0}), I).imag() > 0.0);
  CHECK_THROWS_AS(log_transform(NodeMultiset({0.0, 1.0}), -I), validation_error);
  CHECK_THROWS_AS(log_transform(NodeMultiset({1.0, 1.0}), I), degenerate_spline_error);
}

TEST_CASE("log transform boundary values recover the cumulative kernel") {
  NodeMultiset n({0.0, 1.0});
  double eps = 1e-6;
  double bv = log_transform(n, cplx(0.5, eps)).imag() / kPi;
  CHECK(bv == doctest::Approx(0.5).epsilon(1e-4));  // (1/(p-1)) * kernel, p = 2
}

TEST_CASE("cumulative of a measure") {
  MeasureSpec m = uniform01();
  m.discrete_atoms.push_back({-1.0, 2.0});
  PiecewisePolynomial C = cumulative_of_measure(m);
  CHECK(C(-2.0) == 0.0);
  CHECK(C(-0.5) == doctest::Approx(2.0));
  CHECK(C(0.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(C.right_tail_value() == doctest::Approx(3.0).epsilon(1e-12));
}
