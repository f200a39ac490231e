#include <doctest.h>

#include <complex>
#include <map>

#include "specshift/multimeasure.hpp"
#include "specshift/verify.hpp"

using namespace specshift;

namespace {
const cplx I(0.0, 1.0);

HermitianOperator v_sym() {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 3.0;
  return HermitianOperator(m);
}

std::map<std::vector<int>, cplx> atom_map(const MultiSpectralMeasure& m) {
  std::map<std::vector<int>, cplx> out;
  for (const auto& a : m.atoms()) out[a.idx] += a.weight;
  return out;
}
}  // namespace

TEST_CASE("first order atoms are diagonal entries in the eigenbasis") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0, 1.0}));
  MultiSpectralMeasure m = build_measure(D, v_sym(), 1);
  auto atoms = atom_map(m);
  CHECK(std::abs(atoms[{0}] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(atoms[{1}] - cplx(3.0)) < 1e-12);
  CHECK(std::abs(m.total_weight() - cplx(4.0)) < 1e-12);
}

TEST_CASE("second order atoms") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0, 1.0}));
  MultiSpectralMeasure m = build_measure(D, v_sym(), 2);
  auto atoms = atom_map(m);
  CHECK(std::abs(atoms[{0, 0}] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(atoms[{0, 1}] - cplx(4.0)) < 1e-12);
  CHECK(std::abs(atoms[{1, 0}] - cplx(4.0)) < 1e-12);
  CHECK(std::abs(atoms[{1, 1}] - cplx(9.0)) < 1e-12);
  CHECK(std::abs(m.total_weight() - cplx(18.0)) < 1e-12);  // trace(V^2)
}

TEST_CASE("scalar pair gives a single unit atom") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0}));
  for (int p = 1; p <= 4; ++p) {
    MultiSpectralMeasure m =
        build_measure(D, HermitianOperator::diagonal({1.0}), p);
    REQUIRE(m.atoms().size() == 1);
    CHECK(std::abs(m.atoms()[0].weight - cplx(1.0)) < 1e-14);
  }
}

TEST_CASE("reversal symmetry and total mass on a random pair") {
  auto [h, v] = random_pair(11, 5);
  SpectralDecomposition D = spectral_decompose(h);
  for (int p = 2; p <= 3; ++p) {
    MultiSpectralMeasure m = build_measure(D, v, p);
    auto atoms = atom_map(m);
    double maxw = 0.0;
    for (const auto& [idx, w] : atoms) maxw = std::max(maxw, std::abs(w));
    for (const auto& [idx, w] : atoms) {
      std::vector<int> rev(idx.rbegin(), idx.rend());
      CHECK(std::abs(std::conj(w) - atoms[rev]) <= 1e-12 * maxw);
    }
    Matrix vp = v.matrix();
    for (int k = 1; k < p; ++k) vp = vp * v.matrix();
    CHECK(std::abs(m.total_weight() - trace(vp)) <= 1e-10 * std::abs(trace(vp)));
  }
}

TEST_CASE("atom budget is enforced") {
  auto [h, v] = random_pair(3, 6);
  SpectralDecomposition D = spectral_decompose(h);
  CHECK_THROWS_AS(build_measure(D, v, 4, 10), capacity_error);
}

TEST_CASE("low-degree polynomials integrate to zero") {
  auto [h, v] = random_pair(5, 4);
  SpectralDecomposition D = spectral_decompose(h);
  MultiSpectralMeasure m = build_measure(D, v, 3);
  cplx r = integrate_divided_difference(m, FunctionSpec::monomial(1),
                                        NodePattern::plain);
  CHECK(std::abs(r) < 1e-10 * m.total_abs_weight());
}

TEST_CASE("resolvent power identity") {
  auto [h, v] = random_pair(9, 4);
  SpectralDecomposition D = spectral_decompose(h);
  for (int p = 1; p <= 4; ++p) {
    MultiSpectralMeasure m = build_measure(D, v, p);
    cplx lhs = integrate_divided_difference(m, FunctionSpec::resolvent(I),
                                            NodePattern::plain);
    Matrix R = resolvent(D, I);
    Matrix T = Matrix::Identity(h.dim(), h.dim());
    for (int k = 0; k < p; ++k) T = T * R * v.matrix();
    CHECK(std::abs(lhs - trace(T)) <= 1e-10 * (std::abs(trace(T)) + 1e-12));
  }
}

TEST_CASE("repeated first node reproduces the confluent scalar case") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0}));
  MultiSpectralMeasure m = build_measure(D, HermitianOperator::diagonal({1.0}), 2);
  cplx r = integrate_divided_difference(m, FunctionSpec::resolvent(I),
                                        NodePattern::first_repeated);
  CHECK(std::abs(r - I) < 1e-13);  // Delta^2 f_i(0,0,0) = 1/i^3
}

TEST_CASE("cumulative kernel integral endpoints") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0}));
  MultiSpectralMeasure scalar = build_measure(D, HermitianOperator::diagonal({1.0}), 1);
  CHECK(integrate_cumulative_kernel(scalar, -1.0) == doctest::Approx(1.0));
  CHECK(integrate_cumulative_kernel(scalar, 1.0) == doctest::Approx(0.0));

  auto [h, v] = random_pair(21, 4);
  SpectralDecomposition Dh = spectral_decompose(h);
  for (int p = 1; p <= 3; ++p) {
    MultiSpectralMeasure m = build_measure(Dh, v, p);
    double below = integrate_cumulative_kernel(m, -100.0);
    CHECK(below == doctest::Approx(m.total_weight().real()).epsilon(1e-10));
    CHECK(integrate_cumulative_kernel(m, 100.0) == doctest::Approx(0.0));
  }
}

TEST_CASE("piecewise kernel integral: first order steps") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0, 1.0}));
  MultiSpectralMeasure m = build_measure(D, v_sym(), 1);
  PiecewisePolynomial P = kernel_integral_to_piecewise(m);
  CHECK(P(-0.5) == doctest::Approx(4.0));
  CHECK(P(0.5) == doctest::Approx(3.0));
  CHECK(P(1.5) == doctest::Approx(0.0));
}

TEST_CASE("piecewise kernel integral matches pointwise evaluation") {
  SpectralDecomposition D = spectral_decompose(HermitianOperator::diagonal({0.0, 1.0}));
  MultiSpectralMeasure m = build_measure(D, v_sym(), 2);
  PiecewisePolynomial P = kernel_integral_to_piecewise(m);
  CHECK(P.left_tail_value() == doctest::Approx(18.0).epsilon(1e-10));
  CHECK(P.right_tail_value() == 0.0);
  CHECK(P.degree() <= 1);
  for (double t : {-0.3, 0.1, 0.4, 0.8, 1.3})
    CHECK(P(t) == doctest::Approx(integrate_cumulative_kernel(m, t)).epsilon(1e-10));
}
