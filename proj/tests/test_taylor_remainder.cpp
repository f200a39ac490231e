#include <doctest.h>

#include <complex>

#include "specshift/taylor_remainder.hpp"
#include "specshift/verify.hpp"

using namespace specshift;

namespace {
const cplx I(0.0, 1.0);

TaylorContext scalar01() {
  return TaylorContext(HermitianOperator::diagonal({0.0}),
                       HermitianOperator::diagonal({1.0}));
}
}  // namespace

TEST_CASE("gateaux trace worked values") {
  TaylorContext ctx = scalar01();
  CHECK(std::abs(ctx.gateaux_trace(FunctionSpec::resolvent(I), 2) - I) < 1e-13);

  auto [h, v] = random_pair(31, 4);
  TaylorContext rc(h, v);
  cplx g1 = rc.gateaux_trace(FunctionSpec::monomial(1), 1);
  CHECK(std::abs(g1 - trace(v.matrix())) < 1e-12);
  for (int j = 1; j <= 3; ++j)
    CHECK(std::abs(rc.gateaux_trace(FunctionSpec::constant(cplx(2.0)), j)) < 1e-12);
}

TEST_CASE("remainder operator: p=1 is the plain difference") {
  auto [h, v] = random_pair(32, 3);
  FunctionSpec f = FunctionSpec::resolvent(2.0 + I);
  Matrix R = remainder_operator(h, v, f, 1);
  Matrix expect = apply_function(spectral_decompose(h.plus(v)), f) -
                  apply_function(spectral_decompose(h), f);
  CHECK((R - expect).norm() < 1e-11);
}

TEST_CASE("remainder vanishes for zero perturbation") {
  HermitianOperator h = HermitianOperator::diagonal({0.2, 0.9, -1.1});
  HermitianOperator z = HermitianOperator::zero(3);
  for (int p = 1; p <= 3; ++p) {
    CHECK(remainder_operator(h, z, FunctionSpec::resolvent(I), p).norm() < 1e-13);
    CHECK(std::abs(fd_remainder_trace(h, z, FunctionSpec::resolvent(I), p)) < 1e-9);
  }
}

TEST_CASE("scalar second-order remainder") {
  cplx z = 2.0 * I;
  cplx expect = 1.0 / (z - 1.0) - 1.0 / z - 1.0 / (z * z);
  FunctionSpec f = FunctionSpec::resolvent(z);
  Matrix R = remainder_operator(HermitianOperator::diagonal({0.0}),
                                HermitianOperator::diagonal({1.0}), f, 2);
  CHECK(std::abs(R(0, 0) - expect) < 1e-13);
  CHECK(std::abs(scalar01().remainder_trace(f, 2) - expect) < 1e-13);
}

TEST_CASE("polynomial Taylor expansions terminate") {
  auto [h, v] = random_pair(33, 4);
  TaylorContext ctx(h, v);
  FunctionSpec quad = FunctionSpec::polynomial({cplx(1.0), cplx(0.5), cplx(-2.0)});
  CHECK(std::abs(ctx.remainder_trace(quad, 3)) < 1e-10);
  CHECK(std::abs(fd_remainder_trace(HermitianOperator::diagonal({0.0}),
                                    HermitianOperator::diagonal({1.0}),
                                    FunctionSpec::monomial(2), 3)) < 1e-10);
}

TEST_CASE("trace equals trace of the operator form") {
  auto [h, v] = random_pair(34, 5);
  TaylorContext ctx(h, v);
  for (int p = 1; p <= 4; ++p) {
    FunctionSpec f = FunctionSpec::resolvent(2.0 + I);
    cplx a = ctx.remainder_trace(f, p);
    cplx b = trace(ctx.remainder_operator(f, p));
    CHECK(std::abs(a - b) <= 1e-9 * (std::abs(a) + 1e-12));
  }
}

TEST_CASE("remainder recursion for resolvents") {
  auto [h, v] = random_pair(35, 4);
  SpectralDecomposition D = spectral_decompose(h);
  for (cplx z : {I, 2.0 + I}) {
    FunctionSpec f = FunctionSpec::resolvent(z);
    for (int p = 1; p <= 3; ++p) {
      Matrix lhs = remainder_operator(h, v, f, p + 1);
      Matrix R = resolvent(D, z);
      Matrix term = Matrix::Identity(h.dim(), h.dim());
      for (int k = 0; k < p; ++k) term = term * R * v.matrix();
      term = term * R;
      Matrix rhs = remainder_operator(h, v, f, p) - term;
      double scale = rhs.norm() + 1e-12;
      CHECK((lhs - rhs).norm() <= 1e-11 * scale);
    }
  }
}

TEST_CASE("finite-difference oracle agreement") {
  auto [h, v] = random_pair(36, 4);
  TaylorContext ctx(h, v);
  FunctionSpec f = FunctionSpec::resolvent(2.0 + 2.0 * I);
  for (int p = 1; p <= 4; ++p) {
    cplx a = ctx.remainder_trace(f, p);
    cplx b = ctx.fd_remainder_trace(f, p, 0.06);
    CHECK(std::abs(a - b) <= 1e-6 * (std::abs(a) + 1e-12));
  }
  for (int j = 1; j <= 4; ++j) {
    double h = (j <= 2) ? 0.03 : (j == 3 ? 0.06 : 0.09);
    cplx a = ctx.gateaux_trace(f, j);
    cplx b = ctx.fd_gateaux_trace(f, j, h);
    CHECK(std::abs(a - b) <= 1e-6 * (std::abs(a) + 1e-12));
  }
}

TEST_CASE("linearity in the function argument") {
  auto [h, v] = random_pair(37, 4);
  TaylorContext ctx(h, v);
  FunctionSpec f1 = FunctionSpec::resolvent(I);
  FunctionSpec f2 = FunctionSpec::resolvent(I, 2);
  cplx sum = ctx.remainder_trace(f1 + f2.scaled(cplx(0.5, 1.0)), 3);
  cplx parts = ctx.remainder_trace(f1, 3) +
               cplx(0.5, 1.0) * ctx.remainder_trace(f2, 3);
  CHECK(std::abs(sum - parts) <= 1e-11 * (std::abs(parts) + 1e-12));
}
