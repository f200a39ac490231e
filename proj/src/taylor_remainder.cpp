#include "specshift/taylor_remainder.hpp"

#include <cmath>
#include <limits>

namespace specshift {

namespace {

cplx spectral_trace(const SpectralDecomposition& D, const FunctionSpec& f) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < D.eigenvalues.size(); ++i) {
    if (f.has_pole_near(D.eigenvalues[i], 1e-12))
      throw pole_collision_error("spectral trace: pole at eigenvalue");
    acc += static_cast<double>(D.multiplicities[i]) * f.evaluate(D.eigenvalues[i]);
  }
  return acc;
}

// Fornberg finite-difference weights for derivative m at x=0 on the grid.
std::vector<double> fd_weights(const std::vector<double>& grid, int m) {
  int n = static_cast<int>(grid.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = grid[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = grid[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      double c3 = grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] =
              c1 * (s * c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(s) - 1] -
                    c5 * c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(s)]) /
              c2;
        c[static_cast<std::size_t>(i)][0] =
            -c1 * c5 * c[static_cast<std::size_t>(i) - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] -
             s * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(s) - 1]) /
            c3;
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

}  // namespace

TaylorContext::TaylorContext(HermitianOperator H0, HermitianOperator V, double cluster_tol)
    : h0_(std::move(H0)),
      v_(std::move(V)),
      d0_(spectral_decompose(h0_, cluster_tol)),
      d1_(spectral_decompose(h0_.plus(v_), cluster_tol)) {
  if (h0_.dim() != v_.dim()) throw validation_error("TaylorContext: dimension mismatch");
}

const MultiSpectralMeasure& TaylorContext::measure(int order) const {
  if (order < 1) throw validation_error("measure: order must be positive");
  while (static_cast<int>(measures_.size()) < order)
    measures_.push_back(build_measure(d0_, v_, static_cast<int>(measures_.size()) + 1));
  return measures_[static_cast<std::size_t>(order) - 1];
}

cplx TaylorContext::gateaux_trace(const FunctionSpec& f, int j) const {
  if (j < 1) throw validation_error("gateaux_trace: order must be positive");
  if (f.polynomial_degree() == 0) return 0.0;  // constants differentiate away
  return integrate_divided_difference(measure(j), f, NodePattern::first_repeated);
}

Matrix TaylorContext::remainder_operator(const FunctionSpec& f, int p) const {
  if (p < 1) throw validation_error("remainder_operator: order must be positive");
  Matrix R = apply_function(d1_, f) - apply_function(d0_, f);
  // j-th Gateaux derivative operator / j!:
  //   sum over (j+1)-tuples Delta^{(j)}f(...) P V P V ... V P
  std::size_t k = d0_.eigenvalues.size();
  for (int j = 1; j < p; ++j) {
    std::vector<int> idx(static_cast<std::size_t>(j) + 1, 0);
    std::vector<Matrix> stack(static_cast<std::size_t>(j) + 1);
    Matrix term = Matrix::Zero(d0_.dim, d0_.dim);
    auto recurse = [&](auto&& self, int depth) -> void {
      for (std::size_t i = 0; i < k; ++i) {
        idx[static_cast<std::size_t>(depth)] = static_cast<int>(i);
        Matrix prod = (depth == 0)
                          ? d0_.projections[i]
                          : Matrix(stack[static_cast<std::size_t>(depth) - 1] * v_.matrix() *
                                   d0_.projections[i]);
        if (depth == j) {
          std::vector<double> nodes;
          nodes.reserve(idx.size());
          for (int ii : idx) nodes.push_back(d0_.eigenvalues[static_cast<std::size_t>(ii)]);
          cplx dd = divided_difference(f, NodeMultiset(std::move(nodes)));
          if (dd != cplx(0.0)) term += dd * prod;
        } else {
          stack[static_cast<std::size_t>(depth)] = std::move(prod);
          self(self, depth + 1);
        }
      }
    };
    recurse(recurse, 0);
    R -= term;
  }
  return R;
}

cplx TaylorContext::remainder_trace(const FunctionSpec& f, int p) const {
  if (p < 1) throw validation_error("remainder_trace: order must be positive");
  cplx acc = spectral_trace(d1_, f) - spectral_trace(d0_, f);
  for (int j = 1; j < p; ++j) acc -= gateaux_trace(f, j);
  return acc;
}

cplx TaylorContext::fd_gateaux_trace(const FunctionSpec& f, int j, double h) const {
  if (j < 1) throw validation_error("fd_gateaux_trace: order must be positive");
  if (h <= 0.0) {
    double vnorm = schatten_norm(v_.matrix(), std::numeric_limits<double>::infinity());
    h = 1e-2 / (1.0 + vnorm);
  }
  auto g = [&](double t) -> cplx {
    return spectral_trace(spectral_decompose(h0_.plus(v_.scaled(t))), f);
  };
  auto estimate = [&](double step) -> cplx {
    std::vector<double> grid(9);
    for (int i = 0; i < 9; ++i) grid[static_cast<std::size_t>(i)] = (i - 4) * step;
    auto w = fd_weights(grid, j);
    cplx acc = 0.0;
    for (int i = 0; i < 9; ++i)
      if (w[static_cast<std::size_t>(i)] != 0.0)
        acc += w[static_cast<std::size_t>(i)] * g(grid[static_cast<std::size_t>(i)]);
    return acc;
  };
  // leading truncation order of the 9-point central stencil
  int q = (j <= 2) ? 8 : 6;
  cplx d_h = estimate(h);
  cplx d_h2 = estimate(0.5 * h);
  double w2 = std::pow(2.0, q);
  cplx richardson = (w2 * d_h2 - d_h) / (w2 - 1.0);
  return richardson / factorial(j);
}

cplx TaylorContext::fd_remainder_trace(const FunctionSpec& f, int p, double h) const {
  if (p < 1) throw validation_error("fd_remainder_trace: order must be positive");
  auto g = [&](double t) -> cplx {
    return spectral_trace(spectral_decompose(h0_.plus(v_.scaled(t))), f);
  };
  cplx acc = g(1.0) - g(0.0);
  for (int j = 1; j < p; ++j) acc -= fd_gateaux_trace(f, j, h);
  return acc;
}

cplx gateaux_trace(const SpectralDecomposition& D, const HermitianOperator& V,
                   const FunctionSpec& f, int j) {
  if (j < 1) throw validation_error("gateaux_trace: order must be positive");
  if (f.polynomial_degree() == 0) return 0.0;
  return integrate_divided_difference(build_measure(D, V, j), f, NodePattern::first_repeated);
}

Matrix remainder_operator(const HermitianOperator& H0, const HermitianOperator& V,
                          const FunctionSpec& f, int p) {
  return TaylorContext(H0, V).remainder_operator(f, p);
}

cplx remainder_trace(const HermitianOperator& H0, const HermitianOperator& V,
                     const FunctionSpec& f, int p) {
  return TaylorContext(H0, V).remainder_trace(f, p);
}

cplx fd_remainder_trace(const HermitianOperator& H0, const HermitianOperator& V,
                        const FunctionSpec& f, int p, double h) {
  return TaylorContext(H0, V).fd_remainder_trace(f, p, h);
}

}  // namespace specshift
