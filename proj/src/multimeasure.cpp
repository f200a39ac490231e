#include "specshift/multimeasure.hpp"

#include <algorithm>
#include <cmath>

namespace specshift {

cplx MultiSpectralMeasure::total_weight() const {
  cplx acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight;
  return acc;
}

MultiSpectralMeasure build_measure(const SpectralDecomposition& D,
                                   const HermitianOperator& V, int p,
                                   std::uint64_t atom_budget) {
  if (p < 1) throw validation_error("build_measure: order must be positive");
  if (V.dim() != D.dim) throw validation_error("build_measure: dimension mismatch");
  std::size_t k = D.eigenvalues.size();
  double cost = static_cast<double>(p) * std::pow(static_cast<double>(k), p);
  if (cost > static_cast<double>(atom_budget))
    throw capacity_error("build_measure: atom budget exceeded (order " + std::to_string(p) +
                         ", " + std::to_string(k) + " distinct eigenvalues); reduce p or dim");

  std::vector<Matrix> PV(k);
  for (std::size_t i = 0; i < k; ++i) PV[i] = D.projections[i] * V.matrix();

  double vnorm = schatten_norm(V.matrix(), std::numeric_limits<double>::infinity());
  double prune = 1e-15 * std::pow(vnorm, p);

  MultiSpectralMeasure m;
  m.order_ = p;
  m.eigenvalues_ = D.eigenvalues;

  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  // DFS over index tuples sharing prefix products of (P_i V).
  std::vector<Matrix> stack(static_cast<std::size_t>(p));
  auto recurse = [&](auto&& self, int depth) -> void {
    for (std::size_t i = 0; i < k; ++i) {
      idx[static_cast<std::size_t>(depth)] = static_cast<int>(i);
      Matrix prod = (depth == 0) ? PV[i] : Matrix(stack[static_cast<std::size_t>(depth) - 1] * PV[i]);
      if (depth + 1 == p) {
        cplx w = prod.trace();
        if (std::abs(w) <= prune) continue;
        m.atoms_.push_back({idx, w});
        m.total_abs_ += std::abs(w);
      } else {
        stack[static_cast<std::size_t>(depth)] = std::move(prod);
        self(self, depth + 1);
      }
    }
  };
  recurse(recurse, 0);
  return m;
}

namespace {

NodeMultiset atom_nodes(const MultiSpectralMeasure& m, const MultiSpectralMeasure::Atom& a,
                        NodePattern pattern) {
  std::vector<double> v;
  v.reserve(a.idx.size() + 1);
  for (int i : a.idx) v.push_back(m.eigenvalues()[static_cast<std::size_t>(i)]);
  if (pattern == NodePattern::first_repeated)
    v.push_back(m.eigenvalues()[static_cast<std::size_t>(a.idx.front())]);
  return NodeMultiset(std::move(v));
}

}  // namespace

cplx integrate_divided_difference(const MultiSpectralMeasure& m, const FunctionSpec& f,
                                  NodePattern pattern) {
  cplx acc = 0.0;
  for (const auto& a : m.atoms())
    acc += a.weight * divided_difference(f, atom_nodes(m, a, pattern));
  return acc;
}

double integrate_cumulative_kernel(const MultiSpectralMeasure& m, double t) {
  cplx acc = 0.0;
  for (const auto& a : m.atoms())
    acc += a.weight * cumulative_spline_kernel(atom_nodes(m, a, NodePattern::plain), t);
  double tol = 1e-10 * (m.total_abs_weight() + 1e-300);
  if (std::abs(acc.imag()) > tol)
    throw symmetry_violation_error(
        "integrate_cumulative_kernel: imaginary residue above tolerance");
  return acc.real();
}

PiecewisePolynomial kernel_integral_to_piecewise(const MultiSpectralMeasure& m) {
  const auto& g = m.eigenvalues();
  int p = m.order();
  double tol = 1e-10 * (m.total_abs_weight() + 1e-300);
  cplx total = m.total_weight();
  if (std::abs(total.imag()) > tol)
    throw symmetry_violation_error("kernel_integral_to_piecewise: complex total mass");

  if (g.size() == 1) {
    return PiecewisePolynomial({g[0]}, {}, total.real(), 0.0);
  }
  std::size_t K = g.size() - 1;
  std::vector<std::vector<cplx>> acc(K, std::vector<cplx>(static_cast<std::size_t>(p), cplx(0.0)));

  auto grid_index = [&](double lam) -> std::size_t {
    auto it = std::lower_bound(g.begin(), g.end(), lam - 1e-9);
    return static_cast<std::size_t>(it - g.begin());
  };

  for (const auto& a : m.atoms()) {
    NodeMultiset nodes = atom_nodes(m, a, NodePattern::plain);
    if (nodes.all_equal()) {
      std::size_t gi = grid_index(nodes.min_node());
      for (std::size_t k = 0; k < gi; ++k) acc[k][0] += a.weight;
      continue;
    }
    int d = p - 1;
    auto F = dd_functional(nodes);
    for (std::size_t i = 0; i < F.nodes.size(); ++i) {
      std::size_t gi = grid_index(F.nodes[i]);
      for (std::size_t j = 0; j < F.coeff[i].size(); ++j) {
        if (F.coeff[i][j] == 0.0) continue;
        int e = d - static_cast<int>(j);
        double fall = factorial(d) / factorial(e);
        for (std::size_t k = 0; k < gi; ++k) {
          double base = F.nodes[i] - g[k];
          for (int s = 0; s <= e; ++s) {
            acc[k][static_cast<std::size_t>(s)] +=
                a.weight * F.coeff[i][j] * fall * binomial(e, s) *
                std::pow(base, static_cast<double>(e - s)) * ((s % 2 == 0) ? 1.0 : -1.0);
          }
        }
      }
    }
  }

  std::vector<std::vector<double>> coeffs(K, std::vector<double>(static_cast<std::size_t>(p), 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t s = 0; s < acc[k].size(); ++s) {
      double width = g[k + 1] - g[k];
      // coefficient tolerance scaled to keep pointwise agreement at 1e-10*sum|w|
      double ctol = tol / std::pow(std::max(width, 1.0), static_cast<double>(s));
      if (std::abs(acc[k][s].imag()) > std::max(ctol, tol))
        throw symmetry_violation_error(
            "kernel_integral_to_piecewise: imaginary residue in coefficients");
      coeffs[k][s] = acc[k][s].real();
    }
  }
  return PiecewisePolynomial(g, std::move(coeffs), total.real(), 0.0);
}

}  // namespace specshift
