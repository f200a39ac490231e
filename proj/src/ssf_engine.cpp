#include "specshift/ssf_engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace specshift {

namespace {

double real_trace_power(const Matrix& V, int k) {
  if (k == 0) return static_cast<double>(V.rows());
  Matrix P = V;
  for (int i = 1; i < k; ++i) P = P * V;
  return P.trace().real();
}

std::vector<BreakpointSource> tag_breakpoints(const std::vector<double>& grid,
                                              const SpectralDecomposition& d0,
                                              const SpectralDecomposition& d1) {
  auto member = [](const std::vector<double>& v, double x) {
    for (double e : v)
      if (std::abs(e - x) <= 1e-9 * (std::abs(x) + 1.0)) return true;
    return false;
  };
  std::vector<BreakpointSource> tags;
  tags.reserve(grid.size());
  for (double b : grid) {
    bool in0 = member(d0.eigenvalues, b);
    bool in1 = member(d1.eigenvalues, b);
    tags.push_back(in0 && in1 ? BreakpointSource::both
                   : in0      ? BreakpointSource::spectrum_h0
                              : BreakpointSource::spectrum_perturbed);
  }
  return tags;
}

}  // namespace

SSFDensity krein_xi(const TaylorContext& ctx) {
  const auto& d0 = ctx.decomposition();
  const auto& d1 = ctx.perturbed_decomposition();
  std::vector<double> grid;
  grid.insert(grid.end(), d0.eigenvalues.begin(), d0.eigenvalues.end());
  grid.insert(grid.end(), d1.eigenvalues.begin(), d1.eigenvalues.end());
  std::sort(grid.begin(), grid.end());
  double tol = 1e-12 * (grid.back() - grid.front() + 1.0);
  std::vector<double> g;
  for (double v : grid)
    if (g.empty() || v - g.back() > tol) g.push_back(v);

  std::vector<std::vector<double>> coeffs;
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    double mid = 0.5 * (g[k] + g[k + 1]);
    double step = static_cast<double>(counting_function(d0, mid) - counting_function(d1, mid));
    coeffs.push_back({step});
  }
  SSFDensity S;
  S.order = 1;
  S.density = PiecewisePolynomial(g, std::move(coeffs), 0.0, 0.0);
  S.mass = S.density.integral();
  S.breakpoint_provenance = tag_breakpoints(g, d0, d1);
  return S;
}

SSFDensity krein_xi(const HermitianOperator& H0, const HermitianOperator& V) {
  return krein_xi(TaylorContext(H0, V));
}

SSFDensity eta_direct(const TaylorContext& ctx, int p, std::uint64_t atom_budget) {
  if (p < 1) throw validation_error("eta_direct: order must be positive");
  const auto& d0 = ctx.decomposition();
  const auto& d1 = ctx.perturbed_decomposition();
  const Matrix& V = ctx.perturbation().matrix();
  std::size_t k0 = d0.eigenvalues.size();
  std::size_t k1 = d1.eigenvalues.size();
  if (p > 7)
    throw capacity_error("eta_direct: order above 7 not supported");
  if (k0 >= 127 || k1 >= 127)
    throw capacity_error("eta_direct: too many distinct eigenvalues");
  double cost = (static_cast<double>(p) + 1.0) *
                std::pow(static_cast<double>(k0), p) * static_cast<double>(k1);
  if (cost > static_cast<double>(atom_budget))
    throw capacity_error("eta_direct: atom budget exceeded (order " + std::to_string(p) +
                         ", " + std::to_string(k0) + " x " + std::to_string(k1) +
                         " distinct eigenvalues); reduce p or dim");

  std::vector<double> all;
  all.reserve(k0 + k1);
  all.insert(all.end(), d0.eigenvalues.begin(), d0.eigenvalues.end());
  all.insert(all.end(), d1.eigenvalues.begin(), d1.eigenvalues.end());
  std::sort(all.begin(), all.end());
  double gtol = 1e-9 * (all.back() - all.front() + 1.0);
  std::vector<double> g;
  for (double v : all)
    if (g.empty() || v - g.back() > gtol) g.push_back(v);

  auto nearest = [&](double x) -> std::size_t {
    auto it = std::lower_bound(g.begin(), g.end(), x);
    if (it == g.end()) return g.size() - 1;
    if (it == g.begin()) return 0;
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    return (g[hi] - x < x - g[hi - 1]) ? hi : hi - 1;
  };

  std::vector<Matrix> PV(k0), QT(k1);
  for (std::size_t i = 0; i < k0; ++i) PV[i] = d0.projections[i] * V;
  for (std::size_t j = 0; j < k1; ++j) QT[j] = d1.projections[j].transpose();

  // Weights grouped by the node multiset: the spline depends only on the
  // sorted tuple, so aggregate first and assemble once per distinct key.
  std::unordered_map<std::uint64_t, cplx> weights;
  double total_abs = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  std::vector<int> sorted_idx(static_cast<std::size_t>(p), 0);
  std::vector<Matrix> stack(static_cast<std::size_t>(p));
  auto recurse = [&](auto&& self, int depth) -> void {
    for (std::size_t i = 0; i < k0; ++i) {
      idx[static_cast<std::size_t>(depth)] = static_cast<int>(i);
      Matrix prod = (depth == 0) ? PV[i] : Matrix(stack[static_cast<std::size_t>(depth) - 1] * PV[i]);
      if (depth + 1 == p) {
        sorted_idx = idx;
        std::sort(sorted_idx.begin(), sorted_idx.end());
        std::uint64_t base_key = 0;
        for (int s : sorted_idx) base_key = base_key * 128 + static_cast<std::uint64_t>(s) + 1;
        for (std::size_t j = 0; j < k1; ++j) {
          cplx w = prod.cwiseProduct(QT[j]).sum();
          if (w == cplx(0.0)) continue;
          weights[base_key * 128 + j] += w;
          total_abs += std::abs(w);
        }
      } else {
        stack[static_cast<std::size_t>(depth)] = std::move(prod);
        self(self, depth + 1);
      }
    }
  };
  recurse(recurse, 0);

  SSFDensity S;
  S.order = p;
  if (g.size() == 1) {
    // One spectral cluster only; every admissible spline is degenerate and the
    // matching weights must vanish.
    for (const auto& [key, w] : weights)
      if (std::abs(w) > 1e-8 * (total_abs + 1e-300))
        throw symmetry_violation_error("eta_direct: atomic residue at a shared eigenvalue");
    S.density = PiecewisePolynomial({g[0]}, {}, 0.0, 0.0);
    S.mass = 0.0;
    S.breakpoint_provenance = tag_breakpoints(g, d0, d1);
    return S;
  }

  // Assemble by sampling, not by expanding the splines in the local monomial
  // basis: each spline is evaluated through the smaller of the two one-sided
  // truncated sums (the sides cancel exactly for the full polynomial), so the
  // noise stays at the scale of the function values even when the breakpoints
  // span several orders of magnitude.  The restriction to each interval is a
  // polynomial of degree <= p-1, so p interior samples recover it exactly.
  std::size_t K = g.size() - 1;
  std::size_t m = static_cast<std::size_t>(p);
  std::vector<double> tau(m);
  for (std::size_t q = 0; q < m; ++q)
    tau[q] = 0.5 - 0.5 * std::cos(kPi * (static_cast<double>(q) + 0.5) / static_cast<double>(m));
  std::vector<std::vector<cplx>> vals(K, std::vector<cplx>(m, cplx(0.0)));
  std::vector<std::vector<double>> mag(K, std::vector<double>(m, 0.0));

  int d = p - 1;
  std::vector<double> node_vals(static_cast<std::size_t>(p) + 1, 0.0);
  double prune = 1e-16 * (total_abs + 1e-300);
  for (const auto& [key, w] : weights) {
    if (std::abs(w) <= prune) continue;
    std::uint64_t rem = key;
    std::size_t j = rem % 128;
    rem /= 128;
    node_vals[static_cast<std::size_t>(p)] = d1.eigenvalues[j];
    for (int q = p - 1; q >= 0; --q) {
      node_vals[static_cast<std::size_t>(q)] = d0.eigenvalues[rem % 128 - 1];
      rem /= 128;
    }
    NodeMultiset nodes(node_vals);
    if (nodes.all_equal()) {
      // A cluster of every node at once would be an atom of the measure; the
      // weight cancels analytically, so only a residue can show up here.
      if (std::abs(w) > 1e-8 * (total_abs + 1e-300))
        throw symmetry_violation_error("eta_direct: atomic residue at a shared eigenvalue");
      continue;
    }
    auto F = dd_functional(nodes);
    std::size_t lo = nearest(nodes.min_node());
    std::size_t hi = nearest(nodes.max_node());
    for (std::size_t k = lo; k < hi; ++k) {
      double width = g[k + 1] - g[k];
      for (std::size_t q = 0; q < m; ++q) {
        double t = g[k] + tau[q] * width;
        cplx up = 0.0, low = 0.0;
        double upm = 0.0, lowm = 0.0;
        for (std::size_t i = 0; i < F.nodes.size(); ++i) {
          double base = F.nodes[i] - t;
          bool upper = base > 0.0;
          for (std::size_t r = 0; r < F.coeff[i].size(); ++r) {
            int e = d - static_cast<int>(r);
            if (e < 0 || F.coeff[i][r] == 0.0) continue;
            double pw = 1.0;
            for (int x = 0; x < e; ++x) pw *= base;
            double term = F.coeff[i][r] * (factorial(d) / factorial(e)) * pw;
            if (upper) {
              up += term;
              upm += std::abs(term);
            } else {
              low += term;
              lowm += std::abs(term);
            }
          }
        }
        cplx b = (upm <= lowm) ? up : -low;
        vals[k][q] += w * b;
        mag[k][q] += std::abs(w) * std::min(upm, lowm);
      }
    }
  }

  double scale = 1.0 / factorial(p - 1);
  std::vector<std::vector<double>> coeffs(K, std::vector<double>(m, 0.0));
  std::vector<double> newton(m), poly(m);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t q = 0; q < m; ++q) {
      if (std::abs(vals[k][q].imag()) > 1e-9 * (mag[k][q] + 1e-300))
        throw symmetry_violation_error("eta_direct: imaginary residue in samples");
      newton[q] = scale * vals[k][q].real();
    }
    // Newton form over the tau samples, then monomials in the scaled variable.
    for (std::size_t lev = 1; lev < m; ++lev)
      for (std::size_t q = m - 1; q >= lev; --q)
        newton[q] = (newton[q] - newton[q - 1]) / (tau[q] - tau[q - lev]);
    std::fill(poly.begin(), poly.end(), 0.0);
    for (std::size_t q = m; q-- > 0;) {
      for (std::size_t s = m - 1; s >= 1; --s) poly[s] = poly[s - 1] - tau[q] * poly[s];
      poly[0] = newton[q] - tau[q] * poly[0];
    }
    double width = g[k + 1] - g[k];
    double wpow = 1.0;
    for (std::size_t s = 0; s < m; ++s) {
      coeffs[k][s] = poly[s] / wpow;
      wpow *= width;
    }
  }
  S.density = PiecewisePolynomial(g, std::move(coeffs), 0.0, 0.0);
  S.mass = S.density.integral();
  S.breakpoint_provenance = tag_breakpoints(g, d0, d1);
  return S;
}

std::vector<SSFDensity> ssf_family(const TaylorContext& ctx, int p) {
  if (p < 1) throw validation_error("ssf_family: order must be positive");
  std::vector<SSFDensity> out;
  out.push_back(krein_xi(ctx));
  for (int k = 2; k <= p; ++k) out.push_back(eta_direct(ctx, k));
  return out;
}

SSFDensity eta_recursive(const TaylorContext& ctx, int p) {
  if (p < 2) throw validation_error("eta_recursive: order must be >= 2");
  SSFDensity prev = krein_xi(ctx);
  for (int k = 2; k <= p; ++k) {
    double c = real_trace_power(ctx.perturbation().matrix(), k - 1) / factorial(k - 1);
    PiecewisePolynomial A = prev.density.antiderivative();
    PiecewisePolynomial K = kernel_integral_to_piecewise(ctx.measure(k - 1));
    PiecewisePolynomial eta =
        PiecewisePolynomial::combine(A, -1.0, K, -1.0 / factorial(k - 1)).plus_constant(c);
    // The constant and the kernel's left tail cancel structurally; the right
    // tail vanishes by the mass identity.  Assert, then pin the tails to 0.
    double scale = eta.coefficient_scale() + std::abs(c) + 1.0;
    if (std::abs(eta.left_tail_value()) > 1e-9 * scale ||
        std::abs(eta.right_tail_value()) > 1e-9 * scale)
      throw symmetry_violation_error("eta recursion: tail cancellation failed");
    SSFDensity S;
    S.order = k;
    S.density = eta.with_tails(0.0, 0.0);
    S.mass = S.density.integral();
    S.breakpoint_provenance =
        tag_breakpoints(S.density.breakpoints(), ctx.decomposition(), ctx.perturbed_decomposition());
    prev = std::move(S);
  }
  return prev;
}

SSFDensity eta_recursive(const HermitianOperator& H0, const HermitianOperator& V, int p) {
  return eta_recursive(TaylorContext(H0, V), p);
}

double cumulative(const SSFDensity& S, double t) {
  return S.density.antiderivative()(t);
}

cplx trace_formula_rhs(const SSFDensity& S, const FunctionSpec& f) {
  return piecewise_integrate(S.density, f, S.order);
}

AsymptoticsReport asymptotics_report(const SSFDensity& S) {
  AsymptoticsReport r;
  r.left_limit = S.density.left_tail_value();
  r.right_limit = S.density.right_tail_value();
  const auto& g = S.density.breakpoints();
  double scale = S.density.coefficient_scale();
  double tol = 1e-12 * (scale + 1.0);
  for (std::size_t k = 0; k < S.density.piece_count(); ++k) {
    bool nonzero = false;
    for (double v : S.density.piece(k))
      if (std::abs(v) > tol) nonzero = true;
    if (nonzero) {
      if (r.empty_support) {
        r.empty_support = false;
        r.support_min = g[k];
      }
      r.support_max = g[k + 1];
    }
  }
  return r;
}

}  // namespace specshift
