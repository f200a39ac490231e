#include "specshift/divdiff.hpp"

#include <algorithm>
#include <cmath>

namespace specshift {

NodeMultiset::NodeMultiset(std::vector<double> nodes, double merge_tol) {
  if (nodes.empty()) throw validation_error("NodeMultiset: need at least one node");
  std::sort(nodes.begin(), nodes.end());
  n_ = static_cast<int>(nodes.size());
  if (merge_tol < 0.0) {
    double diam = nodes.back() - nodes.front();
    merge_tol = 1e-9 * (diam + 1.0);
  }
  std::size_t i = 0;
  while (i < nodes.size()) {
    std::size_t j = i + 1;
    while (j < nodes.size() && nodes[j] - nodes[j - 1] <= merge_tol) ++j;
    double mean = 0.0;
    for (std::size_t l = i; l < j; ++l) mean += nodes[l];
    mean /= static_cast<double>(j - i);
    distinct_.push_back(mean);
    mult_.push_back(static_cast<int>(j - i));
    i = j;
  }
}

int NodeMultiset::max_multiplicity() const {
  return *std::max_element(mult_.begin(), mult_.end());
}

std::vector<double> NodeMultiset::sorted_values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < distinct_.size(); ++i)
    for (int m = 0; m < mult_[i]; ++m) out.push_back(distinct_[i]);
  return out;
}

NodeMultiset NodeMultiset::appended(double node) const {
  auto v = sorted_values();
  v.push_back(node);
  return NodeMultiset(std::move(v));
}

DividedDifferenceFunctional dd_functional(const NodeMultiset& nodes) {
  const auto& dist = nodes.distinct();
  const auto& mult = nodes.multiplicities();
  int n = nodes.size();
  std::vector<int> which(static_cast<std::size_t>(n));  // sorted slot -> distinct index
  std::vector<double> value(static_cast<std::size_t>(n));
  {
    int s = 0;
    for (std::size_t i = 0; i < dist.size(); ++i)
      for (int m = 0; m < mult[i]; ++m) {
        which[static_cast<std::size_t>(s)] = static_cast<int>(i);
        value[static_cast<std::size_t>(s)] = dist[i];
        ++s;
      }
  }
  // A functional is a dense table c[i][j], j < mult[i].
  using Func = std::vector<std::vector<double>>;
  auto make_zero = [&]() {
    Func f(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i)
      f[i].assign(static_cast<std::size_t>(mult[i]), 0.0);
    return f;
  };
  // cur[a] holds the functional for the slot range [a, a+len].
  std::vector<Func> cur(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    cur[static_cast<std::size_t>(a)] = make_zero();
    cur[static_cast<std::size_t>(a)][static_cast<std::size_t>(which[static_cast<std::size_t>(a)])][0] = 1.0;
  }
  for (int len = 1; len < n; ++len) {
    for (int a = 0; a + len < n; ++a) {
      int b = a + len;
      Func next = make_zero();
      if (which[static_cast<std::size_t>(a)] == which[static_cast<std::size_t>(b)]) {
        // confluent range: f^{(len)}(lambda)/len!
        next[static_cast<std::size_t>(which[static_cast<std::size_t>(a)])][static_cast<std::size_t>(len)] =
            1.0 / factorial(len);
      } else {
        double inv = 1.0 / (value[static_cast<std::size_t>(a)] - value[static_cast<std::size_t>(b)]);
        const Func& lo = cur[static_cast<std::size_t>(a)];      // [a .. b-1]
        const Func& hi = cur[static_cast<std::size_t>(a) + 1];  // [a+1 .. b]
        for (std::size_t i = 0; i < dist.size(); ++i)
          for (std::size_t j = 0; j < lo[i].size(); ++j)
            next[i][j] = (lo[i][j] - hi[i][j]) * inv;
      }
      cur[static_cast<std::size_t>(a)] = std::move(next);
    }
  }
  DividedDifferenceFunctional out;
  out.nodes = dist;
  out.coeff = std::move(cur[0]);
  return out;
}

cplx divided_difference(const FunctionSpec& f, const NodeMultiset& nodes) {
  for (double lam : nodes.distinct()) {
    if (f.has_pole_near(lam, 1e-12))
      throw pole_collision_error("divided_difference: pole at node " + std::to_string(lam));
  }
  if (f.is_pure_resolvent()) {
    cplx acc = 0.0;
    for (const auto& term : f.terms()) {
      const auto& r = std::get<FunctionSpec::ResolventPower>(term.primitive);
      acc += term.weight * divided_difference_resolvent(r.z, r.k, nodes);
    }
    return acc;
  }
  // Hermite-Newton table over sorted nodes; confluent entries use exact
  // derivatives supplied by the FunctionSpec.
  auto vals = nodes.sorted_values();
  int n = static_cast<int>(vals.size());
  std::vector<cplx> table(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) table[static_cast<std::size_t>(a)] = f.evaluate(vals[static_cast<std::size_t>(a)]);
  for (int len = 1; len < n; ++len) {
    std::vector<cplx> next(static_cast<std::size_t>(n - len));
    for (int a = 0; a + len < n; ++a) {
      int b = a + len;
      if (vals[static_cast<std::size_t>(a)] == vals[static_cast<std::size_t>(b)]) {
        next[static_cast<std::size_t>(a)] =
            f.evaluate(vals[static_cast<std::size_t>(a)], len) / factorial(len);
      } else {
        next[static_cast<std::size_t>(a)] =
            (table[static_cast<std::size_t>(a)] - table[static_cast<std::size_t>(a) + 1]) /
            (vals[static_cast<std::size_t>(a)] - vals[static_cast<std::size_t>(b)]);
      }
    }
    table = std::move(next);
  }
  return table[0];
}

cplx resolvent_product_derivative(cplx z, const NodeMultiset& nodes, int order) {
  const auto& dist = nodes.distinct();
  const auto& mult = nodes.multiplicities();
  cplx P = 1.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    P *= std::pow(z - dist[i], -mult[i]);
  if (order == 0) return P;
  // L = (log P)' = -sum m_i/(z - lambda_i); P^{(n+1)} = sum C(n,j) P^{(j)} L^{(n-j)}
  auto L_der = [&](int r) {
    cplx acc = 0.0;
    double fr = factorial(r) * ((r % 2 == 0) ? 1.0 : -1.0);
    for (std::size_t i = 0; i < dist.size(); ++i)
      acc += -static_cast<double>(mult[i]) * fr * std::pow(z - dist[i], -(r + 1));
    return acc;
  };
  std::vector<cplx> derivs{P};
  for (int n = 0; n < order; ++n) {
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j)
      acc += binomial(n, j) * derivs[static_cast<std::size_t>(j)] * L_der(n - j);
    derivs.push_back(acc);
  }
  return derivs[static_cast<std::size_t>(order)];
}

cplx divided_difference_resolvent(cplx z, int k, const NodeMultiset& nodes) {
  if (z.imag() == 0.0)
    throw validation_error("divided_difference_resolvent: Im z must be nonzero");
  if (k < 1) throw validation_error("divided_difference_resolvent: k must be positive");
  // Delta(f_z^k) = ((-1)^{k-1}/(k-1)!) d^{k-1}/dz^{k-1} Delta(f_z), and
  // Delta(f_z) is the product of (z - lambda)^{-1} over all nodes.
  cplx d = resolvent_product_derivative(z, nodes, k - 1);
  double sign = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
  return sign / factorial(k - 1) * d;
}

namespace {

// kernel degree for the truncated-power family: basic uses (lambda-t)^{n-2},
// cumulative uses (lambda-t)^{n-1}.
int kernel_degree(int n, SplineKind kind) {
  return kind == SplineKind::basic ? n - 2 : n - 1;
}

// One-sided truncated sums.  The full sum over both sides is the divided
// difference of the untruncated power: 0 for the basic degree, 1 for the
// cumulative degree.  Evaluating through the smaller side keeps the noise at
// the scale of the kernel value instead of the cancellation magnitude.
struct SideSums {
  double up = 0.0, low = 0.0, upm = 0.0, lowm = 0.0;
};

SideSums side_sums(const DividedDifferenceFunctional& F, int d, double t) {
  SideSums s;
  for (std::size_t i = 0; i < F.nodes.size(); ++i) {
    double base = F.nodes[i] - t;
    bool upper = base > 0.0;
    for (std::size_t j = 0; j < F.coeff[i].size(); ++j) {
      if (F.coeff[i][j] == 0.0) continue;
      int e = d - static_cast<int>(j);
      if (e < 0) continue;
      double pw = 1.0;
      for (int x = 0; x < e; ++x) pw *= base;
      double term = F.coeff[i][j] * (factorial(d) / factorial(e)) * pw;
      if (upper) {
        s.up += term;
        s.upm += std::abs(term);
      } else {
        s.low += term;
        s.lowm += std::abs(term);
      }
    }
  }
  return s;
}

double kernel_point_value(const DividedDifferenceFunctional& F, int d, double t,
                          SplineKind kind) {
  SideSums s = side_sums(F, d, t);
  double full = (kind == SplineKind::cumulative) ? 1.0 : 0.0;
  return (s.upm <= s.lowm) ? s.up : full - s.low;
}

double kernel_point_value(const NodeMultiset& nodes, double t, SplineKind kind) {
  int d = kernel_degree(nodes.size(), kind);
  auto F = dd_functional(nodes);
  return kernel_point_value(F, d, t, kind);
}

}  // namespace

double cumulative_spline_kernel(const NodeMultiset& nodes, double t) {
  if (nodes.all_equal()) return t < nodes.min_node() ? 1.0 : 0.0;
  if (t < nodes.min_node()) return 1.0;
  if (t >= nodes.max_node()) return 0.0;
  return kernel_point_value(nodes, t, SplineKind::cumulative);
}

double basic_spline(const NodeMultiset& nodes, double t) {
  if (nodes.size() < 2)
    throw validation_error("basic_spline: need at least two break points");
  if (nodes.all_equal())
    throw degenerate_spline_error("basic_spline: all break points coincide");
  if (nodes.size() == 2) {
    return (t > nodes.min_node() && t < nodes.max_node())
               ? 1.0 / (nodes.max_node() - nodes.min_node())
               : 0.0;
  }
  if (t <= nodes.min_node() || t >= nodes.max_node()) return 0.0;
  return kernel_point_value(nodes, t, SplineKind::basic);
}

PiecewisePolynomial spline_to_piecewise(const NodeMultiset& nodes, SplineKind kind) {
  if (kind == SplineKind::basic) {
    if (nodes.size() < 2)
      throw validation_error("spline_to_piecewise: basic kernel needs >= 2 nodes");
    if (nodes.all_equal())
      throw degenerate_spline_error("spline_to_piecewise: all break points coincide");
  }
  if (nodes.all_equal()) {
    // indicator of (-inf, lambda_1), value 0 at lambda_1
    return PiecewisePolynomial({nodes.min_node()}, {}, 1.0, 0.0);
  }
  int d = kernel_degree(nodes.size(), kind);
  auto F = dd_functional(nodes);
  const auto& g = F.nodes;  // breakpoints
  std::size_t K = g.size() - 1;
  // Sample each interval at d+1 interior points and interpolate in the scaled
  // variable; avoids expanding the truncated powers in an ill-conditioned
  // monomial basis when the node spread is large relative to the gaps.
  std::size_t m = static_cast<std::size_t>(d) + 1;
  std::vector<double> tau(m);
  for (std::size_t q = 0; q < m; ++q)
    tau[q] = 0.5 - 0.5 * std::cos(kPi * (static_cast<double>(q) + 0.5) / static_cast<double>(m));
  std::vector<std::vector<double>> coeffs(K, std::vector<double>(m, 0.0));
  std::vector<double> newton(m), poly(m);
  for (std::size_t k = 0; k < K; ++k) {
    double width = g[k + 1] - g[k];
    for (std::size_t q = 0; q < m; ++q)
      newton[q] = kernel_point_value(F, d, g[k] + tau[q] * width, kind);
    for (std::size_t lev = 1; lev < m; ++lev)
      for (std::size_t q = m - 1; q >= lev; --q)
        newton[q] = (newton[q] - newton[q - 1]) / (tau[q] - tau[q - lev]);
    std::fill(poly.begin(), poly.end(), 0.0);
    for (std::size_t q = m; q-- > 0;) {
      for (std::size_t s = m - 1; s >= 1; --s) poly[s] = poly[s - 1] - tau[q] * poly[s];
      poly[0] = newton[q] - tau[q] * poly[0];
    }
    double wpow = 1.0;
    for (std::size_t s = 0; s < m; ++s) {
      coeffs[k][s] = poly[s] / wpow;
      wpow *= width;
    }
  }
  double left = (kind == SplineKind::cumulative) ? 1.0 : 0.0;
  return PiecewisePolynomial(g, std::move(coeffs), left, 0.0);
}

}  // namespace specshift
