#ifndef SPECSHIFT_DIVDIFF_HPP
#define SPECSHIFT_DIVDIFF_HPP

#include <vector>

#include "specshift/common.hpp"
#include "specshift/function_spec.hpp"
#include "specshift/piecewise.hpp"

namespace specshift {

// Ordered real nodes with multiplicities.  Nodes closer than merge_tol are
// merged (weighted mean) so that confluent evaluation takes the derivative
// branch instead of dividing by a tiny separation.
class NodeMultiset {
 public:
  // Default merge_tol (negative) is 1e-9 * (node diameter + 1).
  explicit NodeMultiset(std::vector<double> nodes, double merge_tol = -1.0);

  int size() const { return n_; }
  const std::vector<double>& distinct() const { return distinct_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int max_multiplicity() const;
  bool all_equal() const { return distinct_.size() == 1; }
  double min_node() const { return distinct_.front(); }
  double max_node() const { return distinct_.back(); }

  // All nodes (merged representatives), ascending, with multiplicity.
  std::vector<double> sorted_values() const;

  NodeMultiset appended(double node) const;

 private:
  int n_ = 0;
  std::vector<double> distinct_;
  std::vector<int> mult_;
};

// The divided difference over a node multiset as the linear functional
// f -> sum_{i,j} coeff[i][j] f^{(j)}(lambda_i), with j < multiplicity(i).
struct DividedDifferenceFunctional {
  std::vector<double> nodes;                 // distinct values
  std::vector<std::vector<double>> coeff;    // coeff[i][j]
};
DividedDifferenceFunctional dd_functional(const NodeMultiset& nodes);

// Delta^{(n-1)} f over the nodes; confluent nodes use exact derivatives.
cplx divided_difference(const FunctionSpec& f, const NodeMultiset& nodes);

// Stable closed form for f_z^k: for k=1 the product of (z - lambda)^{-1} over
// all nodes with multiplicity; for k>1 obtained by exact z-differentiation of
// the product form.
cplx divided_difference_resolvent(cplx z, int k, const NodeMultiset& nodes);

// d^order/dz^order of prod_i (z - lambda_i)^{-m_i}, exact.
cplx resolvent_product_derivative(cplx z, const NodeMultiset& nodes, int order);

enum class SplineKind {
  basic,       // n nodes -> Delta^{(n-1)}[(lambda - t)_+^{n-2}], n >= 2
  cumulative,  // n nodes -> Delta^{(n-1)}[(lambda - t)_+^{n-1}]
};

// Point evaluation of the nonincreasing cumulative kernel over p = size nodes:
// Delta^{(p-1)}[(lambda - t)_+^{p-1}].  All nodes equal gives the indicator of
// (-inf, lambda_1), with value 0 at t = lambda_1.
double cumulative_spline_kernel(const NodeMultiset& nodes, double t);

// Point evaluation of the basic spline over p+1 = size nodes (>= 2 distinct).
double basic_spline(const NodeMultiset& nodes, double t);

// Exact piecewise-polynomial form of either kernel.
PiecewisePolynomial spline_to_piecewise(const NodeMultiset& nodes, SplineKind kind);

}  // namespace specshift

#endif
