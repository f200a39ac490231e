#ifndef SPECSHIFT_CAUCHY_HPP
#define SPECSHIFT_CAUCHY_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "specshift/divdiff.hpp"
#include "specshift/piecewise.hpp"

namespace specshift {

// Finite real measure: point masses plus an optional piecewise-polynomial
// absolutely continuous part (constant tails allowed where the regularized
// transform still converges).
struct MeasureSpec {
  std::vector<std::pair<double, double>> discrete_atoms;  // (location, weight)
  std::optional<PiecewisePolynomial> ac_density;

  static MeasureSpec point_mass(double location, double weight = 1.0);
  static MeasureSpec from_density(PiecewisePolynomial density);
};

// G_nu(z) = integral (1/(z-t) + t/(t^2+1)) dnu(t), Im z != 0; closed form.
cplx cauchy_transform(const MeasureSpec& m, cplx z);

// G_nu^{(k)}(z) = integral (-1)^k k!/(z-t)^{k+1} dnu(t), k >= 1; closed form.
cplx cauchy_derivative(const MeasureSpec& m, cplx z, int k);

struct InversionResult {
  double value = 0.0;                      // -(1/pi) Im G(t + i eps_min)
  std::vector<double> successive_diffs;    // |value_j - value_{j-1}| along the schedule
  bool converged = false;                  // diffs shrink monotonically to the end
};

// Stieltjes inversion along a decreasing epsilon schedule.
InversionResult stieltjes_invert(const std::function<cplx(cplx)>& G, double t,
                                 const std::vector<double>& eps_schedule);

struct PartsCheckResult {
  cplx lhs;
  cplx rhs;
  double residual;
};

// Integration-by-parts identity:
//   G(z) - integral t/(t^2+1) dnu  ==  d/dz transform of nu((-inf, t)).
PartsCheckResult integration_by_parts_check(const MeasureSpec& m, cplx z);

// J(z) = integral log(z - t) * Delta^{(p-1)}[(lambda - t)_+^{p-2}] dt over the
// p = size nodes (>= 2 distinct); Im z > 0, principal branch.
cplx log_transform(const NodeMultiset& nodes, cplx z);

// nu((-inf, t)) as a piecewise polynomial (steps at atoms, antiderivative of
// the density); right tail equals the total mass.
PiecewisePolynomial cumulative_of_measure(const MeasureSpec& m);

}  // namespace specshift

#endif
