#ifndef SPECSHIFT_SSF_ENGINE_HPP
#define SPECSHIFT_SSF_ENGINE_HPP

#include "specshift/piecewise.hpp"
#include "specshift/taylor_remainder.hpp"

namespace specshift {

enum class BreakpointSource { spectrum_h0, spectrum_perturbed, both };

// Spectral shift density of a given order: order 1 is the counting-function
// step density xi, order p >= 2 the recursive density eta_p.
struct SSFDensity {
  int order = 0;
  PiecewisePolynomial density;
  double mass = 0.0;
  std::vector<BreakpointSource> breakpoint_provenance;  // one tag per breakpoint
};

struct AsymptoticsReport {
  double left_limit = 0.0;
  double right_limit = 0.0;
  bool empty_support = true;
  double support_min = 0.0;
  double support_max = 0.0;
};

// xi(t) = counting(H0, t) - counting(H0+V, t); step density with breakpoints
// at both spectra and mass trace(V).
SSFDensity krein_xi(const HermitianOperator& H0, const HermitianOperator& V);
SSFDensity krein_xi(const TaylorContext& ctx);

// eta_p for p >= 2 via the recursion
//   eta_p(t) = trace(V^{p-1})/(p-1)! - nu_{p-1}((-inf,t))
//              - (1/(p-1)!) * integral of the cumulative kernel d m_{p-1},
// with recursion base nu_1 = xi dt.
SSFDensity eta_recursive(const HermitianOperator& H0, const HermitianOperator& V, int p);
SSFDensity eta_recursive(const TaylorContext& ctx, int p);

// eta_p assembled directly over both spectra:
//   eta_p(t) = (1/(p-1)!) sum trace(P_{i1} V ... P_{ip} V Q_j)
//                             * B_{lambda_{i1},...,lambda_{ip},mu_j}(t)
// with B the basic spline over the p+1 mixed nodes and Q_j the projections of
// H0 + V.  Agrees with eta_recursive; each term is local, so no cancellation
// across the spectral diameter is needed and wide spectra stay accurate.
// Order 1 gives the double-integral form of xi (same function as krein_xi).
SSFDensity eta_direct(const TaylorContext& ctx, int p,
                      std::uint64_t atom_budget = 10'000'000);

// Densities of all orders 1..p: counting-function xi, then eta_direct.
std::vector<SSFDensity> ssf_family(const TaylorContext& ctx, int p);

// nu_order((-inf, t]) = integral of the density up to t.
double cumulative(const SSFDensity& S, double t);

// integral f^{(order)}(t) * density(t) dt, closed form.
cplx trace_formula_rhs(const SSFDensity& S, const FunctionSpec& f);

AsymptoticsReport asymptotics_report(const SSFDensity& S);

}  // namespace specshift

#endif
