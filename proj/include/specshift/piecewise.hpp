#ifndef SPECSHIFT_PIECEWISE_HPP
#define SPECSHIFT_PIECEWISE_HPP

#include <vector>

#include "specshift/common.hpp"
#include "specshift/function_spec.hpp"

namespace specshift {

// Real piecewise polynomial on strictly increasing breakpoints b_0 < ... < b_K,
// constant on the two tails.  Interval k is [b_k, b_{k+1}), left-closed; the
// piece polynomial is stored in ascending powers of the shifted variable
// (t - b_k).  K = 0 (a single breakpoint, no interior pieces) represents a
// plain step between the two tail values.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial();  // identically zero
  PiecewisePolynomial(std::vector<double> breakpoints,
                      std::vector<std::vector<double>> coefficients,
                      double left_tail_value, double right_tail_value);

  double operator()(double t) const;

  const std::vector<double>& breakpoints() const { return breaks_; }
  std::size_t piece_count() const { return coeffs_.size(); }
  const std::vector<double>& piece(std::size_t k) const { return coeffs_[k]; }
  double left_tail_value() const { return left_tail_; }
  double right_tail_value() const { return right_tail_; }
  int degree() const;
  bool compactly_supported() const { return left_tail_ == 0.0 && right_tail_ == 0.0; }

  // Largest |value| over tails and piece coefficients; a cheap scale proxy.
  double coefficient_scale() const;

  // integral over all of R; requires both tails zero.
  double integral() const;

  // t -> integral_{-inf}^t; requires left tail zero.  Result has left tail 0
  // and right tail equal to integral().
  PiecewisePolynomial antiderivative() const;

  PiecewisePolynomial scaled(double a) const;

  // alpha*f + beta*g on the merged breakpoint grid.
  static PiecewisePolynomial combine(const PiecewisePolynomial& f, double alpha,
                                     const PiecewisePolynomial& g, double beta);

  // Add a constant c (shifts both tails and every piece).
  PiecewisePolynomial plus_constant(double c) const;

  // Replace tail values (used after asserting structural cancellation).
  PiecewisePolynomial with_tails(double left, double right) const;

  // Max absolute coefficient difference after refining both to a common grid;
  // exact comparison tool for piecewise identities.
  static double max_coefficient_deviation(const PiecewisePolynomial& f,
                                          const PiecewisePolynomial& g);

  // Local coefficients of the function restricted to [x0, x1), expanded in
  // powers of (t - x0).  [x0, x1) must not straddle a breakpoint.
  std::vector<double> local_coefficients(double x0, double x1) const;

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coeffs_;
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
};

// integral of P(t) * f^{(order)}(t) dt in closed form per interval.  Requires
// P compactly supported, except that constant tails are allowed against
// resolvent terms of total order >= 2 (integrable tails).
cplx piecewise_integrate(const PiecewisePolynomial& P, const FunctionSpec& f,
                         int order);

// Closed-form building blocks, exposed for the transform modules.
namespace detail {

// integral_{x0}^{x1} (t - b)^n / (z - t)^m dt, principal branch; Im z != 0.
cplx poly_over_resolvent(double b, int n, cplx z, int m, double x0, double x1);

// Same for a full coefficient list a_r on (t-b)^r.
cplx polyblock_over_resolvent(double b, const std::vector<double>& a, cplx z,
                              int m, double x0, double x1);

// integral_{x0}^{x1} (t - b)^n e^{i s t} dt.
cplx poly_times_exponential(double b, int n, double s, double x0, double x1);

// integral_{x0}^{x1} (t - b)^n log(z - t) dt, principal branch, Im z > 0.
cplx poly_times_log(double b, int n, cplx z, double x0, double x1);

// integral_{x0}^{x1} (t - b)^n * t/(t^2+1) dt (real).
double poly_times_regularizer(double b, int n, double x0, double x1);

}  // namespace detail

}  // namespace specshift

#endif
