#ifndef SPECSHIFT_FUNCTION_SPEC_HPP
#define SPECSHIFT_FUNCTION_SPEC_HPP

#include <variant>
#include <vector>

#include "specshift/common.hpp"

namespace specshift {

// x^k for x >= 0, else 0; 0^0 = 1 on the x >= 0 branch.
inline double truncated_power(double x, int k) {
  if (x < 0.0) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Symbolic test functions with closed-form derivatives of every order.
// A FunctionSpec is a finite weighted sum of primitive terms.
class FunctionSpec {
 public:
  struct ResolventPower {  // lambda -> (z - lambda)^{-k}
    cplx z;
    int k;
  };
  struct Polynomial {  // ascending coefficients
    std::vector<cplx> coeffs;
  };
  struct Exponential {  // lambda -> exp(i*s*lambda)
    double s;
  };
  struct TruncatedPower {  // lambda -> (lambda - t)_+^k
    double t;
    int k;
  };
  using Primitive =
      std::variant<ResolventPower, Polynomial, Exponential, TruncatedPower>;
  struct Term {
    cplx weight;
    Primitive primitive;
  };

  static FunctionSpec resolvent(cplx z, int k = 1);
  static FunctionSpec polynomial(std::vector<cplx> coeffs);
  static FunctionSpec monomial(int degree);  // lambda -> lambda^degree
  static FunctionSpec constant(cplx c);
  static FunctionSpec exponential(double s);
  static FunctionSpec truncated(double t, int k);

  FunctionSpec operator+(const FunctionSpec& other) const;
  FunctionSpec scaled(cplx w) const;

  // f^{(order)}(lambda), exact.
  cplx evaluate(double lambda, int order = 0) const;

  const std::vector<Term>& terms() const { return terms_; }

  // True when some resolvent term has a pole within tol of lambda.
  bool has_pole_near(double lambda, double tol) const;

  // True when every term is a resolvent power (enables the stable
  // product-form divided difference).
  bool is_pure_resolvent() const;

  // Degree if the spec is a plain polynomial, -1 otherwise (and for zero).
  int polynomial_degree() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace specshift

#endif
