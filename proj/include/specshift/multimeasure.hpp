#ifndef SPECSHIFT_MULTIMEASURE_HPP
#define SPECSHIFT_MULTIMEASURE_HPP

#include <cstdint>
#include <vector>

#include "specshift/divdiff.hpp"
#include "specshift/operator_core.hpp"
#include "specshift/piecewise.hpp"

namespace specshift {

// Discrete measure on p-tuples of distinct eigenvalues of H0 with complex
// weights trace(P_{i1} V P_{i2} V ... P_{ip} V).
class MultiSpectralMeasure {
 public:
  struct Atom {
    std::vector<int> idx;  // indices into eigenvalues()
    cplx weight;
  };

  int order() const { return order_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_abs_weight() const { return total_abs_; }
  cplx total_weight() const;

  friend MultiSpectralMeasure build_measure(const SpectralDecomposition& D,
                                            const HermitianOperator& V, int p,
                                            std::uint64_t atom_budget);

 private:
  int order_ = 0;
  std::vector<double> eigenvalues_;
  std::vector<Atom> atoms_;
  double total_abs_ = 0.0;
};

MultiSpectralMeasure build_measure(const SpectralDecomposition& D,
                                   const HermitianOperator& V, int p,
                                   std::uint64_t atom_budget = 10'000'000);

enum class NodePattern { plain, first_repeated };

// plain:          sum_atoms w * Delta^{(p-1)} f(lambda_{i1}, ..., lambda_{ip})
// first_repeated: sum_atoms w * Delta^{(p)}  f(lambda_{i1}, ..., lambda_{ip}, lambda_{i1})
cplx integrate_divided_difference(const MultiSpectralMeasure& m, const FunctionSpec& f,
                                  NodePattern pattern);

// sum_atoms w * Delta^{(p-1)}[(lambda - t)_+^{p-1}], real part after an
// imaginary-residue check at 1e-10 * sum|w|.
double integrate_cumulative_kernel(const MultiSpectralMeasure& m, double t);

// Exact global-in-t form of integrate_cumulative_kernel; left tail equals the
// total weight (trace V^p), right tail 0.
PiecewisePolynomial kernel_integral_to_piecewise(const MultiSpectralMeasure& m);

}  // namespace specshift

#endif
