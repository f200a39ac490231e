#ifndef SPECSHIFT_TAYLOR_REMAINDER_HPP
#define SPECSHIFT_TAYLOR_REMAINDER_HPP

#include <optional>

#include "specshift/multimeasure.hpp"
#include "specshift/operator_core.hpp"

namespace specshift {

enum class RemainderMethod { spectral, multilinear, finite_difference };

struct RemainderResult {
  int order = 0;
  cplx value_trace;
  std::optional<Matrix> op;
  RemainderMethod method = RemainderMethod::spectral;
};

// Shared per-pair state: decompositions of H0 and H0+V plus lazily built
// multilinear measures.  All remainder computations route through this to
// avoid repeated eigensolves in verification sweeps.
class TaylorContext {
 public:
  TaylorContext(HermitianOperator H0, HermitianOperator V, double cluster_tol = -1.0);

  const HermitianOperator& h0() const { return h0_; }
  const HermitianOperator& perturbation() const { return v_; }
  const SpectralDecomposition& decomposition() const { return d0_; }
  const SpectralDecomposition& perturbed_decomposition() const { return d1_; }

  const MultiSpectralMeasure& measure(int order) const;

  // (1/j!) d^j/dt^j trace f(H0 + tV) at t = 0, via the order-j measure with a
  // repeated first node.
  cplx gateaux_trace(const FunctionSpec& f, int j) const;

  Matrix remainder_operator(const FunctionSpec& f, int p) const;
  cplx remainder_trace(const FunctionSpec& f, int p) const;

  // Independent oracle: central differences in the coupling parameter with
  // two-level Richardson extrapolation.  Default h (negative argument) is
  // 1e-2 / (1 + opnorm V).
  cplx fd_remainder_trace(const FunctionSpec& f, int p, double h = -1.0) const;

  // FD estimate of the j-th scaled derivative (1/j!) d^j/dt^j trace f(H0+tV).
  cplx fd_gateaux_trace(const FunctionSpec& f, int j, double h = -1.0) const;

 private:
  HermitianOperator h0_, v_;
  SpectralDecomposition d0_, d1_;
  mutable std::vector<MultiSpectralMeasure> measures_;
};

// One-shot wrappers.
cplx gateaux_trace(const SpectralDecomposition& D, const HermitianOperator& V,
                   const FunctionSpec& f, int j);
Matrix remainder_operator(const HermitianOperator& H0, const HermitianOperator& V,
                          const FunctionSpec& f, int p);
cplx remainder_trace(const HermitianOperator& H0, const HermitianOperator& V,
                     const FunctionSpec& f, int p);
cplx fd_remainder_trace(const HermitianOperator& H0, const HermitianOperator& V,
                        const FunctionSpec& f, int p, double h = -1.0);

}  // namespace specshift

#endif
