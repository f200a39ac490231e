#ifndef SPECSHIFT_OPERATOR_CORE_HPP
#define SPECSHIFT_OPERATOR_CORE_HPP

#include <Eigen/Dense>
#include <vector>

#include "specshift/common.hpp"
#include "specshift/function_spec.hpp"

namespace specshift {

using Matrix = Eigen::MatrixXcd;

// Finite-dimensional Hermitian operator; construction rejects non-Hermitian
// input at tolerance 1e-12 * (max absolute entry).
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);
  static HermitianOperator diagonal(const std::vector<double>& values);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  HermitianOperator plus(const HermitianOperator& other) const;
  HermitianOperator scaled(double a) const;

 private:
  Matrix m_;
};

// Eigenvalue clustering + spectral projections.  Degenerate eigenvalues are
// carried as a single rank-m projection.
struct SpectralDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;      // strictly increasing after clustering
  std::vector<Matrix> projections;      // Hermitian idempotents, sum = I
  std::vector<int> multiplicities;
};

// Default cluster_tol (negative argument) is 1e-9 * (spectral diameter + 1).
SpectralDecomposition spectral_decompose(const HermitianOperator& H,
                                         double cluster_tol = -1.0);

// sum_i f(lambda_i) P_i; rejects poles within 1e-12 of an eigenvalue.
Matrix apply_function(const SpectralDecomposition& D, const FunctionSpec& f);

// (zI - H)^{-k}; requires Im z != 0.
Matrix resolvent(const SpectralDecomposition& D, cplx z, int k = 1);

cplx trace(const Matrix& M);

// sum of multiplicities over eigenvalues strictly below t.
int counting_function(const SpectralDecomposition& D, double t);

// (sum sigma_i^p)^{1/p}; operator norm for p = infinity.  Requires p >= 1.
double schatten_norm(const Matrix& M, double p);

}  // namespace specshift

#endif
