#include "specshift/operator_core.hpp"

#include <cmath>
#include <limits>

namespace specshift {

HermitianOperator::HermitianOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw validation_error("HermitianOperator: matrix must be square and nonempty");
  double scale = m_.cwiseAbs().maxCoeff();
  double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * std::max(scale, 1e-300) && dev > 0.0)
    throw validation_error("HermitianOperator: matrix is not Hermitian");
  m_ = 0.5 * (m_ + m_.adjoint().eval());  // exact symmetrization
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& values) {
  Matrix m = Matrix::Zero(static_cast<int>(values.size()), static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::plus(const HermitianOperator& other) const {
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::scaled(double a) const {
  return HermitianOperator(a * m_);
}

SpectralDecomposition spectral_decompose(const HermitianOperator& H, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H.matrix());
  if (solver.info() != Eigen::Success)
    throw eigensolver_error("eigensolver failed to converge, dim=" +
                            std::to_string(H.dim()));
  Eigen::VectorXd vals = solver.eigenvalues();
  Matrix vecs = solver.eigenvectors();
  int n = H.dim();
  if (cluster_tol < 0.0) {
    double diam = vals(n - 1) - vals(0);
    cluster_tol = 1e-9 * (diam + 1.0);
  }
  SpectralDecomposition D;
  D.dim = n;
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && vals(j) - vals(j - 1) <= cluster_tol) ++j;
    double mean = 0.0;
    for (int l = i; l < j; ++l) mean += vals(l);
    mean /= (j - i);
    Matrix block = vecs.middleCols(i, j - i);
    D.eigenvalues.push_back(mean);
    D.projections.push_back(block * block.adjoint());
    D.multiplicities.push_back(j - i);
    i = j;
  }
  return D;
}

Matrix apply_function(const SpectralDecomposition& D, const FunctionSpec& f) {
  Matrix out = Matrix::Zero(D.dim, D.dim);
  for (std::size_t i = 0; i < D.eigenvalues.size(); ++i) {
    if (f.has_pole_near(D.eigenvalues[i], 1e-12))
      throw pole_collision_error("apply_function: pole at eigenvalue " +
                                 std::to_string(D.eigenvalues[i]));
    out += f.evaluate(D.eigenvalues[i]) * D.projections[i];
  }
  return out;
}

Matrix resolvent(const SpectralDecomposition& D, cplx z, int k) {
  if (z.imag() == 0.0) throw validation_error("resolvent: Im z must be nonzero");
  if (k < 1) throw validation_error("resolvent: power must be positive");
  Matrix out = Matrix::Zero(D.dim, D.dim);
  for (std::size_t i = 0; i < D.eigenvalues.size(); ++i)
    out += std::pow(z - D.eigenvalues[i], -k) * D.projections[i];
  return out;
}

cplx trace(const Matrix& M) {
  if (M.rows() != M.cols()) throw validation_error("trace: matrix must be square");
  return M.trace();
}

int counting_function(const SpectralDecomposition& D, double t) {
  int c = 0;
  for (std::size_t i = 0; i < D.eigenvalues.size(); ++i)
    if (D.eigenvalues[i] < t) c += D.multiplicities[i];
  return c;
}

double schatten_norm(const Matrix& M, double p) {
  if (M.rows() != M.cols()) throw validation_error("schatten_norm: matrix must be square");
  if (!(p >= 1.0)) throw validation_error("schatten_norm: p must be >= 1");
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  if (std::isinf(p)) return s.size() ? s(0) : 0.0;
  double acc = 0.0;
  for (int i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace specshift
