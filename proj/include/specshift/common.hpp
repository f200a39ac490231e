#ifndef SPECSHIFT_COMMON_HPP
#define SPECSHIFT_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace specshift {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Input failed a structural precondition (non-Hermitian matrix, bad flag, ...).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A rational function has a pole at (or too close to) an evaluation node.
class pole_collision_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested computation exceeds the configured atom budget.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity that must be real came out with a non-negligible imaginary part;
// signals an upstream decomposition failure.
class symmetry_violation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Basic spline requested with all break points coincident.
class degenerate_spline_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver failed to converge.
class eigensolver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace specshift

#endif
