#include "specshift/cauchy.hpp"

#include <cmath>

namespace specshift {

namespace {

cplx regularized_atom(double t, cplx z) {
  return 1.0 / (z - t) + t / (t * t + 1.0);
}

// integral over the right tail [a, inf) of the regularized kernel.
cplx right_tail_transform(double a, cplx z) {
  double s = (z.imag() > 0.0) ? 1.0 : -1.0;
  return cplx(0.0, -s * kPi) + std::log(z - a) - 0.5 * std::log(a * a + 1.0);
}

// integral over the left tail (-inf, a] of the regularized kernel.
cplx left_tail_transform(double a, cplx z) {
  return -std::log(z - a) + 0.5 * std::log(a * a + 1.0);
}

double density_regularizer_integral(const PiecewisePolynomial& P) {
  double acc = 0.0;
  const auto& g = P.breakpoints();
  for (std::size_t k = 0; k < P.piece_count(); ++k) {
    const auto& a = P.piece(k);
    for (std::size_t r = 0; r < a.size(); ++r)
      if (a[r] != 0.0)
        acc += a[r] * detail::poly_times_regularizer(g[k], static_cast<int>(r), g[k], g[k + 1]);
  }
  return acc;
}

}  // namespace

MeasureSpec MeasureSpec::point_mass(double location, double weight) {
  MeasureSpec m;
  m.discrete_atoms.push_back({location, weight});
  return m;
}

MeasureSpec MeasureSpec::from_density(PiecewisePolynomial density) {
  MeasureSpec m;
  m.ac_density = std::move(density);
  return m;
}

cplx cauchy_transform(const MeasureSpec& m, cplx z) {
  if (z.imag() == 0.0) throw validation_error("cauchy_transform: z must be non-real");
  cplx acc = 0.0;
  for (const auto& [t, w] : m.discrete_atoms) acc += w * regularized_atom(t, z);
  if (m.ac_density) {
    const PiecewisePolynomial& P = *m.ac_density;
    const auto& g = P.breakpoints();
    for (std::size_t k = 0; k < P.piece_count(); ++k) {
      acc += detail::polyblock_over_resolvent(g[k], P.piece(k), z, 1, g[k], g[k + 1]);
      const auto& a = P.piece(k);
      for (std::size_t r = 0; r < a.size(); ++r)
        if (a[r] != 0.0)
          acc += a[r] * detail::poly_times_regularizer(g[k], static_cast<int>(r), g[k], g[k + 1]);
    }
    if (P.left_tail_value() != 0.0) acc += P.left_tail_value() * left_tail_transform(g.front(), z);
    if (P.right_tail_value() != 0.0) acc += P.right_tail_value() * right_tail_transform(g.back(), z);
  }
  return acc;
}

cplx cauchy_derivative(const MeasureSpec& m, cplx z, int k) {
  if (k < 1) throw validation_error("cauchy_derivative: order must be positive");
  if (z.imag() == 0.0) throw validation_error("cauchy_derivative: z must be non-real");
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  cplx acc = 0.0;
  for (const auto& [t, w] : m.discrete_atoms)
    acc += w * sign * factorial(k) * std::pow(z - t, -(k + 1));
  if (m.ac_density)
    acc += sign * piecewise_integrate(*m.ac_density, FunctionSpec::resolvent(z), k);
  return acc;
}

InversionResult stieltjes_invert(const std::function<cplx(cplx)>& G, double t,
                                 const std::vector<double>& eps_schedule) {
  if (eps_schedule.empty()) throw validation_error("stieltjes_invert: empty schedule");
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    if (eps_schedule[j] <= 0.0) throw validation_error("stieltjes_invert: eps must be positive");
    if (j > 0 && eps_schedule[j] >= eps_schedule[j - 1])
      throw validation_error("stieltjes_invert: schedule must be strictly decreasing");
  }
  InversionResult r;
  double prev = 0.0;
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    double v = -(1.0 / kPi) * G(cplx(t, eps_schedule[j])).imag();
    if (j > 0) r.successive_diffs.push_back(std::abs(v - prev));
    prev = v;
    r.value = v;
  }
  double floor = 1e-12 * (std::abs(r.value) + 1.0);
  r.converged = true;
  for (std::size_t j = 1; j < r.successive_diffs.size(); ++j)
    if (r.successive_diffs[j] > 0.9 * r.successive_diffs[j - 1] + floor) r.converged = false;
  return r;
}

PiecewisePolynomial cumulative_of_measure(const MeasureSpec& m) {
  PiecewisePolynomial F;
  bool have = false;
  if (m.ac_density) {
    if (m.ac_density->left_tail_value() != 0.0)
      throw validation_error("cumulative_of_measure: density left tail must vanish");
    F = m.ac_density->antiderivative();
    have = true;
  }
  for (const auto& [t, w] : m.discrete_atoms) {
    PiecewisePolynomial step({t}, {}, 0.0, w);
    F = have ? PiecewisePolynomial::combine(F, 1.0, step, 1.0) : step;
    have = true;
  }
  if (!have) return PiecewisePolynomial();
  return F;
}

PartsCheckResult integration_by_parts_check(const MeasureSpec& m, cplx z) {
  if (z.imag() == 0.0) throw validation_error("integration_by_parts_check: z must be non-real");
  if (m.ac_density && !m.ac_density->compactly_supported())
    throw validation_error("integration_by_parts_check: density must be compactly supported");
  cplx lhs = cauchy_transform(m, z);
  double reg = 0.0;
  for (const auto& [t, w] : m.discrete_atoms) reg += w * t / (t * t + 1.0);
  if (m.ac_density) reg += density_regularizer_integral(*m.ac_density);
  lhs -= reg;
  PiecewisePolynomial F = cumulative_of_measure(m);
  cplx rhs = -piecewise_integrate(F, FunctionSpec::resolvent(z, 2), 0);
  PartsCheckResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  return r;
}

cplx log_transform(const NodeMultiset& nodes, cplx z) {
  if (z.imag() <= 0.0) throw validation_error("log_transform: Im z must be positive");
  PiecewisePolynomial P = spline_to_piecewise(nodes, SplineKind::basic);
  const auto& g = P.breakpoints();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < P.piece_count(); ++k) {
    const auto& a = P.piece(k);
    for (std::size_t r = 0; r < a.size(); ++r)
      if (a[r] != 0.0)
        acc += a[r] * detail::poly_times_log(g[k], static_cast<int>(r), z, g[k], g[k + 1]);
  }
  return acc;
}

}  // namespace specshift
