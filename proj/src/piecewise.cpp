#include "specshift/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace specshift {

PiecewisePolynomial::PiecewisePolynomial() : breaks_{0.0} {}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> coefficients,
                                         double left_tail_value,
                                         double right_tail_value)
    : breaks_(std::move(breakpoints)),
      coeffs_(std::move(coefficients)),
      left_tail_(left_tail_value),
      right_tail_(right_tail_value) {
  if (breaks_.empty()) throw validation_error("piecewise: need at least one breakpoint");
  if (coeffs_.size() + 1 != breaks_.size())
    throw validation_error("piecewise: breakpoint/coefficient count mismatch");
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
    if (!(breaks_[k] < breaks_[k + 1]))
      throw validation_error("piecewise: breakpoints must be strictly increasing");
  }
}

double PiecewisePolynomial::operator()(double t) const {
  if (t < breaks_.front()) return left_tail_;
  if (t >= breaks_.back()) return right_tail_;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  const auto& a = coeffs_[k];
  double u = t - breaks_[k];
  double acc = 0.0;
  for (std::size_t r = a.size(); r-- > 0;) acc = acc * u + a[r];
  return acc;
}

int PiecewisePolynomial::degree() const {
  int d = 0;
  for (const auto& a : coeffs_) {
    for (std::size_t r = a.size(); r-- > 0;) {
      if (a[r] != 0.0) {
        d = std::max(d, static_cast<int>(r));
        break;
      }
    }
  }
  return d;
}

double PiecewisePolynomial::coefficient_scale() const {
  double s = std::max(std::abs(left_tail_), std::abs(right_tail_));
  for (const auto& a : coeffs_)
    for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

double PiecewisePolynomial::integral() const {
  if (!compactly_supported())
    throw validation_error("piecewise: integral requires zero tails");
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double h = breaks_[k + 1] - breaks_[k];
    const auto& a = coeffs_[k];
    double hp = h;
    for (std::size_t r = 0; r < a.size(); ++r) {
      acc += a[r] * hp / static_cast<double>(r + 1);
      hp *= h;
    }
  }
  return acc;
}

PiecewisePolynomial PiecewisePolynomial::antiderivative() const {
  if (!compactly_supported())
    throw validation_error("piecewise: antiderivative requires zero tails");
  std::vector<std::vector<double>> anti(coeffs_.size());
  double running = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const auto& a = coeffs_[k];
    std::vector<double> b(a.size() + 1, 0.0);
    b[0] = running;
    for (std::size_t r = 0; r < a.size(); ++r) b[r + 1] = a[r] / static_cast<double>(r + 1);
    double h = breaks_[k + 1] - breaks_[k];
    double val = 0.0;
    for (std::size_t r = b.size(); r-- > 0;) val = val * h + b[r];
    running = val;
    anti[k] = std::move(b);
  }
  return PiecewisePolynomial(breaks_, std::move(anti), 0.0, running);
}

PiecewisePolynomial PiecewisePolynomial::scaled(double a) const {
  auto c = coeffs_;
  for (auto& piece : c)
    for (double& v : piece) v *= a;
  return PiecewisePolynomial(breaks_, std::move(c), left_tail_ * a, right_tail_ * a);
}

PiecewisePolynomial PiecewisePolynomial::plus_constant(double c) const {
  auto cc = coeffs_;
  for (auto& piece : cc) {
    if (piece.empty()) piece.push_back(0.0);
    piece[0] += c;
  }
  return PiecewisePolynomial(breaks_, std::move(cc), left_tail_ + c, right_tail_ + c);
}

PiecewisePolynomial PiecewisePolynomial::with_tails(double left, double right) const {
  return PiecewisePolynomial(breaks_, coeffs_, left, right);
}

std::vector<double> PiecewisePolynomial::local_coefficients(double x0, double x1) const {
  // Region selection by midpoint, robust to breakpoint merge noise at the ends.
  double xm = 0.5 * (x0 + x1);
  if (xm < breaks_.front()) return {left_tail_};
  if (xm >= breaks_.back()) return {right_tail_};
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), xm);
  std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  double tol = 1e-9 * (breaks_.back() - breaks_.front() + 1.0);
  if (x1 > breaks_[k + 1] + tol || x0 < breaks_[k] - tol)
    throw validation_error("piecewise: query interval straddles a breakpoint");
  const auto& a = coeffs_[k];
  double shift = x0 - breaks_[k];  // re-center from b_k to x0
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t r = 0; r < a.size(); ++r) {
    double pw = 1.0;
    for (std::size_t s2 = 0; s2 <= r; ++s2) {
      std::size_t s = r - s2;  // pw = shift^{r-s}
      out[s] += a[r] * binomial(static_cast<int>(r), static_cast<int>(s)) * pw;
      pw *= shift;
    }
  }
  if (out.empty()) out.push_back(0.0);
  return out;
}

namespace {

std::vector<double> merged_grid(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> g;
  g.reserve(a.size() + b.size());
  g.insert(g.end(), a.begin(), a.end());
  g.insert(g.end(), b.begin(), b.end());
  std::sort(g.begin(), g.end());
  double span = g.back() - g.front();
  double tol = 1e-12 * (span + 1.0);
  std::vector<double> out;
  for (double v : g) {
    if (out.empty() || v - out.back() > tol)
      out.push_back(v);
  }
  return out;
}

}  // namespace

PiecewisePolynomial PiecewisePolynomial::combine(const PiecewisePolynomial& f, double alpha,
                                                 const PiecewisePolynomial& g, double beta) {
  std::vector<double> grid = merged_grid(f.breaks_, g.breaks_);
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    auto cf = f.local_coefficients(grid[k], grid[k + 1]);
    auto cg = g.local_coefficients(grid[k], grid[k + 1]);
    std::vector<double> c(std::max(cf.size(), cg.size()), 0.0);
    for (std::size_t r = 0; r < cf.size(); ++r) c[r] += alpha * cf[r];
    for (std::size_t r = 0; r < cg.size(); ++r) c[r] += beta * cg[r];
    coeffs.push_back(std::move(c));
  }
  return PiecewisePolynomial(std::move(grid), std::move(coeffs),
                             alpha * f.left_tail_ + beta * g.left_tail_,
                             alpha * f.right_tail_ + beta * g.right_tail_);
}

double PiecewisePolynomial::max_coefficient_deviation(const PiecewisePolynomial& f,
                                                      const PiecewisePolynomial& g) {
  return combine(f, 1.0, g, -1.0).coefficient_scale();
}

namespace detail {

cplx polyblock_over_resolvent(double b, const std::vector<double>& a, cplx z, int m,
                              double x0, double x1) {
  double c = 0.5 * (x0 + x1);
  double h2 = 0.5 * (x1 - x0);
  // Re-center the block at the interval midpoint.
  std::vector<double> ac(a.size(), 0.0);
  double shift = c - b;
  for (std::size_t r = 0; r < a.size(); ++r) {
    double pw = 1.0;
    for (std::size_t s2 = 0; s2 <= r; ++s2) {
      std::size_t s = r - s2;
      ac[s] += a[r] * binomial(static_cast<int>(r), static_cast<int>(s)) * pw;
      pw *= shift;
    }
  }
  cplx zc = z - c;
  if (std::abs(zc) > 6.0 * h2) {
    // Far from the pole: geometric-type series in w/(z-c), truncated at
    // machine precision.  Avoids the cancellation of the exact log form.
    cplx acc = 0.0;
    cplx inv = 1.0 / zc;
    for (std::size_t r = 0; r < ac.size(); ++r) {
      if (ac[r] == 0.0) continue;
      cplx term_acc = 0.0;
      cplx zpow = std::pow(inv, m);
      double hp = std::pow(h2, static_cast<double>(r) + 1.0);
      for (int q = 0; q < 400; ++q) {
        int e = static_cast<int>(r) + q;
        if (e % 2 == 0) {
          cplx term = binomial(m - 1 + q, q) * zpow * 2.0 * hp / (e + 1.0);
          term_acc += term;
          if (std::abs(term) < 1e-18 * (std::abs(term_acc) + 1e-300) && q > 2) break;
        }
        zpow *= inv;
        hp *= h2;
      }
      acc += ac[r] * term_acc;
    }
    return acc;
  }
  // Exact form in u = z - t.
  cplx u0 = z - x0;
  cplx u1 = z - x1;
  cplx acc = 0.0;
  for (std::size_t r = 0; r < ac.size(); ++r) {
    if (ac[r] == 0.0) continue;
    for (std::size_t s = 0; s <= r; ++s) {
      cplx coef = ac[r] * binomial(static_cast<int>(r), static_cast<int>(s)) *
                  std::pow(zc, static_cast<double>(r - s)) *
                  ((s % 2 == 0) ? 1.0 : -1.0);
      int e = static_cast<int>(s) - m;
      cplx integ;
      if (e == -1) {
        integ = std::log(u1) - std::log(u0);  // Im u constant sign: branch safe
      } else {
        integ = (std::pow(u1, e + 1) - std::pow(u0, e + 1)) / static_cast<double>(e + 1);
      }
      acc += -coef * integ;  // dt = -du
    }
  }
  return acc;
}

cplx poly_over_resolvent(double b, int n, cplx z, int m, double x0, double x1) {
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  a.back() = 1.0;
  return polyblock_over_resolvent(b, a, z, m, x0, x1);
}

cplx poly_times_exponential(double b, int n, double s, double x0, double x1) {
  if (s == 0.0) {
    return (std::pow(x1 - b, n + 1) - std::pow(x0 - b, n + 1)) / (n + 1);
  }
  cplx is(0.0, s);
  double v0 = x0 - b, v1 = x1 - b;
  cplx e0 = std::exp(is * v0), e1 = std::exp(is * v1);
  // E_n = [v^n e^{isv}/(is)] - (n/(is)) E_{n-1}
  cplx E = (e1 - e0) / is;
  for (int q = 1; q <= n; ++q) {
    E = (std::pow(v1, q) * e1 - std::pow(v0, q) * e0) / is - (static_cast<double>(q) / is) * E;
  }
  return std::exp(is * b) * E;
}

cplx poly_times_log(double b, int n, cplx z, double x0, double x1) {
  // parts: d/dt [(t-b)^{n+1}/(n+1)] = (t-b)^n
  auto P = [&](double t) { return std::pow(t - b, n + 1) / (n + 1); };
  cplx boundary = P(x1) * std::log(z - x1) - P(x0) * std::log(z - x0);
  cplx rest = poly_over_resolvent(b, n + 1, z, 1, x0, x1) / static_cast<double>(n + 1);
  return boundary + rest;
}

double poly_times_regularizer(double b, int n, double x0, double x1) {
  // expand (t-b)^n in global powers, then integrate t^{j+1}/(t^2+1)
  auto Iq = [&](int q, double t) -> double {
    // antiderivative of t^q/(t^2+1)
    if (q == 0) return std::atan(t);
    if (q == 1) return 0.5 * std::log1p(t * t);
    double acc = 0.0;
    int qq = q;
    double sign = 1.0;
    while (qq >= 2) {
      acc += sign * std::pow(t, qq - 1) / (qq - 1);
      sign = -sign;
      qq -= 2;
    }
    acc += sign * ((qq == 0) ? std::atan(t) : 0.5 * std::log1p(t * t));
    return acc;
  };
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    double g = binomial(n, j) * std::pow(-b, n - j);
    if (g == 0.0) continue;
    acc += g * (Iq(j + 1, x1) - Iq(j + 1, x0));
  }
  return acc;
}

}  // namespace detail

namespace {

cplx integrate_piece_against_term(const std::vector<double>& a, double b, double x0,
                                  double x1, const FunctionSpec::Primitive& prim,
                                  cplx weight, int order) {
  return std::visit(
      [&](const auto& p) -> cplx {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FunctionSpec::ResolventPower>) {
          double c = 1.0;
          for (int j = 0; j < order; ++j) c *= p.k + j;
          return weight * c *
                 detail::polyblock_over_resolvent(b, a, p.z, p.k + order, x0, x1);
        } else if constexpr (std::is_same_v<T, FunctionSpec::Exponential>) {
          cplx is(0.0, p.s);
          cplx pref = weight * std::pow(is, order);
          cplx acc = 0.0;
          for (std::size_t r = 0; r < a.size(); ++r) {
            if (a[r] == 0.0) continue;
            acc += a[r] * detail::poly_times_exponential(b, static_cast<int>(r), p.s, x0, x1);
          }
          return pref * acc;
        } else if constexpr (std::is_same_v<T, FunctionSpec::Polynomial>) {
          // derivative coefficients of the polynomial, then exact product integral
          std::vector<cplx> d;
          for (std::size_t nn = static_cast<std::size_t>(order); nn < p.coeffs.size(); ++nn) {
            double c = 1.0;
            for (int j = 0; j < order; ++j) c *= static_cast<double>(nn - static_cast<std::size_t>(j));
            d.push_back(c * p.coeffs[nn]);
          }
          cplx acc = 0.0;
          for (std::size_t r = 0; r < a.size(); ++r) {
            if (a[r] == 0.0) continue;
            for (std::size_t j = 0; j < d.size(); ++j) {
              // integral (t-b)^r t^j dt : expand t^j around b
              for (std::size_t s = 0; s <= j; ++s) {
                double bin = binomial(static_cast<int>(j), static_cast<int>(s)) *
                             std::pow(b, static_cast<double>(j - s));
                std::size_t e = r + s;
                double integ = (std::pow(x1 - b, static_cast<double>(e + 1)) -
                                std::pow(x0 - b, static_cast<double>(e + 1))) /
                               static_cast<double>(e + 1);
                acc += a[r] * d[j] * bin * integ;
              }
            }
          }
          return weight * acc;
        } else {
          // truncated power: split at the kink, polynomial on the right part
          if (order > p.k) return 0.0;
          double lo = std::max(x0, p.t);
          if (lo >= x1) return 0.0;
          double c = 1.0;
          for (int j = 0; j < order; ++j) c *= p.k - j;
          int e = p.k - order;  // (t - p.t)^e on [lo, x1)
          cplx acc = 0.0;
          for (std::size_t r = 0; r < a.size(); ++r) {
            if (a[r] == 0.0) continue;
            // integral (t-b)^r (t-p.t)^e dt; expand (t-p.t)^e around b
            for (int s = 0; s <= e; ++s) {
              double bin = binomial(e, s) * std::pow(b - p.t, static_cast<double>(e - s));
              std::size_t ee = r + static_cast<std::size_t>(s);
              double integ = (std::pow(x1 - b, static_cast<double>(ee + 1)) -
                              std::pow(lo - b, static_cast<double>(ee + 1))) /
                             static_cast<double>(ee + 1);
              acc += a[r] * bin * integ;
            }
          }
          return weight * c * acc;
        }
      },
      prim);
}

}  // namespace

cplx piecewise_integrate(const PiecewisePolynomial& P, const FunctionSpec& f, int order) {
  cplx acc = 0.0;
  const auto& breaks = P.breakpoints();
  for (const auto& term : f.terms()) {
    // interior pieces
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      acc += integrate_piece_against_term(P.piece(k), breaks[k], breaks[k], breaks[k + 1],
                                          term.primitive, term.weight, order);
    }
    // tails
    if (P.left_tail_value() != 0.0 || P.right_tail_value() != 0.0) {
      const auto* r = std::get_if<FunctionSpec::ResolventPower>(&term.primitive);
      if (!r)
        throw validation_error(
            "piecewise_integrate: nonzero tails require resolvent-type integrand");
      int m = r->k + order;
      if (m < 2)
        throw validation_error(
            "piecewise_integrate: tail integral diverges for first-order resolvent");
      double c = 1.0;
      for (int j = 0; j < order; ++j) c *= r->k + j;
      if (P.left_tail_value() != 0.0) {
        acc += term.weight * c * P.left_tail_value() *
               std::pow(r->z - breaks.front(), -(m - 1)) / static_cast<double>(m - 1);
      }
      if (P.right_tail_value() != 0.0) {
        acc -= term.weight * c * P.right_tail_value() *
               std::pow(r->z - breaks.back(), -(m - 1)) / static_cast<double>(m - 1);
      }
    }
  }
  return acc;
}

}  // namespace specshift
