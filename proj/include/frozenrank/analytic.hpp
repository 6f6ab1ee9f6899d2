#pragma once

// Closed-form ingredients of the rank limit of sparse symmetric random
// matrices with Poisson(d) degrees:
//
//   φ_d(α) = exp(d(α−1))
//   R_d(α) = 2 − φ_d(1−φ_d(α)) − (1+d(1−α)) φ_d(α)
//   G_d(α) = α + φ_d(1−φ_d(α)) − 1        R_d'(α) = d² φ_d(α) G_d(α)
//   Ξ_d(α) = α + φ_d(α) − 1
//   h_t(α) = α + 1 − φ_t(α)
//
// G_d has one zero for d <= e (shared with Ξ_d) and three zeroes
// α_⋆ < α_0 < α^⋆ for d > e; the outer two minimize R_d.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "frozenrank/errors.hpp"

namespace frozenrank::analytic {

inline constexpr double e = std::numbers::e;

inline double phi(double d, double alpha) { return std::exp(d * (alpha - 1.0)); }

inline double R(double d, double alpha) {
  const double p = phi(d, alpha);
  return 2.0 - phi(d, 1.0 - p) - (1.0 + d * (1.0 - alpha)) * p;
}

inline double G(double d, double alpha) { return alpha + phi(d, 1.0 - phi(d, alpha)) - 1.0; }

inline double Xi(double d, double alpha) { return alpha + phi(d, alpha) - 1.0; }

inline double h(double t, double alpha) { return alpha + 1.0 - phi(t, alpha); }

struct RootOptions {
  std::size_t grid = 10000;
  double width = 1e-14;
};

namespace detail {

// Bisection on a sign-changing bracket [lo, hi] down to `width`.
template <class Fn>
double bisect(Fn&& f, double lo, double hi, double width) {
  double flo = f(lo);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Every zero of f on [lo, hi] visible as a sign change on a uniform grid.
template <class Fn>
std::vector<double> scan_roots(Fn&& f, double lo, double hi, std::size_t grid, double width) {
  std::vector<double> roots;
  double x0 = lo, f0 = f(lo);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double x1 = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid);
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      roots.push_back(bisect(f, x0, x1, width));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) roots.push_back(x0);
  return roots;
}

}  // namespace detail

// Unique zero of the strictly increasing Ξ_d, by safeguarded Newton.
inline double xi_root(double d) {
  if (d <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0, x = 1.0 - 1.0 / std::max(d, 1.0);
  for (int it = 0; it < 200; ++it) {
    const double fx = Xi(d, x);
    if (fx == 0.0) return x;
    (fx < 0 ? lo : hi) = x;
    double next = x - fx / (1.0 + d * phi(d, x));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16) return next;
    x = next;
  }
  return x;
}

// Zeroes of G_d in increasing order: one value for d <= e, three for d > e.
inline std::vector<double> g_roots(double d, const RootOptions& opt = {}) {
  if (d < 0.0) throw usage_error("d must be nonnegative");
  if (d == 0.0) return {0.0};
  if (std::abs(d - e) < 1e-6) return {xi_root(d)};
  auto g = [d](double a) { return G(d, a); };
  auto roots = detail::scan_roots(g, 0.0, 1.0, opt.grid, opt.width);
  if (d > e && roots.size() == 1) {
    // The three zeroes may share one grid cell just above e.
    const double c = roots.front();
    const double step = 1.0 / static_cast<double>(opt.grid);
    const auto fine = detail::scan_roots(g, std::max(0.0, c - 2 * step),
                                         std::min(1.0, c + 2 * step), opt.grid, opt.width);
    if (fine.size() == 3) roots = fine;
  }
  if (roots.empty() || roots.size() > 3 || roots.size() == 2) {
    throw internal_error("G_d root bracketing found " + std::to_string(roots.size()) +
                         " zeroes at d=" + std::to_string(d));
  }
  return roots;
}

// Smallest root γ_⋆ of x = d exp(−d exp(−x)) and γ^⋆ = d exp(−γ_⋆). d = 0 gives (0, 0).
struct KSFixedPoint {
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
};

inline KSFixedPoint ks_fixed_point(double d, const RootOptions& opt = {}) {
  if (d < 0.0) throw usage_error("d must be nonnegative");
  if (d == 0.0) return {};
  auto f = [d](double x) { return x - d * std::exp(-d * std::exp(-x)); };
  // f(0) < 0 < f(d); the first sign change from the left is the smallest root.
  const double step = d / static_cast<double>(opt.grid);
  double x0 = 0.0, f0 = f(0.0);
  for (std::size_t k = 1; k <= opt.grid; ++k) {
    const double x1 = d * static_cast<double>(k) / static_cast<double>(opt.grid);
    const double f1 = f(x1);
    if (f1 == 0.0) return {x1, d * std::exp(-x1)};
    if ((f0 < 0) != (f1 < 0)) {
      const double g = detail::bisect(f, x0, x1, std::max(opt.width * d, 1e-16));
      return {g, d * std::exp(-g)};
    }
    x0 = x1;
    f0 = f1;
  }
  throw internal_error("no Karp-Sipser fixed point found at d=" + std::to_string(d) +
                       " (step " + std::to_string(step) + ")");
}

struct AnalyticPoint {
  double d = 0.0;
  double alpha_star_lo = 0.0;  // α_⋆
  double alpha_zero = 0.0;     // α_0
  double alpha_star_hi = 0.0;  // α^⋆
  double min_R = 0.0;
  double gamma_lo = 0.0;       // γ_⋆
  double gamma_hi = 0.0;       // γ^⋆
};

inline AnalyticPoint solve_point(double d, const RootOptions& opt = {}) {
  const auto roots = g_roots(d, opt);
  AnalyticPoint pt;
  pt.d = d;
  pt.alpha_star_lo = roots.front();
  pt.alpha_zero = roots.size() == 3 ? roots[1] : roots.front();
  pt.alpha_star_hi = roots.back();
  pt.min_R = R(d, pt.alpha_star_hi);
  const auto ks = ks_fixed_point(d, opt);
  pt.gamma_lo = ks.gamma_lo;
  pt.gamma_hi = ks.gamma_hi;
  return pt;
}

inline double alpha_star_hi(double d) { return g_roots(d).back(); }

inline double min_R(double d) { return R(d, alpha_star_hi(d)); }

// |∫_0^d h_t(α^⋆(t)) dt − d R_d(α^⋆(d))|, integrating separately across t = e
// where α^⋆ has a kink-like steep rise.
inline double integral_identity_residual(double d, double tolerance = 1e-8) {
  if (d < 0.0) throw usage_error("d must be nonnegative");
  if (d == 0.0) return 0.0;
  auto integrand = [](double t) { return t <= 0.0 ? 0.0 : h(t, alpha_star_hi(t)); };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double split = std::min(d, e);
  double total = Quad::integrate(integrand, 0.0, split, 15, tolerance);
  if (d > e) total += Quad::integrate(integrand, e, d, 15, tolerance);
  return std::abs(total - d * min_R(d));
}

// ---------------------------------------------------------------------------
// Type functions on the simplex of (x, y, z, u, v)

struct Zeta {
  double x = 0, y = 0, z = 0, u = 0, v = 0;
};

struct TypeValues {
  double Y = 0, U = 0, V = 0;
};

inline void check_simplex(const Zeta& s, double slack = 1e-12) {
  for (const double c : {s.x, s.y, s.z, s.u, s.v}) {
    if (!(c >= -slack)) throw usage_error("type coordinates must be nonnegative");
  }
  if (std::abs(s.x + s.y + s.z + s.u + s.v - 1.0) > 1e-9) {
    throw usage_error("type coordinates must sum to 1");
  }
}

// g is a nondecreasing map [0,1] → [0,1] such as φ_t.
template <class Gen>
TypeValues type_functions(const Zeta& s, Gen&& g) {
  check_simplex(s);
  const double base = g(s.x + s.y);
  const double with_u = g(s.x + s.y + s.u);
  const double with_v = g(s.x + s.y + s.v);
  return {1.0 - with_u - with_v + base, with_u - base, with_v - base};
}

inline auto poisson_pgf(double t) {
  return [t](double a) { return phi(t, a); };
}

// Generating function of Bin(n, p).
inline auto binomial_pgf(std::size_t n, double p) {
  return [n, p](double a) { return std::pow(1.0 - p + p * a, static_cast<double>(n)); };
}

}  // namespace frozenrank::analytic
