#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>
#include <chrono>
#include <cmath>
#include <utility>

#include "frozenrank/analytic.hpp"

namespace an = frozenrank::analytic;

namespace {

// Minimum of R_d over [0,1] without any root finding: dense grid, then Brent
// polishing around the best grid point.
double grid_min_R(double d) {
  const int n = 20000;
  int best = 0;
  double best_val = an::R(d, 0.0);
  for (int k = 1; k <= n; ++k) {
    const double v = an::R(d, static_cast<double>(k) / n);
    if (v < best_val) best_val = v, best = k;
  }
  const double lo = std::max(0.0, (best - 1.0) / n), hi = std::min(1.0, (best + 1.0) / n);
  const auto r = boost::math::tools::brent_find_minima([d](double a) { return an::R(d, a); },
                                                       lo, hi, 52);
  return std::min(best_val, r.second);
}

double richardson_derivative(double d, double a) {
  const double s = 1e-4;
  return (-an::R(d, a + 2 * s) + 8 * an::R(d, a + s) - 8 * an::R(d, a - s) + an::R(d, a - 2 * s)) /
         (12 * s);
}

const std::pair<double, double> kFigure[] = {
    {0.1, 0.0911554126772786}, {0.5, 0.345631947744951}, {1.0, 0.544061907323596},
    {2.0, 0.783926426954236},  {2.5, 0.865575793294474}, {3.0, 0.927687457885459},
    {4.0, 0.977840311818603},  {5.0, 0.992581074354835}};

}  // namespace

TEST(Functions, ClosedForms) {
  EXPECT_DOUBLE_EQ(an::phi(3.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(an::phi(0.0, 0.3), 1.0);
  EXPECT_NEAR(an::phi(1.0, 0.0), 0.36787944117144233, 1e-15);
  for (const double a : {0.0, 0.25, 0.7, 1.0}) {
    EXPECT_DOUBLE_EQ(an::R(0.0, a), 0.0);
    EXPECT_DOUBLE_EQ(an::G(0.0, a), a);
  }
  EXPECT_NEAR(an::G(an::e, 1.0 - 1.0 / an::e), 0.0, 1e-15);
  EXPECT_NEAR(an::h(an::e, 1.0 - 1.0 / an::e), 2.0 - 2.0 / an::e, 1e-15);
}

TEST(Functions, DerivativeOfRIsScaledG) {
  for (const double d : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    for (int k = 1; k < 100; ++k) {
      const double a = k / 100.0;
      const double scale = d * d * an::phi(d, a);
      EXPECT_NEAR(richardson_derivative(d, a) / scale, an::G(d, a), 1e-9) << d << " " << a;
    }
  }
}

TEST(MinR, MatchesFigureTable) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [d, value] : kFigure) EXPECT_NEAR(an::min_R(d), value, 1e-9) << "d=" << d;
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(MinR, MatchesDirectMinimization) {
  for (double d = 0.05; d <= 6.0; d += 0.35) {
    EXPECT_NEAR(an::min_R(d), grid_min_R(d), 1e-9) << "d=" << d;
  }
}

TEST(MinR, NondecreasingInD) {
  double prev = an::min_R(0.0);
  EXPECT_EQ(prev, 0.0);
  for (double d = 0.1; d <= 8.0; d += 0.1) {
    const double cur = an::min_R(d);
    EXPECT_GE(cur, prev - 1e-12) << "d=" << d;
    prev = cur;
  }
}

TEST(SolvePoint, ZeroDegree) {
  const auto p = an::solve_point(0.0);
  EXPECT_EQ(p.alpha_star_lo, 0.0);
  EXPECT_EQ(p.alpha_zero, 0.0);
  EXPECT_EQ(p.alpha_star_hi, 0.0);
  EXPECT_EQ(p.min_R, 0.0);
  EXPECT_EQ(p.gamma_lo, 0.0);
  EXPECT_EQ(p.gamma_hi, 0.0);
  EXPECT_THROW(an::solve_point(-1.0), frozenrank::usage_error);
}

TEST(SolvePoint, TripleRootAtE) {
  const auto p = an::solve_point(an::e);
  for (const double a : {p.alpha_star_lo, p.alpha_zero, p.alpha_star_hi}) {
    EXPECT_NEAR(a, 1.0 - 1.0 / an::e, 1e-12);
  }
}

TEST(SolvePoint, ThreeZeroesAtThree) {
  // Reference zeroes from an independent Brent solve.
  const auto p = an::solve_point(3.0);
  EXPECT_NEAR(p.alpha_star_lo, 0.33526023772083974, 1e-12);
  EXPECT_NEAR(p.alpha_zero, 0.6500303683453191, 1e-12);
  EXPECT_NEAR(p.alpha_star_hi, 0.863880116721224, 1e-12);
}

TEST(SolvePoint, StrictOrderAboveE) {
  for (const double d : {2.8, 3.0, 4.0, 5.0, 8.0}) {
    const auto p = an::solve_point(d);
    EXPECT_LT(p.alpha_star_lo + 1e-6, p.alpha_zero) << d;
    EXPECT_LT(p.alpha_zero + 1e-6, p.alpha_star_hi) << d;
  }
  EXPECT_NEAR(an::solve_point(5.0).min_R, 0.992581074354835, 1e-9);
}

TEST(SolvePoint, SingleZeroBelowEIsXiZero) {
  for (double d = 0.05; d < an::e; d += 0.1) {
    const auto p = an::solve_point(d);
    EXPECT_EQ(p.alpha_star_lo, p.alpha_star_hi);
    EXPECT_EQ(p.alpha_zero, p.alpha_star_hi);
    EXPECT_NEAR(p.alpha_star_hi, an::xi_root(d), 1e-12) << d;
    EXPECT_NEAR(an::Xi(d, p.alpha_zero), 0.0, 1e-12);
  }
}

TEST(SolvePoint, RootQualityDualityAndGammas) {
  for (double d = 0.1; d <= 10.0; d += 0.1) {
    if (std::abs(d - an::e) < 1e-3) continue;
    const auto p = an::solve_point(d);
    for (const double a : {p.alpha_star_lo, p.alpha_zero, p.alpha_star_hi}) {
      EXPECT_LE(std::abs(an::G(d, a)), 1e-12) << d;
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
    EXPECT_LE(p.alpha_star_lo, p.alpha_zero);
    EXPECT_LE(p.alpha_zero, p.alpha_star_hi);
    EXPECT_NEAR(p.alpha_star_lo, 1.0 - an::phi(d, p.alpha_star_hi), 1e-10) << d;
    EXPECT_NEAR(p.alpha_star_hi, 1.0 - an::phi(d, p.alpha_star_lo), 1e-10) << d;
    EXPECT_NEAR(p.gamma_lo, d * (1.0 - p.alpha_star_hi), 1e-10) << d;
    EXPECT_NEAR(p.gamma_hi, d * (1.0 - p.alpha_star_lo), 1e-10) << d;
  }
}

TEST(SolvePoint, NearEStillConsistent) {
  for (const double delta : {-1e-3, -1e-7, 1e-7, 1e-5, 1e-3}) {
    const double d = an::e + delta;
    const auto p = an::solve_point(d);
    for (const double a : {p.alpha_star_lo, p.alpha_zero, p.alpha_star_hi}) {
      EXPECT_LE(std::abs(an::G(d, a)), 1e-8) << delta;
    }
    EXPECT_NEAR(p.min_R, grid_min_R(d), 1e-9) << delta;
  }
}

TEST(SolvePoint, MinimizersShareTheMinimum) {
  for (const double d : {3.0, 4.0, 5.0}) {
    const auto p = an::solve_point(d);
    EXPECT_NEAR(an::R(d, p.alpha_star_lo), an::R(d, p.alpha_star_hi), 1e-10);
    EXPECT_NEAR(an::h(d, p.alpha_star_lo), an::h(d, p.alpha_star_hi), 1e-10);
    EXPECT_LE(std::abs(richardson_derivative(d, p.alpha_star_lo)), 1e-6);
    EXPECT_LE(std::abs(richardson_derivative(d, p.alpha_zero)), 1e-6);
    EXPECT_LE(std::abs(richardson_derivative(d, p.alpha_star_hi)), 1e-6);
  }
  const auto p1 = an::solve_point(1.0);
  EXPECT_NEAR(an::h(1.0, p1.alpha_star_lo), an::h(1.0, p1.alpha_star_hi), 1e-10);
}

TEST(SolvePoint, SignPatternAboveE) {
  for (const double d : {3.0, 4.0, 5.0}) {
    const auto p = an::solve_point(d);
    for (int k = 1; k < 200; ++k) {
      const double a = static_cast<double>(k) / 200;
      const double g = an::G(d, a);
      if (a < p.alpha_star_lo - 1e-9) {
        EXPECT_LT(g, 0) << d << " " << a;
      }
      if (a > p.alpha_star_lo + 1e-9 && a < p.alpha_zero - 1e-9) {
        EXPECT_GT(g, 0) << d << " " << a;
      }
      if (a > p.alpha_zero + 1e-9 && a < p.alpha_star_hi - 1e-9) {
        EXPECT_LT(g, 0) << d << " " << a;
      }
      if (a > p.alpha_star_hi + 1e-9) {
        EXPECT_GT(g, 0) << d << " " << a;
      }
    }
    EXPECT_GT(an::G(d, 1.0), 0);
  }
}

TEST(SolvePoint, MiddleZeroLowerBound) {
  for (int t = 3; t <= 10; ++t) {
    const auto p = an::solve_point(t);
    EXPECT_GE(p.alpha_zero, 1.0 - std::log(t) / t) << t;
  }
}

TEST(KSFixedPoint, DegreeOne) {
  const auto ks = an::ks_fixed_point(1.0);
  EXPECT_NEAR(ks.gamma_lo, 0.5671432904097838, 1e-12);
  EXPECT_NEAR(ks.gamma_hi, ks.gamma_lo, 1e-12);
  const double g = ks.gamma_lo;
  EXPECT_NEAR(2.0 - (2 * g + g * g), 0.544061907323596, 1e-8);
  const auto zero = an::ks_fixed_point(0.0);
  EXPECT_EQ(zero.gamma_lo, 0.0);
  EXPECT_EQ(zero.gamma_hi, 0.0);
}

TEST(KSFixedPoint, AgreesWithMinR) {
  for (const double d : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 7.0}) {
    const auto ks = an::ks_fixed_point(d);
    EXPECT_NEAR(ks.gamma_lo, d * std::exp(-d * std::exp(-ks.gamma_lo)), 1e-12);
    EXPECT_NEAR(2.0 - (ks.gamma_hi + ks.gamma_lo + ks.gamma_hi * ks.gamma_lo) / d, an::min_R(d),
                1e-8)
        << d;
  }
}

TEST(IntegralIdentity, SmallResiduals) {
  EXPECT_EQ(an::integral_identity_residual(0.0), 0.0);
  const auto start = std::chrono::steady_clock::now();
  for (const double d : {0.5, 1.0, an::e, 3.0, 4.0}) {
    EXPECT_LE(an::integral_identity_residual(d), 1e-6) << d;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5.0);
}

TEST(TypeFunctions, Substitutions) {
  const auto g = an::poisson_pgf(1.5);
  const auto all_z = an::type_functions({0, 0, 1, 0, 0}, g);
  EXPECT_DOUBLE_EQ(all_z.Y, 1.0 - g(0.0));
  EXPECT_DOUBLE_EQ(all_z.U, 0.0);
  EXPECT_DOUBLE_EQ(all_z.V, 0.0);

  const auto flat = an::type_functions({0.1, 0.2, 0.3, 0.2, 0.2}, an::poisson_pgf(0.0));
  EXPECT_DOUBLE_EQ(flat.Y, 0.0);
  EXPECT_DOUBLE_EQ(flat.U, 0.0);
  EXPECT_DOUBLE_EQ(flat.V, 0.0);
}

TEST(TypeFunctions, AgreesWithFactoredForm) {
  const an::Zeta s{0.1, 0.2, 0.3, 0.25, 0.15};
  const double t = 2.0;
  const auto got = an::type_functions(s, an::poisson_pgf(t));
  // exp(t(x+y−1)) factored out of every difference.
  const double base = std::exp(t * (s.x + s.y - 1));
  EXPECT_NEAR(got.U, base * std::expm1(t * s.u), 1e-14);
  EXPECT_NEAR(got.V, base * std::expm1(t * s.v), 1e-14);
  EXPECT_NEAR(got.Y, 1 - base * (std::expm1(t * s.u) + std::expm1(t * s.v) + 1), 1e-14);
}

TEST(TypeFunctions, BinomialGenerator) {
  const auto g = an::binomial_pgf(10, 0.3);
  EXPECT_DOUBLE_EQ(g(1.0), 1.0);
  EXPECT_NEAR(g(0.0), std::pow(0.7, 10), 1e-15);
  const auto vals = an::type_functions({0.2, 0.2, 0.2, 0.2, 0.2}, g);
  EXPECT_NEAR(vals.U, g(0.6) - g(0.4), 1e-15);
  EXPECT_NEAR(vals.Y + vals.U + vals.V, 1.0 - g(0.4), 1e-15);
}

TEST(TypeFunctions, RejectsPointsOffSimplex) {
  EXPECT_THROW(an::type_functions({0.5, 0.5, 0.5, 0, 0}, an::poisson_pgf(1)),
               frozenrank::usage_error);
  EXPECT_THROW(an::type_functions({-0.1, 0.5, 0.6, 0, 0}, an::poisson_pgf(1)),
               frozenrank::usage_error);
}
