#pragma once

// Self-checks runnable from the command line. Every check draws from fixed
// seeds, so a run is reproducible and a failure message can be replayed.
//
// Suites:
//   oracle    elimination against brute-force row-space enumeration
//   lemmas    exact structural identities of frozen variables and leaf removal
//   perturb   laws of the nested unit-row/column perturbations
//   analytic  root, minimizer, integral and leaf-removal limit identities

#include <nlohmann/json.hpp>

#include <boost/math/tools/minima.hpp>

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frozenrank/analytic.hpp"
#include "frozenrank/errors.hpp"
#include "frozenrank/exactla.hpp"
#include "frozenrank/oracle.hpp"
#include "frozenrank/perturb.hpp"
#include "frozenrank/random_matrix.hpp"
#include "frozenrank/randgraph.hpp"

namespace frozenrank::verify {

struct CheckResult {
  std::string name;
  std::string suite;
  bool passed = false;
  bool gating = true;  // a failing non-gating check only warns
  std::string detail;
  double seconds = 0.0;

  nlohmann::json to_json() const {
    return {{"name", name}, {"suite", suite},   {"passed", passed},
            {"gating", gating}, {"detail", detail}, {"seconds", seconds}};
  }
};

struct Outcome {
  bool passed;
  std::string detail;
};

namespace detail {

inline CheckResult timed(std::string suite, std::string name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  return {std::move(name), std::move(suite), out.passed, true, std::move(out.detail), took.count()};
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

// Runs `body(field, rng)` over F2, F3 and F5; body returns an empty string on
// success or a description of the first failure.
template <class Body>
Outcome over_small_fields(std::uint64_t seed, std::size_t per_field, Body&& body) {
  std::size_t checked = 0;
  for (const std::uint32_t p : {2u, 3u, 5u}) {
    const PrimeField f(p);
    SeededStream rng(hash64(seed, p));
    for (std::size_t k = 0; k < per_field; ++k, ++checked) {
      if (std::string why = body(f, rng); !why.empty()) {
        return {false, "F" + std::to_string(p) + " instance " + std::to_string(k) + ": " + why};
      }
    }
  }
  return {true, std::to_string(checked) + " instances"};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// oracle

inline CheckResult rank_matches_enumeration(std::size_t per_field = 500) {
  return detail::timed("oracle", "rank_matches_enumeration", [&] {
    return detail::over_small_fields(0x7a11, per_field, [](const PrimeField& f, SeededStream& rng) {
      const std::size_t m = rng.below(7), n = rng.below(7);
      const auto a = random_matrix(f, m, n, 0.15 + 0.7 * rng.uniform(), rng);
      const auto fast = rank(a), slow = oracle::rank(a);
      return fast == slow ? std::string{}
                          : "rank " + std::to_string(fast) + " vs " + std::to_string(slow);
    });
  });
}

inline CheckResult frozen_methods_agree(std::size_t per_field = 500) {
  return detail::timed("oracle", "frozen_methods_agree", [&] {
    return detail::over_small_fields(0xf0e2, per_field, [](const PrimeField& f, SeededStream& rng) {
      const std::size_t m = 1 + rng.below(10), n = 1 + rng.below(10);
      const auto a = random_matrix(f, m, n, 0.1 + 0.5 * rng.uniform(), rng);
      const bool same = frozen_set(a, FrozenMethod::rank_drop).frozen ==
                        frozen_set(a, FrozenMethod::kernel_support).frozen;
      return same ? std::string{} : std::string("rank-drop and kernel-support sets differ");
    });
  });
}

// ---------------------------------------------------------------------------
// lemmas

// rank(A) − rank(A minus row and column i) = 1 + [i ∈ Y] − [i ∈ Z] for symmetric A.
inline CheckResult removal_trichotomy(std::size_t per_field = 200) {
  return detail::timed("lemmas", "removal_trichotomy", [&] {
    std::size_t checked = 0;
    for (const std::uint32_t p : {2u, 3u}) {
      const PrimeField f(p);
      SeededStream rng(hash64(0x7c40, p));
      for (std::size_t k = 0; k < per_field; ++k, ++checked) {
        const std::size_t n = 1 + rng.below(10);
        const auto a = random_symmetric(f, n, 0.1 + 0.4 * rng.uniform(), rng);
        for (std::size_t i = 0; i < n; ++i) {
          const auto t = classify_variable(a, i);
          const int expect = 1 + (t == VariableType::Y) - (t == VariableType::Z);
          if (symmetric_removal_rank_drop(a, i) != expect) {
            return Outcome{false, "F" + std::to_string(p) + " instance " + std::to_string(k) +
                                      " index " + std::to_string(i) + " type " + to_char(t)};
          }
        }
      }
    }
    return Outcome{true, std::to_string(checked) + " instances"};
  });
}

// Deleting row j freezes exactly what appending the unit column e_j freezes.
inline CheckResult row_removal_is_unit_column(std::size_t count = 200) {
  return detail::timed("lemmas", "row_removal_is_unit_column", [&] {
    return detail::over_small_fields(0x11a4, count / 3 + 1, [](const PrimeField& f,
                                                               SeededStream& rng) {
      const std::size_t m = 1 + rng.below(7), n = 1 + rng.below(7);
      const auto a = random_matrix(f, m, n, 0.2 + 0.4 * rng.uniform(), rng);
      const std::size_t j = rng.below(m);
      const auto removed = frozen_set(remove_row(a, j)).frozen;
      const auto augmented = frozen_set(append_column(a, unit_vector<PrimeField>(m, j))).frozen;
      for (std::size_t i = 0; i < n; ++i) {
        if (removed.contains(i) != augmented.contains(i)) return "column " + std::to_string(i);
      }
      return std::string{};
    });
  });
}

// Appending a column can only unfreeze; appending a row can only freeze.
inline CheckResult frozen_monotonicity(std::size_t count = 200) {
  return detail::timed("lemmas", "frozen_monotonicity", [&] {
    return detail::over_small_fields(0x4a02, count / 3 + 1, [](const PrimeField& f,
                                                               SeededStream& rng) {
      const std::size_t m = 1 + rng.below(7), n = 1 + rng.below(7);
      const auto a = random_matrix(f, m, n, 0.2 + 0.4 * rng.uniform(), rng);
      const auto base = frozen_set(a).frozen;
      const auto col = frozen_set(append_column(a, random_vector(f, m, 0.5, rng))).frozen;
      const auto row = frozen_set(append_row(a, random_vector(f, n, 0.5, rng))).frozen;
      for (std::size_t i = 0; i < n; ++i) {
        if (col.contains(i) && !base.contains(i)) return "column append froze " + std::to_string(i);
        if (base.contains(i) && !row.contains(i)) return "row append unfroze " + std::to_string(i);
      }
      return std::string{};
    });
  });
}

inline CheckResult frail_transpose_symmetry(std::size_t count = 200) {
  return detail::timed("lemmas", "frail_transpose_symmetry", [&] {
    return detail::over_small_fields(0xf4a1, count / 3 + 1, [](const PrimeField& f,
                                                               SeededStream& rng) {
      const std::size_t n = 1 + rng.below(8);
      const auto a = random_matrix(f, n, n, 0.15 + 0.4 * rng.uniform(), rng);
      const auto t = transpose(a);
      for (std::size_t i = 0; i < n; ++i) {
        if ((classify_variable(a, i) == VariableType::X) !=
            (classify_variable(t, i) == VariableType::X)) {
          return "index " + std::to_string(i);
        }
      }
      return std::string{};
    });
  });
}

// nul(A(G)) = isolated vertices produced by leaf removal + nul(A(core)).
inline CheckResult leaf_removal_nullity(std::size_t count = 100) {
  return detail::timed("lemmas", "leaf_removal_nullity", [&] {
    const PrimeField f5(5);
    std::size_t checked = 0;
    for (std::size_t k = 0; k < count; ++k, ++checked) {
      SeededStream rng(hash64(0x1eaf, k));
      const std::size_t n = 2 + rng.below(299);
      const double d = 1.0 + static_cast<double>(k % 3);
      const double p = std::min(1.0, d / static_cast<double>(n));
      const CouplingSource coupling(rng());
      const std::uint64_t wseed = rng();
      bool ok = false;
      if (k % 2 == 0) {
        ok = nullity_invariance_check(sample_graph(n, p, WeightTemplate<Gf2>::all_ones(Gf2{}, n), coupling));
      } else {
        ok = nullity_invariance_check(sample_graph(n, p, WeightTemplate<PrimeField>::random(f5, n, wseed), coupling));
      }
      if (!ok) {
        return Outcome{false, "graph " + std::to_string(k) + " n=" + std::to_string(n) +
                                  " d=" + detail::fmt(d)};
      }
    }
    return Outcome{true, std::to_string(checked) + " graphs"};
  });
}

// ---------------------------------------------------------------------------
// perturb

// P(Θ_r[θ, n0 | n1] = Θ_r[θ, n1 | n1]) = (n0/n1)^θ, within 3 binomial σ.
inline CheckResult agreement_law(std::size_t samples = 100000) {
  return detail::timed("perturb", "agreement_law", [&] {
    struct Triple {
      std::size_t n0, n1, theta;
    };
    const Gf2 f;
    std::ostringstream msg;
    bool ok = true;
    for (const Triple t : {Triple{2, 4, 1}, Triple{3, 5, 2}, Triple{5, 10, 3}}) {
      std::size_t agree = 0;
      for (std::uint64_t s = 0; s < samples; ++s) {
        const PerturbationFamily fam(hash64(0xa9ee, s));
        agree += theta_r_matrix(f, fam, t.theta, t.n0, t.n1) ==
                 theta_r_matrix(f, fam, t.theta, t.n1, t.n1);
      }
      const double ns = static_cast<double>(samples);
      const double p = std::pow(static_cast<double>(t.n0) / static_cast<double>(t.n1),
                                static_cast<double>(t.theta));
      const double sigma = std::sqrt(p * (1 - p) / ns);
      const double freq = static_cast<double>(agree) / ns;
      const double z = std::abs(freq - p) / sigma;
      ok = ok && z <= 3.0;
      if (msg.tellp() > 0) msg << "; ";
      msg << "(" << t.n0 << "," << t.n1 << "," << t.theta << ") freq=" << freq
          << " law=" << p << " z=" << z;
    }
    return Outcome{ok, msg.str()};
  });
}

inline CheckResult perturbation_nesting() {
  return detail::timed("perturb", "perturbation_nesting", [] {
    const PrimeField f(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PerturbationFamily fam(hash64(0x2e57, seed));
      for (std::size_t theta = 0; theta < 6; ++theta)
        for (std::size_t n2 = 1; n2 < 12; ++n2)
          for (std::size_t n1 = 1; n1 <= n2; ++n1) {
            const auto base = theta_r_matrix(f, fam, theta, n1, n2);
            if (remove_column(theta_r_matrix(f, fam, theta, n1, n2 + 1), n2) != base ||
                remove_row(theta_r_matrix(f, fam, theta + 1, n1, n2), theta) != base) {
              return Outcome{false, "seed " + std::to_string(seed) + " theta " +
                                        std::to_string(theta) + " n1 " + std::to_string(n1) +
                                        " n2 " + std::to_string(n2)};
            }
          }
    }
    return Outcome{true, "rows and columns nest"};
  });
}

// Each added unit row freezes its target column; rank grows by at most θ_r + θ_c.
inline CheckResult explicit_freezing(std::size_t count = 100) {
  return detail::timed("perturb", "explicit_freezing", [&] {
    const PrimeField f(3);
    for (std::uint64_t s = 0; s < count; ++s) {
      SeededStream rng(hash64(0xe4f2, s));
      const std::size_t n = 3 + rng.below(10);
      const auto a = random_symmetric(f, n, 0.3, rng);
      const auto spec = PerturbationSpec::canonical(5, rng(), rng());
      const auto b = canonical_perturb(a, spec);
      const auto ra = rank(a), rb = rank(b);
      if (rb < ra || rb > ra + spec.theta_r + spec.theta_c) {
        return Outcome{false, "rank bound, instance " + std::to_string(s)};
      }
      const PerturbationFamilies fams(spec.seed);
      const auto frozen = frozen_set(b).frozen;
      for (std::size_t k = 0; k < spec.theta_r; ++k) {
        if (!frozen.contains(fams.rows.j(k, n) - 1)) {
          return Outcome{false, "unit row " + std::to_string(k) + ", instance " + std::to_string(s)};
        }
      }
    }
    return Outcome{true, std::to_string(count) + " instances"};
  });
}

// ---------------------------------------------------------------------------
// analytic

struct FigurePoint {
  double d, min_R;
};

inline const std::vector<FigurePoint>& figure_points() {
  static const std::vector<FigurePoint> pts = {
      {0.1, 0.0911554126772786}, {0.5, 0.345631947744951}, {1.0, 0.544061907323596},
      {2.0, 0.783926426954236},  {2.5, 0.865575793294474}, {3.0, 0.927687457885459},
      {4.0, 0.977840311818603},  {5.0, 0.992581074354835}};
  return pts;
}

inline CheckResult figure_values(double tolerance = 1e-9) {
  return detail::timed("analytic", "figure_values", [&] {
    double worst = 0.0;
    for (const auto& pt : figure_points()) {
      worst = std::max(worst, std::abs(analytic::min_R(pt.d) - pt.min_R));
    }
    return Outcome{worst <= tolerance, "max deviation " + detail::fmt(worst)};
  });
}

// Both outer zeroes of G_d attain the minimum of R_d, confirmed by a direct minimization.
inline CheckResult minimizer_equality(double tolerance = 1e-10) {
  return detail::timed("analytic", "minimizer_equality", [&] {
    double worst = 0.0, worst_direct = 0.0;
    for (const double d : {3.0, 4.0, 5.0}) {
      const auto pt = analytic::solve_point(d);
      worst = std::max(worst, std::abs(analytic::R(d, pt.alpha_star_lo) -
                                       analytic::R(d, pt.alpha_star_hi)));
      const auto [arg, value] = boost::math::tools::brent_find_minima(
          [d](double a) { return analytic::R(d, a); }, 0.0, 1.0, 52);
      (void)arg;
      worst_direct = std::max(worst_direct, pt.min_R - value);
    }
    return Outcome{worst <= tolerance && worst_direct <= 1e-12,
                   "max |R(lo)-R(hi)| " + detail::fmt(worst) + ", direct minimum below by " +
                       detail::fmt(worst_direct)};
  });
}

inline CheckResult integral_identity(double tolerance = 1e-6) {
  return detail::timed("analytic", "integral_identity", [&] {
    double worst = 0.0;
    for (const double d : {1.0, analytic::e, 4.0}) {
      worst = std::max(worst, analytic::integral_identity_residual(d));
    }
    return Outcome{worst <= tolerance, "max residual " + detail::fmt(worst)};
  });
}

inline CheckResult ks_consistency() {
  return detail::timed("analytic", "ks_consistency", [] {
    double limit = 0.0, gamma = 0.0;
    for (const double d : {1.0, 3.0, 5.0}) {
      const auto pt = analytic::solve_point(d);
      const double lo = pt.gamma_lo, hi = pt.gamma_hi;
      limit = std::max(limit, std::abs(2.0 - (hi + lo + hi * lo) / d - pt.min_R));
      gamma = std::max({gamma, std::abs(lo - d * (1.0 - pt.alpha_star_hi)),
                        std::abs(hi - d * (1.0 - pt.alpha_star_lo))});
    }
    return Outcome{limit <= 1e-8 && gamma <= 1e-10,
                   "limit gap " + detail::fmt(limit) + ", gamma gap " + detail::fmt(gamma)};
  });
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"oracle", "lemmas", "perturb", "analytic"};
  return names;
}

inline std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "oracle") return {rank_matches_enumeration(), frozen_methods_agree()};
  if (name == "lemmas") {
    return {removal_trichotomy(), row_removal_is_unit_column(), frozen_monotonicity(),
            frail_transpose_symmetry(), leaf_removal_nullity()};
  }
  if (name == "perturb") return {agreement_law(), perturbation_nesting(), explicit_freezing()};
  if (name == "analytic") {
    return {figure_values(), minimizer_equality(), integral_identity(), ks_consistency()};
  }
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const auto& s : suite_names()) {
      auto part = run_suite(s);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw usage_error("unknown suite '" + name + "' (oracle, lemmas, perturb, analytic, all)");
}

inline bool all_gating_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (r.gating && !r.passed) return false;
  }
  return true;
}

}  // namespace frozenrank::verify
