#pragma once

// Monte Carlo experiments: sample A_{n,d/n}, record rank and Karp–Sipser
// statistics, optionally take a type census of T_{n,d/n}[θ], and compare the
// empirical rank with the analytic limit min_α R_d(α).
//
// Every random source of trial k is seeded by derive_seed(master, k, tag), so
// records depend only on (config, k) and are identical for any worker count.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "frozenrank/analytic.hpp"
#include "frozenrank/elimination.hpp"
#include "frozenrank/errors.hpp"
#include "frozenrank/exactla.hpp"
#include "frozenrank/field.hpp"
#include "frozenrank/io.hpp"
#include "frozenrank/perturb.hpp"
#include "frozenrank/randgraph.hpp"
#include "frozenrank/random.hpp"

namespace frozenrank {

inline std::string template_label(TemplateKind k) {
  return k == TemplateKind::all_ones ? "allones" : "random";
}

inline TemplateKind parse_template(const std::string& s) {
  if (s == "allones") return TemplateKind::all_ones;
  if (s == "random") return TemplateKind::seeded_random;
  throw usage_error("template must be 'allones' or 'random', got '" + s + "'");
}

struct Limits {
  std::size_t max_n = 20000;
  std::size_t census_max_n = 400;
  // Above this size the rank over Q is the max of ranks over three large primes.
  std::size_t rational_exact_max = RationalField::default_max_dimension;
};

struct ExperimentConfig {
  std::size_t n = 0;
  double d = 0.0;
  FieldSpec field = FieldSpec::gf2();
  TemplateKind weights = TemplateKind::all_ones;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> pert_P;
  bool census = false;
  std::string output;  // empty: standard output
  std::size_t workers = 1;

  double p() const { return n == 0 ? 0.0 : d / static_cast<double>(n); }

  // Throws usage_error for invalid settings and resource_error for caps.
  void validate(const Limits& limits = {}) const {
    if (n == 0) throw usage_error("n must be positive");
    if (!(d >= 0.0) || !std::isfinite(d)) throw usage_error("d must be a finite nonnegative number");
    if (d > static_cast<double>(n)) throw usage_error("d must not exceed n (edge probability d/n)");
    if (trials == 0) throw usage_error("trials must be at least 1");
    if (workers == 0) throw usage_error("workers must be at least 1");
    if (pert_P && *pert_P == 0) throw usage_error("pert_P must be positive");
    if (census && !pert_P) throw usage_error("census requires pert_P");
    if (n > limits.max_n) {
      throw resource_error("n=" + std::to_string(n) + " exceeds the cap of " +
                           std::to_string(limits.max_n));
    }
    if (census && n > limits.census_max_n) {
      throw resource_error("census n=" + std::to_string(n) + " exceeds the cap of " +
                           std::to_string(limits.census_max_n));
    }
    if (census && field.kind() == FieldKind::rational &&
        n + *pert_P > limits.rational_exact_max) {
      throw resource_error("census over Q needs n + P <= " +
                           std::to_string(limits.rational_exact_max));
    }
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw usage_error("config must be a JSON object");
    static const char* const known[] = {"n",           "d",      "field",  "template", "trials",
                                        "master_seed", "pert_P", "census", "output",   "workers"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw usage_error("unknown config key '" + key + "'");
      }
    }
    for (const char* required : {"n", "d", "field", "trials", "master_seed"}) {
      if (!j.contains(required)) throw usage_error(std::string("config is missing '") + required + "'");
    }
    ExperimentConfig c;
    try {
      c.n = j.at("n").get<std::size_t>();
      c.d = j.at("d").get<double>();
      c.field = FieldSpec::parse(j.at("field").get<std::string>());
      if (j.contains("template")) c.weights = parse_template(j.at("template").get<std::string>());
      c.trials = j.at("trials").get<std::size_t>();
      c.master_seed = j.at("master_seed").get<std::uint64_t>();
      if (j.contains("pert_P") && !j.at("pert_P").is_null()) c.pert_P = j.at("pert_P").get<std::size_t>();
      if (j.contains("census")) c.census = j.at("census").get<bool>();
      if (j.contains("output")) c.output = j.at("output").get<std::string>();
      if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw usage_error(std::string("bad config value: ") + e.what());
    }
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"n", n},
                     {"d", d},
                     {"field", field.label()},
                     {"template", template_label(weights)},
                     {"trials", trials},
                     {"master_seed", master_seed},
                     {"pert_P", pert_P ? nlohmann::json(*pert_P) : nlohmann::json(nullptr)},
                     {"census", census},
                     {"output", output},
                     {"workers", workers}};
    return j;
  }
};

// Deviations from the type fixed-point equations at t = d: |y − Y|, |u − U|,
// |v − V| and the one-sided deficit max(0, φ_t(y) − z).
struct FixedPointResiduals {
  double y = 0, u = 0, v = 0, z_deficit = 0;
};

inline FixedPointResiduals fixed_point_residuals(const TypeProfile& p, double t) {
  const analytic::Zeta s{p.x(), p.y(), p.z(), p.u(), p.v()};
  const auto g = analytic::poisson_pgf(t);
  const auto f = analytic::type_functions(s, g);
  return {std::abs(s.y - f.Y), std::abs(s.u - f.U), std::abs(s.v - f.V),
          std::max(0.0, g(s.y) - s.z)};
}

struct CensusRecord {
  std::size_t theta_r = 0;
  std::size_t theta_c = 0;
  TypeProfile profile;
  FixedPointResiduals residuals;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t derived_seed = 0;  // edge coupling seed
  std::size_t n = 0;
  double d = 0;
  std::string field;
  TemplateKind weights = TemplateKind::all_ones;
  std::size_t rank = 0;
  std::size_t nullity = 0;
  std::size_t ks_isolated = 0;
  std::size_t ks_core_size = 0;
  double normalized_rank = 0;
  std::optional<CensusRecord> census;
  double elapsed_ms = 0;

  // rank/n <= 1 − isolated/n, checked on integers.
  bool upper_bound_holds() const { return rank + ks_isolated <= n; }
};

namespace harness_detail {

inline constexpr std::uint32_t kProxyPrimes[] = {2147483647u, 2147483629u, 2147483587u};

inline std::uint32_t reduce_rational(const Rational& r, std::uint32_t p) {
  using boost::multiprecision::cpp_int;
  const cpp_int pp = p;
  cpp_int num = boost::multiprecision::numerator(r) % pp;
  if (num < 0) num += pp;
  const cpp_int den = boost::multiprecision::denominator(r) % pp;
  if (den == 0) throw usage_error("rational weight has no image modulo " + std::to_string(p));
  const PrimeField f(p);
  return f.mul(static_cast<std::uint32_t>(num), f.inv(static_cast<std::uint32_t>(den)));
}

// Rank over Q certified from below by ranks over large primes.
inline std::size_t rational_rank_proxy(const Graph<RationalField>& g) {
  std::size_t best = 0;
  for (const std::uint32_t p : kProxyPrimes) {
    const PrimeField f(p);
    Graph<PrimeField> h{f, g.n, {}};
    h.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) h.edges.push_back({e.u, e.v, reduce_rational(e.weight, p)});
    best = std::max(best, rank(adjacency_matrix(h)));
  }
  return best;
}

template <class Field>
std::size_t graph_rank(const Graph<Field>& g, const Limits& limits) {
  if constexpr (std::is_same_v<Field, RationalField>) {
    if (g.n > limits.rational_exact_max) return rational_rank_proxy(g);
    const RationalField wide(std::max(g.n, RationalField::default_max_dimension));
    Graph<RationalField> h{wide, g.n, g.edges};
    return rank(adjacency_matrix(h));
  } else {
    return rank(adjacency_matrix(g));
  }
}

template <class Field>
TrialRecord run_trial(const Field& f, const ExperimentConfig& cfg, std::size_t index,
                      const Limits& limits) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial_index = index;
  rec.derived_seed = derive_seed(cfg.master_seed, index, Purpose::edges);
  rec.n = cfg.n;
  rec.d = cfg.d;
  rec.field = cfg.field.label();
  rec.weights = cfg.weights;

  const CouplingSource coupling(rec.derived_seed);
  const WeightTemplate<Field> weights(f, cfg.n, cfg.weights,
                                      derive_seed(cfg.master_seed, index, Purpose::weights));
  const auto g = sample_graph(cfg.n, cfg.p(), weights, coupling);
  const auto ks = karp_sipser(g);
  rec.rank = graph_rank(g, limits);
  rec.nullity = cfg.n - rec.rank;
  rec.ks_isolated = ks.isolated_count;
  rec.ks_core_size = ks.core_vertices.size();
  rec.normalized_rank = static_cast<double>(rec.rank) / static_cast<double>(cfg.n);

  if (cfg.census) {
    // T^{(N)}_{n,p} with N = n: the same coupling and template under a uniform relabeling.
    const auto perm = uniform_permutation(cfg.n, derive_seed(cfg.master_seed, index, Purpose::permutation));
    const auto t = sample_T<Field>(cfg.n, cfg.n, cfg.p(), weights, coupling, perm);
    const auto spec = PerturbationSpec::canonical(*cfg.pert_P,
                                                  derive_seed(cfg.master_seed, index, Purpose::theta),
                                                  derive_seed(cfg.master_seed, index, Purpose::pert_rows));
    CensusRecord c;
    c.theta_r = spec.theta_r;
    c.theta_c = spec.theta_c;
    c.profile = type_census(canonical_perturb(t, spec), cfg.n);
    c.residuals = fixed_point_residuals(c.profile, cfg.d);
    rec.census = c;
  }
  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace harness_detail

inline TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t index,
                             const Limits& limits = {}) {
  return visit_field(cfg.field, [&](const auto& f) {
    return harness_detail::run_trial(f, cfg, index, limits);
  });
}

// Runs all trials on cfg.workers threads; records come back in trial order.
inline std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const Limits& limits = {}) {
  cfg.validate(limits);
  std::vector<TrialRecord> records(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cfg.trials;) {
      try {
        records[k] = run_trial(cfg, k, limits);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  const std::size_t threads = std::min(cfg.workers, cfg.trials);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

// ---------------------------------------------------------------------------
// Aggregation

struct CensusSummary {
  std::size_t records = 0;
  double x = 0, y = 0, z = 0, u = 0, v = 0, alpha = 0, alpha_hat = 0;
  FixedPointResiduals residuals;  // means
  std::size_t identity_violations = 0;
};

struct SummaryReport {
  std::string field;
  TemplateKind weights = TemplateKind::all_ones;
  std::size_t n = 0;
  double d = 0;
  std::size_t trials = 0;
  double mean_normalized_rank = 0;
  double stddev_normalized_rank = 0;
  double mean_ks_bound = 0;  // mean of 1 − isolated/n
  double min_R = 0;
  double gap = 0;            // |mean normalized rank − min_R|
  double ks_limit = 0;       // 2 − (γ^⋆ + γ_⋆ + γ^⋆γ_⋆)/d
  double alpha_star_lo = 0;
  double alpha_star_hi = 0;
  std::size_t upper_bound_violations = 0;
  std::optional<CensusSummary> census;

  nlohmann::json to_json() const {
    nlohmann::json j{{"field", field},
                     {"template", template_label(weights)},
                     {"n", n},
                     {"d", d},
                     {"trials", trials},
                     {"mean_normalized_rank", mean_normalized_rank},
                     {"stddev_normalized_rank", stddev_normalized_rank},
                     {"mean_ks_bound", mean_ks_bound},
                     {"min_R", min_R},
                     {"gap", gap},
                     {"ks_limit", ks_limit},
                     {"alpha_star_lo", alpha_star_lo},
                     {"alpha_star_hi", alpha_star_hi},
                     {"upper_bound_violations", upper_bound_violations}};
    if (census) {
      const auto& c = *census;
      j["census"] = {{"records", c.records},
                     {"mean_x", c.x},
                     {"mean_y", c.y},
                     {"mean_z", c.z},
                     {"mean_u", c.u},
                     {"mean_v", c.v},
                     {"mean_alpha", c.alpha},
                     {"mean_alpha_hat", c.alpha_hat},
                     {"mean_residual_y", c.residuals.y},
                     {"mean_residual_u", c.residuals.u},
                     {"mean_residual_v", c.residuals.v},
                     {"mean_deficit_z", c.residuals.z_deficit},
                     {"identity_violations", c.identity_violations}};
    }
    return j;
  }
};

inline SummaryReport summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  SummaryReport s;
  s.field = cfg.field.label();
  s.weights = cfg.weights;
  s.n = cfg.n;
  s.d = cfg.d;
  s.trials = records.size();
  const auto point = analytic::solve_point(cfg.d);
  s.min_R = point.min_R;
  s.alpha_star_lo = point.alpha_star_lo;
  s.alpha_star_hi = point.alpha_star_hi;
  s.ks_limit = cfg.d == 0.0
                   ? 0.0
                   : 2.0 - (point.gamma_hi + point.gamma_lo + point.gamma_hi * point.gamma_lo) / cfg.d;
  if (records.empty()) return s;

  const double count = static_cast<double>(records.size());
  double sum = 0, sum_sq = 0, bound = 0;
  CensusSummary c;
  for (const auto& r : records) {
    sum += r.normalized_rank;
    sum_sq += r.normalized_rank * r.normalized_rank;
    bound += 1.0 - static_cast<double>(r.ks_isolated) / static_cast<double>(r.n);
    s.upper_bound_violations += !r.upper_bound_holds();
    if (r.census) {
      const auto& p = r.census->profile;
      ++c.records;
      c.x += p.x(), c.y += p.y(), c.z += p.z(), c.u += p.u(), c.v += p.v();
      c.alpha += p.alpha(), c.alpha_hat += p.alpha_hat();
      c.residuals.y += r.census->residuals.y;
      c.residuals.u += r.census->residuals.u;
      c.residuals.v += r.census->residuals.v;
      c.residuals.z_deficit += r.census->residuals.z_deficit;
      c.identity_violations += !p.identities_hold();
    }
  }
  s.mean_normalized_rank = sum / count;
  s.stddev_normalized_rank =
      records.size() > 1
          ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / count) / (count - 1.0)))
          : 0.0;
  s.mean_ks_bound = bound / count;
  s.gap = std::abs(s.mean_normalized_rank - s.min_R);
  if (c.records > 0) {
    const double k = static_cast<double>(c.records);
    for (double* m : {&c.x, &c.y, &c.z, &c.u, &c.v, &c.alpha, &c.alpha_hat, &c.residuals.y,
                      &c.residuals.u, &c.residuals.v, &c.residuals.z_deficit}) {
      *m /= k;
    }
    s.census = c;
  }
  return s;
}

struct ExperimentResult {
  std::vector<TrialRecord> records;
  SummaryReport summary;
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const Limits& limits = {}) {
  auto records = run_trials(cfg, limits);
  auto summary = summarize(cfg, records);
  return {std::move(records), std::move(summary)};
}

// Census run: forces the census on and returns the aggregate.
inline ExperimentResult run_census(ExperimentConfig cfg, const Limits& limits = {}) {
  cfg.census = true;
  return run_experiment(cfg, limits);
}

// Same seeds, several field/weight choices: the edge supports coincide trial
// by trial, so differences in mean rank isolate the field dependence.
struct FieldChoice {
  FieldSpec field;
  TemplateKind weights;
};

struct FieldComparison {
  std::vector<ExperimentResult> runs;
  double max_pairwise_gap = 0;
};

inline FieldComparison compare_fields(const ExperimentConfig& base, const std::vector<FieldChoice>& choices,
                                      const Limits& limits = {}) {
  FieldComparison out;
  for (const auto& ch : choices) {
    ExperimentConfig cfg = base;
    cfg.field = ch.field;
    cfg.weights = ch.weights;
    out.runs.push_back(run_experiment(cfg, limits));
  }
  for (std::size_t a = 0; a < out.runs.size(); ++a)
    for (std::size_t b = a + 1; b < out.runs.size(); ++b)
      out.max_pairwise_gap =
          std::max(out.max_pairwise_gap, std::abs(out.runs[a].summary.mean_normalized_rank -
                                                  out.runs[b].summary.mean_normalized_rank));
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timings = false) {
  out << "#frozenrank-v1\n";
  out << "trial_index,derived_seed,n,d,field,template,rank,nullity,ks_isolated,ks_core_size,"
         "normalized_rank,theta_r,theta_c,x,y,z,u,v,alpha,alpha_hat,"
         "residual_y,residual_u,residual_v,deficit_z";
  if (timings) out << ",elapsed_ms";
  out << '\n';
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.derived_seed << ',' << r.n << ',' << format_double(r.d) << ','
        << r.field << ',' << template_label(r.weights) << ',' << r.rank << ',' << r.nullity << ','
        << r.ks_isolated << ',' << r.ks_core_size << ',' << format_double(r.normalized_rank);
    if (r.census) {
      const auto& c = *r.census;
      const auto& p = c.profile;
      out << ',' << c.theta_r << ',' << c.theta_c;
      for (const double v : {p.x(), p.y(), p.z(), p.u(), p.v(), p.alpha(), p.alpha_hat(),
                             c.residuals.y, c.residuals.u, c.residuals.v, c.residuals.z_deficit}) {
        out << ',' << format_double(v);
      }
    } else {
      out << std::string(13, ',');
    }
    if (timings) out << ',' << format_double(r.elapsed_ms);
    out << '\n';
  }
}

}  // namespace frozenrank
