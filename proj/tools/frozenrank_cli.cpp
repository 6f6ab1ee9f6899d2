// frozenrank command-line driver.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource cap.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "frozenrank/analytic.hpp"
#include "frozenrank/errors.hpp"
#include "frozenrank/exactla.hpp"
#include "frozenrank/harness.hpp"
#include "frozenrank/io.hpp"
#include "frozenrank/randgraph.hpp"
#include "frozenrank/verify.hpp"

namespace fr = frozenrank;
using nlohmann::json;

namespace {

enum Exit : int { ok = 0, check_failed = 1, usage = 2, resource = 3 };

// Writes to `path`, or to standard output when it is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw fr::usage_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw fr::resource_error("failed writing '" + path + "'");
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw fr::usage_error("format must be csv or json");
}

// ---------------------------------------------------------------------------

struct AnalyticArgs {
  double d_min = 0.1, d_max = 5.0, step = 0.1;
  std::string out, format = "csv";
};

int run_analytic(const AnalyticArgs& a) {
  check_format(a.format);
  if (!(a.d_min >= 0.0) || !(a.d_max >= a.d_min) || !(a.step > 0.0) || !std::isfinite(a.d_max)) {
    throw fr::usage_error("need 0 <= d-min <= d-max and step > 0");
  }
  const double span = (a.d_max - a.d_min) / a.step;
  if (span > 1e6) throw fr::resource_error("more than 10^6 grid points requested");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;

  std::vector<fr::analytic::AnalyticPoint> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts.push_back(fr::analytic::solve_point(a.d_min + a.step * static_cast<double>(k)));
  }
  auto ks_limit = [](const fr::analytic::AnalyticPoint& p) {
    return p.d == 0.0 ? 0.0 : 2.0 - (p.gamma_hi + p.gamma_lo + p.gamma_hi * p.gamma_lo) / p.d;
  };
  emit(a.out, [&](std::ostream& os) {
    if (a.format == "json") {
      json arr = json::array();
      for (const auto& p : pts) {
        arr.push_back({{"d", p.d},
                       {"alpha_star_lo", p.alpha_star_lo},
                       {"alpha_zero", p.alpha_zero},
                       {"alpha_star_hi", p.alpha_star_hi},
                       {"min_R", p.min_R},
                       {"gamma_lo", p.gamma_lo},
                       {"gamma_hi", p.gamma_hi},
                       {"ks_limit", ks_limit(p)}});
      }
      os << arr.dump(2) << '\n';
      return;
    }
    os << "d,alpha_star_lo,alpha_zero,alpha_star_hi,min_R,gamma_lo,gamma_hi,ks_limit\n";
    for (const auto& p : pts) {
      os << fr::format_double(p.d);
      for (const double v : {p.alpha_star_lo, p.alpha_zero, p.alpha_star_hi, p.min_R, p.gamma_lo,
                             p.gamma_hi, ks_limit(p)}) {
        os << ',' << fr::format_double(v);
      }
      os << '\n';
    }
  });
  return ok;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::size_t n = 0, trials = 1, workers = 1;
  double d = 0;
  std::string field = "F2", weights = "allones";
  std::uint64_t seed = 0;
  std::optional<std::size_t> pert_P;
  bool census = false, timings = false;
  std::string out, summary, format = "csv";
};

fr::ExperimentConfig config_from(const SimulateArgs& a, CLI::App& cmd) {
  fr::ExperimentConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw fr::usage_error("cannot open config '" + a.config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw fr::usage_error(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = fr::ExperimentConfig::from_json(j);
    if (cmd.count("--workers")) cfg.workers = a.workers;
  } else {
    for (const char* flag : {"--n", "--d", "--trials", "--seed"}) {
      if (cmd.count(flag) == 0) throw fr::usage_error(std::string("missing ") + flag + " (or --config)");
    }
    cfg.n = a.n;
    cfg.d = a.d;
    cfg.field = fr::FieldSpec::parse(a.field);
    cfg.weights = fr::parse_template(a.weights);
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.pert_P = a.pert_P;
    cfg.census = a.census;
    cfg.workers = a.workers;
  }
  if (!a.out.empty()) cfg.output = a.out;
  return cfg;
}

// Record-level CSV (or summary JSON) to the output; the summary JSON also to
// --summary when given. Exit 1 when an exact invariant failed in any record.
int report_experiment(const fr::ExperimentConfig& cfg, const fr::ExperimentResult& res,
                      const std::string& format, const std::string& summary_path, bool timings) {
  check_format(format);
  json summary = res.summary.to_json();
  summary["config"] = cfg.to_json();
  emit(cfg.output, [&](std::ostream& os) {
    if (format == "json") {
      os << summary.dump(2) << '\n';
    } else {
      fr::write_csv(os, res.records, timings);
    }
  });
  if (!summary_path.empty()) emit(summary_path, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });

  const auto& s = res.summary;
  int code = ok;
  if (s.upper_bound_violations > 0) {
    std::cerr << "check failed: " << s.upper_bound_violations
              << " records exceed the leaf-removal rank bound\n";
    code = check_failed;
  }
  if (s.census && s.census->identity_violations > 0) {
    std::cerr << "check failed: " << s.census->identity_violations
              << " census records violate the type identities\n";
    code = check_failed;
  }
  return code;
}

void add_experiment_flags(CLI::App* cmd, SimulateArgs& a) {
  cmd->add_option("--n", a.n, "matrix size");
  cmd->add_option("--d", a.d, "mean degree, edge probability d/n");
  cmd->add_option("--field", a.field, "F2, F<p>, Fp:<p> or Q")->capture_default_str();
  cmd->add_option("--template", a.weights, "edge weights: allones or random")->capture_default_str();
  cmd->add_option("--trials", a.trials, "number of trials");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--workers", a.workers, "worker threads")->capture_default_str();
  cmd->add_option("--out", a.out, "output file (default: standard output)");
  cmd->add_option("--summary", a.summary, "also write the summary JSON here");
  cmd->add_option("--format", a.format, "csv (per trial) or json (summary)")->capture_default_str();
  cmd->add_flag("--timings", a.timings, "append elapsed_ms to the CSV");
}

// ---------------------------------------------------------------------------

struct KsArgs {
  std::size_t n = 0, trials = 1;
  double d = 0;
  std::uint64_t seed = 0;
  bool check_nullity = false;
  std::string graph, out, format = "csv";
};

// Leaf removal on one graph read from a file; the nullity identity is always checked.
int run_ks_file(const KsArgs& a) {
  check_format(a.format);
  std::ifstream in(a.graph);
  if (!in) throw fr::usage_error("cannot open graph '" + a.graph + "'");
  const auto any = fr::read_graph(in);
  bool held = false;
  std::visit(
      [&](const auto& g) {
        const auto ks = fr::karp_sipser(g);
        held = fr::nullity_invariance_check(g);
        const auto rk = fr::rank(fr::adjacency_matrix(g));
        emit(a.out, [&](std::ostream& os) {
          if (a.format == "json") {
            os << json{{"n", g.n},
                       {"edges", g.edges.size()},
                       {"field", g.field.spec().label()},
                       {"rank", rk},
                       {"ks_isolated", ks.isolated_count},
                       {"ks_core_size", ks.core_vertices.size()},
                       {"ks_core_edges", ks.core.edges.size()},
                       {"core_vertices", ks.core_vertices},
                       {"nullity_check", held}}
                      .dump(2)
               << '\n';
            return;
          }
          os << "n,edges,field,rank,ks_isolated,ks_core_size,ks_core_edges,nullity_check\n"
             << g.n << ',' << g.edges.size() << ',' << g.field.spec().label() << ',' << rk << ','
             << ks.isolated_count << ',' << ks.core_vertices.size() << ',' << ks.core.edges.size()
             << ',' << (held ? "ok" : "fail") << '\n';
        });
      },
      any);
  if (!held) {
    std::cerr << "check failed: nullity changed under leaf removal\n";
    return check_failed;
  }
  return ok;
}

// Leaf removal on the same supports `simulate` uses for the same seed.
int run_ks(const KsArgs& a) {
  check_format(a.format);
  fr::ExperimentConfig cfg;
  cfg.n = a.n;
  cfg.d = a.d;
  cfg.trials = a.trials;
  cfg.master_seed = a.seed;
  cfg.validate();
  if (a.check_nullity && a.n > 4000) throw fr::resource_error("--check-nullity is capped at n = 4000");

  struct Row {
    std::uint64_t seed;
    std::size_t isolated, core_vertices, core_edges;
    std::optional<bool> nullity_ok;
  };
  std::vector<Row> rows;
  const auto weights = fr::WeightTemplate<fr::Gf2>::all_ones(fr::Gf2{}, a.n);
  for (std::size_t k = 0; k < a.trials; ++k) {
    const auto seed = fr::derive_seed(a.seed, k, fr::Purpose::edges);
    const auto g = fr::sample_graph(a.n, cfg.p(), weights, fr::CouplingSource(seed));
    const auto ks = fr::karp_sipser(g);
    Row r{seed, ks.isolated_count, ks.core_vertices.size(), ks.core.edges.size(), std::nullopt};
    if (a.check_nullity) r.nullity_ok = fr::nullity_invariance_check(g);
    rows.push_back(r);
  }

  const auto fp = fr::analytic::ks_fixed_point(a.d);
  const double limit_isolated =
      a.d == 0.0 ? 1.0 : (fp.gamma_hi + fp.gamma_lo + fp.gamma_hi * fp.gamma_lo) / a.d - 1.0;
  double mean = 0;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    mean += static_cast<double>(r.isolated) / static_cast<double>(a.n);
    failures += r.nullity_ok && !*r.nullity_ok;
  }
  mean /= static_cast<double>(rows.size());

  emit(a.out, [&](std::ostream& os) {
    if (a.format == "json") {
      json j{{"n", a.n},
             {"d", a.d},
             {"trials", a.trials},
             {"mean_isolated_fraction", mean},
             {"limit_isolated_fraction", limit_isolated},
             {"gamma_lo", fp.gamma_lo},
             {"gamma_hi", fp.gamma_hi}};
      if (a.check_nullity) j["nullity_failures"] = failures;
      os << j.dump(2) << '\n';
      return;
    }
    os << "trial_index,derived_seed,n,d,ks_isolated,ks_core_size,ks_core_edges,ks_bound,nullity_check\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      os << k << ',' << r.seed << ',' << a.n << ',' << fr::format_double(a.d) << ',' << r.isolated
         << ',' << r.core_vertices << ',' << r.core_edges << ','
         << fr::format_double(1.0 - static_cast<double>(r.isolated) / static_cast<double>(a.n)) << ','
         << (r.nullity_ok ? (*r.nullity_ok ? "ok" : "fail") : "") << '\n';
    }
  });
  if (failures > 0) {
    std::cerr << "check failed: nullity changed under leaf removal in " << failures << " graphs\n";
    return check_failed;
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string matrix, out, format = "json";
};

int run_classify(const ClassifyArgs& a) {
  check_format(a.format);
  std::ifstream in(a.matrix);
  if (!in) throw fr::usage_error("cannot open matrix '" + a.matrix + "'");
  const auto any = fr::read_matrix(in);
  std::visit(
      [&](const auto& m) {
        const auto frozen = fr::frozen_set(m).frozen;
        const auto frozen_t = fr::frozen_set(fr::transpose(m)).frozen;
        const std::size_t k = std::min(m.rows(), m.cols());
        std::vector<fr::VariableType> types;
        for (std::size_t i = 0; i < k; ++i) types.push_back(fr::classify_variable(m, i));
        const auto rk = fr::rank(m);
        emit(a.out, [&](std::ostream& os) {
          if (a.format == "csv") {
            os << "index,type,frozen,frozen_transposed\n";
            for (std::size_t i = 0; i < k; ++i) {
              os << i << ',' << fr::to_char(types[i]) << ',' << frozen.contains(i) << ','
                 << frozen_t.contains(i) << '\n';
            }
            return;
          }
          json types_j = json::array();
          for (const auto t : types) types_j.push_back(std::string(1, fr::to_char(t)));
          std::vector<std::size_t> fz, ft;
          for (std::size_t i = 0; i < m.cols(); ++i)
            if (frozen.contains(i)) fz.push_back(i);
          for (std::size_t i = 0; i < m.rows(); ++i)
            if (frozen_t.contains(i)) ft.push_back(i);
          os << json{{"rows", m.rows()},
                     {"cols", m.cols()},
                     {"field", m.field().spec().label()},
                     {"rank", rk},
                     {"nullity", m.cols() - rk},
                     {"frozen", fz},
                     {"frozen_transposed", ft},
                     {"types", types_j}}
                    .dump(2)
             << '\n';
        });
      },
      any);
  return ok;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all", out, format = "text";
};

int run_verify(const VerifyArgs& a) {
  if (a.format != "text" && a.format != "json") throw fr::usage_error("format must be text or json");
  const auto results = fr::verify::run_suite(a.suite);
  emit(a.out, [&](std::ostream& os) {
    if (a.format == "json") {
      json arr = json::array();
      for (const auto& r : results) arr.push_back(r.to_json());
      os << arr.dump(2) << '\n';
      return;
    }
    for (const auto& r : results) {
      const char* tag = r.passed ? "PASS" : (r.gating ? "FAIL" : "WARN");
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
      os << tag << ' ' << r.suite << '/' << r.name << " (" << secs << "): " << r.detail << '\n';
    }
  });
  return fr::verify::all_gating_passed(results) ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank, frozen variables and leaf removal for sparse random matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "frozenrank 1.0");

  AnalyticArgs an;
  auto* analytic = app.add_subcommand("analytic", "tabulate α_⋆, α_0, α^⋆, min R_d and the leaf-removal limit");
  analytic->add_option("--d-min", an.d_min)->capture_default_str();
  analytic->add_option("--d-max", an.d_max)->capture_default_str();
  analytic->add_option("--step", an.step)->capture_default_str();
  analytic->add_option("--out", an.out, "output file (default: standard output)");
  analytic->add_option("--format", an.format, "csv or json")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rank of random sparse symmetric matrices");
  simulate->add_option("--config", sim.config, "JSON ExperimentConfig");
  add_experiment_flags(simulate, sim);
  simulate->add_option("--pert-P", sim.pert_P, "perturbation range P");
  simulate->add_flag("--census", sim.census, "run the type census (needs --pert-P)");

  SimulateArgs cen;
  auto* census = app.add_subcommand("census", "type census of perturbed matrices");
  add_experiment_flags(census, cen);
  census->add_option("--P", cen.pert_P, "perturbation range P")->required();

  KsArgs ks;
  auto* ksc = app.add_subcommand("ks", "Karp-Sipser leaf removal statistics");
  auto* ks_graph = ksc->add_option("--graph", ks.graph, "analyse one graph file instead of sampling");
  for (auto* opt : {ksc->add_option("--n", ks.n), ksc->add_option("--d", ks.d),
                    ksc->add_option("--trials", ks.trials), ksc->add_option("--seed", ks.seed)}) {
    opt->excludes(ks_graph);
  }
  ksc->add_flag("--check-nullity", ks.check_nullity, "also verify the nullity identity per graph");
  ksc->add_option("--out", ks.out, "output file (default: standard output)");
  ksc->add_option("--format", ks.format, "csv or json")->capture_default_str();

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "frozen sets and X/Y/Z/U/V types of a matrix file");
  classify->add_option("--matrix", cl.matrix, "matrix file")->required();
  classify->add_option("--out", cl.out, "output file (default: standard output)");
  classify->add_option("--format", cl.format, "json or csv")->capture_default_str();

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "run the built-in consistency checks");
  verify->add_option("--suite", ve.suite, "oracle, lemmas, perturb, analytic or all")->capture_default_str();
  verify->add_option("--out", ve.out, "output file (default: standard output)");
  verify->add_option("--format", ve.format, "text or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*analytic) return run_analytic(an);
    if (*simulate) {
      const auto cfg = config_from(sim, *simulate);
      return report_experiment(cfg, fr::run_experiment(cfg), sim.format, sim.summary, sim.timings);
    }
    if (*census) {
      cen.census = true;
      auto cfg = config_from(cen, *census);
      return report_experiment(cfg, fr::run_census(cfg), cen.format, cen.summary, cen.timings);
    }
    if (*ksc) {
      if (!ks.graph.empty()) return run_ks_file(ks);
      for (const char* flag : {"--n", "--d", "--trials", "--seed"}) {
        if (ksc->count(flag) == 0) throw fr::usage_error(std::string("missing ") + flag + " (or --graph)");
      }
      return run_ks(ks);
    }
    if (*classify) return run_classify(cl);
    if (*verify) return run_verify(ve);
  } catch (const fr::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const fr::resource_error& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return resource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return check_failed;
  }
  return usage;
}
