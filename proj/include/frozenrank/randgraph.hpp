#pragma once

// Weighted Erdős–Rényi adjacency matrices under a monotone coupling, the
// permuted variant T^{(N)}_{n,p}, and Karp–Sipser leaf removal.
//
// Edge {i,j} is present iff q(i,j) < p, where q is a counter hash of
// (seed, min(i,j), max(i,j)); its weight is the template entry J(i,j).
// Raising p or n with the same seed only ever adds edges.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frozenrank/elimination.hpp"
#include "frozenrank/errors.hpp"
#include "frozenrank/field.hpp"
#include "frozenrank/matrix.hpp"
#include "frozenrank/random.hpp"

namespace frozenrank {

enum class TemplateKind { all_ones, seeded_random };

// Symmetric template of nonzero weights, materialized entry by entry.
template <class Field>
class WeightTemplate {
 public:
  using value_type = typename Field::value_type;

  WeightTemplate(Field field, std::size_t size, TemplateKind kind, std::uint64_t seed = 0)
      : field_(std::move(field)), size_(size), kind_(kind), seed_(seed) {}

  static WeightTemplate all_ones(Field field, std::size_t size) {
    return {std::move(field), size, TemplateKind::all_ones};
  }
  static WeightTemplate random(Field field, std::size_t size, std::uint64_t seed) {
    return {std::move(field), size, TemplateKind::seeded_random, seed};
  }

  const Field& field() const noexcept { return field_; }
  std::size_t size() const noexcept { return size_; }
  TemplateKind kind() const noexcept { return kind_; }

  value_type entry(std::size_t i, std::size_t j) const {
    if (kind_ == TemplateKind::all_ones) return Field::one();
    SeededStream rng(hash64(seed_, std::min(i, j), std::max(i, j)));
    return field_.sample_nonzero(rng);
  }

 private:
  Field field_;
  std::size_t size_;
  TemplateKind kind_;
  std::uint64_t seed_;
};

class CouplingSource {
 public:
  explicit CouplingSource(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform on [0,1), symmetric in (i, j).
  double q(std::size_t i, std::size_t j) const noexcept {
    return unit_interval(hash64(seed_, std::min(i, j), std::max(i, j)));
  }

 private:
  std::uint64_t seed_;
};

template <class Field>
struct Edge {
  std::size_t u;
  std::size_t v;
  typename Field::value_type weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

template <class Field>
struct Graph {
  Field field;
  std::size_t n = 0;
  std::vector<Edge<Field>> edges;

  // Throws usage_error on self-loops, repeated edges, zero weights or
  // out-of-range endpoints.
  void validate() const {
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    seen.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw usage_error("edge endpoint out of range");
      if (e.u == e.v) throw usage_error("self-loop at vertex " + std::to_string(e.u));
      if (Field::is_zero(e.weight)) throw usage_error("zero edge weight");
      seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw usage_error("duplicate edge");
    }
  }

  std::vector<std::vector<std::size_t>> adjacency_lists() const {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }
};

template <class Field>
Matrix<Field> adjacency_matrix(const Graph<Field>& g) {
  Matrix<Field> a(g.field, g.n, g.n);
  for (const auto& e : g.edges) {
    a.set(e.u, e.v, e.weight);
    a.set(e.v, e.u, e.weight);
  }
  return a;
}

// Graph on vertex labels `labels[0..n)`: vertices a < b are joined iff
// q(labels[a], labels[b]) < p, weighted by J(labels[a], labels[b]).
template <class Field>
Graph<Field> sample_graph_on(std::span<const std::size_t> labels, double p,
                             const WeightTemplate<Field>& weights,
                             const CouplingSource& coupling) {
  if (!(p >= 0.0 && p <= 1.0)) throw usage_error("edge probability must lie in [0,1]");
  for (const std::size_t l : labels) {
    if (l >= weights.size()) throw usage_error("template smaller than the sampled graph");
  }
  Graph<Field> g{weights.field(), labels.size(), {}};
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      if (coupling.q(labels[a], labels[b]) < p) {
        g.edges.push_back({a, b, weights.entry(labels[a], labels[b])});
      }
    }
  }
  return g;
}

template <class Field>
Graph<Field> sample_graph(std::size_t n, double p, const WeightTemplate<Field>& weights,
                          const CouplingSource& coupling) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return sample_graph_on<Field>(labels, p, weights, coupling);
}

// A_{n,p}: symmetric, zero diagonal, entry J(i,j) where q(i,j) < p.
template <class Field>
Matrix<Field> sample_A(std::size_t n, double p, const WeightTemplate<Field>& weights,
                       const CouplingSource& coupling) {
  return adjacency_matrix(sample_graph(n, p, weights, coupling));
}

// Seeded Fisher–Yates shuffle of [0, size).
inline std::vector<std::size_t> uniform_permutation(std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  SeededStream rng(seed);
  for (std::size_t i = size; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  return perm;
}

// T^{(N)}_{n,p}(i,j) = A_{N,p}(perm(i), perm(j)) for the leading n entries of
// a permutation of [0, N).
template <class Field>
Graph<Field> sample_T_graph(std::size_t n, std::size_t big_n, double p,
                            const WeightTemplate<Field>& weights,
                            const CouplingSource& coupling,
                            std::span<const std::size_t> perm) {
  if (n > big_n) throw usage_error("sample_T needs n <= N");
  if (perm.size() != big_n) throw usage_error("permutation must have length N");
  return sample_graph_on<Field>(perm.subspan(0, n), p, weights, coupling);
}

template <class Field>
Matrix<Field> sample_T(std::size_t n, std::size_t big_n, double p,
                       const WeightTemplate<Field>& weights, const CouplingSource& coupling,
                       std::span<const std::size_t> perm) {
  return adjacency_matrix(sample_T_graph<Field>(n, big_n, p, weights, coupling, perm));
}

template <class Field>
Matrix<Field> sample_T(std::size_t n, std::size_t big_n, double p,
                       const WeightTemplate<Field>& weights, const CouplingSource& coupling,
                       std::uint64_t perm_seed) {
  if (n > big_n) throw usage_error("sample_T needs n <= N");
  const auto perm = uniform_permutation(big_n, perm_seed);
  return sample_T<Field>(n, big_n, p, weights, coupling, perm);
}

// ---------------------------------------------------------------------------
// Karp–Sipser leaf removal

template <class Field>
struct KSResult {
  std::size_t isolated_count = 0;
  std::vector<std::size_t> isolated;      // original labels
  std::vector<std::size_t> core_vertices; // original labels, ascending
  Graph<Field> core;                      // induced on core_vertices, relabeled
  std::vector<std::pair<std::size_t, std::size_t>> removed_pairs;  // (leaf, neighbor)
};

enum class LeafOrder { smallest_first, random };

template <class Field>
KSResult<Field> karp_sipser(const Graph<Field>& g, LeafOrder order = LeafOrder::smallest_first,
                            std::uint64_t order_seed = 0) {
  const auto adj = g.adjacency_lists();
  std::vector<std::size_t> degree(g.n);
  for (std::size_t v = 0; v < g.n; ++v) degree[v] = adj[v].size();
  std::vector<bool> removed(g.n, false);

  // Candidate leaves; entries go stale and are re-checked when popped.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> heap;
  std::vector<std::size_t> pool;
  SeededStream rng(order_seed);
  auto push = [&](std::size_t v) {
    if (order == LeafOrder::smallest_first) {
      heap.push(v);
    } else {
      pool.push_back(v);
    }
  };
  auto pop = [&]() -> std::optional<std::size_t> {
    if (order == LeafOrder::smallest_first) {
      if (heap.empty()) return std::nullopt;
      const std::size_t v = heap.top();
      heap.pop();
      return v;
    }
    if (pool.empty()) return std::nullopt;
    const std::size_t k = rng.below(pool.size());
    std::swap(pool[k], pool.back());
    const std::size_t v = pool.back();
    pool.pop_back();
    return v;
  };

  for (std::size_t v = 0; v < g.n; ++v) {
    if (degree[v] == 1) push(v);
  }

  KSResult<Field> result{0, {}, {}, Graph<Field>{g.field, 0, {}}, {}};
  while (const auto next = pop()) {
    const std::size_t leaf = *next;
    if (removed[leaf] || degree[leaf] != 1) continue;
    const auto it = std::find_if(adj[leaf].begin(), adj[leaf].end(),
                                 [&](std::size_t x) { return !removed[x]; });
    if (it == adj[leaf].end()) throw internal_error("leaf without live neighbor");
    const std::size_t hub = *it;
    removed[leaf] = removed[hub] = true;
    result.removed_pairs.emplace_back(leaf, hub);
    for (const std::size_t x : adj[hub]) {
      if (removed[x]) continue;
      if (--degree[x] == 1) push(x);
    }
  }

  std::vector<std::size_t> relabel(g.n, g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    if (removed[v]) continue;
    if (degree[v] == 0) {
      result.isolated.push_back(v);
    } else {
      relabel[v] = result.core_vertices.size();
      result.core_vertices.push_back(v);
    }
  }
  result.isolated_count = result.isolated.size();
  result.core.n = result.core_vertices.size();
  for (const auto& e : g.edges) {
    if (relabel[e.u] != g.n && relabel[e.v] != g.n) {
      result.core.edges.push_back({relabel[e.u], relabel[e.v], e.weight});
    }
  }
  return result;
}

// nul(A(G)) == isolated_count + nul(A(core)), decided by two eliminations.
template <class Field>
bool nullity_invariance_check(const Graph<Field>& g, std::size_t max_vertices = 4000) {
  if (g.n > max_vertices) {
    throw resource_error("nullity check capped at " + std::to_string(max_vertices) +
                         " vertices, graph has " + std::to_string(g.n));
  }
  const auto ks = karp_sipser(g);
  return nullity(adjacency_matrix(g)) == ks.isolated_count + nullity(adjacency_matrix(ks.core));
}

}  // namespace frozenrank
