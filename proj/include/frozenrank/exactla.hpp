#pragma once

// Frozen variables, linear relations and the five-way variable type census.
//
// A column i of A is frozen when every kernel vector vanishes at i, i.e. when
// the unit row e_i lies in the row space of A. Types of an index
// i < min(m, n) are read off four memberships:
//
//   frozen in A, frozen in A^T, frozen in A minus row i, frozen in A^T minus row i
//
//   X  frailly frozen: frozen, but not after deleting row i (same in A and A^T)
//   Y  firmly frozen in both A and A^T
//   Z  frozen in neither
//   U  not frozen in A, firmly frozen in A^T
//   V  firmly frozen in A, not frozen in A^T

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frozenrank/elimination.hpp"
#include "frozenrank/errors.hpp"
#include "frozenrank/matrix.hpp"

namespace frozenrank {

enum class FrozenMethod { rank_drop, kernel_support };

struct FrozenReport {
  IndexSet frozen;
  FrozenMethod method;
};

enum class VariableType { X, Y, Z, U, V };

inline char to_char(VariableType t) noexcept { return "XYZUV"[static_cast<int>(t)]; }

template <class Field>
FrozenReport frozen_set(const Matrix<Field>& a,
                        FrozenMethod method = FrozenMethod::kernel_support) {
  std::vector<std::size_t> frozen;
  if (method == FrozenMethod::rank_drop) {
    const std::size_t full = rank(a);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      if (full - rank(remove_column(a, i)) == 1) frozen.push_back(i);
    }
  } else {
    std::vector<bool> in_support(a.cols(), false);
    for (const auto& v : kernel_basis(a)) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (!Field::is_zero(v[j])) in_support[j] = true;
      }
    }
    for (std::size_t i = 0; i < a.cols(); ++i) {
      if (!in_support[i]) frozen.push_back(i);
    }
  }
  return {IndexSet(std::move(frozen)), method};
}

template <class Field>
bool is_frozen(const Matrix<Field>& a, std::size_t i) {
  if (i >= a.cols()) throw usage_error("variable index out of range");
  return frozen_set(a).frozen.contains(i);
}

// Some nonzero vector of the row space has its support inside `indices`.
// Decided by whether dropping those columns loses rank.
template <class Field>
bool is_relation(const Matrix<Field>& a, const IndexSet& indices) {
  if (indices.empty()) throw usage_error("a relation must be a nonempty index set");
  indices.require_below(a.cols(), "column");
  return rank(remove(a, IndexSet{}, indices)) < rank(a);
}

struct RelationLimits {
  std::size_t max_cols = 24;
};

namespace detail {

template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// All relations I of size ell such that I minus the frozen set is still a
// relation.
template <class Field>
std::vector<IndexSet> proper_relations(const Matrix<Field>& a, std::size_t ell,
                                       const RelationLimits& limits = {}) {
  if (a.cols() > limits.max_cols) {
    throw resource_error("proper relation enumeration capped at " +
                         std::to_string(limits.max_cols) + " columns, matrix has " +
                         std::to_string(a.cols()));
  }
  std::vector<IndexSet> out;
  if (ell == 0) return out;
  const std::size_t full = rank(a);
  if (full == 0) return out;
  const IndexSet frozen = frozen_set(a).frozen;

  auto relation = [&](const std::vector<std::size_t>& cols) {
    return rank(remove(a, IndexSet{}, IndexSet(cols))) < full;
  };
  detail::for_each_subset(a.cols(), ell, [&](const std::vector<std::size_t>& subset) {
    if (!relation(subset)) return;
    std::vector<std::size_t> unfrozen;
    for (const std::size_t i : subset) {
      if (!frozen.contains(i)) unfrozen.push_back(i);
    }
    if (!unfrozen.empty() && relation(unfrozen)) out.emplace_back(subset);
  });
  return out;
}

template <class Field>
bool is_delta_ell_free(const Matrix<Field>& a, double delta, std::size_t ell,
                       const RelationLimits& limits = {}) {
  double bound = delta;
  for (std::size_t k = 0; k < ell; ++k) bound *= static_cast<double>(a.cols());
  return static_cast<double>(proper_relations(a, ell, limits).size()) <= bound;
}

struct FrozenMemberships {
  bool frozen = false;
  bool frozen_transposed = false;
  bool firm = false;             // frozen in A minus row i
  bool firm_transposed = false;  // frozen in A^T minus row i
};

inline VariableType classify_memberships(const FrozenMemberships& s) {
  const bool frail = s.frozen && !s.firm;
  const bool frail_t = s.frozen_transposed && !s.firm_transposed;
  if (frail != frail_t) throw internal_error("frail freezing is not transpose-symmetric");
  if (frail) return VariableType::X;
  if (s.firm && s.firm_transposed) return VariableType::Y;
  if (!s.frozen && !s.frozen_transposed) return VariableType::Z;
  if (!s.frozen && s.firm_transposed) return VariableType::U;
  if (s.firm && !s.frozen_transposed) return VariableType::V;
  throw internal_error("variable fits none of the five types");
}

template <class Field>
FrozenMemberships memberships(const Matrix<Field>& a, std::size_t i) {
  if (i >= std::min(a.rows(), a.cols())) {
    throw usage_error("variable index " + std::to_string(i) + " outside [0, min(m,n))");
  }
  const Matrix<Field> t = transpose(a);
  return {is_frozen(a, i), is_frozen(t, i), is_frozen(remove_row(a, i), i),
          is_frozen(remove_row(t, i), i)};
}

template <class Field>
VariableType classify_variable(const Matrix<Field>& a, std::size_t i) {
  return classify_memberships(memberships(a, i));
}

// Counts of the five types over indices [0, n) plus the frozen counts of A
// and A^T over the same range. Proportions are count / n.
struct TypeProfile {
  std::size_t n = 0;
  std::size_t count_x = 0, count_y = 0, count_z = 0, count_u = 0, count_v = 0;
  std::size_t frozen = 0;             // |F(A) ∩ [0,n)|
  std::size_t frozen_transposed = 0;  // |F(A^T) ∩ [0,n)|

  double share(std::size_t c) const { return static_cast<double>(c) / static_cast<double>(n); }
  double x() const { return share(count_x); }
  double y() const { return share(count_y); }
  double z() const { return share(count_z); }
  double u() const { return share(count_u); }
  double v() const { return share(count_v); }
  double alpha() const { return share(frozen); }
  double alpha_hat() const { return share(frozen_transposed); }

  std::size_t total() const { return count_x + count_y + count_z + count_u + count_v; }

  // alpha = x+y+v and alpha_hat = x+y+u on counts.
  bool identities_hold() const {
    return total() == n && frozen == count_x + count_y + count_v &&
           frozen_transposed == count_x + count_y + count_u;
  }

  void add(VariableType t) {
    switch (t) {
      case VariableType::X: ++count_x; break;
      case VariableType::Y: ++count_y; break;
      case VariableType::Z: ++count_z; break;
      case VariableType::U: ++count_u; break;
      case VariableType::V: ++count_v; break;
    }
  }

  friend bool operator==(const TypeProfile&, const TypeProfile&) = default;
};

// Census over [0, census_size). Only indices frozen in A or A^T need the
// row-deleted eliminations; everything else is Z.
template <class Field>
TypeProfile type_census(const Matrix<Field>& a, std::size_t census_size) {
  if (census_size == 0) throw usage_error("type census over an empty index range");
  if (census_size > std::min(a.rows(), a.cols())) {
    throw usage_error("census range exceeds min(m, n)");
  }
  const Matrix<Field> t = transpose(a);
  const IndexSet fa = frozen_set(a).frozen;
  const IndexSet ft = frozen_set(t).frozen;
  TypeProfile p;
  p.n = census_size;
  for (std::size_t i = 0; i < census_size; ++i) {
    FrozenMemberships s;
    s.frozen = fa.contains(i);
    s.frozen_transposed = ft.contains(i);
    if (s.frozen) s.firm = is_frozen(remove_row(a, i), i);
    if (s.frozen_transposed) s.firm_transposed = is_frozen(remove_row(t, i), i);
    p.add(classify_memberships(s));
    p.frozen += s.frozen;
    p.frozen_transposed += s.frozen_transposed;
  }
  return p;
}

template <class Field>
TypeProfile type_census(const Matrix<Field>& a) {
  return type_census(a, std::min(a.rows(), a.cols()));
}

// rank(A) - rank(A with row i and column i removed).
template <class Field>
int symmetric_removal_rank_drop(const Matrix<Field>& a, std::size_t i) {
  if (a.rows() != a.cols()) throw usage_error("symmetric removal needs a square matrix");
  if (i >= a.rows()) throw usage_error("index out of range");
  return static_cast<int>(rank(a)) - static_cast<int>(rank(remove(a, IndexSet{i}, IndexSet{i})));
}

}  // namespace frozenrank
