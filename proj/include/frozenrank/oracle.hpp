#pragma once

// Brute-force reference computations for tiny matrices over prime fields.
// Nothing here touches the elimination code: the row space and the kernel are
// enumerated vector by vector, so these serve as independent checks.

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "frozenrank/errors.hpp"
#include "frozenrank/matrix.hpp"

namespace frozenrank::oracle {

using Word = std::vector<std::uint32_t>;

namespace detail {

template <class Field>
std::uint64_t field_size(const Field& f) {
  return f.spec().characteristic();
}

// Iterates all of F^len as base-q digit vectors.
template <class Fn>
void for_each_vector(std::size_t len, std::uint64_t q, std::uint64_t cap, Fn&& fn) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < len; ++i) {
    total *= q;
    if (total > cap) throw resource_error("oracle enumeration too large");
  }
  Word digits(len, 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    fn(digits);
    for (std::size_t i = 0; i < len; ++i) {
      if (++digits[i] < q) break;
      digits[i] = 0;
    }
  }
}

}  // namespace detail

constexpr std::uint64_t default_cap = 1u << 22;

// Every vector yA for y in F^m.
template <class Field>
std::set<Word> row_space(const Matrix<Field>& a, std::uint64_t cap = default_cap) {
  const Field& f = a.field();
  std::set<Word> space;
  detail::for_each_vector(a.rows(), detail::field_size(f), cap, [&](const Word& y) {
    Word v(a.cols(), 0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      typename Field::value_type acc = Field::zero();
      for (std::size_t i = 0; i < a.rows(); ++i) {
        acc = f.add(acc, f.mul(static_cast<typename Field::value_type>(y[i]), a.at(i, j)));
      }
      v[j] = acc;
    }
    space.insert(std::move(v));
  });
  return space;
}

// Rank as log_q of the row-space size.
template <class Field>
std::size_t rank(const Matrix<Field>& a) {
  const std::uint64_t q = detail::field_size(a.field());
  std::uint64_t size = row_space(a).size();
  std::size_t r = 0;
  while (size > 1) {
    if (size % q != 0) throw internal_error("row space size is not a power of q");
    size /= q;
    ++r;
  }
  return r;
}

// Every x in F^n with Ax = 0.
template <class Field>
std::vector<Word> kernel(const Matrix<Field>& a, std::uint64_t cap = default_cap) {
  const Field& f = a.field();
  std::vector<Word> out;
  detail::for_each_vector(a.cols(), detail::field_size(f), cap, [&](const Word& x) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      typename Field::value_type acc = Field::zero();
      for (std::size_t j = 0; j < a.cols(); ++j) {
        acc = f.add(acc, f.mul(a.at(i, j), static_cast<typename Field::value_type>(x[j])));
      }
      if (!Field::is_zero(acc)) return;
    }
    out.push_back(x);
  });
  return out;
}

// Coordinates that vanish on the whole kernel.
template <class Field>
std::vector<std::size_t> frozen(const Matrix<Field>& a) {
  std::vector<bool> seen(a.cols(), false);
  for (const Word& x : kernel(a)) {
    for (std::size_t j = 0; j < x.size(); ++j) seen[j] = seen[j] || x[j] != 0;
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (!seen[j]) out.push_back(j);
  }
  return out;
}

// Supports (as bit masks) of all nonzero row-space vectors. Needs n <= 64.
template <class Field>
std::set<std::uint64_t> row_space_supports(const Matrix<Field>& a) {
  if (a.cols() > 64) throw usage_error("support masks need at most 64 columns");
  std::set<std::uint64_t> supports;
  for (const Word& v : row_space(a)) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0) mask |= std::uint64_t{1} << j;
    }
    if (mask != 0) supports.insert(mask);
  }
  return supports;
}

inline bool is_relation(const std::set<std::uint64_t>& supports, std::uint64_t set) {
  if (set == 0) return false;
  for (const std::uint64_t s : supports) {
    if ((s & ~set) == 0) return true;
  }
  return false;
}

// Proper relations of size ell, by row-space enumeration.
template <class Field>
std::vector<std::uint64_t> proper_relations(const Matrix<Field>& a, std::size_t ell) {
  const auto supports = row_space_supports(a);
  std::uint64_t frozen_mask = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (is_relation(supports, std::uint64_t{1} << j)) frozen_mask |= std::uint64_t{1} << j;
  }
  std::vector<std::uint64_t> out;
  const std::size_t n = a.cols();
  if (n >= 64) throw usage_error("oracle needs fewer than 64 columns");
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << n); ++set) {
    if (static_cast<std::size_t>(__builtin_popcountll(set)) != ell) continue;
    if (is_relation(supports, set) && is_relation(supports, set & ~frozen_mask)) {
      out.push_back(set);
    }
  }
  return out;
}

template <class Field>
bool in_row_space(const Matrix<Field>& a, const Vector<Field>& b) {
  Word w(b.begin(), b.end());
  return row_space(a).contains(w);
}

}  // namespace frozenrank::oracle
