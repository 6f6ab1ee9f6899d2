#pragma once

// Gaussian elimination over exact fields. Pivoting takes the first row with a
// nonzero entry in the current column. GF(2) matrices use word-wise XOR.

#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "frozenrank/errors.hpp"
#include "frozenrank/field.hpp"
#include "frozenrank/matrix.hpp"

namespace frozenrank {

namespace detail {

template <class Field>
void check_dimension_cap(const Matrix<Field>& a) {
  if constexpr (std::is_same_v<Field, RationalField>) {
    const std::size_t cap = a.field().max_dimension();
    if (a.rows() > cap || a.cols() > cap) {
      throw resource_error("rational elimination capped at dimension " + std::to_string(cap) +
                           ", matrix is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()));
    }
  }
}

}  // namespace detail

// Row-reduces `a` in place. With `reduced` the result is the reduced row
// echelon form (pivots equal to one, pivot columns cleared above and below);
// otherwise only entries below the pivots are cleared. Returns the pivot
// column of each of the first rank() rows.
template <class Field>
std::vector<std::size_t> eliminate(Matrix<Field>& a, bool reduced) {
  detail::check_dimension_cap(a);
  const Field& f = a.field();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> support;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t pr = r;
    while (pr < m && Field::is_zero(a.at(pr, c))) ++pr;
    if (pr == m) continue;
    a.swap_rows(pr, r);

    auto pivot_row = a.row(r);
    const auto scale = f.inv(pivot_row[c]);
    support.clear();
    for (std::size_t j = c; j < n; ++j) {
      if (!Field::is_zero(pivot_row[j])) {
        pivot_row[j] = f.mul(pivot_row[j], scale);
        support.push_back(j);
      }
    }

    const std::size_t first = reduced ? 0 : r + 1;
    for (std::size_t i = first; i < m; ++i) {
      if (i == r) continue;
      auto target = a.row(i);
      if (Field::is_zero(target[c])) continue;
      const auto factor = target[c];
      if constexpr (std::is_same_v<Field, PrimeField>) {
        const std::uint64_t p = f.characteristic();
        const std::uint64_t neg = p - factor;
        for (const std::size_t j : support) {
          target[j] = static_cast<std::uint32_t>((target[j] + neg * pivot_row[j]) % p);
        }
      } else {
        for (const std::size_t j : support) {
          target[j] = f.sub(target[j], f.mul(factor, pivot_row[j]));
        }
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::vector<std::size_t> eliminate(Matrix<Gf2>& a, bool reduced) {
  using word = Matrix<Gf2>::word_type;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t stride = a.stride();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    const std::size_t w = c / Matrix<Gf2>::word_bits;
    const word bit = word{1} << (c % Matrix<Gf2>::word_bits);
    std::size_t pr = r;
    while (pr < m && !(a.row_words(pr)[w] & bit)) ++pr;
    if (pr == m) continue;
    a.swap_rows(pr, r);
    const word* pivot = a.row_words(r).data();
    const std::size_t first = reduced ? 0 : r + 1;
    for (std::size_t i = first; i < m; ++i) {
      if (i == r) continue;
      word* target = a.row_words(i).data();
      if (!(target[w] & bit)) continue;
      for (std::size_t k = w; k < stride; ++k) target[k] ^= pivot[k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class Field>
struct Echelon {
  Matrix<Field> reduced;
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

template <class Field>
Echelon<Field> reduced_echelon(Matrix<Field> a) {
  auto pivots = eliminate(a, true);
  return {std::move(a), std::move(pivots)};
}

template <class Field>
std::size_t rank(Matrix<Field> a) {
  return eliminate(a, false).size();
}

template <class Field>
std::size_t nullity(const Matrix<Field>& a) {
  return a.cols() - rank(a);
}

// Columns of the reduced form that carry no pivot.
template <class Field>
std::vector<std::size_t> free_columns(const Echelon<Field>& e) {
  std::vector<std::size_t> free;
  std::size_t k = 0;
  for (std::size_t j = 0; j < e.reduced.cols(); ++j) {
    if (k < e.pivot_cols.size() && e.pivot_cols[k] == j) {
      ++k;
    } else {
      free.push_back(j);
    }
  }
  return free;
}

// One vector per free column: 1 at the free column, minus the reduced entries
// at the pivot columns, zero elsewhere.
template <class Field>
std::vector<Vector<Field>> kernel_basis(const Echelon<Field>& e) {
  const std::size_t n = e.reduced.cols();
  std::vector<Vector<Field>> basis;
  for (const std::size_t fc : free_columns(e)) {
    Vector<Field> v(n, Field::zero());
    v[fc] = Field::one();
    for (std::size_t r = 0; r < e.rank(); ++r) {
      const auto& entry = e.reduced.at(r, fc);
      if (!Field::is_zero(entry)) v[e.pivot_cols[r]] = e.reduced.field().neg(entry);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class Field>
std::vector<Vector<Field>> kernel_basis(const Matrix<Field>& a) {
  return kernel_basis(reduced_echelon(a));
}

template <class Field>
Vector<Field> multiply(const Matrix<Field>& a, const Vector<Field>& v) {
  if (v.size() != a.cols()) throw usage_error("vector length does not match column count");
  const Field& f = a.field();
  Vector<Field> out(a.rows(), Field::zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto acc = Field::zero();
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!Field::is_zero(a.at(i, j)) && !Field::is_zero(v[j])) {
        acc = f.add(acc, f.mul(a.at(i, j), v[j]));
      }
    }
    out[i] = acc;
  }
  return out;
}

// True iff b is a linear combination of the rows of a.
template <class Field>
bool row_in_span(const Matrix<Field>& a, const Vector<Field>& b) {
  if (b.size() != a.cols()) {
    throw usage_error("row_in_span: vector has length " + std::to_string(b.size()) +
                      ", matrix has " + std::to_string(a.cols()) + " columns");
  }
  return rank(append_row(a, b)) == rank(a);
}

}  // namespace frozenrank
