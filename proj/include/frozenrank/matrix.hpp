#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frozenrank/errors.hpp"
#include "frozenrank/field.hpp"

namespace frozenrank {

// Sorted, duplicate-free set of 0-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> items) : IndexSet(std::vector<std::size_t>(items)) {}
  explicit IndexSet(std::vector<std::size_t> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    if (std::adjacent_find(items_.begin(), items_.end()) != items_.end()) {
      throw usage_error("index set contains duplicates");
    }
  }

  static IndexSet range(std::size_t begin, std::size_t end) {
    std::vector<std::size_t> v;
    for (std::size_t i = begin; i < end; ++i) v.push_back(i);
    return IndexSet(std::move(v));
  }

  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  bool contains(std::size_t i) const {
    return std::binary_search(items_.begin(), items_.end(), i);
  }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  const std::vector<std::size_t>& items() const noexcept { return items_; }

  void require_below(std::size_t bound, const char* what) const {
    if (!items_.empty() && items_.back() >= bound) {
      throw usage_error(std::string(what) + " index " + std::to_string(items_.back()) +
                        " out of range (size " + std::to_string(bound) + ")");
    }
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> items_;
};

// Dense row-major matrix over a field policy.
template <class Field>
class Matrix {
 public:
  using field_type = Field;
  using value_type = typename Field::value_type;

  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, Field::zero()) {}

  static Matrix from_integers(Field field,
                              std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::vector<std::int64_t>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_integers(std::move(field), v);
  }
  static Matrix from_integers(Field field, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.front().size();
    Matrix a(std::move(field), m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != n) throw usage_error("ragged matrix rows");
      for (std::size_t j = 0; j < n; ++j) a.set(i, j, a.field_.from_integer(rows[i][j]));
    }
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Field& field() const noexcept { return field_; }

  const value_type& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, value_type v) { data_[i * cols_ + j] = std::move(v); }

  std::span<value_type> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const value_type> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_,
                     data_.begin() + b * cols_);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

// GF(2): each row is a run of 64-bit words, bit j of the row at word j/64.
template <>
class Matrix<Gf2> {
 public:
  using field_type = Gf2;
  using value_type = Gf2::value_type;
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  Matrix(Gf2 field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols),
        stride_((cols + word_bits - 1) / word_bits), words_(rows * stride_, 0) {}
  Matrix(std::size_t rows, std::size_t cols) : Matrix(Gf2{}, rows, cols) {}

  static Matrix from_integers(Gf2 field,
                              std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::vector<std::int64_t>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_integers(field, v);
  }
  static Matrix from_integers(Gf2 field, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.front().size();
    Matrix a(field, m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != n) throw usage_error("ragged matrix rows");
      for (std::size_t j = 0; j < n; ++j) a.set(i, j, Gf2::from_integer(rows[i][j]));
    }
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }
  const Gf2& field() const noexcept { return field_; }

  value_type at(std::size_t i, std::size_t j) const {
    return static_cast<value_type>((words_[i * stride_ + j / word_bits] >> (j % word_bits)) & 1u);
  }
  void set(std::size_t i, std::size_t j, value_type v) {
    word_type& w = words_[i * stride_ + j / word_bits];
    const word_type bit = word_type{1} << (j % word_bits);
    w = (v & 1u) ? (w | bit) : (w & ~bit);
  }

  std::span<word_type> row_words(std::size_t i) { return {words_.data() + i * stride_, stride_}; }
  std::span<const word_type> row_words(std::size_t i) const {
    return {words_.data() + i * stride_, stride_};
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(words_.begin() + a * stride_, words_.begin() + (a + 1) * stride_,
                     words_.begin() + b * stride_);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.words_ == b.words_;
  }

 private:
  Gf2 field_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<word_type> words_;
};

template <class Field>
using Vector = std::vector<typename Field::value_type>;

template <class Field>
Matrix<Field> zero_matrix(const Field& f, std::size_t m, std::size_t n) {
  return Matrix<Field>(f, m, n);
}

template <class Field>
Matrix<Field> identity_matrix(const Field& f, std::size_t n) {
  Matrix<Field> a(f, n, n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, Field::one());
  return a;
}

template <class Field>
Matrix<Field> transpose(const Matrix<Field>& a) {
  Matrix<Field> t(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!Field::is_zero(a.at(i, j))) t.set(j, i, a.at(i, j));
    }
  }
  return t;
}

template <class Field>
bool is_symmetric(const Matrix<Field>& a) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (!(a.at(i, j) == a.at(j, i))) return false;
    }
  }
  return true;
}

namespace detail {
inline std::vector<std::size_t> complement(const IndexSet& removed, std::size_t size) {
  std::vector<std::size_t> kept;
  kept.reserve(size - removed.size());
  for (std::size_t i = 0; i < size; ++i) {
    if (!removed.contains(i)) kept.push_back(i);
  }
  return kept;
}
}  // namespace detail

template <class Field>
Matrix<Field> select(const Matrix<Field>& a, std::span<const std::size_t> rows,
                     std::span<const std::size_t> cols) {
  Matrix<Field> b(a.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& v = a.at(rows[i], cols[j]);
      if (!Field::is_zero(v)) b.set(i, j, v);
    }
  }
  return b;
}

// A with the given rows and columns deleted; survivors keep their order.
template <class Field>
Matrix<Field> remove(const Matrix<Field>& a, const IndexSet& rows, const IndexSet& cols) {
  rows.require_below(a.rows(), "row");
  cols.require_below(a.cols(), "column");
  const auto kept_rows = detail::complement(rows, a.rows());
  const auto kept_cols = detail::complement(cols, a.cols());
  return select(a, kept_rows, kept_cols);
}

template <class Field>
Matrix<Field> remove_row(const Matrix<Field>& a, std::size_t i) {
  return remove(a, IndexSet{i}, IndexSet{});
}

template <class Field>
Matrix<Field> remove_column(const Matrix<Field>& a, std::size_t j) {
  return remove(a, IndexSet{}, IndexSet{j});
}

template <class Field>
Matrix<Field> append_row(const Matrix<Field>& a, const Vector<Field>& r) {
  if (r.size() != a.cols()) throw usage_error("appended row has wrong length");
  Matrix<Field> b(a.field(), a.rows() + 1, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) b.set(i, j, a.at(i, j));
  for (std::size_t j = 0; j < a.cols(); ++j) b.set(a.rows(), j, r[j]);
  return b;
}

template <class Field>
Matrix<Field> append_column(const Matrix<Field>& a, const Vector<Field>& c) {
  if (c.size() != a.rows()) throw usage_error("appended column has wrong length");
  Matrix<Field> b(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) b.set(i, j, a.at(i, j));
    b.set(i, a.cols(), c[i]);
  }
  return b;
}

// [a b; c d]
template <class Field>
Matrix<Field> block(const Matrix<Field>& a, const Matrix<Field>& b, const Matrix<Field>& c,
                    const Matrix<Field>& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    throw usage_error("block dimensions do not match");
  }
  Matrix<Field> r(a.field(), a.rows() + c.rows(), a.cols() + b.cols());
  auto copy = [&r](const Matrix<Field>& src, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j)
        if (!Field::is_zero(src.at(i, j))) r.set(r0 + i, c0 + j, src.at(i, j));
  };
  copy(a, 0, 0);
  copy(b, 0, a.cols());
  copy(c, a.rows(), 0);
  copy(d, a.rows(), a.cols());
  return r;
}

// B(i,j) = A(perm[i], perm[j]).
template <class Field>
Matrix<Field> permute_symmetric(const Matrix<Field>& a, std::span<const std::size_t> perm) {
  if (a.rows() != a.cols() || perm.size() != a.rows()) {
    throw usage_error("permutation size does not match square matrix");
  }
  return select(a, perm, perm);
}

template <class Field>
Vector<Field> unit_vector(std::size_t n, std::size_t i) {
  Vector<Field> v(n, Field::zero());
  v.at(i) = Field::one();
  return v;
}

}  // namespace frozenrank
