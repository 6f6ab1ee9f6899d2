#pragma once

// Random test matrices with i.i.d. entries: each entry is nonzero with
// probability `density`, and then uniform over F*.

#include <cstddef>

#include "frozenrank/matrix.hpp"
#include "frozenrank/random.hpp"

namespace frozenrank {

template <class Field>
Matrix<Field> random_matrix(const Field& f, std::size_t m, std::size_t n, double density,
                            SeededStream& rng) {
  Matrix<Field> a(f, m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < density) a.set(i, j, f.sample_nonzero(rng));
  return a;
}

template <class Field>
Matrix<Field> random_symmetric(const Field& f, std::size_t n, double density, SeededStream& rng,
                               bool zero_diagonal = false) {
  Matrix<Field> a(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = zero_diagonal ? i + 1 : i; j < n; ++j)
      if (rng.uniform() < density) {
        const auto w = f.sample_nonzero(rng);
        a.set(i, j, w);
        a.set(j, i, w);
      }
  return a;
}

template <class Field>
Vector<Field> random_vector(const Field& f, std::size_t n, double density, SeededStream& rng) {
  Vector<Field> v(n, Field::zero());
  for (auto& x : v)
    if (rng.uniform() < density) x = f.sample_nonzero(rng);
  return v;
}

}  // namespace frozenrank
