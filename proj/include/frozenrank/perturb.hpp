#pragma once

// Coupled unit-row / unit-column perturbations and the canonical perturbation
//
//   A[θ] = [ A            Θ_c[m|m,θ_c] ]
//          [ Θ_r[θ_r,n|n] 0            ]
//
// Row k of Θ_r[θ_r,n1|n2] has its single 1 in column j(k,n1), where
// j(k,n1) = max{ℓ <= n1 : u(k,ℓ) = ℓ} and u(k,ℓ) is uniform on {1..ℓ}.
// Hence j(k,n1) is uniform on {1..n1}, the matrices nest in θ_r and n2, and
// j(k,n0) = j(k,n1) with probability n0/n1 for n0 <= n1.
//
// Levels ℓ and j are 1-based as in the construction; matrix columns are
// 0-based, so column j(k,n1) - 1 carries the 1.

#include <cstddef>
#include <cstdint>
#include <string>

#include "frozenrank/errors.hpp"
#include "frozenrank/matrix.hpp"
#include "frozenrank/random.hpp"

namespace frozenrank {

class PerturbationFamily {
 public:
  explicit PerturbationFamily(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  // u(k, ℓ) in {1..ℓ}.
  std::size_t u(std::size_t k, std::size_t level) const {
    if (level == 0) throw usage_error("perturbation level starts at 1");
    SeededStream rng(hash64(seed_, k, level));
    return 1 + static_cast<std::size_t>(rng.below(level));
  }

  // j(k, n1) in {1..n1}; u(k,1) = 1 makes the maximum well defined.
  std::size_t j(std::size_t k, std::size_t n1) const {
    if (n1 == 0) throw usage_error("perturbation needs n1 >= 1");
    for (std::size_t level = n1; level > 1; --level) {
      if (u(k, level) == level) return level;
    }
    return 1;
  }

 private:
  std::uint64_t seed_;
};

// Independent row and column families from one master seed.
struct PerturbationFamilies {
  PerturbationFamily rows;
  PerturbationFamily cols;

  explicit PerturbationFamilies(std::uint64_t master)
      : rows(derive_seed(master, 0, Purpose::pert_rows)),
        cols(derive_seed(master, 0, Purpose::pert_cols)) {}
};

// θ_r × n2 unit-row matrix Θ_r[θ_r, n1 | n2].
template <class Field>
Matrix<Field> theta_r_matrix(const Field& f, const PerturbationFamily& fam, std::size_t theta_r,
                             std::size_t n1, std::size_t n2) {
  if (n1 > n2) throw usage_error("theta_r_matrix needs n1 <= n2");
  Matrix<Field> out(f, theta_r, n2);
  for (std::size_t k = 0; k < theta_r; ++k) out.set(k, fam.j(k, n1) - 1, Field::one());
  return out;
}

// m2 × θ_c unit-column matrix Θ_c[m1 | m2, θ_c].
template <class Field>
Matrix<Field> theta_c_matrix(const Field& f, const PerturbationFamily& fam, std::size_t m1,
                             std::size_t m2, std::size_t theta_c) {
  if (m1 > m2) throw usage_error("theta_c_matrix needs m1 <= m2");
  Matrix<Field> out(f, m2, theta_c);
  for (std::size_t k = 0; k < theta_c; ++k) out.set(fam.j(k, m1) - 1, k, Field::one());
  return out;
}

struct PerturbationSpec {
  std::size_t theta_r = 0;
  std::size_t theta_c = 0;
  std::size_t P = 0;
  std::uint64_t seed = 0;  // master seed of the row/column families

  // θ uniform on {1..P}², drawn from theta_seed independently of the families.
  static PerturbationSpec canonical(std::size_t P, std::uint64_t theta_seed,
                                    std::uint64_t family_seed) {
    if (P == 0) throw usage_error("perturbation parameter P must be positive");
    SeededStream rng(theta_seed);
    PerturbationSpec spec;
    spec.theta_r = 1 + static_cast<std::size_t>(rng.below(P));
    spec.theta_c = 1 + static_cast<std::size_t>(rng.below(P));
    spec.P = P;
    spec.seed = family_seed;
    return spec;
  }
};

// A[θ] with Θ_r[θ_r,n|n] and Θ_c[m|m,θ_c].
template <class Field>
Matrix<Field> perturb(const Matrix<Field>& a, std::size_t theta_r, std::size_t theta_c,
                      const PerturbationFamilies& fams) {
  const std::size_t m = a.rows(), n = a.cols();
  if ((theta_r > 0 && n == 0) || (theta_c > 0 && m == 0)) {
    throw usage_error("cannot perturb an empty dimension");
  }
  const Field& f = a.field();
  return block(a, theta_c_matrix(f, fams.cols, m, m, theta_c),
               theta_r_matrix(f, fams.rows, theta_r, n, n), zero_matrix(f, theta_r, theta_c));
}

template <class Field>
Matrix<Field> canonical_perturb(const Matrix<Field>& a, const PerturbationSpec& spec) {
  return perturb(a, spec.theta_r, spec.theta_c, PerturbationFamilies(spec.seed));
}

}  // namespace frozenrank
