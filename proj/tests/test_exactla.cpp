#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "frozenrank/exactla.hpp"
#include "frozenrank/oracle.hpp"
#include "test_support.hpp"

namespace fr = frozenrank;
using fr::testing::random_matrix;
using fr::testing::random_symmetric;
using fr::testing::random_vector;

namespace {

// Path on three vertices.
template <class Field>
fr::Matrix<Field> path3(const Field& f) {
  return fr::Matrix<Field>::from_integers(f, {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
}

template <class Field>
fr::Matrix<Field> edge(const Field& f, std::int64_t w) {
  return fr::Matrix<Field>::from_integers(f, {{0, w}, {w, 0}});
}

const fr::Gf2 gf2;
const fr::PrimeField f3(3);
const fr::PrimeField f5(5);

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(fr::rank(fr::Matrix<fr::Gf2>(gf2, 0, 0)), 0u);
  EXPECT_EQ(fr::rank(path3(gf2)), 2u);
  EXPECT_EQ(fr::oracle::rank(path3(gf2)), 2u);
  EXPECT_EQ(fr::rank(edge(gf2, 1)), 2u);
  for (std::int64_t w : {1, 2, 4}) EXPECT_EQ(fr::rank(edge(f5, w)), 2u);
  EXPECT_EQ(fr::rank(edge(fr::RationalField{}, -3)), 2u);
  EXPECT_EQ(fr::nullity(path3(f3)), 1u);
}

TEST(Rank, InputIsNotModified) {
  const auto a = path3(f5);
  const auto copy = a;
  (void)fr::rank(a);
  (void)fr::kernel_basis(a);
  EXPECT_EQ(a, copy);
}

TEST(Rank, MatchesRowSpaceEnumeration) {
  fr::SeededStream rng(7);
  int checked = 0;
  for (const std::uint32_t p : {2u, 3u, 5u}) {
    const fr::PrimeField f(p);
    for (int k = 0; k < 120; ++k) {
      const std::size_t m = rng.below(7), n = rng.below(7);
      const auto a = random_matrix(f, m, n, 0.2 + 0.6 * rng.uniform(), rng);
      ASSERT_EQ(fr::rank(a), fr::oracle::rank(a));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 360);
}

TEST(Rank, BitPackedMatchesDenseF2) {
  fr::SeededStream rng(11);
  const fr::PrimeField dense2(2);
  for (int k = 0; k < 50; ++k) {
    const std::size_t m = 1 + rng.below(150), n = 1 + rng.below(150);
    const auto d = random_matrix(dense2, m, n, 0.05 + 0.3 * rng.uniform(), rng);
    fr::Matrix<fr::Gf2> b(gf2, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) b.set(i, j, static_cast<std::uint8_t>(d.at(i, j)));
    ASSERT_EQ(fr::rank(b), fr::rank(d));
    const auto fb = fr::frozen_set(b).frozen;
    const auto fd = fr::frozen_set(d).frozen;
    ASSERT_EQ(fb, fd);
  }
}

TEST(Rank, RationalsAgreeWithLargePrime) {
  fr::SeededStream rng(13);
  const fr::RationalField q;
  const fr::PrimeField big(2147483647);
  for (int k = 0; k < 30; ++k) {
    const std::size_t m = 1 + rng.below(10), n = 1 + rng.below(10);
    fr::Matrix<fr::RationalField> a(q, m, n);
    fr::Matrix<fr::PrimeField> b(big, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.uniform() < 0.4) {
          const std::int64_t v = static_cast<std::int64_t>(rng.below(7)) - 3;
          a.set(i, j, fr::Rational(v));
          b.set(i, j, big.from_integer(v));
        }
    // integer matrices with tiny entries: a prime this large never divides a minor
    ASSERT_EQ(fr::rank(a), fr::rank(b));
  }
}

TEST(Rank, RationalCapIsEnforced) {
  const fr::Matrix<fr::RationalField> a(fr::RationalField{}, 65, 3);
  EXPECT_THROW((void)fr::rank(a), fr::resource_error);
  const fr::Matrix<fr::RationalField> b(fr::RationalField{100}, 65, 3);
  EXPECT_EQ(fr::rank(b), 0u);
}

TEST(KernelBasis, Examples) {
  EXPECT_TRUE(fr::kernel_basis(fr::identity_matrix(f3, 3)).empty());
  const auto k = fr::kernel_basis(path3(gf2));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (fr::Vector<fr::Gf2>{1, 0, 1}));
  const auto z = fr::kernel_basis(fr::zero_matrix(f5, 2, 2));
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(fr::rank(fr::Matrix<fr::PrimeField>::from_integers(
                f5, {{z[0][0], z[0][1]}, {z[1][0], z[1][1]}})),
            2u);
}

TEST(KernelBasis, VectorsAreIndependentAndAnnihilated) {
  fr::SeededStream rng(3);
  for (int k = 0; k < 100; ++k) {
    const std::size_t m = rng.below(9), n = 1 + rng.below(9);
    const auto a = random_matrix(f5, m, n, 0.4, rng);
    const auto basis = fr::kernel_basis(a);
    ASSERT_EQ(basis.size(), n - fr::rank(a));
    fr::Matrix<fr::PrimeField> stacked(f5, basis.size(), n);
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (const auto& x : fr::multiply(a, basis[r])) ASSERT_EQ(x, 0u);
      for (std::size_t j = 0; j < n; ++j) stacked.set(r, j, basis[r][j]);
    }
    ASSERT_EQ(fr::rank(stacked), basis.size());
  }
}

TEST(Remove, Examples) {
  const auto p = path3(f3);
  EXPECT_EQ(fr::remove(p, {}, {}), p);
  const auto r = fr::remove(edge(f3, 1), fr::IndexSet{0}, fr::IndexSet{0});
  EXPECT_EQ(r, fr::zero_matrix(f3, 1, 1));
  const auto s = fr::remove_row(p, 1);
  EXPECT_EQ(s, fr::Matrix<fr::PrimeField>::from_integers(f3, {{0, 1, 0}, {0, 1, 0}}));
  EXPECT_THROW((void)fr::remove(p, fr::IndexSet{3}, {}), fr::usage_error);
  EXPECT_THROW((void)fr::remove(p, {}, fr::IndexSet{5}), fr::usage_error);
}

TEST(IndexSetType, SortsAndRejectsDuplicates) {
  EXPECT_EQ(fr::IndexSet({3, 1, 2}).items(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(fr::IndexSet({1, 1}), fr::usage_error);
}

TEST(FrozenSet, Examples) {
  for (const auto method : {fr::FrozenMethod::kernel_support, fr::FrozenMethod::rank_drop}) {
    EXPECT_EQ(fr::frozen_set(edge(f5, 3), method).frozen, fr::IndexSet({0, 1}));
    EXPECT_EQ(fr::frozen_set(path3(gf2), method).frozen, fr::IndexSet{1});
    EXPECT_TRUE(fr::frozen_set(fr::zero_matrix(f3, 3, 3), method).frozen.empty());
  }
}

TEST(FrozenSet, MethodsAgreeWithEachOtherAndTheKernelOracle) {
  fr::SeededStream rng(21);
  for (int k = 0; k < 150; ++k) {
    const std::size_t m = rng.below(7), n = 1 + rng.below(6);
    const auto a = random_matrix(f3, m, n, 0.35, rng);
    const auto ks = fr::frozen_set(a, fr::FrozenMethod::kernel_support).frozen;
    ASSERT_EQ(ks, fr::frozen_set(a, fr::FrozenMethod::rank_drop).frozen);
    ASSERT_EQ(ks.items(), fr::oracle::frozen(a));
  }
}

TEST(Relation, Examples) {
  EXPECT_TRUE(fr::is_relation(edge(gf2, 1), fr::IndexSet{0}));
  EXPECT_FALSE(fr::is_relation(fr::zero_matrix(f3, 2, 3), fr::IndexSet({0, 2})));
  EXPECT_TRUE(fr::is_relation(path3(gf2), fr::IndexSet({0, 2})));
  EXPECT_THROW((void)fr::is_relation(path3(gf2), fr::IndexSet{}), fr::usage_error);
}

TEST(Relation, RankTestMatchesSupportEnumeration) {
  fr::SeededStream rng(5);
  for (int k = 0; k < 150; ++k) {
    const std::size_t m = rng.below(6), n = 1 + rng.below(6);
    const auto a = random_matrix(f3, m, n, 0.35, rng);
    const auto supports = fr::oracle::row_space_supports(a);
    for (std::uint64_t set = 1; set < (std::uint64_t{1} << n); ++set) {
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < n; ++j)
        if (set >> j & 1) idx.push_back(j);
      ASSERT_EQ(fr::is_relation(a, fr::IndexSet(idx)), fr::oracle::is_relation(supports, set));
    }
  }
}

TEST(ProperRelations, Examples) {
  EXPECT_TRUE(fr::proper_relations(fr::zero_matrix(f3, 4, 4), 2).empty());
  EXPECT_TRUE(fr::proper_relations(edge(gf2, 1), 2).empty());
  const auto p = fr::proper_relations(path3(gf2), 2);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], fr::IndexSet({0, 2}));
}

TEST(ProperRelations, MatchRowSpaceOracle) {
  fr::SeededStream rng(8);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 2 + rng.below(6);
    const auto a = random_symmetric(gf2, n, 0.3, rng, true);
    for (std::size_t ell = 2; ell <= 3; ++ell) {
      std::vector<std::uint64_t> masks;
      for (const auto& rel : fr::proper_relations(a, ell)) {
        std::uint64_t mask = 0;
        for (const auto i : rel) mask |= std::uint64_t{1} << i;
        masks.push_back(mask);
      }
      std::sort(masks.begin(), masks.end());
      ASSERT_EQ(masks, fr::oracle::proper_relations(a, ell));
    }
  }
}

TEST(ProperRelations, CapIsEnforced) {
  EXPECT_THROW((void)fr::proper_relations(fr::zero_matrix(gf2, 25, 25), 2), fr::resource_error);
  EXPECT_NO_THROW((void)fr::proper_relations(fr::zero_matrix(gf2, 25, 25), 2, {.max_cols = 30}));
}

TEST(DeltaEllFree, Examples) {
  EXPECT_TRUE(fr::is_delta_ell_free(fr::zero_matrix(f3, 3, 3), 0.1, 2));
  EXPECT_FALSE(fr::is_delta_ell_free(path3(gf2), 0.0, 2));
  EXPECT_TRUE(fr::is_delta_ell_free(path3(gf2), 1.0, 2));
}

TEST(RowInSpan, Examples) {
  EXPECT_TRUE(fr::row_in_span(path3(f3), fr::Vector<fr::PrimeField>(3, 0)));
  EXPECT_TRUE(fr::row_in_span(edge(gf2, 1), fr::Vector<fr::Gf2>{1, 0}));
  EXPECT_TRUE(fr::row_in_span(path3(gf2), fr::Vector<fr::Gf2>{1, 1, 1}));
  EXPECT_TRUE(fr::oracle::in_row_space(path3(gf2), fr::Vector<fr::Gf2>{1, 1, 1}));
  EXPECT_FALSE(fr::row_in_span(path3(gf2), fr::Vector<fr::Gf2>{1, 0, 0}));
  EXPECT_THROW((void)fr::row_in_span(path3(gf2), fr::Vector<fr::Gf2>{1, 0}), fr::usage_error);
}

TEST(RowInSpan, FrozenAndProperRelationImplications) {
  fr::SeededStream rng(31);
  for (int k = 0; k < 200; ++k) {
    const std::size_t m = rng.below(6), n = 2 + rng.below(5);
    const auto a = random_matrix(f3, m, n, 0.35, rng);
    const auto b = random_vector(f3, n, 0.4, rng);
    const auto frozen = fr::frozen_set(a).frozen;
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n; ++j)
      if (b[j] != 0) support.push_back(j);
    const bool in_frozen =
        std::all_of(support.begin(), support.end(), [&](auto j) { return frozen.contains(j); });
    const bool in_span = fr::row_in_span(a, b);
    ASSERT_EQ(in_span, fr::oracle::in_row_space(a, b));
    ASSERT_TRUE(!in_frozen || in_span);
    if (in_span && !support.empty() && !in_frozen) {
      const auto rel = fr::proper_relations(a, support.size());
      ASSERT_NE(std::find(rel.begin(), rel.end(), fr::IndexSet(support)), rel.end());
    }
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(fr::classify_variable(edge(f5, 2), 0), fr::VariableType::Y);
  EXPECT_EQ(fr::classify_variable(fr::zero_matrix(f3, 1, 1), 0), fr::VariableType::Z);
  EXPECT_EQ(fr::classify_variable(path3(gf2), 1), fr::VariableType::Y);
  EXPECT_EQ(fr::classify_variable(path3(gf2), 0), fr::VariableType::Z);
  EXPECT_THROW((void)fr::classify_variable(path3(gf2), 3), fr::usage_error);
  // non-square: index range is [0, min(m, n))
  EXPECT_THROW((void)fr::classify_variable(fr::zero_matrix(f3, 2, 4), 2), fr::usage_error);
}

TEST(Classify, AllFiveTypesOccur) {
  // X: A = [1], deleting its only row unfreezes column 0.
  EXPECT_EQ(fr::classify_variable(fr::Matrix<fr::Gf2>::from_integers(gf2, {{1}}), 0),
            fr::VariableType::X);
  // V: row 1 freezes column 0 by itself, and column 0 of A^T is free.
  const auto v = fr::Matrix<fr::Gf2>::from_integers(gf2, {{0, 0}, {1, 0}});
  EXPECT_EQ(fr::classify_variable(v, 0), fr::VariableType::V);
  EXPECT_EQ(fr::classify_variable(fr::transpose(v), 0), fr::VariableType::U);
}

TEST(Census, Examples) {
  const auto z = fr::type_census(fr::zero_matrix(f3, 4, 4));
  EXPECT_EQ(z.count_z, 4u);
  EXPECT_DOUBLE_EQ(z.z(), 1.0);
  const auto k = fr::type_census(edge(gf2, 1));
  EXPECT_EQ(k.count_y, 2u);
  const auto p = fr::type_census(path3(gf2));
  EXPECT_EQ(p.count_x, 0u);
  EXPECT_EQ(p.count_y, 1u);
  EXPECT_EQ(p.count_z, 2u);
  EXPECT_EQ(p.count_u + p.count_v, 0u);
  EXPECT_DOUBLE_EQ(p.y(), 1.0 / 3.0);
  EXPECT_TRUE(p.identities_hold());
  EXPECT_THROW((void)fr::type_census(fr::zero_matrix(f3, 0, 0)), fr::usage_error);
}

TEST(Census, MatchesPerVariableClassification) {
  fr::SeededStream rng(44);
  for (int k = 0; k < 80; ++k) {
    const std::size_t m = 1 + rng.below(8), n = 1 + rng.below(8);
    const auto a = random_matrix(f3, m, n, 0.3, rng);
    const auto census = fr::type_census(a);
    fr::TypeProfile direct;
    direct.n = std::min(m, n);
    const auto fa = fr::frozen_set(a).frozen;
    const auto ft = fr::frozen_set(fr::transpose(a)).frozen;
    for (std::size_t i = 0; i < direct.n; ++i) {
      direct.add(fr::classify_variable(a, i));
      direct.frozen += fa.contains(i);
      direct.frozen_transposed += ft.contains(i);
    }
    ASSERT_EQ(census, direct);
    ASSERT_TRUE(census.identities_hold());
  }
}

TEST(SymmetricRemoval, Examples) {
  EXPECT_EQ(fr::symmetric_removal_rank_drop(edge(f3, 1), 0), 2);
  EXPECT_EQ(fr::symmetric_removal_rank_drop(path3(gf2), 0), 0);
  EXPECT_EQ(fr::symmetric_removal_rank_drop(path3(gf2), 1), 2);
  EXPECT_THROW((void)fr::symmetric_removal_rank_drop(fr::zero_matrix(f3, 2, 3), 0), fr::usage_error);
}

TEST(SymmetricRemoval, TrichotomyOnRandomMatrices) {
  fr::SeededStream rng(55);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 1 + rng.below(9);
    const auto a = random_symmetric(f5, n, 0.3, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = fr::classify_variable(a, i);
      ASSERT_EQ(fr::symmetric_removal_rank_drop(a, i),
                1 + (t == fr::VariableType::Y) - (t == fr::VariableType::Z));
    }
  }
}

TEST(FrozenMonotonicity, ColumnAdditionAndRowAddition) {
  fr::SeededStream rng(66);
  for (int k = 0; k < 100; ++k) {
    const std::size_t m = 1 + rng.below(6), n = 1 + rng.below(6);
    const auto a = random_matrix(f3, m, n, 0.35, rng);
    const auto fa = fr::frozen_set(a).frozen;
    const auto with_col = fr::frozen_set(fr::append_column(a, random_vector(f3, m, 0.5, rng))).frozen;
    const auto with_row = fr::frozen_set(fr::append_row(a, random_vector(f3, n, 0.5, rng))).frozen;
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_TRUE(!with_col.contains(i) || fa.contains(i)) << i;
      ASSERT_TRUE(!fa.contains(i) || with_row.contains(i)) << i;
    }
  }
}

TEST(FrozenMonotonicity, RowRemovalEqualsUnitColumn) {
  fr::SeededStream rng(77);
  for (int k = 0; k < 100; ++k) {
    const std::size_t m = 1 + rng.below(6), n = 1 + rng.below(6);
    const auto a = random_matrix(f5, m, n, 0.35, rng);
    for (std::size_t j = 0; j < m; ++j) {
      const auto removed = fr::frozen_set(fr::remove_row(a, j)).frozen;
      const auto augmented =
          fr::frozen_set(fr::append_column(a, fr::unit_vector<fr::PrimeField>(m, j))).frozen;
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(removed.contains(i), augmented.contains(i));
    }
  }
}

TEST(FrailFreezing, IsTransposeSymmetric) {
  fr::SeededStream rng(88);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng.below(7);
    const auto a = random_matrix(gf2, n, n, 0.3, rng);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(fr::classify_variable(a, i) == fr::VariableType::X,
                fr::classify_variable(fr::transpose(a), i) == fr::VariableType::X);
    }
  }
}

TEST(Permutation, PreservesRankFrozenSetAndCensus) {
  fr::SeededStream rng(99);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 2 + rng.below(8);
    const auto a = random_symmetric(f3, n, 0.3, rng, true);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const auto b = fr::permute_symmetric(a, perm);
    ASSERT_EQ(fr::rank(a), fr::rank(b));
    const auto fa = fr::frozen_set(a).frozen;
    const auto fb = fr::frozen_set(b).frozen;
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(fb.contains(i), fa.contains(perm[i]));
    ASSERT_EQ(fr::type_census(a), fr::type_census(b));
  }
}
