#include <gtest/gtest.h>

#include <random>

#include "annex/errors.hpp"
#include "annex/gfield.hpp"
#include "oracles.hpp"

using namespace annex;

namespace {

FieldElement fe(std::uint16_t v) { return FieldElement(v); }

Matrix random_matrix(const GaloisField& f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = fe(static_cast<std::uint16_t>(rng() % f.size()));
  return m;
}

}  // namespace

TEST(GaloisField, AddIsXor) {
  GaloisField f;
  EXPECT_EQ(f.add(fe(0x53), fe(0x53)), fe(0));
  EXPECT_EQ(f.add(fe(0x7A), fe(0)), fe(0x7A));
  EXPECT_EQ(f.add(fe(1), fe(2)), fe(3));
}

TEST(GaloisField, KnownProductAndInverse) {
  GaloisField f(8, 0x11B);
  EXPECT_EQ(f.mul(fe(0x53), fe(0xCA)), fe(0x01));
  EXPECT_EQ(f.inv(fe(0x53)), fe(0xCA));
  EXPECT_EQ(f.inv(fe(1)), fe(1));
  EXPECT_THROW(f.inv(fe(0)), DomainError);
}

// Table multiplication against shift-and-add over every pair.
TEST(GaloisField, TablesMatchSchoolbookGF256) {
  GaloisField f(8, 0x11B);
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t b = 0; b < 256; ++b) {
      std::uint32_t r = 0, x = a;
      for (int i = 0; i < 8; ++i) {
        if (b >> i & 1) r ^= x;
        x <<= 1;
        if (x & 0x100) x ^= 0x11B;
      }
      ASSERT_EQ(f.mul(fe(a), fe(b)).value, r) << a << "*" << b;
    }
  }
}

TEST(GaloisField, InverseByExhaustiveSearch) {
  GaloisField f;
  for (std::uint32_t a = 1; a < 256; ++a) {
    std::uint32_t found = 0;
    for (std::uint32_t b = 1; b < 256; ++b) {
      if (clmul_mod(a, b, 8, 0x11B) == 1) found = b;
    }
    EXPECT_EQ(f.inv(fe(a)).value, found);
  }
}

TEST(GaloisField, AxiomsExhaustiveGF16) {
  GaloisField f(4);
  const std::uint16_t q = 16;
  for (std::uint16_t a = 0; a < q; ++a) {
    EXPECT_EQ(f.mul(fe(a), fe(1)), fe(a));
    EXPECT_EQ(f.mul(fe(a), fe(0)), fe(0));
    if (a) EXPECT_EQ(f.mul(fe(a), f.inv(fe(a))), fe(1));
    for (std::uint16_t b = 0; b < q; ++b) {
      EXPECT_EQ(f.mul(fe(a), fe(b)), f.mul(fe(b), fe(a)));
      EXPECT_EQ(f.add(fe(a), fe(b)), f.add(fe(b), fe(a)));
      for (std::uint16_t c = 0; c < q; ++c) {
        EXPECT_EQ(f.mul(f.mul(fe(a), fe(b)), fe(c)), f.mul(fe(a), f.mul(fe(b), fe(c))));
        EXPECT_EQ(f.add(f.add(fe(a), fe(b)), fe(c)), f.add(fe(a), f.add(fe(b), fe(c))));
        EXPECT_EQ(f.mul(fe(a), f.add(fe(b), fe(c))),
                  f.add(f.mul(fe(a), fe(b)), f.mul(fe(a), fe(c))));
      }
    }
  }
}

TEST(GaloisField, AxiomsRandomGF256) {
  GaloisField f;
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20000; ++t) {
    const auto a = fe(rng() & 0xFF), b = fe(rng() & 0xFF), c = fe(rng() & 0xFF);
    ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    ASSERT_EQ(f.mul(a, b), f.mul(b, a));
    if (b.value) ASSERT_EQ(f.mul(f.div(a, b), b), a);
  }
}

TEST(GaloisField, MultiplicativeGroupIsCyclic) {
  for (unsigned m = 1; m <= 12; ++m) {
    GaloisField f(m);
    const auto g = f.primitive_element();
    std::vector<bool> seen(f.size(), false);
    FieldElement x(1);
    for (std::uint32_t i = 0; i + 1 < f.size(); ++i) {
      ASSERT_FALSE(seen[x.value]) << "m=" << m;
      seen[x.value] = true;
      x = f.mul(x, g);
    }
    EXPECT_EQ(x, fe(1));
    EXPECT_EQ(f.pow(g, f.size() - 1), fe(1));
  }
}

TEST(GaloisField, DefaultPolynomialsIrreducible) {
  for (unsigned m = 1; m <= kMaxFieldDegree; ++m) {
    EXPECT_TRUE(is_irreducible(default_polynomial(m), m)) << m;
  }
  EXPECT_FALSE(is_irreducible(0x105, 8));  // (x^4+x+1)^2
  EXPECT_THROW(GaloisField(8, 0x105), ParameterError);
}

TEST(GaloisField, LargestFieldWorks) {
  auto f = GaloisField::with_size(65536);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const std::uint32_t a = 1 + rng() % 65535, b = rng() % 65536;
    EXPECT_EQ(f.mul(fe(a), fe(b)).value, clmul_mod(a, b, 16, f.polynomial()));
  }
  EXPECT_THROW(GaloisField::with_size(100), ParameterError);
  EXPECT_THROW(f.element(65536), DomainError);
}

TEST(GaloisField, RowKernels) {
  GaloisField f;
  std::vector<FieldElement> a{fe(1), fe(2), fe(3)}, b{fe(4), fe(5), fe(6)};
  auto dst = a;
  f.axpy(dst, fe(7), b);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(dst[i], f.add(a[i], f.mul(fe(7), b[i])));
  FieldElement d{};
  for (int i = 0; i < 3; ++i) d = f.add(d, f.mul(a[i], b[i]));
  EXPECT_EQ(f.dot(a, b), d);
}

TEST(Matrix, RankTrivial) {
  GaloisField f;
  EXPECT_EQ(rank(f, Matrix::identity(7)), 7u);
  EXPECT_EQ(rank(f, Matrix(5, 9)), 0u);
}

TEST(Matrix, RankMatchesMinorOracle) {
  GaloisField f;
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    auto m = random_matrix(f, r, c, rng);
    // force some deficiency: copy or combine rows
    if (r > 2 && (t % 3 == 0)) {
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = f.add(m(0, j), f.mul(fe(9), m(1, j)));
    }
    if (t % 7 == 0) {
      for (std::size_t j = 0; j < c; ++j) m(0, j) = fe(0);
    }
    EXPECT_EQ(rank(f, m), oracle::minor_rank(f, m));
  }
  // small field: deficiency is common
  GaloisField f2(1);
  for (int t = 0; t < 300; ++t) {
    auto m = random_matrix(f2, 5, 5, rng);
    EXPECT_EQ(rank(f2, m), oracle::minor_rank(f2, m));
  }
}

TEST(Matrix, RankOfTenByTenSubmatrices) {
  GaloisField f;
  std::mt19937_64 rng(13);
  auto big = random_matrix(f, 10, 10, rng);
  for (std::size_t j = 0; j < 10; ++j) big(9, j) = f.add(big(0, j), big(5, j));
  EXPECT_EQ(rank(f, big), 9u);
  for (std::size_t r0 = 0; r0 <= 5; ++r0) {
    for (std::size_t c0 = 0; c0 <= 5; c0 += 5) {
      Matrix sub(5, 5);
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) sub(i, j) = big(r0 + i, c0 + j);
      EXPECT_EQ(rank(f, sub), oracle::minor_rank(f, sub));
    }
  }
}

TEST(Matrix, RankInvariantUnderRowOperations) {
  GaloisField f(4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    auto m = random_matrix(f, 10, 10, rng);
    if (t % 2) {
      for (std::size_t j = 0; j < 10; ++j) m(3, j) = f.add(m(1, j), m(2, j));
    }
    const auto r0 = rank(f, m);
    const std::size_t a = rng() % 10, b = (a + 1 + rng() % 9) % 10;
    for (std::size_t j = 0; j < 10; ++j) std::swap(m(a, j), m(b, j));
    EXPECT_EQ(rank(f, m), r0);
    const auto c = fe(1 + rng() % 15);
    f.scale(m.row(a), c);
    EXPECT_EQ(rank(f, m), r0);
    std::vector<FieldElement> src(m.row(b).begin(), m.row(b).end());
    f.axpy(m.row(a), fe(rng() % 16), src);
    EXPECT_EQ(rank(f, m), r0);
  }
}

TEST(Matrix, SolveIdentityAndDiagonal) {
  GaloisField f;
  std::mt19937_64 rng(1);
  auto rhs = random_matrix(f, 4, 3, rng);
  EXPECT_EQ(solve(f, Matrix::identity(4), rhs), rhs);
  Matrix d(4, 4);
  for (std::size_t i = 0; i < 4; ++i) d(i, i) = fe(static_cast<std::uint16_t>(2 + i));
  const auto x = solve(f, d, rhs);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(x(i, j), f.mul(f.inv(d(i, i)), rhs(i, j)));
}

TEST(Matrix, SolveResidual) {
  GaloisField f;
  std::mt19937_64 rng(2);
  int solved = 0;
  for (int t = 0; t < 100; ++t) {
    auto a = random_matrix(f, 8, 8, rng);
    auto rhs = random_matrix(f, 8, 2, rng);
    if (rank(f, a) < 8) {
      EXPECT_THROW(solve(f, a, rhs), RankDeficiencyError);
      continue;
    }
    ++solved;
    EXPECT_EQ(multiply(f, a, solve(f, a, rhs)), rhs);
  }
  EXPECT_GT(solved, 90);
  Matrix singular(3, 3);
  EXPECT_THROW(solve(f, singular, Matrix(3, 1)), RankDeficiencyError);
  EXPECT_THROW(solve(f, Matrix::identity(3), Matrix(2, 1)), ParameterError);
}
