#include "pcl/galois.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "pcl/combinatorics.hpp"
#include "pcl/errors.hpp"

namespace pcl {
namespace {

// Shift-and-add multiply modulo the field polynomial, bit by bit.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, int bits, std::uint32_t poly) {
  std::uint32_t r = 0;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << bits)) a ^= poly;
  }
  return r;
}

// Leibniz expansion; characteristic 2, so no signs.
Symbol slow_det(const std::vector<std::vector<Symbol>>& m, const Field& f) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Symbol det = 0;
  do {
    Symbol term = 1;
    for (std::size_t i = 0; i < n; ++i)
      term = static_cast<Symbol>(slow_mul(term, m[i][perm[i]], f.bits(), f.bits() == 8 ? 0x11D : 0x1100B));
    det ^= term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

TEST(Field, MultiplicationMatchesShiftAndAdd256) {
  const Field& f = Field::gf256();
  for (std::uint32_t a = 0; a < 256; ++a)
    for (std::uint32_t b = 0; b < 256; ++b)
      ASSERT_EQ(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)), slow_mul(a, b, 8, 0x11D)) << a << "*" << b;
}

TEST(Field, MultiplicationMatchesShiftAndAdd65536) {
  const Field& f = Field::gf65536();
  Rng rng(3);
  for (int i = 0; i < 200000; ++i) {
    const auto a = static_cast<std::uint32_t>(rng.uniform(65536));
    const auto b = static_cast<std::uint32_t>(rng.uniform(65536));
    ASSERT_EQ(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)), slow_mul(a, b, 16, 0x1100B));
  }
}

TEST(Field, InverseAndDivision) {
  for (const Field* f : {&Field::gf256(), &Field::gf65536()}) {
    for (std::uint32_t a = 1; a < f->order(); a += (f->bits() == 8 ? 1 : 7)) {
      const auto s = static_cast<Symbol>(a);
      ASSERT_EQ(f->mul(s, f->inv(s)), 1);
      ASSERT_EQ(f->div(s, s), 1);
    }
    EXPECT_THROW(f->inv(0), std::domain_error);
  }
}

TEST(Field, AdditionIsXor) {
  const Field& f = Field::gf256();
  EXPECT_EQ(f.add(0x53, 0xCA), 0x53 ^ 0xCA);
  EXPECT_EQ(f.sub(0x53, 0x53), 0);
}

TEST(Field, MulAddAccumulates) {
  const Field& f = Field::gf256();
  std::vector<Symbol> x{1, 2, 3, 0, 255};
  std::vector<Symbol> y{9, 9, 9, 9, 9};
  auto expect = y;
  for (std::size_t i = 0; i < x.size(); ++i) expect[i] ^= f.mul(0x1D, x[i]);
  f.mul_add(0x1D, x, y);
  EXPECT_EQ(y, expect);
  f.mul_add(0, x, y);
  EXPECT_EQ(y, expect);
}

TEST(Field, SmallestField) {
  EXPECT_EQ(smallest_field_for(10).bits(), 8);
  EXPECT_EQ(smallest_field_for(256).bits(), 8);
  EXPECT_EQ(smallest_field_for(257).bits(), 16);
  EXPECT_EQ(smallest_field_for(65536).bits(), 16);
  EXPECT_THROW(smallest_field_for(65537), FieldTooSmallError);
}

TEST(Matrix, InvertRoundTrip) {
  const Field& f = Field::gf256();
  Rng rng(11);
  int invertible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m.at(r, c) = static_cast<Symbol>(rng.uniform(256));
    std::vector<std::vector<Symbol>> rows(4, std::vector<Symbol>(4));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) rows[r][c] = m.at(r, c);
    const bool singular = slow_det(rows, f) == 0;
    const auto inv = invert(m, f);
    ASSERT_EQ(inv.has_value(), !singular);
    if (singular)
      EXPECT_LT(rank(m, f), 4u);
    else
      EXPECT_EQ(rank(m, f), 4u);
    if (!inv) continue;
    ++invertible;
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        Symbol s = 0;
        for (std::size_t k = 0; k < 4; ++k) s ^= f.mul(m.at(r, k), inv->at(k, c));
        ASSERT_EQ(s, r == c ? 1 : 0);
      }
    }
  }
  EXPECT_GT(invertible, 150);
}

TEST(Matrix, RankOfSingular) {
  const Field& f = Field::gf256();
  Matrix m(3, 3);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 2;
  m.at(1, 1) = f.mul(2, 2);
  m.at(2, 2) = 5;
  EXPECT_EQ(rank(m, f), 2u);
  EXPECT_FALSE(invert(m, f).has_value());
}

TEST(Cauchy, EverySquareSubmatrixIsInvertible) {
  const Field& f = Field::gf256();
  for (std::size_t a : {1u, 2u, 3u}) {
    const std::size_t b = 6;
    const Matrix c = make_coeff_matrix(a, b, f);
    ASSERT_EQ(c.rows(), a);
    ASSERT_EQ(c.cols(), b);
    // All a x a column selections.
    const auto subsets = binom(b, a);
    for (std::uint64_t j = 1; j <= subsets; ++j) {
      const auto cols = ksubset_unrank(static_cast<int>(b), static_cast<int>(a), j);
      std::vector<std::vector<Symbol>> sub(a, std::vector<Symbol>(a));
      for (std::size_t r = 0; r < a; ++r)
        for (std::size_t k = 0; k < a; ++k) sub[r][k] = c.at(r, static_cast<std::size_t>(cols[k] - 1));
      EXPECT_NE(slow_det(sub, f), 0) << "a=" << a << " subset " << j;
    }
  }
}

TEST(Cauchy, ShapeAndFieldErrors) {
  EXPECT_THROW(make_coeff_matrix(3, 2, Field::gf256()), std::invalid_argument);
  EXPECT_THROW(make_coeff_matrix(100, 200, Field::gf256()), FieldTooSmallError);
  EXPECT_NO_THROW(make_coeff_matrix(100, 200, Field::gf65536()));
}

std::vector<std::vector<Symbol>> random_blocks(std::size_t k, std::size_t len, Rng& rng, const Field& f) {
  std::vector<std::vector<Symbol>> d(k, std::vector<Symbol>(len));
  for (auto& b : d)
    for (auto& s : b) s = static_cast<Symbol>(rng.uniform(f.order()));
  return d;
}

TEST(MdsCode, SystematicAndEveryKSubsetDecodes) {
  const Field& f = Field::gf256();
  Rng rng(5);
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{8, 7}, {8, 4}, {6, 1}, {5, 5}}) {
    const MdsCode code(n, k, f);
    const auto data = random_blocks(k, 3, rng, f);
    const auto coded = code.encode_blocks(data);
    ASSERT_EQ(coded.size(), n);
    for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(coded[i], data[i]);
    for (std::uint64_t j = 1; j <= binom(n, k); ++j) {
      std::vector<std::size_t> pos;
      std::vector<std::vector<Symbol>> blocks;
      for (int p : ksubset_unrank(static_cast<int>(n), static_cast<int>(k), j)) {
        pos.push_back(static_cast<std::size_t>(p - 1));
        blocks.push_back(coded[static_cast<std::size_t>(p - 1)]);
      }
      ASSERT_EQ(code.decode_blocks(pos, blocks), data) << "n=" << n << " k=" << k << " subset " << j;
    }
  }
}

TEST(MdsCode, StripeDecodeAndErrors) {
  const Field& f = Field::gf65536();
  const MdsCode code(6, 3, f);
  const std::vector<Symbol> stripe{7, 1000, 65535};
  const auto coded = code.encode(stripe);
  for (std::size_t p = 0; p < 6; ++p) {
    const auto row = code.generator_row(p);
    Symbol s = 0;
    for (std::size_t i = 0; i < 3; ++i) s ^= f.mul(row[i], stripe[i]);
    EXPECT_EQ(coded[p], s);
  }
  std::vector<std::pair<std::size_t, Symbol>> got{{5, coded[5]}, {1, coded[1]}, {3, coded[3]}, {0, coded[0]}};
  EXPECT_EQ(code.decode(got), stripe);
  std::vector<std::pair<std::size_t, Symbol>> few{{5, coded[5]}, {1, coded[1]}};
  EXPECT_THROW(code.decode(few), UnrecoverableError);
  std::vector<std::pair<std::size_t, Symbol>> repeated{{1, coded[1]}, {1, coded[1]}, {2, coded[2]}};
  EXPECT_THROW(code.decode(repeated), std::invalid_argument);
  std::vector<std::pair<std::size_t, Symbol>> outside{{1, coded[1]}, {9, 0}, {2, coded[2]}};
  EXPECT_THROW(code.decode(outside), std::invalid_argument);
}

}  // namespace
}  // namespace pcl
