#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ribbonlab/ribbonlab.hpp"
#include "support.hpp"

using namespace ribbonlab;

namespace {

LaurentPolynomial poly(std::vector<int> coefficients, int lowest = 0) {
  std::vector<BigInt> c(coefficients.begin(), coefficients.end());
  return LaurentPolynomial::from_coefficients(c, lowest);
}

/// Leibniz determinant, used when the matrix without its last column is square.
LaurentPolynomial leibniz_determinant(const std::vector<std::vector<LaurentPolynomial>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  LaurentPolynomial total;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    LaurentPolynomial term(1);
    for (std::size_t i = 0; i < n; ++i) term = term * m[i][perm[i]];
    if (inversions % 2) total -= term;
    else total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Free derivative straight from the product rule, as an independent
/// reference for the library's Fox rows.
LaurentPolynomial fox_by_product_rule(const FreeWord& w, int generator) {
  LaurentPolynomial out;
  int prefix_degree = 0;
  for (const auto& l : w) {
    if (l.generator == generator) {
      if (l.exponent > 0) out += LaurentPolynomial::monomial(1, prefix_degree);
      else out -= LaurentPolynomial::monomial(1, prefix_degree - 1);
    }
    prefix_degree += l.exponent;
  }
  return out;
}

}  // namespace

TEST(Laurent, Arithmetic) {
  const LaurentPolynomial a = poly({1, -1, 1});
  const LaurentPolynomial b = poly({1, 1});
  EXPECT_EQ(a * b, poly({1, 0, 0, 1}));
  EXPECT_EQ(a - a, LaurentPolynomial());
  EXPECT_EQ((a + b).to_string(), "t^2 + 2");
  EXPECT_EQ(a.to_string(), "t^2 - t + 1");
  EXPECT_EQ(LaurentPolynomial(1).to_string(), "1");
  EXPECT_EQ(LaurentPolynomial().to_string(), "0");
  EXPECT_EQ(poly({-3, 0, 2}, -1).to_string(), "2t - 3t^-1");
  EXPECT_EQ(a.evaluate_at_one(), 1);
}

TEST(Laurent, Normalization) {
  EXPECT_EQ(poly({-1, 1, -1}, -4).normalized(), poly({1, -1, 1}));
  EXPECT_EQ(poly({2, -2, 2}, 3).normalized(), poly({1, -1, 1}));
  EXPECT_EQ(LaurentPolynomial::monomial(-1, 7).normalized(), LaurentPolynomial(1));
}

TEST(Laurent, BigCoefficientsStayExact) {
  LaurentPolynomial p = poly({3, 1});
  for (int i = 0; i < 6; ++i) p = p * p;  // (t + 3)^64
  EXPECT_EQ(p.coefficient(0), boost::multiprecision::pow(BigInt(3), 64));
  EXPECT_EQ(p.evaluate_at_one(), boost::multiprecision::pow(BigInt(4), 64));
}

TEST(Alexander, KnownValues) {
  EXPECT_EQ(alexander_polynomial(unknot()), LaurentPolynomial(1));
  EXPECT_EQ(alexander_polynomial(spun_trefoil()).to_string(), "t^2 - t + 1");
  EXPECT_EQ(alexander_polynomial(apply_stabilize(unknot(), 1)), LaurentPolynomial(1));
  EXPECT_EQ(alexander_polynomial(torus(2)), LaurentPolynomial(1));
  EXPECT_THROW(alexander_polynomial(RibbonData{2, 2, {}}), Error);
}

TEST(Alexander, FoxRowByHand) {
  // Relator b^-1 a^-1 b^-1 a b a with a = g1, b = g2. The three a-letters
  // sit after prefixes of degree -1, -3 and -1, so d/da = -t^-2 + t^-3 + t^-1.
  const auto rows = alexander_matrix(spun_trefoil());
  ASSERT_EQ(rows.size(), 1u);
  const FreeWord relator = group_presentation(spun_trefoil()).relations[0].relator();
  EXPECT_EQ(rows[0][0], fox_by_product_rule(relator, 1));
  EXPECT_EQ(rows[0][1], fox_by_product_rule(relator, 2));
  EXPECT_EQ(rows[0][0], poly({1, -1, 1}, -3));
  EXPECT_EQ(rows[0][0] + rows[0][1], LaurentPolynomial());
}

TEST(Alexander, FoxRowsMatchProductRule) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RibbonData d = random_ribbon(4, 4, 5, seed);
    const auto rows = alexander_matrix(d);
    const GroupPresentation p = group_presentation(d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      LaurentPolynomial sum;
      for (int g = 1; g <= d.base_count; ++g) {
        EXPECT_EQ(rows[r][g - 1], fox_by_product_rule(p.relations[r].relator(), g));
        sum += rows[r][g - 1];
      }
      EXPECT_TRUE(sum.is_zero());
    }
  }
}

TEST(Alexander, SquareCaseMatchesDeterminant) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int b = 2 + static_cast<int>(seed % 4);
    const RibbonData d = random_ribbon(b, b - 1, 5, seed);
    auto rows = alexander_matrix(d);
    for (auto& row : rows) row.pop_back();
    const LaurentPolynomial det = leibniz_determinant(rows);
    ASSERT_FALSE(det.is_zero());
    EXPECT_EQ(alexander_polynomial(d), det.normalized()) << serialize(d);
  }
}

TEST(Alexander, DeterminantPropertyAtOne) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int b = 1 + static_cast<int>(seed % 5);
    const RibbonData d = random_ribbon(b, b - 1 + static_cast<int>(seed % 3), 6, seed);
    EXPECT_EQ(abs(alexander_polynomial(d).evaluate_at_one()), 1) << serialize(d);
  }
}

TEST(Alexander, InvariantUnderMoves) {
  std::mt19937_64 rng(7);
  int applied = 0;
  for (std::uint64_t seed = 0; applied < 500; ++seed) {
    RibbonData d = random_ribbon(1 + static_cast<int>(seed % 4), 4, 4, seed);
    const LaurentPolynomial expected = alexander_polynomial(d);
    for (int step = 0; step < 8; ++step) {
      Move m;
      if (!ribbonlab::testing::random_move(d, rng, m)) continue;
      d = apply_move(d, m);
      ASSERT_EQ(alexander_polynomial(d), expected) << to_string(m);
      ++applied;
    }
  }
}
