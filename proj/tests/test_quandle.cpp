#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ribbonlab/ribbonlab.hpp"
#include "support.hpp"

using namespace ribbonlab;
using ribbonlab::testing::brute_force_colorings;

namespace {

/// Alexander quandle Z_m with x*y = t x + (1 - t) y, shifted to 1..m.
FiniteQuandle alexander_quandle(int m, int t) {
  std::vector<int> table;
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) table.push_back(((t * x + (1 - t) * y) % m + m) % m + 1);
  }
  return FiniteQuandle(m, table, "alexander:" + std::to_string(m) + ":" + std::to_string(t));
}

// A permutation of {0..m-1}; reflections of the m-gon are x -> 2c - x.
using Perm = std::vector<int>;

Perm compose(const Perm& first, const Perm& second) {
  Perm out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

Perm invert(const Perm& p) {
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

/// Counts assignments of reflections to generators under which every group
/// relator evaluates to the identity. Reflections of the m-gon conjugate
/// like the dihedral quandle, so this must agree with the coloring count.
std::uint64_t reflection_representations(const RibbonData& d, int m) {
  std::vector<Perm> reflection(m);
  for (int c = 0; c < m; ++c) {
    for (int x = 0; x < m; ++x) reflection[c].push_back(((2 * c - x) % m + m) % m);
  }
  Perm identity(m);
  std::iota(identity.begin(), identity.end(), 0);
  const GroupPresentation p = group_presentation(d);
  std::vector<int> choice(d.base_count + 1, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto& r : p.relations) {
      Perm acc = identity;
      for (const auto& l : r.relator()) {
        const Perm& g = reflection[choice[l.generator]];
        acc = compose(acc, l.exponent > 0 ? g : invert(g));
      }
      ok = ok && acc == identity;
    }
    if (ok) ++count;
    int i = 1;
    while (i <= d.base_count && choice[i] == m - 1) choice[i++] = 0;
    if (i > d.base_count) break;
    ++choice[i];
  }
  return count;
}

}  // namespace

TEST(Axioms, BuiltinFamilies) {
  for (int m = 2; m <= 12; ++m) EXPECT_TRUE(check_quandle_axioms(dihedral_quandle(m)).empty()) << m;
  for (int m = 1; m <= 12; ++m) EXPECT_TRUE(check_quandle_axioms(trivial_quandle(m)).empty()) << m;
  EXPECT_TRUE(check_quandle_axioms(alexander_quandle(5, 2)).empty());
  EXPECT_TRUE(check_quandle_axioms(alexander_quandle(7, 3)).empty());
}

TEST(Axioms, ViolationsReported) {
  // Row 1 constant 2: 1*1 = 2 breaks idempotence.
  const FiniteQuandle bad(2, {2, 2, 2, 2});
  const Diagnostics d = check_quandle_axioms(bad);
  ASSERT_FALSE(d.empty());
  bool idempotence = false, bijection = false;
  for (const auto& x : d) {
    idempotence = idempotence || x.message == "idempotence violated";
    bijection = bijection || x.message.find("bijection") != std::string::npos;
  }
  EXPECT_TRUE(idempotence);
  EXPECT_TRUE(bijection);
  EXPECT_THROW(count_colorings(unknot(), bad), Error);
  EXPECT_THROW(FiniteQuandle(2, {1, 2, 3}), Error);
  EXPECT_THROW(FiniteQuandle(2, {1, 2, 3, 1}), Error);
}

TEST(Dihedral, TableByHand) {
  // 2y - x mod 3 with representatives 1..3 (3 standing for 0).
  const FiniteQuandle q = dihedral_quandle(3);
  EXPECT_EQ(q.table(), (std::vector<int>{1, 3, 2, 3, 2, 1, 2, 1, 3}));
  EXPECT_EQ(trivial_quandle(1).table(), std::vector<int>{1});
  for (int m = 1; m <= 12; ++m) {
    const FiniteQuandle d = dihedral_quandle(m);
    for (int x = 1; x <= m; ++x) {
      for (int y = 1; y <= m; ++y) {
        EXPECT_EQ(d.op(d.op(x, y), y), x);
        EXPECT_EQ(d.inverse_op(d.op(x, y), y), x);
      }
    }
  }
  EXPECT_THROW(dihedral_quandle(0), Error);
  EXPECT_THROW(trivial_quandle(0), Error);
}

TEST(QuandleText, RoundTrip) {
  const FiniteQuandle q = alexander_quandle(5, 2);
  const FiniteQuandle back = parse_quandle(serialize_quandle(q));
  EXPECT_EQ(back.table(), q.table());
  EXPECT_THROW(parse_quandle("quandle 1\nsize 2\n1 2\n"), ParseError);
  EXPECT_THROW(parse_quandle("quandle 1\nsize 2\n1 2\n2 3\n"), ParseError);
  EXPECT_THROW(parse_quandle("qundle 1\nsize 1\n1\n"), ParseError);
  EXPECT_EQ(builtin_quandle("dihedral:5").table(), dihedral_quandle(5).table());
  EXPECT_EQ(builtin_quandle("dihedral:5").id(), "dihedral:5");
  EXPECT_THROW(builtin_quandle("dihedral:x"), Error);
  EXPECT_THROW(builtin_quandle("cyclic:3"), Error);
}

TEST(Presentation, SpunTrefoil) {
  const QuandlePresentation p = quandle_presentation(spun_trefoil());
  EXPECT_EQ(p.generator_count, 2);
  ASSERT_EQ(p.relations.size(), 1u);
  EXPECT_EQ(p.relations[0], (QuandleRelation{2, 1, {{2, 1}, {1, 1}}}));
  EXPECT_EQ(to_string(p), "generators 2\ng2 = g1 * g2 * g1\n");
}

TEST(Presentation, UnknotAndTrivialHandle) {
  EXPECT_TRUE(quandle_presentation(unknot()).relations.empty());
  EXPECT_EQ(quandle_presentation(unknot()).generator_count, 1);
  const QuandlePresentation t = quandle_presentation(torus(1));
  ASSERT_EQ(t.relations.size(), 1u);
  EXPECT_EQ(t.relations[0], (QuandleRelation{1, 1, {}}));
}

TEST(GroupPresentation, SpunTrefoilGivesTrefoilRelation) {
  const GroupPresentation p = group_presentation(spun_trefoil());
  ASSERT_EQ(p.relations.size(), 1u);
  // b = (ba)^-1 a (ba) with a = g1, b = g2.
  EXPECT_EQ(p.relations[0], (GroupRelation{2, 1, {{2, 1}, {1, 1}}}));
  EXPECT_EQ(to_string(p), "generators 2\ng2 = (g2 g1)^-1 g1 (g2 g1)\n");
  // Relator b^-1 a^-1 b^-1 a b a, i.e. bab = aba after rearranging.
  EXPECT_EQ(p.relations[0].relator(), (FreeWord{{2, -1}, {1, -1}, {2, -1}, {1, 1}, {2, 1}, {1, 1}}));
  EXPECT_EQ(to_string(group_presentation(unknot())), "generators 1\n");
  EXPECT_EQ(to_string(group_presentation(torus(1))), "generators 1\ng1 = g1\n");
}

TEST(GroupPresentation, AgreesWithReflectionRepresentations) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RibbonData d = random_ribbon(1 + static_cast<int>(seed % 4), 3, 4, seed);
    for (int m : {3, 5}) {
      EXPECT_EQ(reflection_representations(d, m), count_colorings(d, dihedral_quandle(m))) << serialize(d);
    }
  }
}

TEST(Abelianization, RankCheck) {
  EXPECT_TRUE(abelianization_rank_check(spun_trefoil()));
  EXPECT_TRUE(abelianization_rank_check(unknot()));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    EXPECT_TRUE(abelianization_rank_check(random_ribbon(1 + static_cast<int>(seed % 6), 6, 4, seed)));
  }
  EXPECT_THROW(abelianization_rank_check(RibbonData{2, 2, {}}), Error);
}

TEST(Colorings, KnownValues) {
  EXPECT_EQ(count_colorings(unknot(), dihedral_quandle(3)), 3u);
  EXPECT_EQ(count_colorings(unknot(), dihedral_quandle(5)), 5u);
  EXPECT_EQ(count_colorings(spun_trefoil(), dihedral_quandle(3)), 9u);
  EXPECT_EQ(count_colorings(spun_trefoil(), dihedral_quandle(5)), 5u);
  EXPECT_EQ(count_colorings(apply_stabilize(unknot(), 1), dihedral_quandle(3)), 3u);
  EXPECT_EQ(count_colorings(torus(2), dihedral_quandle(7)), 7u);
  // Free generators in disconnected data multiply the count.
  EXPECT_EQ(count_colorings(RibbonData{2, 3, {}}, dihedral_quandle(3)), 27u);
}

TEST(Colorings, ProfileOrder) {
  const auto p = coloring_profile(spun_trefoil(), {dihedral_quandle(3), dihedral_quandle(5)});
  ASSERT_EQ(p.counts.size(), 2u);
  EXPECT_EQ(p.counts[0], (std::pair<std::string, std::uint64_t>{"dihedral:3", 9}));
  EXPECT_EQ(p.counts[1], (std::pair<std::string, std::uint64_t>{"dihedral:5", 5}));
  const auto u = coloring_profile(unknot(), {dihedral_quandle(3), dihedral_quandle(5)});
  EXPECT_EQ(u.counts[0].second, 3u);
  EXPECT_EQ(u.counts[1].second, 5u);
  EXPECT_NE(p, u);
}

TEST(Colorings, AtLeastConstantColorings) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RibbonData d = random_ribbon(1 + static_cast<int>(seed % 5), 5, 6, seed);
    for (int m : {3, 4, 5}) EXPECT_GE(count_colorings(d, dihedral_quandle(m)), static_cast<std::uint64_t>(m));
  }
}

TEST(Colorings, MatchBruteForce) {
  const std::vector<FiniteQuandle> quandles{dihedral_quandle(3), dihedral_quandle(4), dihedral_quandle(5),
                                            trivial_quandle(2), alexander_quandle(5, 2), alexander_quandle(7, 3)};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int b = 1 + static_cast<int>(seed % 5);
    const RibbonData d = random_ribbon(b, b - 1 + static_cast<int>(seed % 4), 6, seed);
    for (const auto& q : quandles) {
      ASSERT_EQ(count_colorings(d, q), brute_force_colorings(d, q)) << serialize(d) << q.id();
    }
  }
}

TEST(Colorings, ThreadCountDoesNotMatter) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RibbonData d = random_ribbon(5, 6, 5, seed);
    for (int m : {3, 7}) {
      const auto single = count_colorings(d, dihedral_quandle(m), 1);
      EXPECT_EQ(count_colorings(d, dihedral_quandle(m), 4), single);
      EXPECT_EQ(count_colorings(d, dihedral_quandle(m), 13), single);
    }
  }
}

TEST(Colorings, EnumerationMatchesCountAndRelations) {
  const FiniteQuandle q = alexander_quandle(5, 2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RibbonData d = random_ribbon(3, 3, 4, seed);
    std::uint64_t seen = 0;
    std::vector<std::vector<int>> all;
    enumerate_colorings(d, q, [&](const std::vector<int>& colours) {
      ++seen;
      all.push_back(colours);
      for (const auto& r : quandle_presentation(d).relations) {
        int v = colours[r.rhs];
        for (const auto& l : r.word) v = q.act(v, colours[l.generator], l.exponent);
        EXPECT_EQ(v, colours[r.lhs]);
      }
    });
    EXPECT_EQ(seen, count_colorings(d, q));
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  }
}

TEST(Colorings, LargeCountsAreExact) {
  // 12^17 fits in 64 bits, 12^18 does not.
  EXPECT_EQ(count_colorings(RibbonData{2, 17, {}}, trivial_quandle(12)), ribbonlab::testing::power(12, 17));
  EXPECT_THROW(count_colorings(RibbonData{2, 18, {}}, trivial_quandle(12)), Error);
}
