#pragma once

// Test-only oracles and generators. Nothing here calls the library's
// presentation or coloring code.

#include <cstdint>
#include <random>
#include <vector>

#include "ribbonlab/ribbonlab.hpp"

namespace ribbonlab::testing {

/// Right division straight from the table: the z with z*y = x.
inline int table_divide(const FiniteQuandle& q, int x, int y) {
  for (int z = 1; z <= q.size(); ++z) {
    if (q.op(z, y) == x) return z;
  }
  return 0;
}

/// Counts assignments in {1..m}^|B| satisfying, for every handle s -> e with
/// crossings (a_i, e_i), colour(e) = colour(s) acted on by a_i with the
/// inverse of the crossing sign.
inline std::uint64_t brute_force_colorings(const RibbonData& d, const FiniteQuandle& q) {
  const int n = d.base_count;
  const int m = q.size();
  std::vector<int> colour(n + 1, 1);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto& h : d.handles) {
      int v = colour[h.start];
      for (const auto& l : h.word) v = l.sign < 0 ? q.op(v, colour[l.base]) : table_divide(q, v, colour[l.base]);
      if (v != colour[h.end]) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
    int i = 1;
    while (i <= n && colour[i] == m) colour[i++] = 1;
    if (i > n) break;
    ++colour[i];
  }
  return count;
}

inline std::uint64_t power(std::uint64_t base, int exponent) {
  std::uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Any applicable move of any type, including the non-enumerated ones
/// (CancelInsert, expanding CrossSlide, ReverseHandle). Returns false when
/// the drawn move type has no applicable instance.
inline bool random_move(const RibbonData& d, std::mt19937_64& rng, Move& out) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = d.base_count;
  const int hc = d.handle_count();
  switch (pick(0, 8)) {
    case 0:
      out = move::Stab{pick(1, n)};
      return true;
    case 1: {
      std::vector<Move> all;
      for (Move& m : candidate_moves(d, 0)) {
        if (std::holds_alternative<move::Destab>(m)) all.push_back(m);
      }
      if (all.empty()) return false;
      out = all[static_cast<std::size_t>(pick(0, static_cast<int>(all.size()) - 1))];
      return true;
    }
    case 2: {
      if (hc == 0) return false;
      const int h = pick(1, hc);
      const int len = static_cast<int>(d.handles[h - 1].word.size());
      out = move::CancelInsert{h, pick(0, len), SignedLetter{pick(1, n), pick(0, 1) ? 1 : -1}};
      return true;
    }
    case 3: {
      std::vector<Move> all;
      for (int h = 1; h <= hc; ++h) {
        const auto& w = d.handles[h - 1].word;
        for (int p = 0; p + 1 < static_cast<int>(w.size()); ++p) {
          if (w[p + 1] == w[p].inverse()) all.push_back(move::CancelDelete{h, p});
        }
      }
      if (all.empty()) return false;
      out = all[static_cast<std::size_t>(pick(0, static_cast<int>(all.size()) - 1))];
      return true;
    }
    case 4: {
      std::vector<Move> all;
      for (Move& m : candidate_moves(d, 0)) {
        if (std::holds_alternative<move::Slide>(m)) all.push_back(m);
      }
      if (all.empty()) return false;
      out = all[static_cast<std::size_t>(pick(0, static_cast<int>(all.size()) - 1))];
      return true;
    }
    case 5: {
      std::vector<Move> all;
      for (int h = 1; h <= hc; ++h) {
        const auto& w = d.handles[h - 1].word;
        for (int p = 0; p < static_cast<int>(w.size()); ++p) {
          for (int v = 1; v <= hc; ++v) {
            if (v == h) continue;
            if (d.handles[v - 1].start == w[p].base) all.push_back(move::CrossSlide{h, p, v, Direction::Forward});
            if (d.handles[v - 1].end == w[p].base) all.push_back(move::CrossSlide{h, p, v, Direction::Reverse});
          }
        }
      }
      if (all.empty()) return false;
      out = all[static_cast<std::size_t>(pick(0, static_cast<int>(all.size()) - 1))];
      return true;
    }
    case 6:
      out = move::TrivialHandle{pick(1, n)};
      return true;
    case 7: {
      std::vector<Move> all;
      for (int h = 1; h <= hc; ++h) {
        if (is_trivial_handle(d.handles[h - 1])) all.push_back(move::RemoveTrivialHandle{h});
      }
      if (all.empty()) return false;
      out = all[static_cast<std::size_t>(pick(0, static_cast<int>(all.size()) - 1))];
      return true;
    }
    default:
      if (hc == 0) return false;
      out = move::ReverseHandle{pick(1, hc)};
      return true;
  }
}

/// |H| - |B| change expected from a move.
inline int euler_shift(const Move& m) {
  if (std::holds_alternative<move::TrivialHandle>(m)) return 1;
  if (std::holds_alternative<move::RemoveTrivialHandle>(m)) return -1;
  return 0;
}

}  // namespace ribbonlab::testing
