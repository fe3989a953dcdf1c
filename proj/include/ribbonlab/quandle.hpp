#pragma once

// Finite quandles, the quandle and group presentations read off ribbon data,
// and exact coloring counts.
//
// Conventions: x*y is written x^y, the inverse operation x^{~y}. A handle
// from base s to base e crossing (a1,e1)...(ak,ek) yields the relation
//   g_e = g_s ^ { a1^{-e1} ... ak^{-ek} }
// i.e. every crossing letter enters the operator word with its sign flipped.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ribbonlab/detail/text.hpp"
#include "ribbonlab/error.hpp"
#include "ribbonlab/ribbon.hpp"

namespace ribbonlab {

/// Operation table on {1..m}; entry (x, y) is x*y.
class FiniteQuandle {
 public:
  FiniteQuandle() = default;

  /// `table` is row-major, m*m entries in 1..m. Throws on a malformed shape.
  FiniteQuandle(int size, std::vector<int> table, std::string id = "custom")
      : size_(size), table_(std::move(table)), id_(std::move(id)) {
    if (size_ < 1) throw Error("quandle size must be ≥ 1");
    if (table_.size() != static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_)) {
      throw Error("quandle table must have size*size entries");
    }
    for (int v : table_) {
      if (v < 1 || v > size_) throw Error("quandle table entry " + std::to_string(v) + " out of range");
    }
    inverse_.assign(table_.size(), 0);
    for (int x = 1; x <= size_; ++x) {
      for (int y = 1; y <= size_; ++y) {
        int& slot = inverse_[index(op(x, y), y)];
        // Non-bijective columns leave some slot at 0; check_quandle_axioms reports them.
        if (slot == 0) slot = x;
      }
    }
  }

  int size() const noexcept { return size_; }
  const std::string& id() const noexcept { return id_; }
  const std::vector<int>& table() const noexcept { return table_; }

  int op(int x, int y) const noexcept { return table_[index(x, y)]; }
  /// The unique z with z*y = x.
  int inverse_op(int x, int y) const noexcept { return inverse_[index(x, y)]; }

  /// x acted on by y (exponent +1) or by the inverse operation (exponent -1).
  int act(int x, int y, int exponent) const noexcept { return exponent > 0 ? op(x, y) : inverse_op(x, y); }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(x - 1) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(y - 1);
  }

  int size_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::string id_;
};

/// x*y = 2y - x (mod m), on representatives 1..m.
inline FiniteQuandle dihedral_quandle(int m) {
  if (m < 1) throw Error("quandle size must be ≥ 1");
  std::vector<int> table(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) table[static_cast<std::size_t>(x) * m + y] = ((2 * y - x) % m + m) % m + 1;
  }
  return FiniteQuandle(m, std::move(table), "dihedral:" + std::to_string(m));
}

/// x*y = x.
inline FiniteQuandle trivial_quandle(int m) {
  if (m < 1) throw Error("quandle size must be ≥ 1");
  std::vector<int> table(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) table[static_cast<std::size_t>(x) * m + y] = x + 1;
  }
  return FiniteQuandle(m, std::move(table), "trivial:" + std::to_string(m));
}

/// Every violated instance of idempotence, right invertibility and right
/// self-distributivity.
inline Diagnostics check_quandle_axioms(const FiniteQuandle& q) {
  Diagnostics out;
  const int m = q.size();
  if (m < 1 || q.table().size() != static_cast<std::size_t>(m) * m) throw Error("malformed quandle table");
  auto violation = [&](std::string message, std::string where) {
    out.push_back({Severity::Error, std::move(message), std::move(where)});
  };
  for (int x = 1; x <= m; ++x) {
    if (q.op(x, x) != x) violation("idempotence violated", "x=" + std::to_string(x));
  }
  for (int y = 1; y <= m; ++y) {
    std::vector<bool> hit(m + 1, false);
    for (int x = 1; x <= m; ++x) hit[q.op(x, y)] = true;
    for (int z = 1; z <= m; ++z) {
      if (!hit[z]) {
        violation("right translation by " + std::to_string(y) + " is not a bijection",
                  "y=" + std::to_string(y) + " misses " + std::to_string(z));
      }
    }
  }
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      for (int c = 1; c <= m; ++c) {
        if (q.op(q.op(a, b), c) != q.op(q.op(a, c), q.op(b, c))) {
          violation("right self-distributivity violated",
                    "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
  return out;
}

inline void require_quandle(const FiniteQuandle& q) {
  const auto diagnostics = check_quandle_axioms(q);
  if (!diagnostics.empty()) {
    throw Error("invalid quandle " + q.id() + ": " + diagnostics.front().message + " at " +
                diagnostics.front().location);
  }
}

inline FiniteQuandle parse_quandle(std::string_view text, std::string id = "custom") {
  const auto lines = detail::tokenize_lines(text);
  if (lines.size() < 2) throw ParseError(0, "expected 'quandle 1' and 'size <m>' lines");
  if (lines[0].tokens.size() != 2 || lines[0].tokens[0] != "quandle" || detail::expect_integer(lines[0], 1) != 1) {
    throw ParseError(lines[0].number, "malformed header, expected 'quandle 1'");
  }
  if (lines[1].tokens.size() != 2 || lines[1].tokens[0] != "size") {
    throw ParseError(lines[1].number, "expected 'size <m>'");
  }
  const std::int64_t m = detail::expect_integer(lines[1], 1);
  if (m < 1 || m > 4096) throw ParseError(lines[1].number, "size out of range");
  if (lines.size() != static_cast<std::size_t>(m) + 2) {
    throw ParseError(lines.back().number, "expected " + std::to_string(m) + " table rows");
  }
  std::vector<int> table;
  table.reserve(static_cast<std::size_t>(m * m));
  for (std::size_t r = 2; r < lines.size(); ++r) {
    if (lines[r].tokens.size() != static_cast<std::size_t>(m)) {
      throw ParseError(lines[r].number, "row must have " + std::to_string(m) + " entries");
    }
    for (std::size_t c = 0; c < lines[r].tokens.size(); ++c) {
      const std::int64_t v = detail::expect_integer(lines[r], c);
      if (v < 1 || v > m) throw ParseError(lines[r].number, "entry " + std::to_string(v) + " out of range");
      table.push_back(static_cast<int>(v));
    }
  }
  return FiniteQuandle(static_cast<int>(m), std::move(table), std::move(id));
}

inline std::string serialize_quandle(const FiniteQuandle& q) {
  std::string out = "quandle 1\nsize " + std::to_string(q.size()) + "\n";
  for (int x = 1; x <= q.size(); ++x) {
    for (int y = 1; y <= q.size(); ++y) {
      if (y > 1) out += ' ';
      out += std::to_string(q.op(x, y));
    }
    out += '\n';
  }
  return out;
}

/// `dihedral:<m>` or `trivial:<m>`; returns false for anything else.
inline bool is_builtin_quandle_name(std::string_view name) {
  return name.starts_with("dihedral:") || name.starts_with("trivial:");
}

inline FiniteQuandle builtin_quandle(std::string_view name) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) throw Error("unknown quandle '" + std::string(name) + "'");
  const auto m = detail::to_integer(name.substr(colon + 1));
  if (!m || *m < 1 || *m > 4096) throw Error("bad quandle size in '" + std::string(name) + "'");
  const std::string_view family = name.substr(0, colon);
  if (family == "dihedral") return dihedral_quandle(static_cast<int>(*m));
  if (family == "trivial") return trivial_quandle(static_cast<int>(*m));
  throw Error("unknown quandle family '" + std::string(family) + "'");
}

// ---------------------------------------------------------------------------
// Presentations

struct OperatorLetter {
  int generator;  // 1-based
  int exponent;   // +1: act by *g, -1: act by the inverse operation
  friend bool operator==(const OperatorLetter&, const OperatorLetter&) = default;
};

using OperatorWord = std::vector<OperatorLetter>;

/// lhs = rhs ^ word
struct QuandleRelation {
  int lhs;
  int rhs;
  OperatorWord word;
  friend bool operator==(const QuandleRelation&, const QuandleRelation&) = default;
};

struct QuandlePresentation {
  int generator_count = 0;
  std::vector<QuandleRelation> relations;
};

inline OperatorWord operator_word(const Word& crossings) {
  OperatorWord out;
  out.reserve(crossings.size());
  for (const auto& l : crossings) out.push_back({l.base, -l.sign});
  return out;
}

inline QuandlePresentation quandle_presentation(const RibbonData& data) {
  require_valid(data);
  QuandlePresentation p;
  p.generator_count = data.base_count;
  for (const auto& h : data.handles) p.relations.push_back({h.end, h.start, operator_word(h.word)});
  return p;
}

inline std::string to_string(const QuandlePresentation& p) {
  std::string out = "generators " + std::to_string(p.generator_count) + "\n";
  for (const auto& r : p.relations) {
    out += "g" + std::to_string(r.lhs) + " = g" + std::to_string(r.rhs);
    for (const auto& l : r.word) out += (l.exponent > 0 ? " * g" : " / g") + std::to_string(l.generator);
    out += '\n';
  }
  return out;
}

struct GroupLetter {
  int generator;
  int exponent;  // +1 or -1
  friend bool operator==(const GroupLetter&, const GroupLetter&) = default;
};

using FreeWord = std::vector<GroupLetter>;

/// lhs = conjugator^-1 rhs conjugator
struct GroupRelation {
  int lhs;
  int rhs;
  FreeWord conjugator;
  friend bool operator==(const GroupRelation&, const GroupRelation&) = default;

  /// The relator lhs^-1 conjugator^-1 rhs conjugator as a free word.
  FreeWord relator() const {
    FreeWord r{{lhs, -1}};
    for (auto it = conjugator.rbegin(); it != conjugator.rend(); ++it) r.push_back({it->generator, -it->exponent});
    r.push_back({rhs, 1});
    r.insert(r.end(), conjugator.begin(), conjugator.end());
    return r;
  }
};

struct GroupPresentation {
  int generator_count = 0;
  std::vector<GroupRelation> relations;
};

/// Conjugation reading of the quandle presentation, with x^y = y^-1 x y.
inline GroupPresentation group_presentation(const RibbonData& data) {
  require_valid(data);
  GroupPresentation p;
  p.generator_count = data.base_count;
  for (const auto& h : data.handles) {
    FreeWord w;
    for (const auto& l : h.word) w.push_back({l.base, -l.sign});
    p.relations.push_back({h.end, h.start, std::move(w)});
  }
  return p;
}

inline std::string to_string(const FreeWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += "g" + std::to_string(w[i].generator);
    if (w[i].exponent < 0) out += "^-1";
  }
  return out;
}

inline std::string to_string(const GroupPresentation& p) {
  std::string out = "generators " + std::to_string(p.generator_count) + "\n";
  for (const auto& r : p.relations) {
    out += "g" + std::to_string(r.lhs) + " = ";
    if (r.conjugator.empty()) {
      out += "g" + std::to_string(r.rhs);
    } else {
      const std::string w = to_string(r.conjugator);
      out += "(" + w + ")^-1 g" + std::to_string(r.rhs) + " (" + w + ")";
    }
    out += '\n';
  }
  return out;
}

/// Rank of the abelianized relation matrix (rows g_e - g_s) equals |B| - 1.
inline bool abelianization_rank_check(const RibbonData& data) {
  require_valid(data);
  if (!is_connected(data)) throw Error("not a knot presentation");
  const int n = data.base_count;
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& h : data.handles) {
    std::vector<std::int64_t> row(n, 0);
    row[h.end - 1] += 1;
    row[h.start - 1] -= 1;
    rows.push_back(std::move(row));
  }
  // Fraction-free elimination; entries stay in {-2..2} for incidence rows
  // but the reduction below keeps them divided by their gcd anyway.
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] == 0) continue;
      const std::int64_t a = rows[rank][col];
      const std::int64_t b = rows[r][col];
      std::int64_t g = 0;
      for (int c = 0; c < n; ++c) {
        rows[r][c] = a * rows[r][c] - b * rows[rank][c];
        g = std::gcd(g, rows[r][c]);
      }
      if (g > 1) {
        for (auto& v : rows[r]) v /= g;
      }
    }
    ++rank;
  }
  return rank == n - 1;
}

// ---------------------------------------------------------------------------
// Coloring counts

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error("coloring count overflows 64 bits");
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error("coloring count overflows 64 bits");
  return out;
}

// Backtracking over base colours with unit propagation: once a relation's
// operator letters are coloured, either side determines the other.
class ColoringSearch {
 public:
  ColoringSearch(const QuandlePresentation& p, const FiniteQuandle& q) : p_(p), q_(q) {
    const int n = p.generator_count;
    colour_.assign(n + 1, 0);
    watch_.resize(n + 1);
    for (std::size_t r = 0; r < p.relations.size(); ++r) {
      const auto& rel = p.relations[r];
      std::vector<int> touched{rel.lhs, rel.rhs};
      for (const auto& l : rel.word) touched.push_back(l.generator);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int g : touched) watch_[g].push_back(static_cast<int>(r));
    }
    // Branch on generators in breadth-first order over the relation graph so
    // propagation fires early.
    std::vector<bool> queued(n + 1, false);
    for (int root = 1; root <= n; ++root) {
      if (queued[root]) continue;
      if (watch_[root].empty()) {
        free_generators_++;
        queued[root] = true;
        continue;
      }
      std::vector<int> queue{root};
      queued[root] = true;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        const int g = queue[i];
        order_.push_back(g);
        for (int r : watch_[g]) {
          const auto& rel = p.relations[r];
          auto visit = [&](int h) {
            if (!queued[h]) {
              queued[h] = true;
              queue.push_back(h);
            }
          };
          visit(rel.rhs);
          for (const auto& l : rel.word) visit(l.generator);
          visit(rel.lhs);
        }
      }
    }
  }

  /// Colourings with the first branched generator fixed to `first` (0: all).
  std::uint64_t count(int first, const std::function<void(const std::vector<int>&)>* visit = nullptr) {
    visit_ = visit;
    trail_.clear();
    std::fill(colour_.begin(), colour_.end(), 0);
    std::uint64_t total = 0;
    if (order_.empty()) {
      total = 1;
      if (visit_) emit_free();
    } else if (first == 0) {
      total = branch(0);
    } else {
      const std::size_t mark = trail_.size();
      if (assign(order_[0], first)) total = branch(1);
      undo(mark);
    }
    for (int i = 0; i < free_generators_; ++i) total = checked_mul(total, static_cast<std::uint64_t>(q_.size()));
    return total;
  }

  bool has_branch_generator() const { return !order_.empty(); }

 private:
  std::uint64_t branch(std::size_t depth) {
    while (depth < order_.size() && colour_[order_[depth]] != 0) ++depth;
    if (depth == order_.size()) {
      if (visit_) emit_free();
      return 1;
    }
    std::uint64_t total = 0;
    const int g = order_[depth];
    for (int c = 1; c <= q_.size(); ++c) {
      const std::size_t mark = trail_.size();
      if (assign(g, c)) total = checked_add(total, branch(depth + 1));
      undo(mark);
    }
    return total;
  }

  void emit_free() {
    // Expand generators that occur in no relation.
    std::vector<int> free;
    for (int g = 1; g < static_cast<int>(colour_.size()); ++g) {
      if (watch_[g].empty()) free.push_back(g);
    }
    std::vector<int> colours = colour_;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == free.size()) {
        (*visit_)(colours);
        return;
      }
      for (int c = 1; c <= q_.size(); ++c) {
        colours[free[i]] = c;
        rec(i + 1);
      }
    };
    rec(0);
  }

  bool assign(int g, int c) {
    std::vector<int> pending{g};
    colour_[g] = c;
    trail_.push_back(g);
    while (!pending.empty()) {
      const int h = pending.back();
      pending.pop_back();
      for (int r : watch_[h]) {
        const auto& rel = p_.relations[r];
        bool letters = true;
        for (const auto& l : rel.word) {
          if (colour_[l.generator] == 0) {
            letters = false;
            break;
          }
        }
        if (!letters) continue;
        const int rhs = colour_[rel.rhs];
        const int lhs = colour_[rel.lhs];
        if (rhs != 0) {
          int v = rhs;
          for (const auto& l : rel.word) v = q_.act(v, colour_[l.generator], l.exponent);
          if (lhs == 0) {
            colour_[rel.lhs] = v;
            trail_.push_back(rel.lhs);
            pending.push_back(rel.lhs);
          } else if (lhs != v) {
            return false;
          }
        } else if (lhs != 0) {
          int v = lhs;
          for (auto it = rel.word.rbegin(); it != rel.word.rend(); ++it) {
            v = q_.act(v, colour_[it->generator], -it->exponent);
          }
          colour_[rel.rhs] = v;
          trail_.push_back(rel.rhs);
          pending.push_back(rel.rhs);
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      colour_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  const QuandlePresentation& p_;
  const FiniteQuandle& q_;
  std::vector<int> colour_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> watch_;
  std::vector<int> order_;
  int free_generators_ = 0;
  const std::function<void(const std::vector<int>&)>* visit_ = nullptr;
};

}  // namespace detail

/// Number of quandle homomorphisms from the presented quandle of `data` to `q`.
/// With threads > 1 the values of the first branched generator are split
/// across workers; the sum does not depend on the split.
inline std::uint64_t count_colorings(const RibbonData& data, const FiniteQuandle& q, int threads = 1) {
  require_quandle(q);
  const QuandlePresentation p = quandle_presentation(data);
  detail::ColoringSearch probe(p, q);
  if (threads <= 1 || !probe.has_branch_generator()) return probe.count(0);

  std::vector<std::future<std::uint64_t>> parts;
  const int workers = std::min(threads, q.size());
  for (int w = 0; w < workers; ++w) {
    parts.push_back(std::async(std::launch::async, [&, w] {
      detail::ColoringSearch search(p, q);
      std::uint64_t total = 0;
      for (int c = w + 1; c <= q.size(); c += workers) total = detail::checked_add(total, search.count(c));
      return total;
    }));
  }
  std::uint64_t total = 0;
  for (auto& part : parts) total = detail::checked_add(total, part.get());
  return total;
}

/// Calls `visit` with every colouring (entry 0 unused), in lexicographic
/// order of the branching sequence.
inline void enumerate_colorings(const RibbonData& data, const FiniteQuandle& q,
                                const std::function<void(const std::vector<int>&)>& visit) {
  require_quandle(q);
  const QuandlePresentation p = quandle_presentation(data);
  detail::ColoringSearch search(p, q);
  search.count(0, &visit);
}

struct ColoringProfile {
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  friend bool operator==(const ColoringProfile&, const ColoringProfile&) = default;
};

inline ColoringProfile coloring_profile(const RibbonData& data, const std::vector<FiniteQuandle>& quandles,
                                        int threads = 1) {
  ColoringProfile profile;
  for (const auto& q : quandles) profile.counts.emplace_back(q.id(), count_colorings(data, q, threads));
  return profile;
}

}  // namespace ribbonlab
