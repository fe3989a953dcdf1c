#pragma once

// Ribbon data: bases joined by handles, each handle carrying the signed
// sequence of bases it crosses on its way from its start to its end.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ribbonlab/detail/text.hpp"
#include "ribbonlab/error.hpp"

namespace ribbonlab {

/// One crossing of a handle through the interior of a base.
struct SignedLetter {
  int base = 1;  // 1-based
  int sign = 1;  // +1 or -1

  /// The file-format integer: +base or -base.
  int code() const noexcept { return sign * base; }
  static SignedLetter from_code(int code) noexcept {
    return code > 0 ? SignedLetter{code, 1} : SignedLetter{-code, -1};
  }
  SignedLetter inverse() const noexcept { return {base, -sign}; }

  friend bool operator==(const SignedLetter&, const SignedLetter&) = default;
  friend auto operator<=>(const SignedLetter& a, const SignedLetter& b) noexcept {
    return a.code() <=> b.code();
  }
};

using Word = std::vector<SignedLetter>;

struct Handle {
  int start = 1;
  int end = 1;
  Word word;

  friend bool operator==(const Handle&, const Handle&) = default;
};

struct RibbonData {
  int dim = 2;
  int base_count = 1;
  std::vector<Handle> handles;

  int handle_count() const noexcept { return static_cast<int>(handles.size()); }

  friend bool operator==(const RibbonData&, const RibbonData&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::string location;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------
// Words

/// Reverse the word and flip every sign; the word of a handle read backwards.
inline Word reverse_and_flip(const Word& word) {
  Word out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(it->inverse());
  return out;
}

/// Cancels adjacent pairs (b, e)(b, -e) until none remain.
inline Word free_reduce(const Word& word) {
  Word out;
  out.reserve(word.size());
  for (const SignedLetter& letter : word) {
    if (!out.empty() && out.back() == letter.inverse()) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

inline bool is_freely_reduced(const Word& word) {
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (word[i + 1] == word[i].inverse()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Text format

inline RibbonData parse_ribbon(std::string_view text) {
  const auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError(0, "empty input, expected header 'ribbon 1'");

  auto expect_keyword_line = [&](std::size_t index, std::string_view keyword) -> const detail::TextLine& {
    if (index >= lines.size()) {
      throw ParseError(lines.back().number + 1, "missing '" + std::string(keyword) + "' line");
    }
    const auto& line = lines[index];
    if (line.tokens[0] != keyword || line.tokens.size() != 2) {
      throw ParseError(line.number, "malformed header, expected '" + std::string(keyword) + " <integer>'");
    }
    return line;
  };

  const auto& header = expect_keyword_line(0, "ribbon");
  if (detail::expect_integer(header, 1) != 1) {
    throw ParseError(header.number, "malformed header, unsupported version (expected 'ribbon 1')");
  }

  RibbonData data;
  const auto& dim_line = expect_keyword_line(1, "dim");
  const std::int64_t dim = detail::expect_integer(dim_line, 1);
  if (dim < 2) throw ParseError(dim_line.number, "dim must be ≥ 2");
  if (dim > 1'000'000) throw ParseError(dim_line.number, "dim out of range");
  data.dim = static_cast<int>(dim);

  const auto& bases_line = expect_keyword_line(2, "bases");
  const std::int64_t bases = detail::expect_integer(bases_line, 1);
  if (bases < 1) throw ParseError(bases_line.number, "bases must be ≥ 1");
  if (bases > 1'000'000) throw ParseError(bases_line.number, "bases out of range");
  data.base_count = static_cast<int>(bases);

  auto base_index = [&](const detail::TextLine& line, std::size_t token) {
    const std::int64_t value = detail::expect_integer(line, token);
    if (value < 1 || value > data.base_count) {
      throw ParseError(line.number, "base index " + std::to_string(value) + " out of range");
    }
    return static_cast<int>(value);
  };

  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.tokens[0] != "handle") {
      throw ParseError(line.number, "unexpected token '" + std::string(line.tokens[0]) + "'");
    }
    if (line.tokens.size() < 4 || line.tokens[3] != ":") {
      throw ParseError(line.number, "malformed handle line, expected 'handle <s> <e> : <letters>'");
    }
    Handle handle;
    handle.start = base_index(line, 1);
    handle.end = base_index(line, 2);
    for (std::size_t t = 4; t < line.tokens.size(); ++t) {
      const std::int64_t code = detail::expect_integer(line, t);
      if (code == 0) throw ParseError(line.number, "letter 0 is not a signed base index");
      const std::int64_t magnitude = code < 0 ? -code : code;
      if (magnitude > data.base_count) {
        throw ParseError(line.number, "base index " + std::to_string(magnitude) + " out of range");
      }
      handle.word.push_back(SignedLetter::from_code(static_cast<int>(code)));
    }
    data.handles.push_back(std::move(handle));
  }
  return data;
}

inline std::string serialize_handle(const Handle& handle) {
  std::string out = "handle " + std::to_string(handle.start) + " " + std::to_string(handle.end) + " :";
  for (const auto& letter : handle.word) {
    out += ' ';
    out += std::to_string(letter.code());
  }
  return out;
}

inline std::string serialize(const RibbonData& data) {
  std::string out = "ribbon 1\ndim " + std::to_string(data.dim) + "\nbases " +
                    std::to_string(data.base_count) + "\n";
  for (const auto& handle : data.handles) {
    out += serialize_handle(handle);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation and topology

inline Diagnostics validate(const RibbonData& data) {
  Diagnostics out;
  auto error = [&](std::string message, std::string location) {
    out.push_back({Severity::Error, std::move(message), std::move(location)});
  };
  if (data.dim < 2) error("dim must be ≥ 2", "header");
  if (data.base_count < 1) error("base count must be ≥ 1", "header");
  auto in_range = [&](int b) { return b >= 1 && b <= data.base_count; };
  for (std::size_t j = 0; j < data.handles.size(); ++j) {
    const Handle& h = data.handles[j];
    const std::string where = "handle " + std::to_string(j + 1);
    if (!in_range(h.start)) error("start base " + std::to_string(h.start) + " out of range", where);
    if (!in_range(h.end)) error("end base " + std::to_string(h.end) + " out of range", where);
    for (std::size_t p = 0; p < h.word.size(); ++p) {
      const auto& letter = h.word[p];
      const std::string at = where + " letter " + std::to_string(p);
      if (!in_range(letter.base)) error("letter base " + std::to_string(letter.base) + " out of range", at);
      if (letter.sign != 1 && letter.sign != -1) error("letter sign must be +1 or -1", at);
    }
  }
  return out;
}

inline void require_valid(const RibbonData& data) {
  const auto diagnostics = validate(data);
  if (!diagnostics.empty()) {
    throw Error("invalid ribbon data: " + diagnostics.front().location + ": " +
                diagnostics.front().message);
  }
}

/// Component label (0-based, dense, in order of first base) for each base;
/// element 0 is unused.
inline std::vector<int> component_labels(const RibbonData& data) {
  std::vector<int> parent(data.base_count + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& h : data.handles) parent[find(h.start)] = find(h.end);
  std::vector<int> label(data.base_count + 1, -1);
  std::map<int, int> root_label;
  for (int b = 1; b <= data.base_count; ++b) {
    auto [it, inserted] = root_label.try_emplace(find(b), static_cast<int>(root_label.size()));
    label[b] = it->second;
  }
  label[0] = -1;
  return label;
}

/// Number of components of the surface: bases glued along handle ends.
inline int component_count(const RibbonData& data) {
  const auto labels = component_labels(data);
  return data.base_count == 0 ? 0 : 1 + *std::max_element(labels.begin() + 1, labels.end());
}

inline bool is_connected(const RibbonData& data) { return component_count(data) == 1; }

/// Number of 1-handles of the boundary surface: |H| - |B| + 1.
inline int genus(const RibbonData& data) {
  if (data.handle_count() < data.base_count - 1 || !is_connected(data)) {
    throw Error("not a knot presentation");
  }
  return data.handle_count() - data.base_count + 1;
}

inline bool is_sphere_knot(const RibbonData& data) {
  return is_connected(data) && data.handle_count() == data.base_count - 1;
}

inline RibbonData free_reduce(const RibbonData& data) {
  RibbonData out = data;
  for (auto& h : out.handles) h.word = free_reduce(h.word);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form
//
// The encoding being minimized is (base colour sequence, sorted handle keys).
// Base colours come from an iterated refinement that only looks at
// label-independent structure, so the least encoding always lists bases in
// colour order and the search runs over permutations inside colour cells.
// A handle key is [start, letter codes..., end] in the orientation whose key
// is smaller.

namespace detail {

using HandleKey = std::vector<int>;

inline HandleKey oriented_key(const Handle& h, const std::vector<int>& label) {
  HandleKey forward;
  HandleKey backward;
  forward.reserve(h.word.size() + 2);
  backward.reserve(h.word.size() + 2);
  forward.push_back(label[h.start]);
  for (const auto& l : h.word) forward.push_back(l.sign * label[l.base]);
  forward.push_back(label[h.end]);
  backward.push_back(label[h.end]);
  for (auto it = h.word.rbegin(); it != h.word.rend(); ++it) backward.push_back(-it->sign * label[it->base]);
  backward.push_back(label[h.start]);
  return std::min(forward, backward);
}

inline std::vector<int> rank_tuples(const std::vector<std::vector<int>>& tuples) {
  std::vector<std::vector<int>> sorted = tuples;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ranks(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ranks[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), tuples[i]) - sorted.begin());
  }
  return ranks;
}

// colour[b] for b in 1..n (entry 0 unused), dense ranks starting at 0.
inline std::vector<int> refine_base_colours(const RibbonData& data) {
  const int n = data.base_count;
  std::vector<std::vector<int>> tuples(n + 1);
  for (int b = 0; b <= n; ++b) tuples[b] = {b == 0 ? -1 : 0, 0, 0, 0};
  for (const auto& h : data.handles) {
    tuples[h.start][1]++;
    tuples[h.end][1]++;
    if (h.start == h.end) tuples[h.start][2]++;
    for (const auto& l : h.word) tuples[l.base][3]++;
  }
  std::vector<int> colour = rank_tuples(tuples);
  auto classes = [](const std::vector<int>& c) {
    return static_cast<int>(std::set<int>(c.begin(), c.end()).size());
  };
  int class_count = classes(colour);

  for (int round = 0; round < n; ++round) {
    std::vector<HandleKey> descs;
    descs.reserve(data.handles.size());
    for (const auto& h : data.handles) {
      HandleKey forward{colour[h.start]};
      HandleKey backward{colour[h.end]};
      for (const auto& l : h.word) forward.push_back(2 * colour[l.base] + (l.sign > 0 ? 1 : 0));
      for (auto it = h.word.rbegin(); it != h.word.rend(); ++it)
        backward.push_back(2 * colour[it->base] + (it->sign > 0 ? 0 : 1));
      forward.push_back(colour[h.end]);
      backward.push_back(colour[h.start]);
      descs.push_back(std::min(forward, backward));
    }
    const std::vector<int> desc_id = rank_tuples(descs);

    std::vector<std::vector<int>> incidences(n + 1);
    for (std::size_t j = 0; j < data.handles.size(); ++j) {
      const auto& h = data.handles[j];
      incidences[h.start].push_back(2 * desc_id[j]);
      incidences[h.end].push_back(2 * desc_id[j]);
      for (const auto& l : h.word) incidences[l.base].push_back(2 * desc_id[j] + 1);
    }
    std::vector<std::vector<int>> next(n + 1);
    for (int b = 0; b <= n; ++b) {
      std::sort(incidences[b].begin(), incidences[b].end());
      next[b].push_back(colour[b]);
      next[b].insert(next[b].end(), incidences[b].begin(), incidences[b].end());
    }
    std::vector<int> refined = rank_tuples(next);
    const int refined_count = classes(refined);
    colour = std::move(refined);
    if (refined_count == class_count) break;
    class_count = refined_count;
  }
  return colour;
}

}  // namespace detail

/// Least encoding over base relabelings, handle orientations and handle order,
/// after free reduction of every word.
inline RibbonData canonical_form(const RibbonData& input) {
  const RibbonData data = free_reduce(input);
  const int n = data.base_count;
  const std::vector<int> colour = detail::refine_base_colours(data);

  // Cells of equal colour, in colour order; each occupies a contiguous label range.
  std::map<int, std::vector<int>> by_colour;
  for (int b = 1; b <= n; ++b) by_colour[colour[b]].push_back(b);
  std::vector<std::vector<int>> cells;
  for (auto& [c, members] : by_colour) cells.push_back(members);

  // Twins are bases whose transposition maps the data onto itself; their
  // relative order never changes the keys, so each cell is permuted as a
  // multiset of twin classes. Stabilized trees have many twins.
  std::vector<int> identity(n + 1);
  std::iota(identity.begin(), identity.end(), 0);
  auto key_multiset = [&](const std::vector<int>& label) {
    std::vector<detail::HandleKey> ks;
    ks.reserve(data.handles.size());
    for (const auto& h : data.handles) ks.push_back(detail::oriented_key(h, label));
    std::sort(ks.begin(), ks.end());
    return ks;
  };
  const auto original = key_multiset(identity);
  std::vector<std::vector<int>> class_of_slot(cells.size());  // twin-class id per slot, permuted below
  std::vector<std::vector<std::vector<int>>> class_members(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int b : cells[c]) {
      std::size_t k = 0;
      for (; k < class_members[c].size(); ++k) {
        std::vector<int> swapped = identity;
        std::swap(swapped[b], swapped[class_members[c][k].front()]);
        if (key_multiset(swapped) == original) break;
      }
      if (k == class_members[c].size()) class_members[c].emplace_back();
      class_members[c][k].push_back(b);
      class_of_slot[c].push_back(static_cast<int>(k));
    }
    std::sort(class_of_slot[c].begin(), class_of_slot[c].end());
  }

  std::vector<int> label(n + 1, 0);
  std::vector<detail::HandleKey> best;
  bool have_best = false;
  std::vector<detail::HandleKey> keys(data.handles.size());

  auto evaluate = [&]() {
    int next_label = 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::vector<std::size_t> used(class_members[c].size(), 0);
      for (int k : class_of_slot[c]) label[class_members[c][k][used[k]++]] = next_label++;
    }
    for (std::size_t j = 0; j < data.handles.size(); ++j) keys[j] = detail::oriented_key(data.handles[j], label);
    std::sort(keys.begin(), keys.end());
    if (!have_best || keys < best) {
      best = keys;
      have_best = true;
    }
  };

  // Odometer over the multiset permutations of every cell.
  while (true) {
    evaluate();
    std::size_t c = 0;
    for (; c < cells.size(); ++c) {
      if (std::next_permutation(class_of_slot[c].begin(), class_of_slot[c].end())) break;
    }
    if (c == cells.size()) break;
  }

  RibbonData out;
  out.dim = data.dim;
  out.base_count = n;
  out.handles.reserve(best.size());
  for (const auto& key : best) {
    Handle h;
    h.start = key.front();
    h.end = key.back();
    for (std::size_t i = 1; i + 1 < key.size(); ++i) h.word.push_back(SignedLetter::from_code(key[i]));
    out.handles.push_back(std::move(h));
  }
  return out;
}

/// Serialized canonical form; the identity of a search state.
inline std::string canonical_key(const RibbonData& data) { return serialize(canonical_form(data)); }

}  // namespace ribbonlab
