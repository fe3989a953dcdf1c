#pragma once

// Bounded search for (weak) stable equivalence between ribbon data, with
// replayable certificates, invariant-based refutation and the constructive
// merge/clone macros.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ribbonlab/error.hpp"
#include "ribbonlab/generate.hpp"
#include "ribbonlab/moves.hpp"
#include "ribbonlab/quandle.hpp"
#include "ribbonlab/ribbon.hpp"

namespace ribbonlab {

namespace outcome {

struct Equivalent {
  MoveScript script_a;
  MoveScript script_b;
  RibbonData meeting;  // canonical
  int weak_used_a = 0;
  int weak_used_b = 0;
  int weak_budget = 0;
};

struct Refuted {
  std::string invariant;  // quandle id, or "genus"
  std::uint64_t value_a = 0;
  std::uint64_t value_b = 0;
};

struct Unknown {
  std::size_t states = 0;
  int depth = 0;
};

}  // namespace outcome

using SearchOutcome = std::variant<outcome::Equivalent, outcome::Refuted, outcome::Unknown>;

inline bool is_equivalent(const SearchOutcome& o) { return std::holds_alternative<outcome::Equivalent>(o); }
inline bool is_refuted(const SearchOutcome& o) { return std::holds_alternative<outcome::Refuted>(o); }
inline bool is_unknown(const SearchOutcome& o) { return std::holds_alternative<outcome::Unknown>(o); }

/// Quandles used by the refutation gate unless told otherwise.
inline std::vector<FiniteQuandle> default_gate_quandles() {
  return {dihedral_quandle(3), dihedral_quandle(5), dihedral_quandle(7)};
}

/// First quandle on which the coloring counts differ. Genus only separates
/// the inputs when no trivial handles may be attached.
inline std::optional<outcome::Refuted> invariant_gate(const RibbonData& a, const RibbonData& b,
                                                      const std::vector<FiniteQuandle>& quandles,
                                                      int weak_budget = 1, int threads = 1) {
  if (weak_budget == 0) {
    const int ga = genus(a);
    const int gb = genus(b);
    if (ga != gb) return outcome::Refuted{"genus", static_cast<std::uint64_t>(ga), static_cast<std::uint64_t>(gb)};
  }
  for (const auto& q : quandles) {
    const std::uint64_t ca = count_colorings(a, q, threads);
    const std::uint64_t cb = count_colorings(b, q, threads);
    if (ca != cb) return outcome::Refuted{q.id(), ca, cb};
  }
  return std::nullopt;
}

struct SearchOptions {
  int depth = 8;             // bound on |script_a| + |script_b| in search steps
  int weak_budget = 0;       // trivial handles each side may absorb
  std::size_t state_cap = 200000;
  int threads = 1;
  std::vector<FiniteQuandle> gate = default_gate_quandles();
};

namespace detail {

struct SearchNode {
  std::string parent;  // empty for the root
  int depth = 0;
  int added = 0;    // TrivialHandle moves on the path
  int removed = 0;  // RemoveTrivialHandle moves on the path
  RibbonData data;
};

using SearchMap = std::unordered_map<std::string, SearchNode>;

inline std::vector<std::string> path_to_root(const SearchMap& map, const std::string& key) {
  std::vector<std::string> path;
  for (std::string k = key; !k.empty(); k = map.at(k).parent) path.push_back(k);
  std::reverse(path.begin(), path.end());
  return path;
}

// Rebuilds a replayable script on the raw input from a path of canonical
// keys. Every step re-finds, on the current raw data, a move whose
// canonical result is the next key; words are kept reduced with explicit
// CancelDelete moves.
inline MoveScript replay_path(const RibbonData& raw, const std::vector<std::string>& keys) {
  MoveScript script;
  RibbonData current = raw;
  auto reduce = [&]() {
    for (const Move& m : reduction_moves(current)) {
      current = apply_move(current, m);
      script.moves.push_back(m);
    }
  };
  reduce();
  for (std::size_t i = 1; i < keys.size(); ++i) {
    bool found = false;
    for (const Move& m : candidate_moves(current, 1)) {
      RibbonData next = apply_move(current, m);
      if (canonical_key(next) == keys[i]) {
        current = std::move(next);
        script.moves.push_back(m);
        found = true;
        break;
      }
    }
    if (!found) throw Error("internal: search path step " + std::to_string(i) + " has no matching move");
    reduce();
  }
  return script;
}

}  // namespace detail

/// Bidirectional breadth-first search over canonical forms. Each round
/// expands the smaller frontier by one level; a state reached from both
/// sides is a meeting when its two depths sum to at most `depth`. The gate
/// runs first.
inline SearchOutcome search_equiv(const RibbonData& a, const RibbonData& b, const SearchOptions& options) {
  if (options.depth < 0) throw Error("depth must be ≥ 0");
  if (options.state_cap == 0) throw Error("state cap must be > 0");
  if (options.weak_budget < 0) throw Error("weak budget must be ≥ 0");
  require_valid(a);
  require_valid(b);
  if (!is_connected(a) || !is_connected(b)) throw Error("not a knot presentation");

  if (auto refuted = invariant_gate(a, b, options.gate, options.weak_budget, options.threads)) return *refuted;

  const RibbonData ca = canonical_form(a);
  const RibbonData cb = canonical_form(b);
  const std::string ka = serialize(ca);
  const std::string kb = serialize(cb);
  const int budget = options.weak_budget;

  auto make_equivalent = [&](const detail::SearchMap& map_a, const detail::SearchMap& map_b,
                             const std::string& key) {
    outcome::Equivalent eq;
    eq.script_a = detail::replay_path(a, detail::path_to_root(map_a, key));
    eq.script_b = detail::replay_path(b, detail::path_to_root(map_b, key));
    eq.meeting = map_a.at(key).data;
    eq.weak_used_a = eq.script_a.trivial_added() + eq.script_b.trivial_removed();
    eq.weak_used_b = eq.script_b.trivial_added() + eq.script_a.trivial_removed();
    eq.weak_budget = budget;
    return eq;
  };

  detail::SearchMap maps[2];
  maps[0].emplace(ka, detail::SearchNode{"", 0, 0, 0, ca});
  maps[1].emplace(kb, detail::SearchNode{"", 0, 0, 0, cb});
  if (ka == kb) return make_equivalent(maps[0], maps[1], ka);

  std::vector<std::string> frontier[2] = {{ka}, {kb}};
  int radius[2] = {0, 0};

  // Collapses are enumerated but their expanding inverses are not, so the
  // move set is not symmetric: a path may need most of its steps on one
  // particular side. Each side therefore grows up to the full depth and a
  // meeting counts whenever the two BFS depths fit the bound together. The
  // smaller frontier goes first, which keeps the usual bidirectional savings.
  while (true) {
    auto eligible = [&](int s) { return radius[s] < options.depth && !frontier[s].empty(); };
    if (!eligible(0) && !eligible(1)) break;
    int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    if (!eligible(side)) side = 1 - side;
    const int other = 1 - side;
    auto& mine = maps[side];
    auto& theirs = maps[other];

    // Successor lists are computed independently per state, then merged in
    // frontier order so the result does not depend on scheduling. Levels are
    // handled in fixed batches so the state cap stops a level part way.
    const auto& level = frontier[side];
    const std::size_t batch = 256 * static_cast<std::size_t>(std::max(1, options.threads));
    std::vector<std::string> next;
    std::optional<std::pair<int, std::string>> best;  // (total depth, key)
    bool capped = false;
    for (std::size_t from = 0; from < level.size() && !capped; from += batch) {
      const std::size_t to = std::min(level.size(), from + batch);
      std::vector<std::vector<Successor>> successors(to - from);
      auto expand = [&](std::size_t i) { successors[i - from] = enumerate_moves(mine.at(level[i]).data, budget); };
      if (options.threads > 1 && to - from > 1) {
        const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(options.threads), to - from);
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w) {
          jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = from + w; i < to; i += workers) expand(i);
          }));
        }
        for (auto& job : jobs) job.get();
      } else {
        for (std::size_t i = from; i < to; ++i) expand(i);
      }

      for (std::size_t i = from; i < to && !capped; ++i) {
        const detail::SearchNode& parent = mine.at(level[i]);
        for (Successor& s : successors[i - from]) {
          int added = parent.added;
          int removed = parent.removed;
          if (std::holds_alternative<move::TrivialHandle>(s.move)) ++added;
          if (std::holds_alternative<move::RemoveTrivialHandle>(s.move)) ++removed;
          if (added > budget || removed > budget) continue;
          if (mine.contains(s.key)) continue;
          if (maps[0].size() + maps[1].size() >= options.state_cap) {
            capped = true;
            break;
          }
          const std::string key = s.key;
          mine.emplace(key, detail::SearchNode{level[i], parent.depth + 1, added, removed, std::move(s.result)});
          next.push_back(key);
          if (auto it = theirs.find(key); it != theirs.end()) {
            const auto& there = it->second;
            const bool fits = parent.depth + 1 + there.depth <= options.depth;
            if (fits && added + there.removed <= budget && there.added + removed <= budget) {
              const std::pair<int, std::string> candidate{parent.depth + 1 + there.depth, key};
              if (!best || candidate < *best) best = candidate;
            }
          }
        }
      }
    }
    // A meeting found before the cap is still a valid answer. A level cut
    // short by the cap does not count towards the reported depth.
    if (best) return make_equivalent(maps[0], maps[1], best->second);
    if (capped) break;
    radius[side] += 1;
    frontier[side] = std::move(next);
  }
  return outcome::Unknown{maps[0].size() + maps[1].size(), std::min(options.depth, radius[0] + radius[1])};
}

inline SearchOutcome search_equiv(const RibbonData& a, const RibbonData& b, int depth, int weak_budget,
                                  std::size_t state_cap) {
  SearchOptions options;
  options.depth = depth;
  options.weak_budget = weak_budget;
  options.state_cap = state_cap;
  return search_equiv(a, b, options);
}

struct Certification {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const noexcept { return ok; }
};

/// Replays both scripts and compares canonical forms byte-wise; the weak
/// usage recomputed from the scripts must match the outcome and its budget.
inline Certification certify(const RibbonData& a, const RibbonData& b, const SearchOutcome& result) {
  const auto* eq = std::get_if<outcome::Equivalent>(&result);
  if (!eq) return {false, "outcome is not Equivalent"};
  RibbonData end_a;
  RibbonData end_b;
  try {
    end_a = apply_script(a, eq->script_a);
  } catch (const Error& e) {
    return {false, std::string("script A: ") + e.what()};
  }
  try {
    end_b = apply_script(b, eq->script_b);
  } catch (const Error& e) {
    return {false, std::string("script B: ") + e.what()};
  }
  if (canonical_key(end_a) != canonical_key(end_b)) return {false, "replayed canonical forms differ"};
  const int used_a = eq->script_a.trivial_added() + eq->script_b.trivial_removed();
  const int used_b = eq->script_b.trivial_added() + eq->script_a.trivial_removed();
  if (used_a != eq->weak_used_a || used_b != eq->weak_used_b) return {false, "weak usage does not match scripts"};
  if (used_a > eq->weak_budget || used_b > eq->weak_budget) return {false, "weak usage exceeds budget"};
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Outcome text format

inline std::string serialize_outcome(const SearchOutcome& result) {
  std::string out;
  MoveScript empty;
  const MoveScript* sa = &empty;
  const MoveScript* sb = &empty;
  if (const auto* eq = std::get_if<outcome::Equivalent>(&result)) {
    out = "EQUIVALENT\n";
    out += "# weak_used_a " + std::to_string(eq->weak_used_a) + "\n";
    out += "# weak_used_b " + std::to_string(eq->weak_used_b) + "\n";
    sa = &eq->script_a;
    sb = &eq->script_b;
  } else if (const auto* ref = std::get_if<outcome::Refuted>(&result)) {
    out = "REFUTED " + ref->invariant + " " + std::to_string(ref->value_a) + " " + std::to_string(ref->value_b) + "\n";
  } else {
    const auto& unk = std::get<outcome::Unknown>(result);
    out = "UNKNOWN " + std::to_string(unk.states) + " " + std::to_string(unk.depth) + "\n";
  }
  out += "--- script A\n" + serialize_script(*sa);
  out += "--- script B\n" + serialize_script(*sb);
  return out;
}

// ---------------------------------------------------------------------------
// Macros

/// Where the doomed base gets merged: the surviving base and the word the
/// merging handle ends up carrying.
struct MergeWitness {
  int survivor = 1;
  Word route;
};

struct MacroResult {
  RibbonData data;
  MoveScript script;
};

namespace detail {

struct Traversal {
  int handle;
  Direction direction;
};

// Shortest sequence of handle traversals from `from` to `to` (skipping
// `excluded`) whose concatenated word freely reduces to `target`.
inline std::optional<std::vector<Traversal>> find_route(const RibbonData& data, int from, int to,
                                                        const Word& target, int excluded,
                                                        int max_steps = 6) {
  struct State {
    int base;
    Word word;
    std::vector<Traversal> path;
  };
  const Word goal = free_reduce(target);
  std::vector<State> level{{from, {}, {}}};
  std::map<std::pair<int, std::vector<int>>, bool> seen;
  auto code_of = [](const Word& w) {
    std::vector<int> c;
    for (const auto& l : w) c.push_back(l.code());
    return c;
  };
  seen[{from, {}}] = true;
  for (int step = 0; step <= max_steps; ++step) {
    for (const auto& s : level) {
      if (s.base == to && s.word == goal) return s.path;
    }
    if (step == max_steps) break;
    std::vector<State> next;
    for (const auto& s : level) {
      for (int j = 1; j <= data.handle_count(); ++j) {
        if (j == excluded) continue;
        for (Direction d : {Direction::Forward, Direction::Reverse}) {
          const Handle& h = data.handles[j - 1];
          if (near_base(h, d) != s.base) continue;
          Word w = s.word;
          const Word add = traversed_word(h, d);
          w.insert(w.end(), add.begin(), add.end());
          w = free_reduce(w);
          if (w.size() > goal.size() + 8) continue;
          const int far = far_base(h, d);
          if (!seen.emplace(std::pair{far, code_of(w)}, true).second) continue;
          auto path = s.path;
          path.push_back({j, d});
          next.push_back({far, std::move(w), std::move(path)});
        }
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

inline void run(RibbonData& data, MoveScript& script, const Move& m) {
  data = apply_move(data, m);
  script.moves.push_back(m);
}

inline void run_reduction(RibbonData& data, MoveScript& script) {
  for (const Move& m : reduction_moves(data)) run(data, script, m);
}

}  // namespace detail

/// Merges `doomed` into the witness survivor with one trivial handle: the
/// handle is slid along a route realizing the witness word, crossings of the
/// doomed base are rerouted across it and every other end is slid off. With
/// an empty route the doomed base is then destabilized and a handle left
/// trivial by the merge is removed.
inline MacroResult macro_merge_bases(const RibbonData& input, int doomed, const MergeWitness& witness) {
  require_valid(input);
  if (doomed < 1 || doomed > input.base_count) throw Error("doomed base " + std::to_string(doomed) + " is not a base");
  if (witness.survivor < 1 || witness.survivor > input.base_count || witness.survivor == doomed) {
    throw Error("route malformed: survivor must be a base other than the doomed base");
  }
  for (const auto& l : witness.route) {
    if (l.base == doomed) throw Error("route touches doomed base");
    if (l.base < 1 || l.base > input.base_count) throw Error("route malformed: letter base out of range");
  }

  MacroResult r{input, {}};
  detail::run_reduction(r.data, r.script);
  detail::run(r.data, r.script, move::TrivialHandle{doomed});
  const int merging = r.data.handle_count();

  const auto route = detail::find_route(r.data, doomed, witness.survivor, witness.route, merging);
  if (!route) throw Error("route malformed: no handle path from the doomed base realizes it");
  for (const auto& step : *route) {
    detail::run(r.data, r.script, move::Slide{merging, HandleEnd::End, step.handle, step.direction});
  }
  detail::run_reduction(r.data, r.script);

  // Reroute every crossing of the doomed base across the merging handle.
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 1; j <= r.data.handle_count() && !changed; ++j) {
      if (j == merging) continue;
      const Word& word = r.data.handles[j - 1].word;
      for (int p = 0; p < static_cast<int>(word.size()); ++p) {
        if (word[p].base == doomed) {
          detail::run(r.data, r.script, move::CrossSlide{j, p, merging, Direction::Forward});
          changed = true;
          break;
        }
      }
    }
  }
  detail::run_reduction(r.data, r.script);

  // Slide every other end off the doomed base.
  for (int j = 1; j <= r.data.handle_count(); ++j) {
    if (j == merging) continue;
    if (r.data.handles[j - 1].start == doomed) {
      detail::run(r.data, r.script, move::Slide{j, HandleEnd::Start, merging, Direction::Forward});
    }
    if (r.data.handles[j - 1].end == doomed) {
      detail::run(r.data, r.script, move::Slide{j, HandleEnd::End, merging, Direction::Forward});
    }
  }
  detail::run_reduction(r.data, r.script);

  if (r.data.handles[merging - 1].word.empty()) {
    detail::run(r.data, r.script, move::Destab{doomed});
    for (int j = 1; j <= r.data.handle_count(); ++j) {
      if (is_trivial_handle(r.data.handles[j - 1])) {
        detail::run(r.data, r.script, move::RemoveTrivialHandle{j});
        break;
      }
    }
  }
  return r;
}

/// Adds a trivial handle at template.start and slides its end along existing
/// handles until it runs parallel to `templ`.
inline MacroResult macro_clone_handle(const RibbonData& input, const Handle& templ) {
  require_valid(input);
  auto valid_base = [&](int b) { return b >= 1 && b <= input.base_count; };
  if (!valid_base(templ.start) || !valid_base(templ.end)) throw Error("invalid template: endpoint out of range");
  for (const auto& l : templ.word) {
    if (!valid_base(l.base) || (l.sign != 1 && l.sign != -1)) throw Error("invalid template: bad letter");
  }
  MacroResult r{input, {}};
  detail::run(r.data, r.script, move::TrivialHandle{templ.start});
  const int clone = r.data.handle_count();
  const auto route = detail::find_route(r.data, templ.start, templ.end, templ.word, clone);
  if (!route) throw Error("invalid template: not realizable by slides along existing handles");
  for (const auto& step : *route) {
    detail::run(r.data, r.script, move::Slide{clone, HandleEnd::End, step.handle, step.direction});
  }
  // Bring the clone's word to exactly the template word.
  for (const Move& m : reduction_moves(r.data)) {
    if (std::get<move::CancelDelete>(m).handle == clone) detail::run(r.data, r.script, m);
  }
  return r;
}

/// Search toward the one-base presentation with `budget` trivial handles.
inline SearchOutcome unknotting_drill(const RibbonData& data, int budget, SearchOptions options = {}) {
  options.weak_budget = budget;
  RibbonData target = unknot();
  target.dim = data.dim;
  return search_equiv(data, target, options);
}

}  // namespace ribbonlab
