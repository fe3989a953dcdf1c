#pragma once

// Named example presentations and seeded random data / move walks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ribbonlab/detail/text.hpp"
#include "ribbonlab/error.hpp"
#include "ribbonlab/moves.hpp"
#include "ribbonlab/ribbon.hpp"

namespace ribbonlab {

inline RibbonData unknot() { return RibbonData{2, 1, {}}; }

/// Two bases, one handle 1 -> 2 crossing base 2 then base 1 negatively.
inline RibbonData spun_trefoil() {
  return RibbonData{2, 2, {Handle{1, 2, {{2, -1}, {1, -1}}}}};
}

/// One base with g trivial handles.
inline RibbonData torus(int g) {
  if (g < 0) throw Error("torus genus must be ≥ 0");
  RibbonData d = unknot();
  for (int i = 0; i < g; ++i) d.handles.push_back(Handle{1, 1, {}});
  return d;
}

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi].
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Seeded connected data: a random spanning tree of handles first, then
/// extra handles, then up to `max_word` random letters per handle.
inline RibbonData random_ribbon(int bases, int handles, int max_word, std::uint64_t seed) {
  if (bases < 1) throw Error("random data needs at least one base");
  if (handles < bases - 1) throw Error("random data needs at least bases-1 handles to be connected");
  if (max_word < 0) throw Error("word length must be ≥ 0");
  detail::Rng rng(seed);
  std::vector<int> label(bases + 1);
  for (int b = 1; b <= bases; ++b) label[b] = b;
  std::shuffle(label.begin() + 1, label.end(), rng.engine());

  RibbonData d{2, bases, {}};
  for (int b = 2; b <= bases; ++b) {
    const int parent = rng.uniform(1, b - 1);
    if (rng.coin()) d.handles.push_back(Handle{label[b], label[parent], {}});
    else d.handles.push_back(Handle{label[parent], label[b], {}});
  }
  while (d.handle_count() < handles) d.handles.push_back(Handle{rng.uniform(1, bases), rng.uniform(1, bases), {}});
  for (auto& h : d.handles) {
    const int len = rng.uniform(0, max_word);
    for (int i = 0; i < len; ++i) h.word.push_back({rng.uniform(1, bases), rng.coin() ? 1 : -1});
  }
  return d;
}

struct Walk {
  RibbonData result;
  MoveScript script;  // replays on the walk's source
  int steps = 0;
};

struct WalkOptions {
  int steps = 6;
  int trivial_handles = 0;  // TrivialHandle steps mixed into the walk
  bool reversible = true;   // only take steps whose inverse is an enumerated move
  bool allow_stab = true;   // false keeps the base count fixed (no stab or destab)
};

/// Random walk over enumerated stable moves, keeping words freely reduced.
/// With `reversible`, a step is kept only if the previous state is again a
/// successor of the new one, so a bidirectional search can undo it.
inline Walk random_walk(const RibbonData& source, const WalkOptions& options, std::uint64_t seed) {
  detail::Rng rng(seed);
  Walk walk{source, {}, 0};
  auto record = [&](const Move& m) {
    walk.result = apply_move(walk.result, m);
    walk.script.moves.push_back(m);
  };
  for (const Move& m : reduction_moves(walk.result)) record(m);

  const int total = options.steps + options.trivial_handles;
  int trivial_left = options.trivial_handles;
  for (int step = 0; step < total; ++step) {
    const int remaining = total - step;
    const bool trivial_now = trivial_left > 0 && rng.uniform(1, remaining) <= trivial_left;
    if (trivial_now) {
      record(move::TrivialHandle{rng.uniform(1, walk.result.base_count)});
      --trivial_left;
      ++walk.steps;
      continue;
    }
    std::vector<Move> candidates;
    for (Move& m : candidate_moves(walk.result, 0)) {
      if (std::holds_alternative<move::RemoveTrivialHandle>(m)) continue;
      if (!options.allow_stab && (std::holds_alternative<move::Stab>(m) || std::holds_alternative<move::Destab>(m))) {
        continue;
      }
      candidates.push_back(std::move(m));
    }
    const std::string before = canonical_key(walk.result);
    bool taken = false;
    for (int attempt = 0; attempt < 32 && !candidates.empty() && !taken; ++attempt) {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(candidates.size()) - 1));
      RibbonData next = free_reduce(apply_move(walk.result, candidates[pick]));
      const std::string after = canonical_key(next);
      if (after == before) continue;
      if (options.reversible) {
        bool back = false;
        for (const auto& s : enumerate_moves(next, 0)) back = back || s.key == before;
        if (!back) continue;
      }
      record(candidates[pick]);
      for (const Move& m : reduction_moves(walk.result)) record(m);
      taken = true;
    }
    if (taken) ++walk.steps;
  }
  return walk;
}

/// Finger move: insert a cancelling pair of `base` into a handle, then
/// reroute one letter of the pair across another handle.
inline bool random_finger_move(RibbonData& data, MoveScript& script, detail::Rng& rng) {
  struct Option {
    int handle;
    int via;
    Direction direction;
  };
  std::vector<Option> options;
  for (int h = 1; h <= data.handle_count(); ++h) {
    for (int v = 1; v <= data.handle_count(); ++v) {
      if (v == h) continue;
      for (Direction d : {Direction::Forward, Direction::Reverse}) {
        if (detail::near_base(data.handles[v - 1], d) != detail::far_base(data.handles[v - 1], d)) {
          options.push_back({h, v, d});
        }
      }
    }
  }
  if (options.empty()) return false;
  const Option o = options[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(options.size()) - 1))];
  const int len = static_cast<int>(data.handles[o.handle - 1].word.size());
  const int position = rng.uniform(0, len);
  const SignedLetter letter{detail::near_base(data.handles[o.via - 1], o.direction), rng.coin() ? 1 : -1};
  const Move insert = move::CancelInsert{o.handle, position, letter};
  const Move reroute = move::CrossSlide{o.handle, position, o.via, o.direction};
  data = apply_move(apply_move(data, insert), reroute);
  script.moves.push_back(insert);
  script.moves.push_back(reroute);
  for (const Move& m : reduction_moves(data)) {
    data = apply_move(data, m);
    script.moves.push_back(m);
  }
  return true;
}

/// Unknot after k stabilizations, then k scramble steps (finger moves and
/// slides) chosen by the seed.
inline Walk stabilized_unknot(int k, std::uint64_t seed) {
  if (k < 0) throw Error("stabilization count must be ≥ 0");
  detail::Rng rng(seed);
  Walk walk{unknot(), {}, 0};
  for (int i = 0; i < k; ++i) {
    const Move m = move::Stab{rng.uniform(1, walk.result.base_count)};
    walk.result = apply_move(walk.result, m);
    walk.script.moves.push_back(m);
    ++walk.steps;
  }
  for (int i = 0; i < k; ++i) {
    if (rng.coin() && random_finger_move(walk.result, walk.script, rng)) {
      ++walk.steps;
      continue;
    }
    WalkOptions slide_only;
    slide_only.steps = 1;
    slide_only.allow_stab = false;
    Walk step = random_walk(walk.result, slide_only, rng.engine()());
    walk.result = step.result;
    walk.script.moves.insert(walk.script.moves.end(), step.script.moves.begin(), step.script.moves.end());
    walk.steps += step.steps;
  }
  return walk;
}

/// Parses a generator spec: unknot, spun-trefoil, torus:<g>,
/// stabilized:<k>:<seed>, random:<b>:<h>:<len>:<seed>.
inline RibbonData generate(std::string_view spec) {
  std::vector<std::string_view> parts;
  for (std::size_t pos = 0;;) {
    const auto colon = spec.find(':', pos);
    parts.push_back(spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  auto malformed = [&]() { return Error("malformed generator spec '" + std::string(spec) + "'"); };
  auto number = [&](std::size_t i) {
    const auto v = detail::to_integer(parts[i]);
    if (!v || *v < 0 || *v > 1'000'000'000) throw malformed();
    return *v;
  };
  const std::string_view name = parts[0];
  if (name == "unknot" && parts.size() == 1) return unknot();
  if (name == "spun-trefoil" && parts.size() == 1) return spun_trefoil();
  if (name == "torus" && parts.size() == 2) return torus(static_cast<int>(number(1)));
  if (name == "stabilized" && parts.size() == 3) {
    return stabilized_unknot(static_cast<int>(number(1)), static_cast<std::uint64_t>(number(2))).result;
  }
  if (name == "random" && parts.size() == 5) {
    return random_ribbon(static_cast<int>(number(1)), static_cast<int>(number(2)), static_cast<int>(number(3)),
                         static_cast<std::uint64_t>(number(4)));
  }
  throw malformed();
}

}  // namespace ribbonlab
