#pragma once

// Elementary moves on ribbon data, move scripts and neighbour enumeration.
//
// Handles are 1-indexed in stored order, word positions are 0-indexed.
// A traversal of a handle runs from its near base to its far base: forward
// traversals go start -> end and read the word as stored, reverse traversals
// go end -> start and read reverse_and_flip(word).

#include <algorithm>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ribbonlab/detail/text.hpp"
#include "ribbonlab/error.hpp"
#include "ribbonlab/ribbon.hpp"

namespace ribbonlab {

enum class HandleEnd { Start, End };
enum class Direction { Forward, Reverse };

inline Direction opposite(Direction d) noexcept {
  return d == Direction::Forward ? Direction::Reverse : Direction::Forward;
}

namespace move {

/// New base |B|+1 with an empty-word handle from it to `target`.
struct Stab {
  int target;
  friend bool operator==(const Stab&, const Stab&) = default;
};
struct Destab {
  int base;
  friend bool operator==(const Destab&, const Destab&) = default;
};
struct CancelInsert {
  int handle;
  int position;
  SignedLetter letter;
  friend bool operator==(const CancelInsert&, const CancelInsert&) = default;
};
struct CancelDelete {
  int handle;
  int position;
  friend bool operator==(const CancelDelete&, const CancelDelete&) = default;
};
struct Slide {
  int handle;
  HandleEnd end;
  int along;
  Direction direction;
  friend bool operator==(const Slide&, const Slide&) = default;
};
struct CrossSlide {
  int handle;
  int position;
  int via;
  Direction direction;
  friend bool operator==(const CrossSlide&, const CrossSlide&) = default;
};
struct TrivialHandle {
  int base;
  friend bool operator==(const TrivialHandle&, const TrivialHandle&) = default;
};
struct RemoveTrivialHandle {
  int handle;
  friend bool operator==(const RemoveTrivialHandle&, const RemoveTrivialHandle&) = default;
};
struct ReverseHandle {
  int handle;
  friend bool operator==(const ReverseHandle&, const ReverseHandle&) = default;
};

}  // namespace move

using Move = std::variant<move::Stab, move::Destab, move::CancelInsert, move::CancelDelete, move::Slide,
                          move::CrossSlide, move::TrivialHandle, move::RemoveTrivialHandle,
                          move::ReverseHandle>;

struct MoveScript {
  std::vector<Move> moves;

  int trivial_added() const {
    return static_cast<int>(std::count_if(moves.begin(), moves.end(), [](const Move& m) {
      return std::holds_alternative<move::TrivialHandle>(m);
    }));
  }
  int trivial_removed() const {
    return static_cast<int>(std::count_if(moves.begin(), moves.end(), [](const Move& m) {
      return std::holds_alternative<move::RemoveTrivialHandle>(m);
    }));
  }
  /// Net trivial handles attached by the script.
  int weak_count() const { return trivial_added() - trivial_removed(); }

  bool empty() const noexcept { return moves.empty(); }
  std::size_t size() const noexcept { return moves.size(); }

  friend bool operator==(const MoveScript&, const MoveScript&) = default;
};

/// A move error tagged with its position in a script (0-based).
class ScriptError : public MoveError {
 public:
  ScriptError(std::size_t index, const std::string& message)
      : MoveError("move " + std::to_string(index + 1) + ": " + message), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

namespace detail {

inline void check_base(const RibbonData& d, int b, const char* what) {
  if (b < 1 || b > d.base_count) throw MoveError(std::string(what) + " " + std::to_string(b) + " is not a base");
}

inline void check_handle(const RibbonData& d, int h, const char* what = "handle") {
  if (h < 1 || h > d.handle_count()) {
    throw MoveError(std::string(what) + " " + std::to_string(h) + " does not exist");
  }
}

inline int near_base(const Handle& h, Direction d) { return d == Direction::Forward ? h.start : h.end; }
inline int far_base(const Handle& h, Direction d) { return d == Direction::Forward ? h.end : h.start; }
inline Word traversed_word(const Handle& h, Direction d) {
  return d == Direction::Forward ? h.word : reverse_and_flip(h.word);
}

inline int end_degree(const RibbonData& d, int b) {
  int degree = 0;
  for (const auto& h : d.handles) degree += (h.start == b) + (h.end == b);
  return degree;
}

inline bool occurs_in_words(const RibbonData& d, int b) {
  for (const auto& h : d.handles) {
    for (const auto& l : h.word) {
      if (l.base == b) return true;
    }
  }
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual moves

inline RibbonData apply_stabilize(const RibbonData& data, int target) {
  detail::check_base(data, target, "target");
  RibbonData out = data;
  out.base_count += 1;
  out.handles.push_back(Handle{out.base_count, target, {}});
  return out;
}

inline RibbonData apply_destabilize(const RibbonData& data, int base) {
  detail::check_base(data, base, "base");
  if (detail::end_degree(data, base) != 1) throw MoveError("degree ≠ 1");
  if (detail::occurs_in_words(data, base)) throw MoveError("base occurs in handle words");
  auto it = std::find_if(data.handles.begin(), data.handles.end(),
                         [&](const Handle& h) { return h.start == base || h.end == base; });
  if (!it->word.empty()) throw MoveError("incident handle word is not empty");

  RibbonData out;
  out.dim = data.dim;
  out.base_count = data.base_count - 1;
  auto reindex = [base](int b) { return b > base ? b - 1 : b; };
  for (auto h = data.handles.begin(); h != data.handles.end(); ++h) {
    if (h == it) continue;
    Handle moved{reindex(h->start), reindex(h->end), h->word};
    for (auto& l : moved.word) l.base = reindex(l.base);
    out.handles.push_back(std::move(moved));
  }
  return out;
}

inline RibbonData apply_cancel_insert(const RibbonData& data, int handle, int position, SignedLetter letter) {
  detail::check_handle(data, handle);
  detail::check_base(data, letter.base, "letter base");
  if (letter.sign != 1 && letter.sign != -1) throw MoveError("letter sign must be +1 or -1");
  const Word& word = data.handles[handle - 1].word;
  if (position < 0 || position > static_cast<int>(word.size())) {
    throw MoveError("bad position " + std::to_string(position));
  }
  RibbonData out = data;
  auto& target = out.handles[handle - 1].word;
  target.insert(target.begin() + position, {letter, letter.inverse()});
  return out;
}

inline RibbonData apply_cancel_delete(const RibbonData& data, int handle, int position) {
  detail::check_handle(data, handle);
  const Word& word = data.handles[handle - 1].word;
  if (position < 0 || position + 1 >= static_cast<int>(word.size())) {
    throw MoveError("bad position " + std::to_string(position));
  }
  if (word[position + 1] != word[position].inverse()) {
    throw MoveError("letters at " + std::to_string(position) + " do not form a cancelling pair");
  }
  RibbonData out = data;
  auto& target = out.handles[handle - 1].word;
  target.erase(target.begin() + position, target.begin() + position + 2);
  return out;
}

/// Slides one end of `handle` across `along`, from along's near base to its far base.
inline RibbonData apply_slide(const RibbonData& data, int handle, HandleEnd end, int along, Direction direction) {
  detail::check_handle(data, handle);
  detail::check_handle(data, along, "along handle");
  if (handle == along) throw MoveError("self-slide");
  const Handle& path = data.handles[along - 1];
  const Handle& slider = data.handles[handle - 1];
  const int attached = end == HandleEnd::Start ? slider.start : slider.end;
  if (attached != detail::near_base(path, direction)) {
    throw MoveError("end not co-based with the starting side of the along handle");
  }
  const Word w = detail::traversed_word(path, direction);
  RibbonData out = data;
  Handle& moved = out.handles[handle - 1];
  if (end == HandleEnd::Start) {
    Word word = reverse_and_flip(w);
    word.insert(word.end(), moved.word.begin(), moved.word.end());
    moved.word = std::move(word);
    moved.start = detail::far_base(path, direction);
  } else {
    moved.word.insert(moved.word.end(), w.begin(), w.end());
    moved.end = detail::far_base(path, direction);
  }
  return out;
}

/// Reroutes one crossing: (b, e) becomes w (b', e) reverse_and_flip(w) where
/// `via` traversed in `direction` runs from b to b' with word w.
inline RibbonData apply_cross_slide(const RibbonData& data, int handle, int position, int via, Direction direction) {
  detail::check_handle(data, handle);
  detail::check_handle(data, via, "via handle");
  if (handle == via) throw MoveError("via handle equals the rerouted handle");
  const Word& word = data.handles[handle - 1].word;
  if (position < 0 || position >= static_cast<int>(word.size())) {
    throw MoveError("bad position " + std::to_string(position));
  }
  const Handle& path = data.handles[via - 1];
  const SignedLetter crossing = word[position];
  if (crossing.base != detail::near_base(path, direction)) {
    throw MoveError("letter base does not match the near end of the via handle");
  }
  const Word w = detail::traversed_word(path, direction);
  Word replacement = w;
  replacement.push_back({detail::far_base(path, direction), crossing.sign});
  const Word back = reverse_and_flip(w);
  replacement.insert(replacement.end(), back.begin(), back.end());

  RibbonData out = data;
  auto& target = out.handles[handle - 1].word;
  target.erase(target.begin() + position);
  target.insert(target.begin() + position, replacement.begin(), replacement.end());
  return out;
}

inline RibbonData apply_trivial_handle(const RibbonData& data, int base) {
  detail::check_base(data, base, "base");
  RibbonData out = data;
  out.handles.push_back(Handle{base, base, {}});
  return out;
}

inline bool is_trivial_handle(const Handle& h) { return h.start == h.end && h.word.empty(); }

inline RibbonData remove_trivial_handle(const RibbonData& data, int handle) {
  detail::check_handle(data, handle);
  if (!is_trivial_handle(data.handles[handle - 1])) throw MoveError("handle is not trivial");
  RibbonData out = data;
  out.handles.erase(out.handles.begin() + (handle - 1));
  return out;
}

inline RibbonData reverse_handle(const RibbonData& data, int handle) {
  detail::check_handle(data, handle);
  RibbonData out = data;
  Handle& h = out.handles[handle - 1];
  std::swap(h.start, h.end);
  h.word = reverse_and_flip(h.word);
  return out;
}

inline RibbonData apply_move(const RibbonData& data, const Move& m) {
  return std::visit(
      [&](const auto& mv) -> RibbonData {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, move::Stab>) return apply_stabilize(data, mv.target);
        else if constexpr (std::is_same_v<T, move::Destab>) return apply_destabilize(data, mv.base);
        else if constexpr (std::is_same_v<T, move::CancelInsert>) return apply_cancel_insert(data, mv.handle, mv.position, mv.letter);
        else if constexpr (std::is_same_v<T, move::CancelDelete>) return apply_cancel_delete(data, mv.handle, mv.position);
        else if constexpr (std::is_same_v<T, move::Slide>) return apply_slide(data, mv.handle, mv.end, mv.along, mv.direction);
        else if constexpr (std::is_same_v<T, move::CrossSlide>) return apply_cross_slide(data, mv.handle, mv.position, mv.via, mv.direction);
        else if constexpr (std::is_same_v<T, move::TrivialHandle>) return apply_trivial_handle(data, mv.base);
        else if constexpr (std::is_same_v<T, move::RemoveTrivialHandle>) return remove_trivial_handle(data, mv.handle);
        else return reverse_handle(data, mv.handle);
      },
      m);
}

inline RibbonData apply_script(const RibbonData& data, const MoveScript& script) {
  RibbonData current = data;
  for (std::size_t i = 0; i < script.moves.size(); ++i) {
    try {
      current = apply_move(current, script.moves[i]);
    } catch (const MoveError& e) {
      throw ScriptError(i, e.what());
    }
  }
  return current;
}

/// CancelDelete moves that freely reduce every word, leftmost pair first.
inline std::vector<Move> reduction_moves(const RibbonData& data) {
  std::vector<Move> out;
  for (std::size_t j = 0; j < data.handles.size(); ++j) {
    Word stack;
    for (const auto& letter : data.handles[j].word) {
      if (!stack.empty() && stack.back() == letter.inverse()) {
        stack.pop_back();
        out.push_back(move::CancelDelete{static_cast<int>(j) + 1, static_cast<int>(stack.size())});
      } else {
        stack.push_back(letter);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Script text format

inline std::string to_string(const Move& m) {
  auto dir = [](Direction d) { return d == Direction::Forward ? "fwd" : "rev"; };
  return std::visit(
      [&](const auto& mv) -> std::string {
        using T = std::decay_t<decltype(mv)>;
        using std::to_string;
        if constexpr (std::is_same_v<T, move::Stab>) return "stab " + to_string(mv.target);
        else if constexpr (std::is_same_v<T, move::Destab>) return "destab " + to_string(mv.base);
        else if constexpr (std::is_same_v<T, move::CancelInsert>)
          return "ins " + to_string(mv.handle) + " " + to_string(mv.position) + " " + to_string(mv.letter.code());
        else if constexpr (std::is_same_v<T, move::CancelDelete>)
          return "del " + to_string(mv.handle) + " " + to_string(mv.position);
        else if constexpr (std::is_same_v<T, move::Slide>)
          return "slide " + to_string(mv.handle) + (mv.end == HandleEnd::Start ? " start " : " end ") +
                 to_string(mv.along) + " " + dir(mv.direction);
        else if constexpr (std::is_same_v<T, move::CrossSlide>)
          return "xslide " + to_string(mv.handle) + " " + to_string(mv.position) + " " + to_string(mv.via) + " " +
                 dir(mv.direction);
        else if constexpr (std::is_same_v<T, move::TrivialHandle>) return "trivh " + to_string(mv.base);
        else if constexpr (std::is_same_v<T, move::RemoveTrivialHandle>) return "untrivh " + to_string(mv.handle);
        else return "revh " + to_string(mv.handle);
      },
      m);
}

inline std::string serialize_script(const MoveScript& script) {
  std::string out;
  for (const auto& m : script.moves) {
    out += to_string(m);
    out += '\n';
  }
  return out;
}

inline MoveScript parse_script(std::string_view text) {
  MoveScript script;
  for (const auto& line : detail::tokenize_lines(text)) {
    const std::string_view op = line.tokens[0];
    auto arity = [&](std::size_t n) {
      if (line.tokens.size() != n + 1) {
        throw ParseError(line.number, "'" + std::string(op) + "' takes " + std::to_string(n) + " arguments");
      }
    };
    auto integer = [&](std::size_t i) { return static_cast<int>(detail::expect_integer(line, i)); };
    auto direction = [&](std::size_t i) {
      if (line.tokens[i] == "fwd") return Direction::Forward;
      if (line.tokens[i] == "rev") return Direction::Reverse;
      throw ParseError(line.number, "expected fwd or rev");
    };
    if (op == "stab") {
      arity(1);
      script.moves.push_back(move::Stab{integer(1)});
    } else if (op == "destab") {
      arity(1);
      script.moves.push_back(move::Destab{integer(1)});
    } else if (op == "ins") {
      arity(3);
      const int code = integer(3);
      if (code == 0) throw ParseError(line.number, "letter 0 is not a signed base index");
      script.moves.push_back(move::CancelInsert{integer(1), integer(2), SignedLetter::from_code(code)});
    } else if (op == "del") {
      arity(2);
      script.moves.push_back(move::CancelDelete{integer(1), integer(2)});
    } else if (op == "slide") {
      arity(4);
      HandleEnd end;
      if (line.tokens[2] == "start") end = HandleEnd::Start;
      else if (line.tokens[2] == "end") end = HandleEnd::End;
      else throw ParseError(line.number, "expected start or end");
      script.moves.push_back(move::Slide{integer(1), end, integer(3), direction(4)});
    } else if (op == "xslide") {
      arity(4);
      script.moves.push_back(move::CrossSlide{integer(1), integer(2), integer(3), direction(4)});
    } else if (op == "trivh") {
      arity(1);
      script.moves.push_back(move::TrivialHandle{integer(1)});
    } else if (op == "untrivh") {
      arity(1);
      script.moves.push_back(move::RemoveTrivialHandle{integer(1)});
    } else if (op == "revh") {
      arity(1);
      script.moves.push_back(move::ReverseHandle{integer(1)});
    } else {
      throw ParseError(line.number, "unknown move '" + std::string(op) + "'");
    }
  }
  return script;
}

// ---------------------------------------------------------------------------
// Neighbour enumeration

struct Successor {
  Move move;
  RibbonData result;  // canonical form
  std::string key;    // serialize(result)
};

/// Candidate moves, in generation order, before application. Inverse
/// cross-slides are only listed where the full w (b', e) w^-1 pattern is
/// present, so applying them collapses the pattern back to one letter.
inline std::vector<Move> candidate_moves(const RibbonData& data, int weak_budget) {
  std::vector<Move> out;
  const int n = data.base_count;
  const int hc = data.handle_count();

  for (int b = 1; b <= n; ++b) {
    if (detail::end_degree(data, b) != 1 || detail::occurs_in_words(data, b)) continue;
    for (const auto& h : data.handles) {
      if ((h.start == b || h.end == b) && h.word.empty()) out.push_back(move::Destab{b});
    }
  }
  for (int j = 1; j <= hc; ++j) {
    if (is_trivial_handle(data.handles[j - 1])) out.push_back(move::RemoveTrivialHandle{j});
  }
  for (int j = 1; j <= hc; ++j) {
    const Handle& slider = data.handles[j - 1];
    for (HandleEnd end : {HandleEnd::Start, HandleEnd::End}) {
      const int attached = end == HandleEnd::Start ? slider.start : slider.end;
      for (int a = 1; a <= hc; ++a) {
        if (a == j) continue;
        for (Direction d : {Direction::Forward, Direction::Reverse}) {
          if (detail::near_base(data.handles[a - 1], d) == attached) out.push_back(move::Slide{j, end, a, d});
        }
      }
    }
  }
  for (int j = 1; j <= hc; ++j) {
    const Word& word = data.handles[j - 1].word;
    const int len = static_cast<int>(word.size());
    for (int p = 0; p < len; ++p) {
      for (int v = 1; v <= hc; ++v) {
        if (v == j) continue;
        for (Direction d : {Direction::Forward, Direction::Reverse}) {
          const Handle& path = data.handles[v - 1];
          if (detail::far_base(path, d) != word[p].base) continue;
          const Word w = detail::traversed_word(path, d);
          const int k = static_cast<int>(w.size());
          if (p - k < 0 || p + k >= len) continue;
          bool match = true;
          for (int i = 0; i < k && match; ++i) {
            match = word[p - k + i] == w[i] && word[p + 1 + i] == w[k - 1 - i].inverse();
          }
          if (match) out.push_back(move::CrossSlide{j, p, v, opposite(d)});
        }
      }
    }
  }
  for (int b = 1; b <= n; ++b) out.push_back(move::Stab{b});
  if (weak_budget > 0) {
    for (int b = 1; b <= n; ++b) out.push_back(move::TrivialHandle{b});
  }
  return out;
}

/// Successors of `data` under Destab, RemoveTrivialHandle, Slide, collapsing
/// canonical and unique, sorted by key.
/// canonical, deduplicated and sorted by key.
inline std::vector<Successor> enumerate_moves(const RibbonData& data, int weak_budget) {
  std::vector<Successor> out;
  std::unordered_set<std::string> seen;
  for (Move& m : candidate_moves(data, weak_budget)) {
    RibbonData result = canonical_form(apply_move(data, m));
    std::string key = serialize(result);
    if (seen.insert(key).second) out.push_back(Successor{std::move(m), std::move(result), std::move(key)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Successor& a, const Successor& b) { return a.key < b.key; });
  return out;
}

}  // namespace ribbonlab
