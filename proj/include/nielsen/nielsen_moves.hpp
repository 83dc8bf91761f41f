#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

enum class MoveKind { swap, invert, left_multiply, right_multiply };

// swap(i,j); invert(i); left_multiply: t_i <- t_j t_i; right_multiply: t_i <- t_i t_j.
struct NielsenMove {
  MoveKind kind = MoveKind::swap;
  int i = 0;
  int j = 0;

  bool operator==(const NielsenMove&) const = default;
};

inline std::string kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::swap: return "swap";
    case MoveKind::invert: return "invert";
    case MoveKind::left_multiply: return "left_multiply";
    case MoveKind::right_multiply: return "right_multiply";
  }
  return "?";
}

inline MoveKind kind_from_name(const std::string& s) {
  if (s == "swap") return MoveKind::swap;
  if (s == "invert") return MoveKind::invert;
  if (s == "left_multiply") return MoveKind::left_multiply;
  if (s == "right_multiply") return MoveKind::right_multiply;
  throw std::invalid_argument("unknown move kind '" + s + "'");
}

using Tuple = std::vector<Word>;

struct GeneratingTuple {
  Tuple words;
  SurfaceSpec ambient;
};

inline bool move_in_range(const NielsenMove& m, std::size_t arity) {
  int n = static_cast<int>(arity);
  if (m.i < 0 || m.i >= n) return false;
  if (m.kind == MoveKind::invert) return true;
  return m.j >= 0 && m.j < n && m.i != m.j;
}

inline void apply_in_place(Tuple& t, const NielsenMove& m) {
  if (!move_in_range(m, t.size())) throw std::out_of_range("nielsen move index out of range");
  switch (m.kind) {
    case MoveKind::swap: std::swap(t[m.i], t[m.j]); break;
    case MoveKind::invert: t[m.i] = inverse(free_reduce(t[m.i])); break;
    case MoveKind::left_multiply: t[m.i] = concat(t[m.j], t[m.i]); break;
    case MoveKind::right_multiply: t[m.i] = concat(t[m.i], t[m.j]); break;
  }
}

inline Tuple apply_nielsen(Tuple t, const NielsenMove& m) {
  for (Word& w : t) w = free_reduce(w);
  apply_in_place(t, m);
  return t;
}

inline GeneratingTuple apply_nielsen(const GeneratingTuple& t, const NielsenMove& m) {
  return {apply_nielsen(t.words, m), t.ambient};
}

inline Tuple apply_all(Tuple t, const std::vector<NielsenMove>& moves) {
  for (Word& w : t) w = free_reduce(w);
  for (const NielsenMove& m : moves) apply_in_place(t, m);
  return t;
}

// Moves undoing m.
inline std::vector<NielsenMove> inverse_moves(const NielsenMove& m) {
  switch (m.kind) {
    case MoveKind::swap:
    case MoveKind::invert: return {m};
    default: return {{MoveKind::invert, m.j, 0}, m, {MoveKind::invert, m.j, 0}};
  }
}

inline std::vector<NielsenMove> inverse_moves(const std::vector<NielsenMove>& ms) {
  std::vector<NielsenMove> out;
  for (auto it = ms.rbegin(); it != ms.rend(); ++it) {
    auto inv = inverse_moves(*it);
    out.insert(out.end(), inv.begin(), inv.end());
  }
  return out;
}

// t_i <- t_i t_j^e or t_j^e t_i, as elementary moves.
inline std::vector<NielsenMove> multiply_moves(int i, int j, int e, bool left) {
  NielsenMove core{left ? MoveKind::left_multiply : MoveKind::right_multiply, i, j};
  if (e > 0) return {core};
  return {{MoveKind::invert, j, 0}, core, {MoveKind::invert, j, 0}};
}

class NielsenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Order key on words: length, then the lesser and greater of the left halves
// of w and w^-1.
inline std::vector<int> half_key(const Word& w) {
  auto left_half = [](const Word& x) { return Word(x.begin(), x.begin() + (x.size() + 1) / 2); };
  Word a = left_half(w), b = left_half(inverse(w));
  if (b < a) std::swap(a, b);
  std::vector<int> key{static_cast<int>(w.size())};
  key.insert(key.end(), a.begin(), a.end());
  key.push_back(0);
  key.insert(key.end(), b.begin(), b.end());
  return key;
}

inline std::size_t total_length(const Tuple& t) {
  std::size_t n = 0;
  for (const Word& w : t) n += w.size();
  return n;
}

inline std::vector<std::vector<int>> tuple_key(const Tuple& t) {
  std::vector<std::vector<int>> keys;
  keys.push_back({static_cast<int>(total_length(t))});
  std::vector<std::vector<int>> ws;
  for (const Word& w : t) ws.push_back(half_key(w));
  std::sort(ws.begin(), ws.end(), std::greater<>());
  keys.insert(keys.end(), ws.begin(), ws.end());
  return keys;
}

struct Candidate {
  std::vector<NielsenMove> moves;
  Tuple result;
};

inline std::vector<Candidate> products(const Tuple& t) {
  std::vector<Candidate> out;
  int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || t[j].empty()) continue;
      for (int e : {1, -1})
        for (bool left : {false, true}) {
          Candidate c{multiply_moves(i, j, e, left), t};
          Word f = e > 0 ? t[j] : inverse(t[j]);
          c.result[i] = left ? concat(f, t[i]) : concat(t[i], f);
          out.push_back(std::move(c));
        }
    }
  return out;
}

}  // namespace detail

// Normalizes a tuple of single letters (and empties) to the order 1, 2, ...,
// with empties last.  Returns false if the tuple is not of that shape.
inline bool sort_letters(Tuple& t, std::vector<NielsenMove>& moves) {
  int n = static_cast<int>(t.size());
  for (const Word& w : t)
    if (w.size() > 1) return false;
  for (int pos = 0; pos < n; ++pos) {
    int best = -1;
    for (int k = pos; k < n; ++k) {
      if (t[k].empty()) continue;
      if (best < 0 || std::abs(t[k][0]) < std::abs(t[best][0])) best = k;
    }
    if (best < 0) break;
    if (best != pos) {
      moves.push_back({MoveKind::swap, pos, best});
      std::swap(t[pos], t[best]);
    }
    if (t[pos][0] < 0) {
      moves.push_back({MoveKind::invert, pos, 0});
      t[pos] = inverse(t[pos]);
    }
  }
  return true;
}

// Nielsen reduction in the free group: greedy descent in (total length,
// half-word keys), with a bounded breadth-first search on plateaus.  Stops at
// an empty entry or when every entry is a single letter.
inline std::vector<NielsenMove> nielsen_reduce(Tuple& t, std::size_t plateau_budget = 20000) {
  std::vector<NielsenMove> moves;
  for (Word& w : t) w = free_reduce(w);
  auto done = [](const Tuple& x) {
    bool letters = true;
    std::vector<int> gens;
    for (const Word& w : x) {
      if (w.empty()) return true;
      if (w.size() != 1) letters = false;
      else gens.push_back(generator_of(w[0]));
    }
    std::sort(gens.begin(), gens.end());
    return letters && std::adjacent_find(gens.begin(), gens.end()) == gens.end();
  };
  while (!done(t)) {
    auto key = detail::tuple_key(t);
    std::optional<detail::Candidate> best;
    std::vector<std::vector<int>> best_key;
    for (auto& c : detail::products(t)) {
      auto k = detail::tuple_key(c.result);
      if (k < key && (!best || k < best_key)) {
        best_key = k;
        best = std::move(c);
      }
    }
    if (best) {
      moves.insert(moves.end(), best->moves.begin(), best->moves.end());
      t = std::move(best->result);
      continue;
    }
    // Plateau: search length-preserving sequences for any strict decrease.
    std::map<Tuple, std::vector<NielsenMove>> seen{{t, {}}};
    std::deque<Tuple> frontier{t};
    bool escaped = false;
    while (!frontier.empty() && !escaped) {
      Tuple cur = frontier.front();
      frontier.pop_front();
      for (auto& c : detail::products(cur)) {
        if (seen.count(c.result)) continue;
        auto path = seen[cur];
        path.insert(path.end(), c.moves.begin(), c.moves.end());
        auto k = detail::tuple_key(c.result);
        if (k < key) {
          moves.insert(moves.end(), path.begin(), path.end());
          t = c.result;
          escaped = true;
          break;
        }
        if (detail::total_length(c.result) == detail::total_length(t)) {
          if (seen.size() >= plateau_budget) throw NielsenError("nielsen_reduce: plateau budget exceeded");
          seen.emplace(c.result, std::move(path));
          frontier.push_back(std::move(c.result));
        }
      }
    }
    if (!escaped) throw NielsenError("nielsen_reduce: stuck (tuple does not freely generate a free factor)");
  }
  return moves;
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dedup key in the surface group: exact normal forms where available,
// otherwise the Dehn-reduced word.
inline std::vector<long long> surface_key(const Word& w, const SurfaceSpec& s) {
  Word r = free_reduce(w);
  if (s.orientable && s.genus == 1) return exponent_sums(r, 2);
  if (!s.orientable && s.genus == 2) {
    auto [m, n] = klein_normal_form(r);
    return {m, n};
  }
  if (s.rank() <= 1) return {static_cast<long long>(r.size() % 2)};
  DehnRewriter rw(standard_presentation(s).relator, s.rank());
  Word d = rw.reduce(r);
  return std::vector<long long>(d.begin(), d.end());
}

// Breadth-first search over elementary moves from t1 for a tuple equal to t2
// entrywise in the surface group.
inline std::optional<std::vector<NielsenMove>> brute_force_nielsen(const GeneratingTuple& t1, const GeneratingTuple& t2,
                                                                 int depth, std::size_t budget = 200000) {
  if (t1.words.size() != t2.words.size()) throw std::invalid_argument("brute_force_nielsen: arity differs");
  const SurfaceSpec& s = t1.ambient;
  int n = static_cast<int>(t1.words.size());
  auto is_target = [&](const Tuple& t) {
    for (int i = 0; i < n; ++i)
      if (!words_equal(t[i], t2.words[i], s)) return false;
    return true;
  };
  auto key_of = [&](const Tuple& t) {
    std::vector<std::vector<long long>> k;
    for (const Word& w : t) k.push_back(surface_key(w, s));
    return k;
  };
  Tuple start = t1.words;
  for (Word& w : start) w = free_reduce(w);
  if (is_target(start)) return std::vector<NielsenMove>{};
  std::vector<NielsenMove> all;
  for (int i = 0; i < n; ++i) {
    all.push_back({MoveKind::invert, i, 0});
    for (int j = 0; j < n; ++j)
      if (i != j) {
        if (i < j) all.push_back({MoveKind::swap, i, j});
        all.push_back({MoveKind::left_multiply, i, j});
        all.push_back({MoveKind::right_multiply, i, j});
      }
  }
  std::map<std::vector<std::vector<long long>>, int> seen{{key_of(start), -1}};
  struct Node {
    Tuple t;
    int parent;
    NielsenMove move;
  };
  std::vector<Node> nodes{{start, -1, {}}};
  std::vector<int> layer{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int id : layer)
      for (const NielsenMove& m : all) {
        Tuple t = nodes[id].t;
        apply_in_place(t, m);
        if (!seen.emplace(key_of(t), id).second) continue;
        if (nodes.size() >= budget) throw BudgetExceeded("brute_force_nielsen: state budget exceeded");
        nodes.push_back({t, id, m});
        int nid = static_cast<int>(nodes.size()) - 1;
        if (is_target(t)) {
          std::vector<NielsenMove> path;
          for (int k = nid; nodes[k].parent >= 0; k = nodes[k].parent) path.push_back(nodes[k].move);
          std::reverse(path.begin(), path.end());
          return path;
        }
        next.push_back(nid);
      }
    layer = std::move(next);
  }
  return std::nullopt;
}

}  // namespace nielsen
