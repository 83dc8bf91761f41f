#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nielsen/nielsen_moves.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

inline constexpr std::uint64_t default_seed = 20240611;

inline NielsenMove random_move(std::size_t arity, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3), idx(0, static_cast<int>(arity) - 1);
  NielsenMove m;
  m.kind = static_cast<MoveKind>(kind(rng));
  m.i = idx(rng);
  if (m.kind == MoveKind::invert || arity < 2) {
    m.kind = MoveKind::invert;
    return m;
  }
  do m.j = idx(rng);
  while (m.j == m.i);
  return m;
}

struct Scramble {
  Tuple tuple;
  std::vector<NielsenMove> moves;
};

// The standard tuple after a uniform number of random moves in [1, max_moves].
inline Scramble scramble(const SurfaceSpec& s, int max_moves, std::mt19937_64& rng) {
  Scramble out;
  out.tuple = standard_tuple(s);
  std::uniform_int_distribution<int> count(1, max_moves);
  int n = count(rng);
  for (int k = 0; k < n; ++k) {
    NielsenMove m = random_move(out.tuple.size(), rng);
    apply_in_place(out.tuple, m);
    out.moves.push_back(m);
  }
  return out;
}

// A freely reduced word of length in [1, max_len], uniform letters.
inline Word random_word(int rank, int max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, max_len), gen(1, rank), sign(0, 1);
  int n = len(rng);
  Word w;
  while (static_cast<int>(w.size()) < n) {
    int l = gen(rng) * (sign(rng) ? 1 : -1);
    if (!w.empty() && w.back() == -l) continue;
    w.push_back(l);
  }
  return w;
}

// The standard tuple with one random word inserted at a random position.
inline Tuple redundant_tuple(const SurfaceSpec& s, int max_len, std::mt19937_64& rng) {
  Tuple t = standard_tuple(s);
  Word w = random_word(s.rank(), max_len, rng);
  std::uniform_int_distribution<std::size_t> pos(0, t.size());
  t.insert(t.begin() + static_cast<std::ptrdiff_t>(pos(rng)), w);
  return t;
}

}  // namespace nielsen
