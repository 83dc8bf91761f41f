#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nielsen/words.hpp"

namespace nielsen {

struct SurfaceSpec {
  bool orientable = true;
  int genus = 1;

  int euler_characteristic() const { return orientable ? 2 - 2 * genus : 2 - genus; }
  // Number of generators of the standard presentation, 1 - chi for chi <= 0.
  int rank() const { return orientable ? 2 * genus : genus; }
  bool admissible() const { return euler_characteristic() <= 0; }
  bool operator==(const SurfaceSpec&) const = default;
};

struct Presentation {
  std::vector<std::string> generators;
  Word relator;

  Alphabet alphabet() const { return Alphabet(generators); }
};

inline Presentation standard_presentation(const SurfaceSpec& s) {
  if (s.genus < 0) throw std::invalid_argument("negative genus");
  Presentation p;
  if (s.orientable) {
    for (int i = 1; i <= s.genus; ++i) {
      p.generators.push_back("a" + std::to_string(i));
      p.generators.push_back("b" + std::to_string(i));
      int a = 2 * i - 1, b = 2 * i;
      p.relator.insert(p.relator.end(), {a, b, -a, -b});
    }
  } else {
    for (int i = 1; i <= s.genus; ++i) {
      p.generators.push_back("a" + std::to_string(i));
      p.relator.insert(p.relator.end(), {i, i});
    }
  }
  return p;
}

inline std::vector<Word> standard_tuple(const SurfaceSpec& s) {
  std::vector<Word> t;
  for (int i = 1; i <= s.rank(); ++i) t.push_back({i});
  return t;
}

inline void check_letters(const Word& w, int rank) {
  for (int l : w)
    if (l == 0 || std::abs(l) > rank) throw std::invalid_argument("word uses a generator outside the presentation");
}

inline std::vector<long long> exponent_sums(const Word& w, int rank) {
  std::vector<long long> v(rank, 0);
  for (int l : w) v[generator_of(l)] += l > 0 ? 1 : -1;
  return v;
}

// Klein bottle via y = a1 a2, t = a1: every element is y^m t^n uniquely and
// t y t^-1 = y^-1.
inline std::pair<long long, long long> klein_normal_form(const Word& w) {
  long long m = 0, n = 0;
  auto mul_t = [&](int e) { n += e; };
  auto mul_y = [&](int e) { m += (n % 2 == 0) ? e : -e; };
  for (int l : w) {
    switch (l) {
      case 1: mul_t(1); break;
      case -1: mul_t(-1); break;
      case 2: mul_t(-1); mul_y(1); break;           // a2 = t^-1 y
      case -2: mul_y(-1); mul_t(1); break;          // a2^-1 = y^-1 t
      default: throw std::invalid_argument("klein_normal_form: bad letter");
    }
  }
  return {m, n};
}

// Cyclic permutations of r and r^-1, grouped by first letter.
class DehnRewriter {
 public:
  explicit DehnRewriter(const Word& relator, int rank) : length_(relator.size()), by_first_(2 * rank + 1) {
    for (const Word& base : {relator, inverse(relator)})
      for (std::size_t k = 0; k < base.size(); ++k) {
        Word r = rotate_word(base, k);
        by_first_[slot(r[0])].push_back(r);
      }
  }

  // Replaces subwords longer than half a relator until none remain.
  Word reduce(Word w) const {
    w = free_reduce(w);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < w.size() && !changed; ++i)
        for (const Word& r : by_first_[slot(w[i])]) {
          std::size_t k = 0;
          while (k < r.size() && i + k < w.size() && w[i + k] == r[k]) ++k;
          if (2 * k <= length_) continue;
          Word rest(r.begin() + k, r.end());
          Word next(w.begin(), w.begin() + i);
          Word inv = inverse(rest);
          next.insert(next.end(), inv.begin(), inv.end());
          next.insert(next.end(), w.begin() + i + k, w.end());
          w = free_reduce(next);
          changed = true;
          break;
        }
    }
    return w;
  }

 private:
  std::size_t slot(int letter) const { return static_cast<std::size_t>(letter + (by_first_.size() - 1) / 2); }
  std::size_t length_;
  std::vector<std::vector<Word>> by_first_;
};

inline bool word_equals_identity(const Word& w, const SurfaceSpec& s) {
  int rank = s.rank();
  check_letters(w, rank);
  Word r = free_reduce(w);
  if (r.empty()) return true;
  if (rank == 0) return true;
  if (!s.orientable && s.genus == 1) return r.size() % 2 == 0;
  if (s.orientable && s.genus == 1) {
    for (long long e : exponent_sums(r, 2))
      if (e != 0) return false;
    return true;
  }
  if (!s.orientable && s.genus == 2) return klein_normal_form(r) == std::make_pair(0LL, 0LL);
  static thread_local std::vector<std::pair<SurfaceSpec, DehnRewriter>> cache;
  for (const auto& [spec, rw] : cache)
    if (spec == s) return rw.reduce(r).empty();
  cache.emplace_back(s, DehnRewriter(standard_presentation(s).relator, rank));
  return cache.back().second.reduce(r).empty();
}

inline bool words_equal(const Word& a, const Word& b, const SurfaceSpec& s) {
  return word_equals_identity(concat(a, inverse(b)), s);
}

// Row-reduces over the integers; true iff the rows span Z^n.
inline bool spans_integer_lattice(std::vector<std::vector<long long>> rows, int n) {
  int row = 0;
  for (int col = 0; col < n; ++col) {
    while (true) {
      int best = -1;
      for (int i = row; i < static_cast<int>(rows.size()); ++i)
        if (rows[i][col] != 0 && (best < 0 || std::llabs(rows[i][col]) < std::llabs(rows[best][col]))) best = i;
      if (best < 0) return false;
      std::swap(rows[row], rows[best]);
      bool clean = true;
      for (int i = row + 1; i < static_cast<int>(rows.size()); ++i) {
        long long q = rows[i][col] / rows[row][col];
        if (q != 0)
          for (int j = col; j < n; ++j) rows[i][j] -= q * rows[row][j];
        if (rows[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (std::llabs(rows[row][col]) != 1) return false;
    ++row;
  }
  return true;
}

// Necessary condition for generating: the images span H1(Sigma).
inline bool abelianization_surjective(const std::vector<Word>& tuple, const SurfaceSpec& s) {
  int n = s.rank();
  if (n == 0) return true;
  std::vector<std::vector<long long>> rows;
  for (const Word& w : tuple) rows.push_back(exponent_sums(w, n));
  rows.push_back(exponent_sums(standard_presentation(s).relator, n));
  return spans_integer_lattice(rows, n);
}

}  // namespace nielsen
