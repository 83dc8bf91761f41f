#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

#include "nielsen/words.hpp"

namespace nielsen {

// Whitehead automorphism (A, a): a in A, a^-1 not in A.  A generator x other
// than a^{+-1} goes to  [x^-1 in A ? a^-1 : ()] x [x in A ? a : ()].
struct WhiteheadAuto {
  int multiplier = 1;
  std::vector<int> subset;  // signed letters, contains the multiplier

  bool contains(int l) const { return std::find(subset.begin(), subset.end(), l) != subset.end(); }

  std::vector<Word> images(int rank) const {
    std::vector<Word> out;
    int a = multiplier;
    for (int x = 1; x <= rank; ++x) {
      if (x == std::abs(a)) {
        out.push_back({x});
        continue;
      }
      Word w;
      if (contains(-x)) w.push_back(-a);
      w.push_back(x);
      if (contains(x)) w.push_back(a);
      out.push_back(w);
    }
    return out;
  }

  WhiteheadAuto inverse_auto() const {
    WhiteheadAuto inv{-multiplier, {}};
    for (int l : subset)
      if (l != multiplier) inv.subset.push_back(l);
    inv.subset.push_back(-multiplier);
    return inv;
  }
};

inline std::size_t cyclic_length(const std::vector<Word>& ws) {
  std::size_t n = 0;
  for (const Word& w : ws) n += cyclic_reduce(w).size();
  return n;
}

inline std::vector<Word> apply_cyclic(const std::vector<Word>& ws, const std::vector<Word>& images) {
  std::vector<Word> out;
  for (const Word& w : ws) out.push_back(cyclic_reduce(substitute(w, images)));
  return out;
}

// All Whitehead automorphisms of the given rank, in a fixed order.
inline std::vector<WhiteheadAuto> whitehead_autos(int rank) {
  std::vector<WhiteheadAuto> out;
  std::vector<int> letters;
  for (int x = 1; x <= rank; ++x) {
    letters.push_back(x);
    letters.push_back(-x);
  }
  for (int a : letters) {
    std::vector<int> others;
    for (int l : letters)
      if (std::abs(l) != std::abs(a)) others.push_back(l);
    std::size_t n = others.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      WhiteheadAuto w{a, {a}};
      for (std::size_t b = 0; b < n; ++b)
        if (mask >> b & 1) w.subset.push_back(others[b]);
      out.push_back(std::move(w));
    }
  }
  return out;
}

struct WhiteheadResult {
  std::vector<Word> minimized;
  std::vector<Word> forward;   // images of the generators under the applied automorphism
  std::vector<Word> backward;  // its inverse
  int steps = 0;
};

// Applies length-reducing Whitehead automorphisms until none reduces the
// total cyclic length.
inline WhiteheadResult whitehead_minimize(const std::vector<Word>& words, int rank) {
  WhiteheadResult r;
  for (const Word& w : words) r.minimized.push_back(cyclic_reduce(w));
  for (int x = 1; x <= rank; ++x) {
    r.forward.push_back({x});
    r.backward.push_back({x});
  }
  auto autos = whitehead_autos(rank);
  std::size_t len = cyclic_length(r.minimized);
  bool improved = true;
  while (improved && len > 0) {
    improved = false;
    for (const WhiteheadAuto& w : autos) {
      auto img = w.images(rank);
      auto next = apply_cyclic(r.minimized, img);
      std::size_t nl = cyclic_length(next);
      if (nl >= len) continue;
      r.minimized = std::move(next);
      for (Word& f : r.forward) f = free_reduce(substitute(f, img));
      auto inv = w.inverse_auto().images(rank);
      std::vector<Word> nb;
      for (const Word& x : inv) nb.push_back(free_reduce(substitute(x, r.backward)));
      r.backward = std::move(nb);
      len = nl;
      ++r.steps;
      improved = true;
      break;
    }
  }
  return r;
}

// The cyclic words are conjugates of distinct members of one basis iff their
// Whitehead-minimal forms are single letters on distinct generators.  On
// success returns the completing basis elements.
inline std::optional<std::vector<Word>> free_factor_complement(const std::vector<Word>& words, int rank) {
  WhiteheadResult r = whitehead_minimize(words, rank);
  std::vector<char> used(rank + 1, 0);
  for (const Word& w : r.minimized) {
    if (w.size() != 1) return std::nullopt;
    int g = std::abs(w[0]);
    if (used[g]) return std::nullopt;
    used[g] = 1;
  }
  std::vector<Word> h;
  for (int x = 1; x <= rank; ++x)
    if (!used[x]) h.push_back(r.backward[x - 1]);
  return h;
}

}  // namespace nielsen
