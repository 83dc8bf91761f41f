#pragma once

// Reference implementations for the tests.  Nothing here calls into the
// library's folding, Nielsen or Whitehead code; words are plain int vectors
// with the same letter convention (k or -k for generator k).

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using W = std::vector<int>;

inline W reduce(const W& w) {
  W s;
  for (int x : w) {
    if (!s.empty() && s.back() == -x)
      s.pop_back();
    else
      s.push_back(x);
  }
  return s;
}

inline W inv(const W& w) {
  W o(w.rbegin(), w.rend());
  for (int& x : o) x = -x;
  return o;
}

inline W cat(const W& a, const W& b) {
  W o = a;
  o.insert(o.end(), b.begin(), b.end());
  return reduce(o);
}

inline W cyc(W w) {
  w = reduce(w);
  while (w.size() >= 2 && w.front() == -w.back()) w = W(w.begin() + 1, w.end() - 1);
  return w;
}

// Least rotation of a cyclically reduced word.
inline W least_rotation(const W& w) {
  W best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    W r(w.begin() + k, w.end());
    r.insert(r.end(), w.begin(), w.begin() + k);
    best = std::min(best, r);
  }
  return best;
}

// All freely reduced words of length <= n over generators 1..rank.
inline std::vector<W> all_words(int rank, int n) {
  std::vector<W> out{{}};
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (static_cast<int>(out[k].size()) == n) continue;
    for (int g = 1; g <= rank; ++g)
      for (int l : {g, -g}) {
        if (!out[k].empty() && out[k].back() == -l) continue;
        W w = out[k];
        w.push_back(l);
        out.push_back(w);
      }
  }
  return out;
}

// A labeled graph as an edge list; edge (u, v, x) reads x from u to v.
struct LGraph {
  int n = 1;
  std::vector<std::tuple<int, int, int>> edges;
};

// Exact membership in the subgroup read at vertex 0, without folding:
// T holds the vertex pairs joined by a path whose label reduces to 1, a
// context-free closure; a word is read through T between letters.
class Reader {
 public:
  explicit Reader(const LGraph& g) : g_(g), t_(g.n, std::vector<char>(g.n, 0)) {
    for (auto [u, v, x] : g.edges) {
      step_.push_back({u, v, x});
      step_.push_back({v, u, -x});
    }
    for (int i = 0; i < g.n; ++i) t_[i][i] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      // u ~T~ p -x-> q ~T~ r -(-x)-> s  gives u ~T~ s; and transitivity.
      for (int u = 0; u < g.n; ++u)
        for (const auto& [p, q, x] : step_) {
          if (!t_[u][p]) continue;
          for (const auto& [r, s, y] : step_) {
            if (y != -x || !t_[q][r] || t_[u][s]) continue;
            t_[u][s] = 1;
            changed = true;
          }
        }
      for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
          if (t_[i][k])
            for (int j = 0; j < g.n; ++j)
              if (t_[k][j] && !t_[i][j]) {
                t_[i][j] = 1;
                changed = true;
              }
    }
  }

  bool accepts(const W& w, int base = 0) const {
    std::vector<char> cur = close({base});
    for (int x : w) {
      std::vector<char> next(g_.n, 0);
      for (const auto& [p, q, y] : step_)
        if (y == x && cur[p]) next[q] = 1;
      cur = close(next);
    }
    return cur[base];
  }

 private:
  struct Step {
    int from, to, letter;
  };

  std::vector<char> close(const std::vector<char>& s) const {
    std::vector<char> o(g_.n, 0);
    for (int i = 0; i < g_.n; ++i)
      if (s[i])
        for (int j = 0; j < g_.n; ++j)
          if (t_[i][j]) o[j] = 1;
    return o;
  }
  std::vector<char> close(std::initializer_list<int> v) const {
    std::vector<char> s(g_.n, 0);
    for (int i : v) s[i] = 1;
    return close(s);
  }

  LGraph g_;
  std::vector<Step> step_;
  std::vector<std::vector<char>> t_;
};

// Generators of pi1(g, 0) read off a breadth-first spanning tree.
inline std::vector<W> spanning_generators(const LGraph& g) {
  std::vector<W> to(g.n);
  std::vector<char> seen(g.n, 0), tree(g.edges.size(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      auto [a, b, x] = g.edges[k];
      int other = -1, letter = 0;
      if (a == v && !seen[b]) other = b, letter = x;
      else if (b == v && !seen[a]) other = a, letter = -x;
      if (other < 0) continue;
      seen[other] = 1;
      tree[k] = 1;
      to[other] = cat(to[v], {letter});
      queue.push_back(other);
    }
  }
  std::vector<W> gens;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    auto [a, b, x] = g.edges[k];
    if (tree[k] || !seen[a]) continue;
    W w = cat(cat(to[a], {x}), inv(to[b]));
    if (!w.empty()) gens.push_back(w);
  }
  return gens;
}

// Reduced products of at most k factors g^{+-1}.
inline std::set<W> products(const std::vector<W>& gens, int k) {
  std::set<W> out{W{}};
  std::vector<W> layer{W{}};
  for (int i = 0; i < k; ++i) {
    std::vector<W> next;
    for (const W& p : layer)
      for (const W& g : gens)
        for (const W& f : {g, inv(g)}) {
          W q = cat(p, f);
          if (out.insert(q).second) next.push_back(q);
        }
    layer = std::move(next);
  }
  return out;
}

inline int betti(int vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = vertices;
  for (auto [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb, --comps;
  }
  return static_cast<int>(edges.size()) - vertices + comps;
}

// Exponent sums of a word.
inline std::vector<long long> abel(const W& w, int rank) {
  std::vector<long long> v(rank, 0);
  for (int x : w) v[std::abs(x) - 1] += x > 0 ? 1 : -1;
  return v;
}

// Free-group primitivity at rank 2 by closing the letter orbit under
// Whitehead moves, keeping cyclic length <= max_len.  Length-nonincreasing
// chains reach every primitive, so the closure is exact up to max_len.
inline std::set<W> rank2_primitive_classes(int max_len) {
  // Each move: letter images of a (1) and b (2).
  std::vector<std::pair<W, W>> moves;
  for (int s : {1, -1})
    for (int t : {1, -1}) {
      moves.push_back({{s * 2}, {t * 1}});  // swap and invert
      moves.push_back({{s * 1}, {t * 2}});
    }
  for (int e : {1, -1}) {
    moves.push_back({{1}, {2, e}});       // b -> b a^e
    moves.push_back({{1}, {e, 2}});       // b -> a^e b
    moves.push_back({{1}, {-e, 2, e}});   // b -> a^-e b a^e
    moves.push_back({{1, 2 * e}, {2}});   // a -> a b^e
    moves.push_back({{2 * e, 1}, {2}});
    moves.push_back({{-2 * e, 1, 2 * e}, {2}});
  }
  auto apply = [](const W& w, const std::pair<W, W>& m) {
    W o;
    for (int x : w) {
      const W& img = std::abs(x) == 1 ? m.first : m.second;
      W piece = x > 0 ? img : inv(img);
      o.insert(o.end(), piece.begin(), piece.end());
    }
    return least_rotation(cyc(o));
  };
  std::set<W> seen;
  std::vector<W> queue;
  for (int x : {1, -1, 2, -2}) {
    W w{x};
    if (seen.insert(w).second) queue.push_back(w);
  }
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto& m : moves) {
      W w = apply(queue[q], m);
      if (static_cast<int>(w.size()) > max_len) continue;
      if (seen.insert(w).second) queue.push_back(w);
    }
  return seen;
}

}  // namespace oracle
