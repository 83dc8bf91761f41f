#pragma once

#include <random>

#include "nielsen/graph_core.hpp"
#include "oracles.hpp"

// Random labeled graphs shared by the unit tests and the acceptance run.
inline oracle::LGraph random_lgraph(std::mt19937_64& rng, int rank, int max_edges, int max_vertices = 6) {
  std::uniform_int_distribution<int> nv(1, max_vertices), ne(1, max_edges), gen(1, rank), sign(0, 1);
  oracle::LGraph g;
  g.n = nv(rng);
  int m = ne(rng);
  std::uniform_int_distribution<int> vtx(0, g.n - 1);
  for (int k = 0; k < m; ++k) g.edges.emplace_back(vtx(rng), vtx(rng), gen(rng) * (sign(rng) ? 1 : -1));
  return g;
}

inline nielsen::OrientedGraph to_graph(const oracle::LGraph& g) {
  nielsen::OrientedGraph o(g.n);
  for (auto [u, v, x] : g.edges) o.add_edge(u, v, x);
  return o;
}

inline oracle::LGraph to_lgraph(const nielsen::OrientedGraph& g) {
  oracle::LGraph o;
  o.n = g.num_vertices();
  for (nielsen::Dart d = 0; d < g.num_darts(); d += 2) o.edges.emplace_back(g.tail(d), g.head(d), g.label(d));
  return o;
}

inline int oracle_betti(const nielsen::OrientedGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (nielsen::Dart d = 0; d < g.num_darts(); d += 2) e.emplace_back(g.tail(d), g.head(d));
  return oracle::betti(g.num_vertices(), e);
}
