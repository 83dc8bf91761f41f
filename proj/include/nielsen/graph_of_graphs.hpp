#pragma once

#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "nielsen/graph_core.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/surface_word.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

// A graph whose vertices and edges carry graphs.  Edge k of the underlying
// graph (darts 2k, 2k+1) carries edge_spaces[k]; attach[d] maps that space
// into the vertex space at head(d).  The optional over data maps everything
// to a target graph of graphs, edge spaces by a single map regardless of
// orientation.
struct GraphOfGraphs {
  OrientedGraph underlying;
  std::vector<OrientedGraph> vertex_spaces;
  std::vector<OrientedGraph> edge_spaces;
  std::vector<MapData> attach;

  bool has_over = false;
  MapData over;
  std::vector<MapData> over_vertex;
  std::vector<MapData> over_edge;

  int num_vertices() const { return underlying.num_vertices(); }
  int num_edges() const { return underlying.num_edges(); }

  Vertex add_vertex_space(OrientedGraph g) {
    vertex_spaces.push_back(std::move(g));
    return underlying.add_vertex();
  }

  // Adds an edge with the given space; returns the dart whose head is `to`.
  Dart add_edge_space(Vertex from, Vertex to, OrientedGraph space, MapData attach_to, MapData attach_from) {
    Dart d = underlying.add_edge(from, to);
    edge_spaces.push_back(std::move(space));
    attach.push_back(std::move(attach_to));
    attach.push_back(std::move(attach_from));
    return d;
  }

  int euler_characteristic() const {
    int chi = 0;
    for (const auto& g : vertex_spaces) chi += g.num_vertices() - g.num_edges();
    for (const auto& g : edge_spaces) chi -= g.num_vertices() - g.num_edges();
    return chi;
  }

  // Rank of the fundamental group when it is free and X is connected.
  int rank() const { return 1 - euler_characteristic(); }
};

enum class Shape { point, interval, circle, other };

inline std::string shape_name(Shape s) {
  switch (s) {
    case Shape::point: return "point";
    case Shape::interval: return "interval";
    case Shape::circle: return "circle";
    default: return "other";
  }
}

inline Shape shape_of(const OrientedGraph& g) {
  if (g.num_vertices() == 1 && g.num_edges() == 0) return Shape::point;
  if (components(g).count != 1) return Shape::other;
  std::vector<int> val(g.num_vertices(), 0);
  for (Dart d = 0; d < g.num_darts(); ++d) ++val[g.head(d)];
  bool all2 = true;
  int ones = 0;
  for (int v : val) {
    if (v != 2) all2 = false;
    if (v == 1) ++ones;
    if (v > 2) return Shape::other;
  }
  if (all2 && g.num_edges() > 0) return Shape::circle;
  if (ones == 2 && g.num_edges() == g.num_vertices() - 1) return Shape::interval;
  return Shape::other;
}

// Checks structural consistency, and the over data against `target` if given.
inline std::string validate_gog(const GraphOfGraphs& X, const GraphOfGraphs* target) {
  const auto& U = X.underlying;
  if (static_cast<int>(X.vertex_spaces.size()) != U.num_vertices()) return "vertex space count";
  if (static_cast<int>(X.edge_spaces.size()) != U.num_edges()) return "edge space count";
  if (static_cast<int>(X.attach.size()) != U.num_darts()) return "attach count";
  for (Dart d = 0; d < U.num_darts(); ++d) {
    if (X.edge_spaces[d / 2].num_vertices() == 0) return "empty edge space";
    if (!is_morphism(X.edge_spaces[d / 2], X.vertex_spaces[U.head(d)], X.attach[d]))
      return "attach " + std::to_string(d) + " is not a morphism";
  }
  if (!target || !X.has_over) return {};
  const auto& T = *target;
  if (!is_morphism(U, T.underlying, X.over)) return "underlying over map";
  for (Vertex v = 0; v < U.num_vertices(); ++v)
    if (!is_morphism(X.vertex_spaces[v], T.vertex_spaces[X.over.vertex[v]], X.over_vertex[v]))
      return "over map of vertex space " + std::to_string(v);
  for (int e = 0; e < U.num_edges(); ++e)
    if (!is_morphism(X.edge_spaces[e], T.edge_spaces[X.over.dart[2 * e] / 2], X.over_edge[e]))
      return "over map of edge space " + std::to_string(e);
  for (Dart d = 0; d < U.num_darts(); ++d) {
    MapData lhs = compose(X.attach[d], X.over_vertex[U.head(d)]);
    MapData rhs = compose(X.over_edge[d / 2], T.attach[X.over.dart[d]]);
    if (!(lhs == rhs)) return "attach/over square fails at dart " + std::to_string(d);
  }
  return {};
}

// One vertex space (a rose Gamma with k petals) and one circular edge space C
// of length k.  The dart 0 attaches C along P, dart 1 along Q; in the basis
// x1 = t (crossing at c0), x(i+1) = petal i the relator is t P t^-1 Q^-1.
struct SurfacePattern {
  SurfaceSpec spec;
  GraphOfGraphs gog;
  int petals = 0;
  Word plus_word;   // P, in petal letters 1..k
  Word minus_word;  // Q
  Word relator;     // in x letters
  SurfaceWordForm form;  // standard generators <-> x letters

  const OrientedGraph& gamma() const { return gog.vertex_spaces[0]; }
  const OrientedGraph& circle() const { return gog.edge_spaces[0]; }

  static int x_of_petal_letter(int l) { return l > 0 ? l + 1 : l - 1; }
  int x_letter(Dart gamma_dart) const { return x_of_petal_letter(rose_letter(gamma_dart)); }

  // Crossing the edge space at c_j along pattern dart 0 (from the Q side to
  // the P side) reads Q[0..j)^-1 t P[0..j); dart 1 reads the inverse.
  Word crossing(Dart pattern_dart, Vertex c) const {
    Word w;
    for (int i = c - 1; i >= 0; --i) w.push_back(-x_of_petal_letter(minus_word[i]));
    w.push_back(1);
    for (int i = 0; i < c; ++i) w.push_back(x_of_petal_letter(plus_word[i]));
    w = free_reduce(w);
    return pattern_dart == 0 ? w : inverse(w);
  }

  Word to_x(const Word& std_word) const { return substitute(std_word, form.std_to_old); }
  Word to_std(const Word& x_word) const { return substitute(x_word, form.old_to_std); }
};

inline SurfacePattern surface_pattern(const SurfaceSpec& s) {
  if (!s.admissible()) throw std::invalid_argument("surface_pattern: Euler characteristic must be <= 0");
  SurfacePattern p;
  p.spec = s;
  int m = s.rank();
  int k = m - 1;
  p.petals = k;
  for (int i = 1; i <= k; ++i) p.plus_word.push_back(i);
  if (s.orientable) {
    for (int i = k; i >= 1; --i) p.minus_word.push_back(i);
  } else {
    p.minus_word.push_back(-k);
    for (int i = k - 1; i >= 1; --i) p.minus_word.push_back(i);
  }
  OrientedGraph gamma = labeled_rose(k);
  OrientedGraph circle(k);
  for (int j = 0; j < k; ++j) circle.add_edge(j, (j + 1) % k);
  auto attach_along = [&](const Word& w) {
    MapData m;
    m.vertex.assign(k, 0);
    for (int j = 0; j < k; ++j) {
      m.dart.push_back(rose_dart(w[j]));
      m.dart.push_back(OrientedGraph::bar(rose_dart(w[j])));
    }
    return m;
  };
  p.gog.add_vertex_space(gamma);
  p.gog.add_edge_space(0, 0, circle, attach_along(p.plus_word), attach_along(p.minus_word));
  Word pw, qw;
  for (int l : p.plus_word) pw.push_back(SurfacePattern::x_of_petal_letter(l));
  for (int l : p.minus_word) qw.push_back(SurfacePattern::x_of_petal_letter(l));
  p.relator = concat({Word{1}, pw, Word{-1}, inverse(qw)});
  p.form = normalize_surface_word(p.relator, m);
  if (p.form.orientable != s.orientable || p.form.genus != s.genus)
    throw std::logic_error("surface_pattern: relator does not present the requested surface");
  return p;
}

// The pattern with its edge space restricted to c0.
inline GraphOfGraphs standard_subobject(const SurfacePattern& p) {
  GraphOfGraphs X;
  X.add_vertex_space(p.gamma());
  MapData point{{0}, {}};
  X.add_edge_space(0, 0, OrientedGraph(1), point, point);
  X.has_over = true;
  X.over = identity_map(p.gog.underlying);
  X.over_vertex.push_back(identity_map(p.gamma()));
  X.over_edge.push_back(MapData{{0}, {}});
  return X;
}

// Whitehead graph of a cyclic word: an edge joins x and y^-1 for each
// cyclically consecutive pair x y.  The presentation complex of a one-relator
// presentation is a closed surface iff this graph is one cycle on all 2m
// letters.
inline bool whitehead_graph_is_cycle(const Word& relator, int rank) {
  int n = 2 * rank;
  auto id = [&](int l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; };
  std::vector<int> deg(n, 0);
  UnionFind uf(n);
  for (std::size_t i = 0; i < relator.size(); ++i) {
    int a = id(relator[i]), b = id(-relator[(i + 1) % relator.size()]);
    ++deg[a];
    ++deg[b];
    uf.unite(a, b);
  }
  for (int v = 0; v < n; ++v)
    if (deg[v] != 2 || uf.find(v) != uf.find(0)) return false;
  return true;
}

struct PatternReport {
  bool twice_traversed = true;
  int boundary_components = 0;
  bool mobius = false;
  int euler_characteristic = 0;
  bool surface_link = false;
  bool orientable = false;
};

// Orientation attempt on the squares (edge of C) x I.  A square's boundary
// runs Q_j forward and P_j backward; two squares sharing an edge of Gamma must
// induce opposite directions on it, squares adjacent across a crossing must
// agree.  Parity union-find over the square orientations.
inline bool pattern_orientable(const SurfacePattern& p) {
  int k = p.petals;
  std::vector<int> parent(k), parity(k, 0);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::pair<int, int>(int)> find = [&](int x) -> std::pair<int, int> {
    if (parent[x] == x) return {x, 0};
    auto [r, px] = find(parent[x]);
    parent[x] = r;
    parity[x] ^= px;
    return {r, parity[x]};
  };
  auto relate = [&](int a, int b, int differ) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return ((pa ^ pb) == differ);
    parent[rb] = ra;
    parity[rb] = pa ^ pb ^ differ;
    return true;
  };
  for (int j = 0; j + 1 < k; ++j)
    if (!relate(j, j + 1, 0)) return false;
  for (int e = 1; e <= k; ++e) {
    int jp = -1, jq = -1, sp = 0, sq = 0;
    for (int j = 0; j < k; ++j) {
      if (std::abs(p.plus_word[j]) == e) jp = j, sp = p.plus_word[j] > 0 ? 1 : -1;
      if (std::abs(p.minus_word[j]) == e) jq = j, sq = p.minus_word[j] > 0 ? 1 : -1;
    }
    // Directions induced: -sp (P backward) and +sq; opposite iff sp == sq
    // when the square orientations agree.
    if (!relate(jp, jq, sp == sq ? 0 : 1)) return false;
  }
  return true;
}

inline PatternReport check_pattern(const SurfacePattern& p) {
  PatternReport r;
  const auto& G = p.gamma();
  std::vector<int> traversals(G.num_edges(), 0);
  for (Dart d : {0, 1})
    for (Dart c = 0; c < p.circle().num_darts(); c += 2) ++traversals[p.gog.attach[d].dart[c] / 2];
  for (int t : traversals)
    if (t != 2) r.twice_traversed = false;
  for (Dart d = 0; d < p.gog.underlying.num_darts(); ++d)
    if (p.gog.underlying.head(d) == 0 && shape_of(p.gog.edge_spaces[d / 2]) == Shape::circle) ++r.boundary_components;
  r.mobius = G.num_edges() == 1 && r.boundary_components == 1;
  r.euler_characteristic = p.gog.euler_characteristic();
  r.surface_link = whitehead_graph_is_cycle(p.relator, p.spec.rank());
  r.orientable = pattern_orientable(p);
  return r;
}

}  // namespace nielsen
