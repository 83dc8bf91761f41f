#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nielsen/graph_core.hpp"
#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/whitehead.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

struct IncidentEdge {
  OrientedGraph graph;
  MapData attach;  // into the core
  int type = -1;   // incident edge of the target link, -1 if unmapped
  MapData over;    // into the graph of the target incident edge

  Shape shape() const { return shape_of(graph); }
};

// A core graph with its incident edge spaces.  core_over maps the core to the
// target link's core when the link is mapped.
struct Link {
  OrientedGraph core;
  std::vector<IncidentEdge> incident;
  MapData core_over;
};

// The link of vertex v of X: incident edges in order of the darts into v.
inline Link link_of(const GraphOfGraphs& X, Vertex v) {
  Link l;
  l.core = X.vertex_spaces[v];
  if (X.has_over) l.core_over = X.over_vertex[v];
  for (Dart d = 0; d < X.underlying.num_darts(); ++d) {
    if (X.underlying.head(d) != v) continue;
    IncidentEdge e;
    e.graph = X.edge_spaces[d / 2];
    e.attach = X.attach[d];
    if (X.has_over) {
      e.type = X.over.dart[d];
      e.over = X.over_edge[d / 2];
    }
    l.incident.push_back(std::move(e));
  }
  return l;
}

struct BoundaryData {
  int owner = -1;
  Pullback component;  // first: into the core, second: into the target incident edge
  Shape shape = Shape::other;
  int degree = 0;      // covering degree when both circles, else 0
};

// The component of core x_target-core (target incident edge) through the
// images of vertex p of incident edge i.
inline BoundaryData boundary_of(const Link& l, const Link& target, int i, Vertex p = 0) {
  const IncidentEdge& E = l.incident.at(i);
  if (E.type < 0) throw std::invalid_argument("boundary_of: incident edge is not mapped");
  const IncidentEdge& T = target.incident.at(E.type);
  if (!is_immersion(l.core, l.core_over)) throw std::invalid_argument("boundary_of: core map is not an immersion");
  if (!is_immersion(T.graph, T.attach)) throw std::invalid_argument("boundary_of: target attaching map is not an immersion");
  BoundaryData b;
  b.owner = i;
  b.component = pullback_component(l.core, l.core_over, T.graph, T.attach, target.core.num_darts(), E.attach.vertex[p],
                                   E.over.vertex[p]);
  b.shape = shape_of(b.component.graph);
  if (b.shape == Shape::circle && shape_of(T.graph) == Shape::circle)
    b.degree = b.component.graph.num_edges() / T.graph.num_edges();
  return b;
}

struct LinkWitness {
  int first = -1;
  int second = -1;
  int a = -1;  // vertex or dart of the first edge
  int b = -1;
  std::string what;
};

// Attaching maps immerse, circular incident edges of equal type share no edge
// image, and no incident edge covers an edge image twice.
inline std::optional<LinkWitness> surfacelike_violation(const Link& l) {
  int n = static_cast<int>(l.incident.size());
  for (int i = 0; i < n; ++i)
    if (!is_immersion(l.incident[i].graph, l.incident[i].attach)) return LinkWitness{i, i, -1, -1, "attach not immersed"};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const auto& E = l.incident[i];
      const auto& F = l.incident[j];
      if (E.type != F.type) continue;
      bool circ = E.shape() == Shape::circle && F.shape() == Shape::circle;
      if (i != j && !circ) continue;
      for (Dart c = 0; c < E.graph.num_darts(); ++c)
        for (Dart c2 = 0; c2 < F.graph.num_darts(); ++c2) {
          if (i == j && c / 2 == c2 / 2) continue;
          if (E.attach.dart[c] != F.attach.dart[c2]) continue;
          if (E.type >= 0 && E.over.dart[c] != F.over.dart[c2]) continue;
          return LinkWitness{i, j, c, c2, i == j ? "self-intersection in an edge" : "circular edges share an edge"};
        }
    }
  return std::nullopt;
}

inline bool is_surfacelike(const Link& l) { return !surfacelike_violation(l).has_value(); }

// Traversals of each core edge by circular incident edges.
inline std::vector<int> circular_traversals(const Link& l) {
  std::vector<int> count(l.core.num_edges(), 0);
  for (const auto& E : l.incident)
    if (E.shape() == Shape::circle)
      for (Dart c = 0; c < E.graph.num_darts(); c += 2) ++count[E.attach.dart[c] / 2];
  return count;
}

inline bool is_pseudosurface(const Link& l) {
  bool any = false;
  for (int c : circular_traversals(l)) {
    if (c == 1) return false;
    any = any || c > 0;
  }
  return any;
}

// Least pair of incident edges of equal type with vertices of equal type and
// equal image; i == j is a self-intersection (a != b).
inline std::optional<LinkWitness> find_intersection(const Link& l) {
  int n = static_cast<int>(l.incident.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const auto& E = l.incident[i];
      const auto& F = l.incident[j];
      if (E.type != F.type) continue;
      for (Vertex a = 0; a < E.graph.num_vertices(); ++a)
        for (Vertex b = (i == j ? a + 1 : 0); b < F.graph.num_vertices(); ++b) {
          if (E.attach.vertex[a] != F.attach.vertex[b]) continue;
          if (E.type >= 0 && E.over.vertex[a] != F.over.vertex[b]) continue;
          bool edge = false;
          for (Dart c = 0; c < E.graph.num_darts() && !edge; ++c)
            for (Dart c2 = 0; c2 < F.graph.num_darts() && !edge; ++c2)
              if (E.graph.tail(c) == a && F.graph.tail(c2) == b && E.attach.dart[c] == F.attach.dart[c2] &&
                  (E.type < 0 || E.over.dart[c] == F.over.dart[c2]))
                edge = true;
          return LinkWitness{i, j, a, b, edge ? "edge" : "vertex"};
        }
    }
  return std::nullopt;
}

// Wedges incident edges i and j at a ~ b (or identifies a ~ b in one edge).
inline Link fold_incident(const Link& l, int i, int j, Vertex a, Vertex b) {
  const auto& E = l.incident.at(i);
  const auto& F = l.incident.at(j);
  if (E.type != F.type || E.attach.vertex.at(a) != F.attach.vertex.at(b) ||
      (E.type >= 0 && E.over.vertex[a] != F.over.vertex[b]))
    throw std::invalid_argument("fold_incident: not an intersection");
  if (i == j && a == b) throw std::invalid_argument("fold_incident: identical vertices");
  int off = i == j ? 0 : E.graph.num_vertices();
  int total = E.graph.num_vertices() + (i == j ? 0 : F.graph.num_vertices());
  OrientedGraph g(total);
  IncidentEdge w;
  w.type = E.type;
  MapData comb_attach, comb_over;
  comb_attach.vertex.assign(total, 0);
  comb_over.vertex.assign(total, 0);
  auto add = [&](const IncidentEdge& X, int voff) {
    for (Vertex x = 0; x < X.graph.num_vertices(); ++x) {
      comb_attach.vertex[voff + x] = X.attach.vertex[x];
      if (X.type >= 0) comb_over.vertex[voff + x] = X.over.vertex[x];
    }
    for (Dart c = 0; c < X.graph.num_darts(); c += 2) {
      g.add_edge(voff + X.graph.tail(c), voff + X.graph.head(c));
      comb_attach.dart.push_back(X.attach.dart[c]);
      comb_attach.dart.push_back(X.attach.dart[c + 1]);
      if (X.type >= 0) {
        comb_over.dart.push_back(X.over.dart[c]);
        comb_over.dart.push_back(X.over.dart[c + 1]);
      }
    }
  };
  add(E, 0);
  if (i != j) add(F, off);
  UnionFind vu(g.num_vertices()), du(g.num_darts());
  vu.unite(a, off + b);
  Quotient q = quotient(g, vu, du);
  w.graph = q.graph;
  w.attach.vertex.assign(q.graph.num_vertices(), 0);
  w.attach.dart.assign(q.graph.num_darts(), 0);
  if (w.type >= 0) {
    w.over.vertex.assign(q.graph.num_vertices(), 0);
    w.over.dart.assign(q.graph.num_darts(), 0);
  }
  for (Vertex x = 0; x < g.num_vertices(); ++x) {
    w.attach.vertex[q.map.vertex[x]] = comb_attach.vertex[x];
    if (w.type >= 0) w.over.vertex[q.map.vertex[x]] = comb_over.vertex[x];
  }
  for (Dart c = 0; c < g.num_darts(); ++c) {
    w.attach.dart[q.map.dart[c]] = comb_attach.dart[c];
    if (w.type >= 0) w.over.dart[q.map.dart[c]] = comb_over.dart[c];
  }
  Link out;
  out.core = l.core;
  out.core_over = l.core_over;
  for (int k = 0; k < static_cast<int>(l.incident.size()); ++k) {
    if (k == i)
      out.incident.push_back(w);
    else if (k != j)
      out.incident.push_back(l.incident[k]);
  }
  return out;
}

// Removes a core edge traversed exactly once, together with the traversing
// edge of its incident edge.
inline Link unpull_at(const Link& l, Dart f) {
  int hits = 0, owner = -1;
  Dart edge = -1;
  for (int i = 0; i < static_cast<int>(l.incident.size()); ++i) {
    const auto& E = l.incident[i];
    for (Dart c = 0; c < E.graph.num_darts(); c += 2)
      if (E.attach.dart[c] / 2 == f / 2) {
        ++hits;
        owner = i;
        edge = c;
      }
  }
  if (hits != 1) throw std::invalid_argument("unpull_at: edge is traversed " + std::to_string(hits) + " times");
  auto drop_edge = [](const OrientedGraph& g, int gone, std::vector<Dart>& newdart) {
    OrientedGraph out(g.num_vertices());
    newdart.assign(g.num_darts(), -1);
    for (Dart d = 0; d < g.num_darts(); d += 2) {
      if (d / 2 == gone) continue;
      Dart nd = out.add_edge(g.tail(d), g.head(d), g.label(d));
      newdart[d] = nd;
      newdart[d + 1] = nd + 1;
    }
    return out;
  };
  Link out;
  std::vector<Dart> core_new;
  out.core = drop_edge(l.core, f / 2, core_new);
  if (!l.core_over.dart.empty()) {
    out.core_over.vertex = l.core_over.vertex;
    for (Dart d = 0; d < l.core.num_darts(); ++d)
      if (core_new[d] >= 0) out.core_over.dart.push_back(l.core_over.dart[d]);
  }
  for (int i = 0; i < static_cast<int>(l.incident.size()); ++i) {
    IncidentEdge E = l.incident[i];
    std::vector<Dart> enew;
    OrientedGraph g = i == owner ? drop_edge(E.graph, edge / 2, enew) : E.graph;
    IncidentEdge n;
    n.graph = g;
    n.type = E.type;
    n.attach.vertex = E.attach.vertex;
    if (E.type >= 0) n.over.vertex = E.over.vertex;
    for (Dart c = 0; c < E.graph.num_darts(); ++c) {
      if (i == owner && enew[c] < 0) continue;
      n.attach.dart.push_back(core_new[E.attach.dart[c]]);
      if (E.type >= 0) n.over.dart.push_back(E.over.dart[c]);
    }
    out.incident.push_back(std::move(n));
  }
  return out;
}

// Least core dart (even) of an edge traversed exactly once by circular edges.
inline std::optional<Dart> find_once_traversed(const Link& l) {
  auto count = circular_traversals(l);
  for (int e = 0; e < static_cast<int>(count.size()); ++e)
    if (count[e] == 1) return 2 * e;
  return std::nullopt;
}

// Cyclic word read by a circular incident edge in the free basis of the core
// given by a spanning tree; letters are the non-tree edges, 1-based.
struct CoreBasis {
  std::vector<int> generator;  // per core edge: 0 for tree edges, else k
  std::vector<Dart> parent;    // dart into each vertex from the root side
  int rank = 0;
};

inline CoreBasis core_basis(const OrientedGraph& g) {
  CoreBasis b;
  b.generator.assign(g.num_edges(), 0);
  b.parent.assign(g.num_vertices(), -1);
  if (g.num_vertices() == 0) return b;
  std::vector<char> seen(g.num_vertices(), 0), tree(g.num_edges(), 0);
  auto out = g.darts_out();
  std::deque<Vertex> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Dart d : out[v]) {
      Vertex w = g.head(d);
      if (seen[w]) continue;
      seen[w] = 1;
      tree[d / 2] = 1;
      b.parent[w] = d;
      queue.push_back(w);
    }
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("core_basis: core is not connected");
  for (int e = 0; e < g.num_edges(); ++e)
    if (!tree[e]) b.generator[e] = ++b.rank;
  return b;
}

inline int basis_letter(const CoreBasis& b, Dart d) {
  int k = b.generator[d / 2];
  if (k == 0) return 0;
  return (d & 1) ? -k : k;
}

inline Word circle_word(const Link& l, const CoreBasis& b, int i) {
  const auto& E = l.incident[i];
  // Walk the circle from vertex 0.
  Word w;
  if (E.graph.num_edges() == 0) return w;
  auto out = E.graph.darts_out();
  Dart c = out[0][0];
  Dart first = c;
  do {
    int x = basis_letter(b, E.attach.dart[c]);
    if (x != 0) w.push_back(x);
    Vertex h = E.graph.head(c);
    Dart next = -1;
    for (Dart o : out[h])
      if (o != OrientedGraph::bar(c)) next = o;
    c = next;
  } while (c != first && c >= 0);
  return cyclic_reduce(w);
}

struct DecomposabilityResult {
  bool decomposable = false;
  std::vector<Word> circle_words;  // in the core basis
  std::vector<Word> complement;    // basis completion when decomposable
  std::string witness;
};

// Circular incident images as cyclic words: decomposable iff they are
// conjugates of distinct members of a basis of the core's free group.  A
// dependence of their classes in H1(core; GF(2)) refutes at once; otherwise
// Whitehead minimization decides.
inline DecomposabilityResult is_decomposable(const Link& l, std::size_t length_budget = 64, int rank_budget = 8) {
  DecomposabilityResult r;
  CoreBasis b = core_basis(l.core);
  std::vector<std::vector<char>> rows;
  std::vector<int> owners;
  for (int i = 0; i < static_cast<int>(l.incident.size()); ++i) {
    if (l.incident[i].shape() != Shape::circle) continue;
    r.circle_words.push_back(circle_word(l, b, i));
    owners.push_back(i);
    std::vector<char> v(b.rank, 0);
    for (int x : r.circle_words.back()) v[std::abs(x) - 1] ^= 1;
    rows.push_back(v);
  }
  // Gaussian elimination over GF(2), tracking combinations.
  std::size_t m = rows.size();
  std::vector<std::vector<char>> combo(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i) combo[i][i] = 1;
  std::size_t row = 0;
  for (int col = 0; col < b.rank && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && !rows[piv][col]) ++piv;
    if (piv == m) continue;
    std::swap(rows[piv], rows[row]);
    std::swap(combo[piv], combo[row]);
    for (std::size_t k = 0; k < m; ++k)
      if (k != row && rows[k][col]) {
        for (int c = 0; c < b.rank; ++c) rows[k][c] ^= rows[row][c];
        for (std::size_t c = 0; c < m; ++c) combo[k][c] ^= combo[row][c];
      }
    ++row;
  }
  if (row < m) {
    r.witness = "homology relation among incident edges";
    for (std::size_t c = 0; c < m; ++c)
      if (combo[row][c]) r.witness += " " + std::to_string(owners[c]);
    return r;
  }
  if (b.rank > rank_budget || cyclic_length(r.circle_words) > length_budget)
    throw BudgetExceeded("is_decomposable: Whitehead search budget exceeded");
  auto h = free_factor_complement(r.circle_words, b.rank);
  if (!h) {
    r.witness = "Whitehead-minimal images are not distinct basis letters";
    return r;
  }
  r.decomposable = true;
  r.complement = *h;
  return r;
}

}  // namespace nielsen
