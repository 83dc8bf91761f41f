#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nielsen {

using Vertex = int;
using Dart = int;

// Union-find whose representative is always the least member.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<int> parent_;
};

// Darts come in pairs: dart 2k and 2k+1 are the two orientations of edge k,
// so bar(d) = d ^ 1 is a fixed-point-free involution by construction.
// Labels are signed symbols (0 = unlabeled) with label(bar d) = -label(d).
class OrientedGraph {
 public:
  OrientedGraph() = default;
  explicit OrientedGraph(int vertices) : vertex_count_(vertices) {}

  Vertex add_vertex() { return vertex_count_++; }

  // Adds an edge from -> to and returns the dart pointing at `to`.
  Dart add_edge(Vertex from, Vertex to, int label = 0) {
    if (from < 0 || to < 0 || from >= vertex_count_ || to >= vertex_count_)
      throw std::out_of_range("add_edge: vertex out of range");
    Dart d = static_cast<Dart>(head_.size());
    head_.push_back(to);
    head_.push_back(from);
    label_.push_back(label);
    label_.push_back(-label);
    return d;
  }

  int num_vertices() const { return vertex_count_; }
  int num_darts() const { return static_cast<int>(head_.size()); }
  int num_edges() const { return num_darts() / 2; }

  static Dart bar(Dart d) { return d ^ 1; }
  Vertex head(Dart d) const { return head_[d]; }
  Vertex tail(Dart d) const { return head_[d ^ 1]; }
  int label(Dart d) const { return label_[d]; }
  bool labeled() const {
    return std::any_of(label_.begin(), label_.end(), [](int l) { return l != 0; });
  }

  // Darts grouped by their head vertex, each group in increasing order.
  std::vector<std::vector<Dart>> darts_into() const {
    std::vector<std::vector<Dart>> in(vertex_count_);
    for (Dart d = 0; d < num_darts(); ++d) in[head_[d]].push_back(d);
    return in;
  }
  // Darts grouped by their tail vertex.
  std::vector<std::vector<Dart>> darts_out() const {
    std::vector<std::vector<Dart>> out(vertex_count_);
    for (Dart d = 0; d < num_darts(); ++d) out[tail(d)].push_back(d);
    return out;
  }
  int valence(Vertex v) const {
    return static_cast<int>(std::count(head_.begin(), head_.end(), v));
  }

  bool operator==(const OrientedGraph& o) const {
    return vertex_count_ == o.vertex_count_ && head_ == o.head_ && label_ == o.label_;
  }

 private:
  int vertex_count_ = 0;
  std::vector<Vertex> head_;
  std::vector<int> label_;
};

// Vertex and dart assignments of a morphism, without the graphs.
struct MapData {
  std::vector<Vertex> vertex;
  std::vector<Dart> dart;

  bool operator==(const MapData&) const = default;
};

inline bool is_morphism(const OrientedGraph& src, const OrientedGraph& dst, const MapData& m) {
  if (static_cast<int>(m.vertex.size()) != src.num_vertices() ||
      static_cast<int>(m.dart.size()) != src.num_darts())
    return false;
  for (Vertex v : m.vertex)
    if (v < 0 || v >= dst.num_vertices()) return false;
  for (Dart d = 0; d < src.num_darts(); ++d) {
    Dart e = m.dart[d];
    if (e < 0 || e >= dst.num_darts()) return false;
    if (m.dart[OrientedGraph::bar(d)] != OrientedGraph::bar(e)) return false;
    if (m.vertex[src.head(d)] != dst.head(e)) return false;
  }
  return true;
}

// (second ∘ first)
inline MapData compose(const MapData& first, const MapData& second) {
  MapData out;
  out.vertex.reserve(first.vertex.size());
  out.dart.reserve(first.dart.size());
  for (Vertex v : first.vertex) out.vertex.push_back(second.vertex[v]);
  for (Dart d : first.dart) out.dart.push_back(second.dart[d]);
  return out;
}

inline MapData identity_map(const OrientedGraph& g) {
  MapData m;
  m.vertex.resize(g.num_vertices());
  m.dart.resize(g.num_darts());
  std::iota(m.vertex.begin(), m.vertex.end(), 0);
  std::iota(m.dart.begin(), m.dart.end(), 0);
  return m;
}

struct GraphMorphism {
  OrientedGraph source;
  OrientedGraph target;
  MapData map;

  bool valid() const { return is_morphism(source, target, map); }
};

// Result of collapsing a graph by compatible vertex and dart partitions.
struct Quotient {
  OrientedGraph graph;
  MapData map;
};

// Dart classes must be closed under bar and compatible with heads.
inline Quotient quotient(const OrientedGraph& g, UnionFind& vuf, UnionFind& duf) {
  Quotient q;
  std::vector<Vertex> vnew(g.num_vertices(), -1);
  int nv = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (vuf.find(v) == v) vnew[v] = nv++;
  q.graph = OrientedGraph(nv);
  q.map.vertex.resize(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) q.map.vertex[v] = vnew[vuf.find(v)];
  std::vector<Dart> dnew(g.num_darts(), -1);
  for (Dart d = 0; d < g.num_darts(); ++d) {
    Dart r = duf.find(d);
    if (r != d || dnew[r] >= 0) continue;
    Dart rb = duf.find(OrientedGraph::bar(d));
    Dart nd = q.graph.add_edge(q.map.vertex[g.tail(d)], q.map.vertex[g.head(d)], g.label(d));
    dnew[r] = nd;
    dnew[rb] = OrientedGraph::bar(nd);
  }
  q.map.dart.resize(g.num_darts());
  for (Dart d = 0; d < g.num_darts(); ++d) q.map.dart[d] = dnew[duf.find(d)];
  return q;
}

enum class FoldKind { equivalence, reduction };

struct FoldRecord {
  std::pair<Dart, Dart> identified_darts;
  FoldKind kind = FoldKind::equivalence;
};

struct FoldResult {
  OrientedGraph graph;
  MapData quotient;
  FoldRecord record;
};

inline void check_foldable(const OrientedGraph& g, Dart e1, Dart e2) {
  if (e1 < 0 || e2 < 0 || e1 >= g.num_darts() || e2 >= g.num_darts())
    throw std::out_of_range("fold: dart out of range");
  if (e1 == e2) throw std::invalid_argument("fold: darts must be distinct");
  if (e1 == OrientedGraph::bar(e2)) throw std::invalid_argument("fold: cannot fold a dart with its bar");
  if (g.head(e1) != g.head(e2)) throw std::invalid_argument("fold: darts are not coterminal");
  if (g.label(e1) != g.label(e2)) throw std::invalid_argument("fold: labels differ");
}

inline FoldResult fold(const OrientedGraph& g, Dart e1, Dart e2) {
  check_foldable(g, e1, e2);
  UnionFind vuf(g.num_vertices()), duf(g.num_darts());
  vuf.unite(g.tail(e1), g.tail(e2));
  duf.unite(e1, e2);
  duf.unite(OrientedGraph::bar(e1), OrientedGraph::bar(e2));
  Quotient q = quotient(g, vuf, duf);
  FoldKind kind = g.tail(e1) == g.tail(e2) ? FoldKind::reduction : FoldKind::equivalence;
  return {std::move(q.graph), std::move(q.map), {{std::min(e1, e2), std::max(e1, e2)}, kind}};
}

struct ImmersionWitness {
  Vertex vertex;
  Dart first;
  Dart second;
};

// Least pair (by dart id) of coterminal darts with equal image.
inline std::optional<ImmersionWitness> least_foldable_pair(const OrientedGraph& g, const MapData& m) {
  std::map<std::pair<Vertex, Dart>, Dart> first_seen;
  std::optional<ImmersionWitness> best;
  for (Dart d = 0; d < g.num_darts(); ++d) {
    auto key = std::make_pair(g.head(d), m.dart[d]);
    auto [it, fresh] = first_seen.emplace(key, d);
    if (fresh) continue;
    Dart a = it->second;
    if (!best || a < best->first) best = ImmersionWitness{g.head(d), a, d};
  }
  return best;
}

inline std::optional<ImmersionWitness> immersion_witness(const GraphMorphism& m) {
  return least_foldable_pair(m.source, m.map);
}

inline bool is_immersion(const OrientedGraph& g, const MapData& m) {
  return !least_foldable_pair(g, m).has_value();
}

inline bool is_immersion(const GraphMorphism& m) { return !immersion_witness(m).has_value(); }

struct FoldSequence {
  GraphMorphism immersion;   // folded graph -> original target
  MapData quotient;          // original source -> folded graph
  std::vector<FoldRecord> records;
};

inline FoldSequence fold_sequence(const GraphMorphism& m) {
  FoldSequence out;
  OrientedGraph g = m.source;
  MapData image = m.map;
  MapData quot = identity_map(m.source);
  while (auto w = least_foldable_pair(g, image)) {
    FoldResult r = fold(g, w->first, w->second);
    MapData descended;
    descended.vertex.assign(r.graph.num_vertices(), 0);
    descended.dart.assign(r.graph.num_darts(), 0);
    for (Vertex v = 0; v < g.num_vertices(); ++v) descended.vertex[r.quotient.vertex[v]] = image.vertex[v];
    for (Dart d = 0; d < g.num_darts(); ++d) descended.dart[r.quotient.dart[d]] = image.dart[d];
    quot = compose(quot, r.quotient);
    image = std::move(descended);
    g = std::move(r.graph);
    out.records.push_back(r.record);
  }
  out.immersion = {std::move(g), m.target, std::move(image)};
  out.quotient = std::move(quot);
  return out;
}

struct Components {
  std::vector<int> of_vertex;
  int count = 0;
};

inline Components components(const OrientedGraph& g) {
  UnionFind uf(g.num_vertices());
  for (Dart d = 0; d < g.num_darts(); d += 2) uf.unite(g.head(d), g.tail(d));
  Components c;
  c.of_vertex.assign(g.num_vertices(), -1);
  std::vector<int> id(g.num_vertices(), -1);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    int r = uf.find(v);
    if (id[r] < 0) id[r] = c.count++;
    c.of_vertex[v] = id[r];
  }
  return c;
}

// First Betti number of each component, components ordered by least vertex.
inline std::vector<int> rank(const OrientedGraph& g) {
  Components c = components(g);
  std::vector<int> edges(c.count, 0), verts(c.count, 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) ++verts[c.of_vertex[v]];
  for (Dart d = 0; d < g.num_darts(); d += 2) ++edges[c.of_vertex[g.head(d)]];
  std::vector<int> r(c.count);
  for (int i = 0; i < c.count; ++i) r[i] = edges[i] - verts[i] + 1;
  return r;
}

inline int total_rank(const OrientedGraph& g) {
  auto r = rank(g);
  return std::accumulate(r.begin(), r.end(), 0);
}

struct Core {
  OrientedGraph graph;
  MapData inclusion;                 // core -> g
  std::vector<Vertex> vertex_to_core; // g vertex -> core vertex, -1 if trimmed
  std::vector<Dart> dart_to_core;     // g dart -> core dart, -1 if trimmed
  std::vector<Vertex> retraction;     // g vertex -> core vertex
  std::vector<Dart> toward_core;      // trimmed vertex -> dart leaving it toward the core
};

// Repeatedly deletes valence-one vertices outside `keep`.  Isolated vertices
// are kept, so each tree component shrinks to one vertex.
inline Core trim_to_core(const OrientedGraph& g, const std::vector<Vertex>& keep) {
  int n = g.num_vertices();
  std::vector<char> kept(n, 0), vgone(n, 0), egone(g.num_edges(), 0);
  for (Vertex v : keep) kept.at(v) = 1;
  std::vector<int> val(n, 0);
  for (Dart d = 0; d < g.num_darts(); ++d) ++val[g.head(d)];
  auto into = g.darts_into();
  std::vector<Vertex> order;
  std::vector<Dart> toward(n, -1);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < n; ++v)
    if (val[v] == 1 && !kept[v]) queue.push_back(v);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    if (vgone[v] || val[v] != 1 || kept[v]) continue;
    Dart in = -1;
    for (Dart d : into[v])
      if (!egone[d / 2]) in = d;
    Dart out = OrientedGraph::bar(in);
    Vertex w = g.head(out);
    egone[in / 2] = 1;
    vgone[v] = 1;
    toward[v] = out;
    order.push_back(v);
    --val[w];
    if (val[w] == 1 && !kept[w]) queue.push_back(w);
  }
  Core c;
  c.vertex_to_core.assign(n, -1);
  c.dart_to_core.assign(g.num_darts(), -1);
  for (Vertex v = 0; v < n; ++v)
    if (!vgone[v]) {
      c.vertex_to_core[v] = c.graph.add_vertex();
      c.inclusion.vertex.push_back(v);
    }
  for (Dart d = 0; d < g.num_darts(); d += 2) {
    if (egone[d / 2]) continue;
    Dart nd = c.graph.add_edge(c.vertex_to_core[g.tail(d)], c.vertex_to_core[g.head(d)], g.label(d));
    c.dart_to_core[d] = nd;
    c.dart_to_core[d + 1] = nd + 1;
    c.inclusion.dart.push_back(d);
    c.inclusion.dart.push_back(d + 1);
  }
  c.retraction = c.vertex_to_core;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    c.retraction[*it] = c.retraction[g.head(toward[*it])];
  c.toward_core = std::move(toward);
  return c;
}

struct Pullback {
  OrientedGraph graph;
  MapData first;   // projection to f's source
  MapData second;  // projection to g's source
};

inline void require_immersion(const GraphMorphism& m, const char* what) {
  if (!m.valid()) throw std::invalid_argument(std::string(what) + ": invalid morphism");
  if (!is_immersion(m)) throw std::invalid_argument(std::string(what) + ": not an immersion");
}

// Full fiber product over the common target.
inline Pullback pullback(const GraphMorphism& f, const GraphMorphism& g) {
  require_immersion(f, "pullback");
  require_immersion(g, "pullback");
  if (!(f.target == g.target)) throw std::invalid_argument("pullback: targets differ");
  Pullback p;
  std::map<std::pair<Vertex, Vertex>, Vertex> index;
  for (Vertex x = 0; x < f.source.num_vertices(); ++x)
    for (Vertex y = 0; y < g.source.num_vertices(); ++y)
      if (f.map.vertex[x] == g.map.vertex[y]) {
        index[{x, y}] = p.graph.add_vertex();
        p.first.vertex.push_back(x);
        p.second.vertex.push_back(y);
      }
  std::vector<std::vector<Dart>> by_image(g.target.num_darts());
  for (Dart d = 0; d < g.source.num_darts(); ++d) by_image[g.map.dart[d]].push_back(d);
  for (Dart d = 0; d < f.source.num_darts(); d += 2)
    for (Dart e : by_image[f.map.dart[d]]) {
      Vertex from = index.at({f.source.tail(d), g.source.tail(e)});
      Vertex to = index.at({f.source.head(d), g.source.head(e)});
      p.graph.add_edge(from, to);
      p.first.dart.push_back(d);
      p.first.dart.push_back(d + 1);
      p.second.dart.push_back(e);
      p.second.dart.push_back(OrientedGraph::bar(e));
    }
  return p;
}

// Only the component of the fiber product through (x, y); vertex 0 is (x, y).
// The maps need only be immersions, targets are compared by map data.
inline Pullback pullback_component(const OrientedGraph& a, const MapData& fa, const OrientedGraph& b,
                                   const MapData& fb, int target_darts, Vertex x, Vertex y) {
  if (fa.vertex[x] != fb.vertex[y]) throw std::invalid_argument("pullback_component: base images differ");
  std::vector<std::vector<Dart>> by_image(target_darts);
  for (Dart d = 0; d < b.num_darts(); ++d) by_image[fb.dart[d]].push_back(d);
  auto out_a = a.darts_out();
  Pullback p;
  std::map<std::pair<Vertex, Vertex>, Vertex> index;
  std::deque<std::pair<Vertex, Vertex>> queue;
  auto visit = [&](Vertex u, Vertex w) {
    auto [it, fresh] = index.emplace(std::make_pair(u, w), p.graph.num_vertices());
    if (fresh) {
      p.graph.add_vertex();
      p.first.vertex.push_back(u);
      p.second.vertex.push_back(w);
      queue.emplace_back(u, w);
    }
    return it->second;
  };
  visit(x, y);
  std::map<std::pair<Dart, Dart>, bool> done;
  while (!queue.empty()) {
    auto [u, w] = queue.front();
    queue.pop_front();
    for (Dart d : out_a[u])
      for (Dart e : by_image[fa.dart[d]]) {
        if (b.tail(e) != w) continue;
        Dart cd = d & ~1;
        Dart ce = (d & 1) ? OrientedGraph::bar(e) : e;
        if (!done.emplace(std::make_pair(cd, ce), true).second) continue;
        Vertex from = visit(a.tail(cd), b.tail(ce));
        Vertex to = visit(a.head(cd), b.head(ce));
        p.graph.add_edge(from, to);
        p.first.dart.push_back(cd);
        p.first.dart.push_back(cd + 1);
        p.second.dart.push_back(ce);
        p.second.dart.push_back(OrientedGraph::bar(ce));
      }
  }
  return p;
}

// Labeled rose: one vertex, dart 2i labeled i+1.
inline OrientedGraph labeled_rose(int rank) {
  OrientedGraph r(1);
  for (int i = 0; i < rank; ++i) r.add_edge(0, 0, i + 1);
  return r;
}

inline Dart rose_dart(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }
inline int rose_letter(Dart d) { return (d & 1) ? -(d / 2 + 1) : d / 2 + 1; }

// The morphism to labeled_rose(rank) defined by the labels of g.
inline GraphMorphism label_morphism(const OrientedGraph& g, int rank) {
  GraphMorphism m{g, labeled_rose(rank), {}};
  m.map.vertex.assign(g.num_vertices(), 0);
  for (Dart d = 0; d < g.num_darts(); ++d) {
    int l = g.label(d);
    if (l == 0 || std::abs(l) > rank) throw std::invalid_argument("label_morphism: bad label");
    m.map.dart.push_back(rose_dart(l));
  }
  return m;
}

struct SubgroupGraph {
  OrientedGraph graph;
  Vertex base = 0;
};

// Wedge of subdivided petals spelling the words, based at vertex 0.
inline OrientedGraph petal_wedge(const std::vector<std::vector<int>>& words) {
  OrientedGraph g(1);
  for (const auto& w : words) {
    if (w.empty()) continue;
    Vertex cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Vertex next = i + 1 == w.size() ? 0 : g.add_vertex();
      g.add_edge(cur, next, w[i]);
      cur = next;
    }
  }
  return g;
}

// Folded core graph of the subgroup generated by `words` in the free group of `rank`.
inline SubgroupGraph subgroup_graph(const std::vector<std::vector<int>>& words, int rank) {
  FoldSequence fs = fold_sequence(label_morphism(petal_wedge(words), rank));
  Vertex base = fs.quotient.vertex[0];
  Core c = trim_to_core(fs.immersion.source, {base});
  return {c.graph, c.vertex_to_core[base]};
}

// Folded core of a labeled graph based at `base`, i.e. the subgroup it reads.
inline SubgroupGraph subgroup_of(const OrientedGraph& g, int rank, Vertex base = 0) {
  FoldSequence fs = fold_sequence(label_morphism(g, rank));
  Vertex b = fs.quotient.vertex.at(base);
  Core c = trim_to_core(fs.immersion.source, {b});
  return {c.graph, c.vertex_to_core[b]};
}

// Follows the labeled path of `word` from the base; true iff it closes up.
inline bool accepts(const SubgroupGraph& s, const std::vector<int>& word) {
  auto out = s.graph.darts_out();
  Vertex cur = s.base;
  for (int l : word) {
    Vertex next = -1;
    for (Dart d : out[cur])
      if (s.graph.label(d) == l) {
        next = s.graph.head(d);
        break;
      }
    if (next < 0) return false;
    cur = next;
  }
  return cur == s.base;
}

// Subgroup graph of the intersection, from the pullback component at the base pair.
inline SubgroupGraph intersect(const SubgroupGraph& a, const SubgroupGraph& b, int rank) {
  GraphMorphism fa = label_morphism(a.graph, rank), fb = label_morphism(b.graph, rank);
  Pullback p = pullback_component(a.graph, fa.map, b.graph, fb.map, 2 * rank, a.base, b.base);
  OrientedGraph labeled(p.graph.num_vertices());
  for (Dart d = 0; d < p.graph.num_darts(); d += 2)
    labeled.add_edge(p.graph.tail(d), p.graph.head(d), a.graph.label(p.first.dart[d]));
  Core c = trim_to_core(labeled, {0});
  return {c.graph, c.vertex_to_core[0]};
}

}  // namespace nielsen
