#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nielsen/graph_core.hpp"
#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

struct Complexity {
  int edges = 0;
  int circular = 0;

  auto operator<=>(const Complexity&) const = default;
};

inline bool is_circle(const OrientedGraph& g) { return shape_of(g) == Shape::circle; }

inline Complexity complexity(const GraphOfGraphs& X) {
  Complexity c{X.num_edges(), 0};
  for (const auto& e : X.edge_spaces)
    if (is_circle(e)) ++c.circular;
  return c;
}

enum class MoveType { fold_vertex_step, fold_edge_spaces, pull, unpull, trim };

inline std::string move_name(MoveType m) {
  switch (m) {
    case MoveType::fold_vertex_step: return "fold_vertex_step";
    case MoveType::fold_edge_spaces: return "fold_edge_spaces";
    case MoveType::pull: return "pull";
    case MoveType::unpull: return "unpull";
    case MoveType::trim: return "trim";
  }
  return "?";
}

struct MoveRecord {
  MoveType move = MoveType::trim;
  FoldKind effect = FoldKind::equivalence;
  Complexity before;
  Complexity after;
  int rank_before = 0;
  int rank_after = 0;
  std::string detail;
};

inline std::string to_json_line(const MoveRecord& r) {
  std::ostringstream o;
  o << "{\"move\":\"" << move_name(r.move) << "\",\"effect\":\""
    << (r.effect == FoldKind::reduction ? "reduction" : "equivalence") << "\",\"before\":[" << r.before.edges << ","
    << r.before.circular << "],\"after\":[" << r.after.edges << "," << r.after.circular << "],\"rank_before\":"
    << r.rank_before << ",\"rank_after\":" << r.rank_after << ",\"detail\":\"" << r.detail << "\"}";
  return o.str();
}

// A step of a path in the realization: a dart of a vertex space, or a
// crossing of an edge space at one of its vertices along an underlying dart.
struct Step {
  bool cross = false;
  int a = 0;  // vertex space, or underlying dart
  int b = 0;  // dart of the vertex space, or vertex of the edge space

  bool operator==(const Step&) const = default;
};

using Path = std::vector<Step>;

inline Step inverse_step(const Step& s) {
  return s.cross ? Step{true, OrientedGraph::bar(s.a), s.b} : Step{false, s.a, OrientedGraph::bar(s.b)};
}

inline Path inverse_path(const Path& p) {
  Path out;
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(inverse_step(*it));
  return out;
}

inline Path reduce_path(const Path& p) {
  Path out;
  for (const Step& s : p) {
    if (!out.empty() && out.back() == inverse_step(s))
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

// Based loops in X together with a shift word c (x letters): the input
// tuple entry i equals c * read(loop i) * c^-1 in the surface group.
struct Marking {
  Vertex base_space = 0;
  Vertex base_vertex = 0;
  std::vector<Path> loops;
  Word shift;
};

struct Point {
  Vertex space;
  Vertex vertex;
  bool operator==(const Point&) const = default;
};

class MarkedGog {
 public:
  MarkedGog(GraphOfGraphs x, Marking m, const SurfacePattern* p) : X(std::move(x)), mark(std::move(m)), pattern(p) {}

  GraphOfGraphs X;
  Marking mark;
  const SurfacePattern* pattern;
  std::vector<MoveRecord> trace;
  std::function<void(const MarkedGog&, const MoveRecord&)> on_record;

  // -- reading ----------------------------------------------------------
  Point start(const Step& s) const {
    if (!s.cross) return {s.a, X.vertex_spaces[s.a].tail(s.b)};
    return {X.underlying.tail(s.a), X.attach[OrientedGraph::bar(s.a)].vertex[s.b]};
  }
  Point end(const Step& s) const {
    if (!s.cross) return {s.a, X.vertex_spaces[s.a].head(s.b)};
    return {X.underlying.head(s.a), X.attach[s.a].vertex[s.b]};
  }

  Word read(const Step& s) const {
    if (!s.cross) return {pattern->x_letter(X.over_vertex[s.a].dart[s.b])};
    return pattern->crossing(X.over.dart[s.a], X.over_edge[s.a / 2].vertex[s.b]);
  }

  Word read(const Path& p) const {
    Word w;
    for (const Step& s : p) {
      Word r = read(s);
      w.insert(w.end(), r.begin(), r.end());
    }
    return free_reduce(w);
  }

  // x-words of the marked loops, shift not applied.
  std::vector<Word> loop_words() const {
    std::vector<Word> out;
    for (const Path& p : mark.loops) out.push_back(read(p));
    return out;
  }

  std::string check_marking() const {
    Point base{mark.base_space, mark.base_vertex};
    for (std::size_t i = 0; i < mark.loops.size(); ++i) {
      Point cur = base;
      for (const Step& s : mark.loops[i]) {
        if (!(start(s) == cur)) return "loop " + std::to_string(i) + " is broken";
        cur = end(s);
      }
      if (!(cur == base)) return "loop " + std::to_string(i) + " is not closed";
    }
    return {};
  }

  // -- bookkeeping --------------------------------------------------------
  MoveRecord begin_record(MoveType t, std::string detail) const {
    MoveRecord r;
    r.move = t;
    r.before = complexity(X);
    r.rank_before = X.rank();
    r.detail = std::move(detail);
    return r;
  }
  void finish_record(MoveRecord& r) {
    r.after = complexity(X);
    r.rank_after = X.rank();
    for (Path& p : mark.loops) p = reduce_path(p);
    trace.push_back(r);
    if (on_record) on_record(*this, r);
  }

  // -- generic quotient ------------------------------------------------------
  struct Identifications {
    std::vector<std::pair<Point, Point>> vertices;              // vertex-space vertices
    std::vector<std::pair<Point, Point>> darts;                 // vertex-space darts (space, dart)
    std::vector<std::pair<Point, Point>> edge_vertices;         // (edge, vertex) pairs
  };

  // Collapses X by an underlying quotient plus identifications inside the
  // merged spaces, transporting attach maps, over maps and the marking.
  void apply_quotient(UnionFind& gv, UnionFind& gd, const Identifications& ids) {
    const OrientedGraph& U = X.underlying;
    Quotient q = quotient(U, gv, gd);
    int nv = q.graph.num_vertices(), ne = q.graph.num_edges();
    // Vertex spaces.
    std::vector<std::vector<Vertex>> members(nv);
    for (Vertex u = 0; u < U.num_vertices(); ++u) members[q.map.vertex[u]].push_back(u);
    std::vector<int> voff(U.num_vertices()), doff(U.num_vertices());
    std::vector<int> gvv_total(nv, 0), gvd_total(nv, 0);
    for (Vertex w = 0; w < nv; ++w)
      for (Vertex u : members[w]) {
        voff[u] = gvv_total[w];
        doff[u] = gvd_total[w];
        gvv_total[w] += X.vertex_spaces[u].num_vertices();
        gvd_total[w] += X.vertex_spaces[u].num_darts();
      }
    std::vector<UnionFind> vuf, duf;
    for (Vertex w = 0; w < nv; ++w) {
      vuf.emplace_back(gvv_total[w]);
      duf.emplace_back(gvd_total[w]);
    }
    for (auto& [p1, p2] : ids.vertices) {
      Vertex w = q.map.vertex[p1.space];
      if (q.map.vertex[p2.space] != w) throw std::logic_error("identification across different vertex spaces");
      vuf[w].unite(voff[p1.space] + p1.vertex, voff[p2.space] + p2.vertex);
    }
    for (auto& [p1, p2] : ids.darts) {
      Vertex w = q.map.vertex[p1.space];
      duf[w].unite(doff[p1.space] + p1.vertex, doff[p2.space] + p2.vertex);
      duf[w].unite(doff[p1.space] + OrientedGraph::bar(p1.vertex), doff[p2.space] + OrientedGraph::bar(p2.vertex));
    }
    std::vector<OrientedGraph> new_vs(nv);
    std::vector<MapData> vmap(U.num_vertices());
    std::vector<MapData> new_over_vertex(nv);
    for (Vertex w = 0; w < nv; ++w) {
      OrientedGraph combined(gvv_total[w]);
      for (Vertex u : members[w]) {
        const auto& g = X.vertex_spaces[u];
        for (Dart d = 0; d < g.num_darts(); d += 2)
          combined.add_edge(voff[u] + g.tail(d), voff[u] + g.head(d), g.label(d));
      }
      Quotient qq = quotient(combined, vuf[w], duf[w]);
      new_vs[w] = qq.graph;
      MapData ov;
      ov.vertex.assign(qq.graph.num_vertices(), 0);
      ov.dart.assign(qq.graph.num_darts(), 0);
      for (Vertex u : members[w]) {
        const auto& g = X.vertex_spaces[u];
        MapData m;
        for (Vertex a = 0; a < g.num_vertices(); ++a) {
          m.vertex.push_back(qq.map.vertex[voff[u] + a]);
          if (X.has_over) ov.vertex[m.vertex.back()] = X.over_vertex[u].vertex[a];
        }
        for (Dart d = 0; d < g.num_darts(); ++d) {
          m.dart.push_back(qq.map.dart[doff[u] + d]);
          if (X.has_over) ov.dart[m.dart.back()] = X.over_vertex[u].dart[d];
        }
        vmap[u] = std::move(m);
      }
      new_over_vertex[w] = std::move(ov);
    }
    // Edge spaces.
    std::vector<std::vector<int>> emembers(ne);
    for (int e = 0; e < U.num_edges(); ++e) emembers[q.map.dart[2 * e] / 2].push_back(e);
    std::vector<int> evoff(U.num_edges());
    std::vector<int> ev_total(ne, 0);
    for (int k = 0; k < ne; ++k)
      for (int e : emembers[k]) {
        evoff[e] = ev_total[k];
        ev_total[k] += X.edge_spaces[e].num_vertices();
      }
    std::vector<UnionFind> evuf;
    for (int k = 0; k < ne; ++k) evuf.emplace_back(ev_total[k]);
    for (auto& [p1, p2] : ids.edge_vertices) {
      int k = q.map.dart[2 * p1.space] / 2;
      evuf[k].unite(evoff[p1.space] + p1.vertex, evoff[p2.space] + p2.vertex);
    }
    std::vector<OrientedGraph> new_es(ne);
    std::vector<MapData> emap(U.num_edges());
    std::vector<MapData> new_over_edge(ne);
    for (int k = 0; k < ne; ++k) {
      OrientedGraph combined(ev_total[k]);
      int dt = 0;
      for (int e : emembers[k]) {
        const auto& g = X.edge_spaces[e];
        for (Dart d = 0; d < g.num_darts(); d += 2) combined.add_edge(evoff[e] + g.tail(d), evoff[e] + g.head(d));
        dt += g.num_darts();
      }
      UnionFind dd(dt);
      Quotient qq = quotient(combined, evuf[k], dd);
      new_es[k] = qq.graph;
      MapData oe;
      oe.vertex.assign(qq.graph.num_vertices(), 0);
      oe.dart.assign(qq.graph.num_darts(), 0);
      int dcur = 0;
      for (int e : emembers[k]) {
        const auto& g = X.edge_spaces[e];
        MapData m;
        for (Vertex a = 0; a < g.num_vertices(); ++a) {
          m.vertex.push_back(qq.map.vertex[evoff[e] + a]);
          if (X.has_over) oe.vertex[m.vertex.back()] = X.over_edge[e].vertex[a];
        }
        for (Dart d = 0; d < g.num_darts(); ++d) {
          m.dart.push_back(qq.map.dart[dcur + d]);
          if (X.has_over) oe.dart[m.dart.back()] = X.over_edge[e].dart[d];
        }
        dcur += g.num_darts();
        emap[e] = std::move(m);
      }
      new_over_edge[k] = std::move(oe);
    }
    // Attach maps.
    std::vector<MapData> new_attach(q.graph.num_darts());
    for (Dart nd = 0; nd < q.graph.num_darts(); ++nd) {
      new_attach[nd].vertex.assign(new_es[nd / 2].num_vertices(), -1);
      new_attach[nd].dart.assign(new_es[nd / 2].num_darts(), -1);
    }
    for (Dart d = 0; d < U.num_darts(); ++d) {
      Dart nd = q.map.dart[d];
      int e = d / 2;
      Vertex hu = U.head(d);
      const auto& g = X.edge_spaces[e];
      for (Vertex a = 0; a < g.num_vertices(); ++a)
        new_attach[nd].vertex[emap[e].vertex[a]] = vmap[hu].vertex[X.attach[d].vertex[a]];
      for (Dart c = 0; c < g.num_darts(); ++c) new_attach[nd].dart[emap[e].dart[c]] = vmap[hu].dart[X.attach[d].dart[c]];
    }
    MapData new_over;
    if (X.has_over) {
      new_over.vertex.assign(nv, 0);
      new_over.dart.assign(q.graph.num_darts(), 0);
      for (Vertex u = 0; u < U.num_vertices(); ++u) new_over.vertex[q.map.vertex[u]] = X.over.vertex[u];
      for (Dart d = 0; d < U.num_darts(); ++d) new_over.dart[q.map.dart[d]] = X.over.dart[d];
    }
    // Marking.
    for (Path& p : mark.loops)
      for (Step& s : p) {
        if (s.cross)
          s = {true, q.map.dart[s.a], emap[s.a / 2].vertex[s.b]};
        else
          s = {false, q.map.vertex[s.a], vmap[s.a].dart[s.b]};
      }
    mark.base_vertex = vmap[mark.base_space].vertex[mark.base_vertex];
    mark.base_space = q.map.vertex[mark.base_space];
    X.underlying = std::move(q.graph);
    X.vertex_spaces = std::move(new_vs);
    X.edge_spaces = std::move(new_es);
    X.attach = std::move(new_attach);
    if (X.has_over) {
      X.over = std::move(new_over);
      X.over_vertex = std::move(new_over_vertex);
      X.over_edge = std::move(new_over_edge);
    }
  }

  // -- moves --------------------------------------------------------------

  // Folds two coterminal darts of X_v with equal image.
  MoveRecord fold_vertex_step(Vertex v, Dart d1, Dart d2) {
    const auto& g = X.vertex_spaces[v];
    check_foldable(g, d1, d2);
    if (X.over_vertex[v].dart[d1] != X.over_vertex[v].dart[d2]) throw std::invalid_argument("fold_vertex_step: images differ");
    std::ostringstream det;
    det << "v=" << v << " darts=" << d1 << "," << d2;
    MoveRecord r = begin_record(MoveType::fold_vertex_step, det.str());
    r.effect = g.tail(d1) == g.tail(d2) ? FoldKind::reduction : FoldKind::equivalence;
    UnionFind gv(X.num_vertices()), gd(X.underlying.num_darts());
    Identifications ids;
    ids.darts.push_back({{v, d1}, {v, d2}});
    ids.vertices.push_back({{v, g.tail(d1)}, {v, g.tail(d2)}});
    apply_quotient(gv, gd, ids);
    finish_record(r);
    return r;
  }

  // Stallings-folds X_v to an immersion; returns the records of this call.
  std::vector<MoveRecord> fold_in_vertex(Vertex v) {
    std::vector<MoveRecord> out;
    while (auto w = least_foldable_pair(X.vertex_spaces[v], X.over_vertex[v]))
      out.push_back(fold_vertex_step(v, w->first, w->second));
    return out;
  }

  // Wedges the edge spaces of d1 and d2 (same head, same type) at a ~ b and
  // identifies the far ends.
  MoveRecord fold_edge_spaces(Dart d1, Dart d2, Vertex a, Vertex b) {
    const auto& U = X.underlying;
    if (d1 / 2 == d2 / 2) throw std::invalid_argument("fold_edge_spaces: needs two different edges");
    if (U.head(d1) != U.head(d2)) throw std::invalid_argument("fold_edge_spaces: darts not coterminal");
    if (X.over.dart[d1] != X.over.dart[d2]) throw std::invalid_argument("fold_edge_spaces: types differ");
    if (X.over_edge[d1 / 2].vertex[a] != X.over_edge[d2 / 2].vertex[b])
      throw std::invalid_argument("fold_edge_spaces: vertex types differ");
    if (X.attach[d1].vertex[a] != X.attach[d2].vertex[b]) throw std::invalid_argument("fold_edge_spaces: images differ");
    Point ia{U.tail(d1), X.attach[OrientedGraph::bar(d1)].vertex[a]};
    Point ib{U.tail(d2), X.attach[OrientedGraph::bar(d2)].vertex[b]};
    std::ostringstream det;
    det << "darts=" << d1 << "," << d2 << " at=" << a << "," << b;
    MoveRecord r = begin_record(MoveType::fold_edge_spaces, det.str());
    r.effect = ia == ib ? FoldKind::reduction : FoldKind::equivalence;
    UnionFind gv(X.num_vertices()), gd(U.num_darts());
    gv.unite(U.tail(d1), U.tail(d2));
    gd.unite(d1, d2);
    gd.unite(OrientedGraph::bar(d1), OrientedGraph::bar(d2));
    Identifications ids;
    ids.edge_vertices.push_back({{d1 / 2, a}, {d2 / 2, b}});
    ids.vertices.push_back({ia, ib});
    apply_quotient(gv, gd, ids);
    finish_record(r);
    return r;
  }

  // Replaces the point edge space of d by k, mapped into X_head(d) by
  // `into_head` and to the target edge space by `to_pattern`; a copy of k is
  // wedged onto X_tail(d) at the old attaching point.
  MoveRecord pull_across(Dart d, const OrientedGraph& k, const MapData& into_head, const MapData& to_pattern, Vertex k0) {
    const auto& U = X.underlying;
    int e = d / 2;
    if (shape_of(X.edge_spaces[e]) != Shape::point) throw std::invalid_argument("pull_across: edge space is not a point");
    Vertex hv = U.head(d), tv = U.tail(d);
    Dart db = OrientedGraph::bar(d);
    if (into_head.vertex[k0] != X.attach[d].vertex[0]) throw std::invalid_argument("pull_across: base does not match");
    if (to_pattern.vertex[k0] != X.over_edge[e].vertex[0]) throw std::invalid_argument("pull_across: type does not match");
    const GraphOfGraphs& T = pattern->gog;
    if (!(compose(into_head, X.over_vertex[hv]) == compose(to_pattern, T.attach[X.over.dart[d]])))
      throw std::invalid_argument("pull_across: no compatible map into the target edge space");
    std::ostringstream det;
    det << "dart=" << d << " size=" << k.num_vertices() << "," << k.num_edges();
    MoveRecord r = begin_record(MoveType::pull, det.str());
    Vertex old_tail_point = X.attach[db].vertex[0];
    OrientedGraph& tg = X.vertex_spaces[tv];
    MapData& tov = X.over_vertex[tv];
    MapData copy;
    copy.vertex.assign(k.num_vertices(), -1);
    MapData tail_attach_pattern = compose(to_pattern, T.attach[X.over.dart[db]]);
    for (Vertex a = 0; a < k.num_vertices(); ++a) {
      copy.vertex[a] = a == k0 ? old_tail_point : tg.add_vertex();
      if (a != k0) tov.vertex.push_back(tail_attach_pattern.vertex[a]);
    }
    for (Dart c = 0; c < k.num_darts(); c += 2) {
      Dart nd = tg.add_edge(copy.vertex[k.tail(c)], copy.vertex[k.head(c)]);
      copy.dart.push_back(nd);
      copy.dart.push_back(nd + 1);
      tov.dart.push_back(tail_attach_pattern.dart[c]);
      tov.dart.push_back(tail_attach_pattern.dart[c + 1]);
    }
    X.edge_spaces[e] = k;
    X.attach[d] = into_head;
    X.attach[db] = copy;
    X.over_edge[e] = to_pattern;
    for (Path& p : mark.loops)
      for (Step& s : p)
        if (s.cross && s.a / 2 == e) s.b = k0;
    finish_record(r);
    return r;
  }

  struct Traversal {
    Dart via = -1;     // underlying dart into v
    Dart edge = -1;    // dart of the edge space mapping onto f
  };

  // All traversals of the unoriented edge f of X_v by incident edge spaces.
  std::vector<Traversal> traversals(Vertex v, Dart f) const {
    std::vector<Traversal> out;
    const auto& U = X.underlying;
    for (Dart d = 0; d < U.num_darts(); ++d) {
      if (U.head(d) != v) continue;
      const auto& g = X.edge_spaces[d / 2];
      for (Dart c = 0; c < g.num_darts(); ++c)
        if (X.attach[d].dart[c] == f) out.push_back({d, c});
    }
    return out;
  }

  std::vector<int> traversal_counts(Vertex v) const {
    std::vector<int> count(X.vertex_spaces[v].num_edges(), 0);
    const auto& U = X.underlying;
    for (Dart d = 0; d < U.num_darts(); ++d) {
      if (U.head(d) != v) continue;
      const auto& g = X.edge_spaces[d / 2];
      for (Dart c = 0; c < g.num_darts(); c += 2) ++count[X.attach[d].dart[c] / 2];
    }
    return count;
  }

  // Removes the once-traversed edge f of X_v and its traversing edge of the
  // edge space (a collapse of a free face).
  MoveRecord unpull(Vertex v, Dart f) {
    // Each traversing edge has exactly one dart over f.
    auto tr = traversals(v, f);
    if (tr.size() != 1) throw std::invalid_argument("unpull: edge is not traversed exactly once");
    Traversal t = tr[0];
    Dart d = t.via, db = OrientedGraph::bar(d);
    int e = d / 2;
    const auto& E = X.edge_spaces[e];
    Vertex x1 = E.tail(t.edge), x2 = E.head(t.edge);
    std::ostringstream det;
    det << "v=" << v << " edge=" << f / 2 << " dart=" << d;
    MoveRecord r = begin_record(MoveType::unpull, det.str());
    Dart g = X.attach[db].dart[t.edge];
    Path detour{{true, db, x1}, {false, X.underlying.tail(d), g}, {true, d, x2}};
    Path detour_inv = inverse_path(detour);
    for (Path& p : mark.loops) {
      Path np;
      for (const Step& s : p) {
        if (!s.cross && s.a == v && s.b == f)
          np.insert(np.end(), detour.begin(), detour.end());
        else if (!s.cross && s.a == v && s.b == OrientedGraph::bar(f))
          np.insert(np.end(), detour_inv.begin(), detour_inv.end());
        else
          np.push_back(s);
      }
      p = reduce_path(np);
    }
    // Remove f from X_v and t.edge from the edge space; vertices stay unless
    // an edge-space vertex would be left isolated.
    std::vector<char> keep_v(X.vertex_spaces[v].num_vertices(), 1);
    std::vector<char> keep_e(X.vertex_spaces[v].num_edges(), 1);
    keep_e[f / 2] = 0;
    std::vector<char> keep_ev(E.num_vertices(), 1), keep_ee(E.num_edges(), 1);
    keep_ee[t.edge / 2] = 0;
    std::vector<int> val(E.num_vertices(), 0);
    for (Dart c = 0; c < E.num_darts(); ++c)
      if (c / 2 != t.edge / 2) ++val[E.head(c)];
    for (Vertex x = 0; x < E.num_vertices(); ++x)
      if (val[x] == 0 && E.num_vertices() > 1) keep_ev[x] = 0;
    restrict_vertex_space(v, keep_v, keep_e);
    restrict_edge_space(e, keep_ev, keep_ee);
    finish_record(r);
    return r;
  }

  // Trims edge spaces to cores (trees to their least vertex) and vertex
  // spaces relative to the attaching images.
  MoveRecord trim_trees() {
    MoveRecord r = begin_record(MoveType::trim, "");
    const auto& U = X.underlying;
    bool changed = false;
    for (int e = 0; e < U.num_edges(); ++e) {
      const auto& E = X.edge_spaces[e];
      std::vector<Vertex> keep;
      if (total_rank(E) == 0) keep.push_back(0);
      Core c = trim_to_core(E, keep);
      if (c.graph.num_vertices() == E.num_vertices()) continue;
      changed = true;
      // Crossing at a trimmed x: attach_bar(gamma) * crossing at r * attach(gamma)^-1.
      for (Path& p : mark.loops) {
        Path np;
        for (const Step& s : p) {
          if (!s.cross || s.a / 2 != e || c.vertex_to_core[s.b] >= 0) {
            np.push_back(s);
            continue;
          }
          Dart dd = s.a, db = OrientedGraph::bar(dd);
          Path tail_side, head_side;
          Vertex x = s.b;
          while (c.vertex_to_core[x] < 0) {
            Dart step = c.toward_core[x];
            tail_side.push_back({false, U.tail(dd), X.attach[db].dart[step]});
            head_side.push_back({false, U.head(dd), X.attach[dd].dart[step]});
            x = E.head(step);
          }
          np.insert(np.end(), tail_side.begin(), tail_side.end());
          np.push_back({true, dd, x});
          Path back = inverse_path(head_side);
          np.insert(np.end(), back.begin(), back.end());
        }
        p = reduce_path(np);
      }
      std::vector<char> kv(E.num_vertices(), 0), ke(E.num_edges(), 0);
      for (Vertex a = 0; a < E.num_vertices(); ++a) kv[a] = c.vertex_to_core[a] >= 0;
      for (Dart dd = 0; dd < E.num_darts(); dd += 2) ke[dd / 2] = c.dart_to_core[dd] >= 0;
      restrict_edge_space(e, kv, ke);
    }
    for (Vertex v = 0; v < U.num_vertices(); ++v) {
      const auto& G = X.vertex_spaces[v];
      std::vector<Vertex> keep;
      for (Dart d = 0; d < U.num_darts(); ++d)
        if (U.head(d) == v)
          for (Vertex a : X.attach[d].vertex) keep.push_back(a);
      Core c = trim_to_core(G, keep);
      if (c.graph.num_vertices() == G.num_vertices()) continue;
      changed = true;
      if (mark.base_space == v && c.vertex_to_core[mark.base_vertex] < 0) {
        // Move the base along the tree to the core.
        Path gamma;
        Vertex x = mark.base_vertex;
        while (c.vertex_to_core[x] < 0) {
          gamma.push_back({false, v, c.toward_core[x]});
          x = G.head(c.toward_core[x]);
        }
        Path ginv = inverse_path(gamma);
        for (Path& p : mark.loops) {
          Path np = ginv;
          np.insert(np.end(), p.begin(), p.end());
          np.insert(np.end(), gamma.begin(), gamma.end());
          p = reduce_path(np);
        }
        mark.shift = concat(mark.shift, read(gamma));
        mark.base_vertex = x;
      }
      for (const Path& p : mark.loops)
        for (const Step& s : p)
          if (!s.cross && s.a == v && c.dart_to_core[s.b] < 0)
            throw std::logic_error("trim_trees: marking uses a trimmed edge");
      std::vector<char> kv(G.num_vertices(), 0), ke(G.num_edges(), 0);
      for (Vertex a = 0; a < G.num_vertices(); ++a) kv[a] = c.vertex_to_core[a] >= 0;
      for (Dart dd = 0; dd < G.num_darts(); dd += 2) ke[dd / 2] = c.dart_to_core[dd] >= 0;
      restrict_vertex_space(v, kv, ke);
    }
    if (changed) finish_record(r);
    return r;
  }

  // Restricts X_v to kept vertices and edges; attach maps must avoid the rest.
  void restrict_vertex_space(Vertex v, const std::vector<char>& keep_v, const std::vector<char>& keep_e) {
    const auto& G = X.vertex_spaces[v];
    std::vector<Vertex> nvx(G.num_vertices(), -1);
    std::vector<Dart> ndt(G.num_darts(), -1);
    OrientedGraph ng;
    MapData nov;
    for (Vertex a = 0; a < G.num_vertices(); ++a)
      if (keep_v[a]) {
        nvx[a] = ng.add_vertex();
        if (X.has_over) nov.vertex.push_back(X.over_vertex[v].vertex[a]);
      }
    for (Dart d = 0; d < G.num_darts(); d += 2)
      if (keep_e[d / 2]) {
        Dart nd = ng.add_edge(nvx[G.tail(d)], nvx[G.head(d)], G.label(d));
        ndt[d] = nd;
        ndt[d + 1] = nd + 1;
        if (X.has_over) {
          nov.dart.push_back(X.over_vertex[v].dart[d]);
          nov.dart.push_back(X.over_vertex[v].dart[d + 1]);
        }
      }
    const auto& U = X.underlying;
    for (Dart d = 0; d < U.num_darts(); ++d) {
      if (U.head(d) != v) continue;
      for (Vertex& a : X.attach[d].vertex) a = nvx[a];
      for (Dart& c : X.attach[d].dart) c = ndt[c];
    }
    // attach entries for edges already removed from the edge space are fixed
    // by restrict_edge_space; here every remaining entry must survive.
    for (Path& p : mark.loops)
      for (Step& s : p) {
        if (!s.cross && s.a == v) s.b = ndt[s.b];
      }
    if (mark.base_space == v) mark.base_vertex = nvx[mark.base_vertex];
    X.vertex_spaces[v] = std::move(ng);
    if (X.has_over) X.over_vertex[v] = std::move(nov);
  }

  void restrict_edge_space(int e, const std::vector<char>& keep_v, const std::vector<char>& keep_e) {
    const auto& E = X.edge_spaces[e];
    std::vector<Vertex> nvx(E.num_vertices(), -1);
    std::vector<Dart> ndt(E.num_darts(), -1);
    OrientedGraph ng;
    MapData noe;
    for (Vertex a = 0; a < E.num_vertices(); ++a)
      if (keep_v[a]) {
        nvx[a] = ng.add_vertex();
        if (X.has_over) noe.vertex.push_back(X.over_edge[e].vertex[a]);
      }
    for (Dart d = 0; d < E.num_darts(); d += 2)
      if (keep_e[d / 2]) {
        Dart nd = ng.add_edge(nvx[E.tail(d)], nvx[E.head(d)]);
        ndt[d] = nd;
        ndt[d + 1] = nd + 1;
        if (X.has_over) {
          noe.dart.push_back(X.over_edge[e].dart[d]);
          noe.dart.push_back(X.over_edge[e].dart[d + 1]);
        }
      }
    for (Dart d : {2 * e, 2 * e + 1}) {
      MapData m;
      for (Vertex a = 0; a < E.num_vertices(); ++a)
        if (keep_v[a]) m.vertex.push_back(X.attach[d].vertex[a]);
      for (Dart c = 0; c < E.num_darts(); c += 2)
        if (keep_e[c / 2]) {
          m.dart.push_back(X.attach[d].dart[c]);
          m.dart.push_back(X.attach[d].dart[c + 1]);
        }
      X.attach[d] = std::move(m);
    }
    for (Path& p : mark.loops)
      for (Step& s : p)
        if (s.cross && s.a / 2 == e) {
          if (nvx[s.b] < 0) throw std::logic_error("restrict_edge_space: marking crosses at a removed vertex");
          s.b = nvx[s.b];
        }
    X.edge_spaces[e] = std::move(ng);
    if (X.has_over) X.over_edge[e] = std::move(noe);
  }
};

}  // namespace nielsen
