#pragma once

#include <stdexcept>
#include <vector>

#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/moves.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

// The rose of the tuple subdivided over the pattern: the letter t (x1)
// crosses the edge space at c0, petal letters run inside vertex spaces.
// Every edge space is a point.  The vertex space 0 holds the base and the
// two ends of every petal; the segments between crossings get their own
// vertex spaces.
inline MarkedGog rose_over_surface(const std::vector<Word>& tuple, const SurfacePattern& p) {
  int rank = p.spec.rank();
  GraphOfGraphs X;
  X.has_over = true;
  Marking mark;
  auto add_space = [&]() {
    X.add_vertex_space(OrientedGraph(1));
    X.over.vertex.push_back(0);
    X.over_vertex.push_back(MapData{{0}, {}});
    return X.num_vertices() - 1;
  };
  // Appends a dart labeled by petal letter l from (v, a) to (v, b).
  auto add_petal = [&](Vertex v, Vertex a, Vertex b, int l) {
    Dart gd = rose_dart(l);
    Dart d = X.vertex_spaces[v].add_edge(a, b);
    // d points at b and reads l; labels stay off, the over map carries them.
    X.over_vertex[v].dart.push_back(gd);
    X.over_vertex[v].dart.push_back(OrientedGraph::bar(gd));
    return d;
  };
  auto add_crossing = [&](Vertex from, Vertex a, Vertex to, Vertex b, int sign) {
    MapData at_to{{b}, {}}, at_from{{a}, {}};
    Dart d = X.add_edge_space(from, to, OrientedGraph(1), at_to, at_from);
    // Pattern dart 0 reads t.
    X.over.dart.push_back(sign > 0 ? 0 : 1);
    X.over.dart.push_back(sign > 0 ? 1 : 0);
    X.over_edge.push_back(MapData{{0}, {}});
    return d;
  };
  add_space();
  mark.base_space = 0;
  mark.base_vertex = 0;
  for (const Word& w0 : tuple) {
    check_letters(w0, rank);
    Word w = p.to_x(free_reduce(w0));
    Path loop;
    std::vector<std::size_t> cross;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (std::abs(w[i]) == 1) cross.push_back(i);
    auto letter = [&](int l) { return l > 0 ? l - 1 : l + 1; };  // x letter -> petal letter
    if (cross.empty()) {
      Vertex cur = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        Vertex next = i + 1 == w.size() ? 0 : X.vertex_spaces[0].add_vertex();
        if (next != 0) X.over_vertex[0].vertex.push_back(0);
        Dart d = add_petal(0, cur, next, letter(w[i]));
        loop.push_back({false, 0, d});
        cur = next;
      }
      mark.loops.push_back(loop);
      continue;
    }
    // Tail run Z after the last crossing, built backwards from the base.
    std::size_t last = cross.back();
    std::vector<Vertex> zv(w.size() - last, 0);
    std::vector<Dart> zd;
    {
      Vertex cur = 0;
      for (std::size_t i = w.size(); i-- > last + 1;) {
        Vertex prev = X.vertex_spaces[0].add_vertex();
        X.over_vertex[0].vertex.push_back(0);
        zd.push_back(add_petal(0, prev, cur, letter(w[i])));
        cur = prev;
      }
      zv[0] = cur;
    }
    Vertex space = 0, cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w[i]) == 1) {
        Vertex to, at;
        if (i == last) {
          to = 0;
          at = zv[0];
        } else {
          to = add_space();
          at = 0;
        }
        Dart d = add_crossing(space, cur, to, at, w[i]);
        loop.push_back({true, d, 0});
        space = to;
        cur = at;
        if (i == last) break;
        continue;
      }
      Vertex next = X.vertex_spaces[space].add_vertex();
      X.over_vertex[space].vertex.push_back(0);
      Dart d = add_petal(space, cur, next, letter(w[i]));
      loop.push_back({false, space, d});
      cur = next;
    }
    for (auto it = zd.rbegin(); it != zd.rend(); ++it) loop.push_back({false, 0, *it});
    mark.loops.push_back(loop);
  }
  return MarkedGog(std::move(X), std::move(mark), &p);
}

}  // namespace nielsen
