#include <catch_amalgamated.hpp>

#include <random>

#include "nielsen/corpus.hpp"
#include "nielsen/links.hpp"
#include "nielsen/moves.hpp"
#include "nielsen/rose.hpp"
#include "oracles.hpp"

using namespace nielsen;

namespace {

// Euler characteristic counted from scratch.
int chi(const GraphOfGraphs& X) {
  int c = 0;
  for (const auto& g : X.vertex_spaces) c += g.num_vertices() - g.num_edges();
  for (const auto& g : X.edge_spaces) c -= g.num_vertices() - g.num_edges();
  return c;
}

// Checks every move against the input tuple: the rank contract, the
// marking, and the surface-group images of the marked loops.
struct Auditor {
  Tuple input;
  SurfaceSpec spec;
  std::size_t moves = 0, failures = 0;
  std::vector<MoveType> seen;

  void install(MarkedGog& g) {
    g.on_record = [this](const MarkedGog& m, const MoveRecord& r) {
      ++moves;
      seen.push_back(r.move);
      int drop = r.rank_before - r.rank_after;
      if (drop != (r.effect == FoldKind::reduction ? 1 : 0)) ++failures;
      if (r.rank_after != 1 - chi(m.X)) ++failures;
      if (!m.check_marking().empty()) {
        ++failures;
        return;
      }
      auto loops = m.loop_words();
      for (std::size_t i = 0; i < loops.size(); ++i) {
        Word img = m.pattern->to_std(concat({m.mark.shift, loops[i], inverse(m.mark.shift)}));
        if (!words_equal(img, input[i], spec)) ++failures;
      }
    };
  }
};

int index_into(const GraphOfGraphs& X, Dart d) {
  int i = 0;
  for (Dart e = 0; e < d; ++e) i += X.underlying.head(e) == X.underlying.head(d);
  return i;
}

}  // namespace

TEST_CASE("complexity is ordered by edges, then circular edge spaces") {
  CHECK(Complexity{2, 5} < Complexity{3, 0});
  CHECK(Complexity{3, 0} < Complexity{3, 1});
  SurfacePattern p = surface_pattern({true, 1});
  CHECK(complexity(p.gog) == Complexity{1, 1});
  CHECK(complexity(standard_subobject(p)) == Complexity{1, 0});
}

TEST_CASE("fold_in_vertex on a dependent tuple drops the rank once") {
  const SurfaceSpec torus{true, 1};
  SurfacePattern p = surface_pattern(torus);
  // a petal letter, so both loops live in the vertex space
  Word petal = p.to_std({2});
  Tuple t{petal, petal};
  MarkedGog g = rose_over_surface(t, p);
  Auditor a{t, torus, 0, 0, {}};
  a.install(g);
  int before = g.X.rank();
  int reductions = 0;
  for (Vertex v = 0; v < g.X.num_vertices(); ++v)
    for (const auto& r : g.fold_in_vertex(v)) reductions += r.effect == FoldKind::reduction;
  CHECK(reductions == 1);
  CHECK(g.X.rank() == before - 1);
  CHECK(a.failures == 0);
  CHECK(a.moves > 0);
  for (Vertex v = 0; v < g.X.num_vertices(); ++v)
    CHECK(is_immersion(g.X.vertex_spaces[v], g.X.over_vertex[v]));
  CHECK(validate_gog(g.X, &p.gog).empty());
}

TEST_CASE("vertex folds keep every contract on random tuples") {
  std::mt19937_64 rng(21);
  for (SurfaceSpec s : {SurfaceSpec{true, 1}, SurfaceSpec{true, 2}, SurfaceSpec{false, 3}}) {
    SurfacePattern p = surface_pattern(s);
    for (int k = 0; k < 40; ++k) {
      Tuple t;
      for (int i = 0; i < s.rank(); ++i) t.push_back(random_word(s.rank(), 6, rng));
      MarkedGog g = rose_over_surface(t, p);
      Auditor a{t, s, 0, 0, {}};
      a.install(g);
      for (Vertex v = 0; v < g.X.num_vertices(); ++v) g.fold_in_vertex(v);
      g.trim_trees();
      CHECK(a.failures == 0);
      CHECK(validate_gog(g.X, &p.gog).empty());
      CHECK(g.X.rank() <= static_cast<int>(t.size()));
    }
  }
}

TEST_CASE("trim_trees is idempotent") {
  std::mt19937_64 rng(22);
  SurfacePattern p = surface_pattern({true, 2});
  for (int k = 0; k < 30; ++k) {
    Tuple t = scramble({true, 2}, 6, rng).tuple;
    MarkedGog g = rose_over_surface(t, p);
    for (Vertex v = 0; v < g.X.num_vertices(); ++v) g.fold_in_vertex(v);
    g.trim_trees();
    Complexity c = complexity(g.X);
    int chi1 = chi(g.X);
    std::size_t moves = g.trace.size();
    g.trim_trees();
    CHECK(g.trace.size() == moves);
    CHECK(complexity(g.X) == c);
    CHECK(chi(g.X) == chi1);
  }
}

TEST_CASE("pull across a point edge space, then unpull back") {
  const SurfaceSpec s{true, 2};
  SurfacePattern p = surface_pattern(s);
  Tuple t = standard_tuple(s);
  MarkedGog g = rose_over_surface(t, p);
  Auditor a{t, s, 0, 0, {}};
  a.install(g);
  for (Vertex v = 0; v < g.X.num_vertices(); ++v) g.fold_in_vertex(v);
  g.trim_trees();
  Link target = link_of(p.gog, 0);
  // First point edge space whose boundary at the head is a circle.
  std::optional<std::pair<Dart, BoundaryData>> pick;
  for (Dart d = 0; d < g.X.underlying.num_darts() && !pick; ++d) {
    if (shape_of(g.X.edge_spaces[d / 2]) != Shape::point) continue;
    Link l = link_of(g.X, g.X.underlying.head(d));
    BoundaryData b = boundary_of(l, target, index_into(g.X, d));
    if (b.shape == Shape::circle) pick.emplace(d, b);
  }
  REQUIRE(pick);
  auto& [d, b] = *pick;
  Complexity c0 = complexity(g.X);
  int rank0 = g.X.rank();
  // the boundary base vertex sits over the old attaching point
  Vertex k0 = 0;
  REQUIRE(b.component.first.vertex[k0] == g.X.attach[d].vertex[0]);
  MoveRecord r = g.pull_across(d, b.component.graph, b.component.first, b.component.second, k0);
  CHECK(r.move == MoveType::pull);
  CHECK(r.effect == FoldKind::equivalence);
  CHECK(g.X.rank() == rank0);
  CHECK(complexity(g.X).circular == c0.circular + 1);
  CHECK(complexity(g.X).edges == c0.edges);
  CHECK(validate_gog(g.X, &p.gog).empty());
  // Every edge of the new circle is traversed once; unpulling one opens it
  // into an interval, and trimming collapses the rest.
  Vertex tv = g.X.underlying.tail(d);
  auto counts = g.traversal_counts(tv);
  auto once = std::find(counts.begin(), counts.end(), 1);
  REQUIRE(once != counts.end());
  g.unpull(tv, 2 * static_cast<Dart>(once - counts.begin()));
  int unpulls = 1;
  CHECK(shape_of(g.X.edge_spaces[d / 2]) == Shape::interval);
  CHECK(complexity(g.X).circular == c0.circular);
  g.trim_trees();
  CHECK(shape_of(g.X.edge_spaces[d / 2]) == Shape::point);
  CHECK(unpulls > 0);
  CHECK(g.X.rank() == rank0);
  CHECK(a.failures == 0);
  CHECK(validate_gog(g.X, &p.gog).empty());
  CHECK(std::count(a.seen.begin(), a.seen.end(), MoveType::unpull) == unpulls);
  CHECK_THROWS_AS(g.pull_across(d, b.component.graph, b.component.first, b.component.second, k0),
                  std::invalid_argument);
}
