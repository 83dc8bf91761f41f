#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "nielsen/graph_core.hpp"
#include "nielsen/words.hpp"

using namespace nielsen;

namespace {

OrientedGraph rose_from_labels(const std::vector<int>& labels) {
  OrientedGraph g(1);
  for (int l : labels) g.add_edge(0, 0, l);
  return g;
}

OrientedGraph theta() {
  OrientedGraph g(2);
  for (int k = 0; k < 3; ++k) g.add_edge(0, 1);
  return g;
}

}  // namespace

TEST_CASE("bar is a fixed-point-free involution and heads follow add_edge") {
  OrientedGraph g(3);
  Dart d = g.add_edge(0, 2, 1);
  CHECK(d == 0);
  CHECK(g.head(d) == 2);
  CHECK(g.tail(d) == 0);
  CHECK(OrientedGraph::bar(OrientedGraph::bar(d)) == d);
  CHECK(g.label(OrientedGraph::bar(d)) == -1);
  CHECK_THROWS_AS(g.add_edge(0, 5), std::out_of_range);
}

TEST_CASE("folding two equal loops at a vertex is a reduction") {
  OrientedGraph g = rose_from_labels({1, 1});
  FoldResult r = fold(g, 0, 2);
  CHECK(r.record.kind == FoldKind::reduction);
  CHECK(r.graph.num_edges() == 1);
  CHECK(total_rank(r.graph) == 1);
}

TEST_CASE("folding a tripod's two edges is an equivalence") {
  OrientedGraph g(3);
  g.add_edge(0, 2, 1);
  g.add_edge(1, 2, 1);
  FoldResult r = fold(g, 0, 2);
  CHECK(r.record.kind == FoldKind::equivalence);
  CHECK(r.graph.num_vertices() == 2);
  CHECK(r.graph.num_edges() == 1);
}

TEST_CASE("fold preconditions") {
  OrientedGraph g(3);
  g.add_edge(0, 1, 1);
  g.add_edge(0, 2, 1);
  CHECK_THROWS_AS(fold(g, 0, 2), std::invalid_argument);  // heads differ
  CHECK_THROWS_AS(fold(g, 0, 1), std::invalid_argument);  // its own bar
  CHECK_THROWS_AS(fold(g, 0, 0), std::invalid_argument);
}

TEST_CASE("fold changes rank by exactly the reduction flag") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    OrientedGraph g = to_graph(random_lgraph(rng, 2, 10));
    auto w = least_foldable_pair(g, label_morphism(g, 2).map);
    if (!w) continue;
    FoldResult r = fold(g, w->first, w->second);
    int drop = oracle_betti(g) - oracle_betti(r.graph);
    CHECK(drop == (r.record.kind == FoldKind::reduction ? 1 : 0));
    CHECK(r.graph.num_edges() == g.num_edges() - 1);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("fold_sequence of an immersion is empty") {
  OrientedGraph g = rose_from_labels({1, 2});
  FoldSequence fs = fold_sequence(label_morphism(g, 2));
  CHECK(fs.records.empty());
  CHECK(fs.immersion.source == g);
}

TEST_CASE("rose (a, a, b) folds once to rose (a, b)") {
  FoldSequence fs = fold_sequence(label_morphism(rose_from_labels({1, 1, 2}), 2));
  REQUIRE(fs.records.size() == 1);
  CHECK(fs.records[0].kind == FoldKind::reduction);
  CHECK(fs.immersion.source.num_edges() == 2);
  CHECK(fs.immersion.source.num_vertices() == 1);
  CHECK(is_immersion(fs.immersion));
}

TEST_CASE("subgroup <aba', abb>: membership against enumerated products") {
  std::vector<Word> gens{{1, 2, -1}, {1, 2, 2}};
  SubgroupGraph s = subgroup_graph(gens, 2);
  CHECK(accepts(s, {1, 2, -1}));
  // (aba')^-1 abb = ab and (ab)^-1 aba' = a', so the subgroup is everything.
  Word ab = oracle::cat(oracle::inv(gens[0]), gens[1]);
  CHECK(ab == Word{1, 2});
  CHECK(oracle::cat(oracle::inv(ab), gens[0]) == Word{-1});
  CHECK(accepts(s, {1}));
  CHECK(s.graph.num_vertices() == 1);
  CHECK(s.graph.num_edges() == 2);
  auto elements = oracle::products(gens, 4);
  for (const auto& w : elements)
    if (w.size() <= 8) CHECK(accepts(s, w));
  oracle::LGraph lg;
  lg.n = 5;
  lg.edges = {{0, 1, 1}, {1, 2, 2}, {0, 2, 1}, {0, 3, 1}, {3, 4, 2}, {4, 0, 2}};
  oracle::Reader reader(lg);
  for (const auto& w : oracle::all_words(2, 6)) CHECK(accepts(s, w) == reader.accepts(w));
}

TEST_CASE("subgroup <aba', bb> does not contain a") {
  std::vector<Word> gens{{1, 2, -1}, {2, 2}};
  SubgroupGraph s = subgroup_graph(gens, 2);
  CHECK_FALSE(accepts(s, {1}));
  CHECK_FALSE(accepts(s, {2}));
  auto elements = oracle::products(gens, 4);
  CHECK(elements.count(Word{1}) == 0);
  for (const auto& w : elements) CHECK(accepts(s, w));
}

TEST_CASE("is_immersion witnesses") {
  OrientedGraph g = rose_from_labels({1, 2});
  GraphMorphism id{g, g, identity_map(g)};
  CHECK(is_immersion(id));
  OrientedGraph h = rose_from_labels({1, 1});
  auto w = immersion_witness(label_morphism(h, 1));
  REQUIRE(w);
  CHECK(h.label(w->first) == h.label(w->second));
  CHECK(h.head(w->first) == h.head(w->second));
}

TEST_CASE("fold_sequence always ends in an immersion with the same subgroup") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::LGraph lg = random_lgraph(rng, 3, 12);
    OrientedGraph g = to_graph(lg);
    FoldSequence fs = fold_sequence(label_morphism(g, 3));
    CHECK(is_immersion(fs.immersion));
    CHECK(fs.immersion.valid());
    int reductions = 0;
    for (const auto& r : fs.records) reductions += r.kind == FoldKind::reduction;
    CHECK(oracle_betti(g) - oracle_betti(fs.immersion.source) == reductions);
  }
}

TEST_CASE("trim_to_core") {
  SECTION("tree with one kept leaf") {
    OrientedGraph t(4);
    t.add_edge(0, 1);
    t.add_edge(1, 2);
    t.add_edge(1, 3);
    Core c = trim_to_core(t, {0});
    CHECK(c.graph.num_vertices() == 1);
    CHECK(c.graph.num_edges() == 0);
  }
  SECTION("circle with a tail") {
    OrientedGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(2, 3);
    Core c = trim_to_core(g, {});
    CHECK(c.graph.num_vertices() == 3);
    CHECK(c.graph.num_edges() == 3);
  }
  SECTION("theta with pendant trees keeps rank 2") {
    OrientedGraph g = theta();
    Vertex a = g.add_vertex(), b = g.add_vertex(), c2 = g.add_vertex();
    g.add_edge(0, a);
    g.add_edge(a, b);
    g.add_edge(1, c2);
    Core c = trim_to_core(g, {});
    CHECK(c.graph.num_vertices() == 2);
    CHECK(c.graph.num_edges() == 3);
    CHECK(oracle_betti(c.graph) == 2);
    CHECK(c.retraction[b] == c.vertex_to_core[0]);
  }
}

TEST_CASE("pullback examples") {
  SECTION("identity on a circle") {
    OrientedGraph c(1);
    c.add_edge(0, 0, 1);
    GraphMorphism id{c, c, identity_map(c)};
    Pullback p = pullback(id, id);
    CHECK(p.graph.num_vertices() == 1);
    CHECK(p.graph.num_edges() == 1);
    CHECK(rank(p.graph) == std::vector<int>{1});
  }
  SECTION("<a^2> and <a^3> meet in <a^6>") {
    SubgroupGraph s2 = subgroup_graph({{1, 1}}, 1), s3 = subgroup_graph({{1, 1, 1}}, 1);
    SubgroupGraph i = intersect(s2, s3, 1);
    CHECK(i.graph.num_vertices() == 6);
    CHECK(accepts(i, Word(6, 1)));
    CHECK_FALSE(accepts(i, Word(3, 1)));
    CHECK_FALSE(accepts(i, Word(2, 1)));
    GraphMorphism f = label_morphism(s2.graph, 1), g = label_morphism(s3.graph, 1);
    Pullback full = pullback(f, g);
    CHECK(components(full.graph).count == 1);
  }
  SECTION("<a> and <b> meet trivially") {
    SubgroupGraph a = subgroup_graph({{1}}, 2), b = subgroup_graph({{2}}, 2);
    SubgroupGraph i = intersect(a, b, 2);
    CHECK(i.graph.num_vertices() == 1);
    CHECK(i.graph.num_edges() == 0);
    auto pa = oracle::products({{1}}, 4), pb = oracle::products({{2}}, 4);
    for (const auto& w : pa)
      if (!w.empty()) CHECK(pb.count(w) == 0);
  }
  SECTION("requires immersions") {
    OrientedGraph h = rose_from_labels({1, 1});
    CHECK_THROWS_AS(pullback(label_morphism(h, 1), label_morphism(h, 1)), std::invalid_argument);
  }
}

TEST_CASE("intersection cores agree with the context-free reader") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::LGraph a = random_lgraph(rng, 2, 6, 4), b = random_lgraph(rng, 2, 6, 4);
    SubgroupGraph sa = subgroup_of(to_graph(a), 2), sb = subgroup_of(to_graph(b), 2);
    SubgroupGraph i = intersect(sa, sb, 2);
    oracle::Reader ra(a), rb(b);
    for (const auto& w : oracle::all_words(2, 5)) CHECK(accepts(i, w) == (ra.accepts(w) && rb.accepts(w)));
  }
}

TEST_CASE("rank per component") {
  CHECK(rank(OrientedGraph(1)) == std::vector<int>{0});
  CHECK(rank(rose_from_labels({1, 2, 3})) == std::vector<int>{3});
  CHECK(rank(theta()) == std::vector<int>{2});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    OrientedGraph g = to_graph(random_lgraph(rng, 2, 10));
    CHECK(total_rank(g) == oracle_betti(g));
  }
}
