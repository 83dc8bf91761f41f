#include <catch_amalgamated.hpp>

#include <random>

#include "nielsen/certificate.hpp"
#include "nielsen/corpus.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/rose.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"
#include "oracles.hpp"

using namespace nielsen;

namespace {

const SurfaceSpec torus{true, 1};

// Abelianized matrix determinant on the torus, computed from letter counts.
long long det2(const Word& u, const Word& v) {
  auto a = oracle::abel(u, 2), b = oracle::abel(v, 2);
  return a[0] * b[1] - a[1] * b[0];
}

}  // namespace

TEST_CASE("free_reduce") {
  CHECK(free_reduce({1, -1}).empty());
  CHECK(free_reduce({1, 2, -2, 1}) == Word{1, 1});
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    Word w = random_word(3, 10, rng);
    CHECK(free_reduce(concat(w, inverse(w))).empty());
    Word noisy = w;
    noisy.insert(noisy.begin() + static_cast<long>(noisy.size() / 2), {2, -2});
    CHECK(free_reduce(noisy) == oracle::reduce(noisy));
  }
}

TEST_CASE("alphabet round trip with apostrophe inverses") {
  Alphabet a = standard_presentation({true, 2}).alphabet();
  Word w = a.parse("a1 b2' a2 1 b1'");
  CHECK(w == Word{1, -4, 3, -2});
  CHECK(a.format(w) == "a1 b2' a2 b1'");
  CHECK_THROWS_AS(a.parse("c1"), std::invalid_argument);
}

TEST_CASE("elementary moves") {
  Tuple t{{1}, {2}};
  CHECK(apply_nielsen(t, {MoveKind::left_multiply, 0, 1}) == Tuple{{2, 1}, {2}});
  CHECK(apply_nielsen(t, {MoveKind::right_multiply, 0, 1}) == Tuple{{1, 2}, {2}});
  CHECK(apply_nielsen(t, {MoveKind::invert, 1, 0}) == Tuple{{1}, {-2}});
  CHECK(apply_nielsen(t, {MoveKind::swap, 0, 1}) == Tuple{{2}, {1}});
  CHECK_THROWS_AS(apply_nielsen(t, {MoveKind::swap, 0, 2}), std::out_of_range);
  CHECK_THROWS_AS(apply_nielsen(t, {MoveKind::left_multiply, 1, 1}), std::out_of_range);
}

TEST_CASE("every move is undone by its inverse sequence") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 300; ++k) {
    Tuple t;
    for (int i = 0; i < 3; ++i) t.push_back(free_reduce(random_word(2, 6, rng)));
    NielsenMove m = random_move(t.size(), rng);
    Tuple back = apply_all(apply_nielsen(t, m), inverse_moves(m));
    CHECK(back == t);
  }
}

TEST_CASE("multiply_moves with an inverse multiplier") {
  Tuple t{{1}, {2}};
  CHECK(apply_all(t, multiply_moves(0, 1, -1, false)) == Tuple{{1, -2}, {2}});
  CHECK(apply_all(t, multiply_moves(0, 1, -1, true)) == Tuple{{-2, 1}, {2}});
}

TEST_CASE("nielsen_reduce brings a scrambled free basis to letters") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    Tuple t = scramble({true, 2}, 12, rng).tuple;
    Tuple start = t;
    auto moves = nielsen_reduce(t);
    CHECK(sort_letters(t, moves));
    CHECK(t == standard_tuple({true, 2}));
    CHECK(apply_all(start, moves) == t);
  }
}

TEST_CASE("rose_over_surface keeps the marked images") {
  for (SurfaceSpec s : {SurfaceSpec{true, 1}, SurfaceSpec{true, 2}, SurfaceSpec{false, 2}, SurfaceSpec{false, 3}}) {
    SurfacePattern p = surface_pattern(s);
    SECTION("standard tuple of " + std::to_string(s.orientable) + "/" + std::to_string(s.genus)) {
      MarkedGog g = rose_over_surface(standard_tuple(s), p);
      CHECK(validate_gog(g.X, &p.gog).empty());
      CHECK(g.check_marking().empty());
      for (const auto& e : g.X.edge_spaces) CHECK(shape_of(e) == Shape::point);
      auto loops = g.loop_words();
      for (int i = 0; i < s.rank(); ++i) CHECK(words_equal(p.to_std(loops[i]), standard_tuple(s)[i], s));
    }
  }
  SECTION("empty tuple gives a single vertex space") {
    MarkedGog g = rose_over_surface({}, surface_pattern(torus));
    CHECK(g.X.num_vertices() == 1);
    CHECK(g.X.num_edges() == 0);
    CHECK(g.X.vertex_spaces[0].num_vertices() == 1);
  }
  SECTION("(a1 b1, b1) on the torus") {
    SurfacePattern p = surface_pattern(torus);
    Tuple t{{1, 2}, {2}};
    MarkedGog g = rose_over_surface(t, p);
    auto loops = g.loop_words();
    CHECK(words_equal(p.to_std(loops[0]), {1, 2}, torus));
    CHECK(words_equal(p.to_std(loops[1]), {2}, torus));
    // Independent check: abelianized coordinates.
    CHECK(oracle::abel(p.to_std(loops[0]), 2) == std::vector<long long>{1, 1});
  }
}

TEST_CASE("verify_certificate") {
  SECTION("standard tuple with no moves") {
    Certificate c{Verdict::standard, {}, standard_tuple(torus), ""};
    CHECK(verify_certificate(standard_tuple(torus), torus, c).ok);
  }
  SECTION("(a, b, ab) reduces to (a, b, 1)") {
    Tuple in{{1}, {2}, {1, 2}};
    std::vector<NielsenMove> moves = multiply_moves(2, 1, -1, false);
    auto more = multiply_moves(2, 0, -1, false);
    moves.insert(moves.end(), more.begin(), more.end());
    Certificate c{Verdict::reducible, moves, apply_all(in, moves), ""};
    CHECK(c.final_tuple[2].empty());
    CHECK(oracle::abel(c.final_tuple[2], 2) == std::vector<long long>{0, 0});
    CHECK(verify_certificate(in, torus, c).ok);
  }
  SECTION("a perturbed move index is a replay mismatch") {
    std::mt19937_64 rng(4);
    Scramble sc = scramble({true, 2}, 10, rng);
    Tuple t = sc.tuple;
    auto moves = nielsen_reduce(t);
    sort_letters(t, moves);
    Certificate c{Verdict::standard, moves, t, ""};
    REQUIRE(verify_certificate(sc.tuple, {true, 2}, c).ok);
    REQUIRE(!c.moves.empty());
    Certificate bad = c;
    bad.moves[0].i = (bad.moves[0].i + 1) % 4;
    if (bad.moves[0].kind != MoveKind::invert && bad.moves[0].i == bad.moves[0].j) bad.moves[0].i = (bad.moves[0].i + 1) % 4;
    Verification v = verify_certificate(sc.tuple, {true, 2}, bad);
    CHECK_FALSE(v.ok);
  }
  SECTION("a wrong verdict is caught") {
    Certificate c{Verdict::reducible, {}, standard_tuple(torus), ""};
    Verification v = verify_certificate(standard_tuple(torus), torus, c);
    CHECK_FALSE(v.ok);
    CHECK(v.verdict_failure);
  }
}

TEST_CASE("certificate JSON round trip") {
  Alphabet a = standard_presentation(torus).alphabet();
  Certificate c{Verdict::reducible, {{MoveKind::invert, 1, 0}, {MoveKind::right_multiply, 2, 0}}, {{1}, {-2}, {}}, "00ff"};
  Certificate d = certificate_from_json(to_json(c, a), a);
  CHECK(d.verdict == c.verdict);
  CHECK(d.moves == c.moves);
  CHECK(d.final_tuple == c.final_tuple);
  CHECK(d.trace_digest == c.trace_digest);
}

TEST_CASE("brute_force_nielsen") {
  GeneratingTuple std_t{standard_tuple(torus), torus};
  CHECK(brute_force_nielsen(std_t, std_t, 3)->empty());
  auto sw = brute_force_nielsen({{{2}, {1}}, torus}, std_t, 1);
  REQUIRE(sw);
  CHECK(*sw == std::vector<NielsenMove>{{MoveKind::swap, 0, 1}});
  // Multiplying by an inverse costs invert, multiply, invert here.
  CHECK_FALSE(brute_force_nielsen({{{1}, {1, 2}}, torus}, std_t, 2));
  auto found = brute_force_nielsen({{{1}, {1, 2}}, torus}, std_t, 3);
  REQUIRE(found);
  Tuple end = apply_all({{1}, {1, 2}}, *found);
  CHECK(words_equal(end[0], {1}, torus));
  CHECK(words_equal(end[1], {2}, torus));
  CHECK(det2({1}, {1, 2}) == 1);
  CHECK_THROWS_AS(brute_force_nielsen({{{1, 1, 2}, {2, 2, 1}}, torus}, std_t, 12, 50), BudgetExceeded);
}
