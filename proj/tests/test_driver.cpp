#include <catch_amalgamated.hpp>

#include <random>

#include "nielsen/corpus.hpp"
#include "nielsen/driver.hpp"
#include "oracles.hpp"

using namespace nielsen;

namespace {

const SurfaceSpec torus{true, 1};

EngineResult run_checked(const Tuple& t, const SurfaceSpec& s) {
  EngineOptions opt;
  opt.audit = true;
  EngineResult r = standardize(t, s, opt);
  if (r.certificate) CHECK(verify_certificate(t, s, *r.certificate).ok);
  CHECK(r.audit.ok());
  return r;
}

}  // namespace

TEST_CASE("status names and exit codes") {
  CHECK(status_name(Status::non_generating) == "non-generating");
  CHECK(exit_code(Status::standard) == 0);
  CHECK(exit_code(Status::reducible) == 1);
  CHECK(exit_code(Status::non_generating) == 2);
  CHECK(exit_code(Status::undecided) == 3);
}

TEST_CASE("the standard tuple is standard with no moves") {
  for (SurfaceSpec s : {torus, SurfaceSpec{true, 2}, SurfaceSpec{false, 2}, SurfaceSpec{false, 3}}) {
    EngineResult r = run_checked(standard_tuple(s), s);
    CHECK(r.status == Status::standard);
    REQUIRE(r.certificate);
    CHECK(r.certificate->moves.empty());
  }
}

TEST_CASE("small torus cases") {
  SECTION("(a1, a1 b1) is standard") {
    EngineResult r = run_checked({{1}, {1, 2}}, torus);
    CHECK(r.status == Status::standard);
  }
  SECTION("(a1, b1, a1 b1) is reducible") {
    EngineResult r = run_checked({{1}, {2}, {1, 2}}, torus);
    CHECK(r.status == Status::reducible);
    REQUIRE(r.certificate);
    int trivial = 0;
    for (const Word& w : r.certificate->final_tuple) trivial += word_equals_identity(w, torus);
    CHECK(trivial >= 1);
  }
  SECTION("(a1 a1, b1) does not generate") {
    EngineResult r = run_checked({{1, 1}, {2}}, torus);
    CHECK(r.status == Status::non_generating);
    CHECK_FALSE(r.certificate);
  }
  SECTION("a single entry is too few") {
    CHECK(run_checked({{1}}, torus).status == Status::non_generating);
  }
  SECTION("a trivial entry of a generating tuple is reducible") {
    EngineResult r = run_checked({{1}, {2}, {1, 2, -1, -2}}, torus);
    CHECK(r.status == Status::reducible);
  }
  SECTION("letters outside the alphabet are rejected") {
    CHECK_THROWS_AS(standardize({{1}, {3}}, torus), std::invalid_argument);
  }
}

TEST_CASE("sphere and projective plane") {
  const SurfaceSpec sphere{true, 0}, rp2{false, 1};
  CHECK(standardize({}, sphere).status == Status::standard);
  CHECK(standardize({{}}, sphere).status == Status::reducible);
  CHECK(standardize({{1}}, rp2).status == Status::standard);
  CHECK(standardize({{1, 1, 1}}, rp2).status == Status::standard);
  CHECK(standardize({{1, 1}}, rp2).status == Status::non_generating);
  EngineResult r = standardize({{1}, {1}}, rp2);
  CHECK(r.status == Status::reducible);
  REQUIRE(r.certificate);
  CHECK(r.certificate->final_tuple[1].size() % 2 == 0);
  CHECK(standardize({}, rp2).status == Status::non_generating);
}

TEST_CASE("scrambled standard tuples come back standard") {
  std::mt19937_64 rng(31);
  for (SurfaceSpec s : {torus, SurfaceSpec{true, 2}, SurfaceSpec{false, 2}, SurfaceSpec{false, 3}}) {
    for (int k = 0; k < 15; ++k) {
      Scramble sc = scramble(s, 8, rng);
      EngineResult r = run_checked(sc.tuple, s);
      CHECK(r.status == Status::standard);
    }
  }
}

TEST_CASE("more entries than the rank is always reducible") {
  std::mt19937_64 rng(32);
  for (SurfaceSpec s : {torus, SurfaceSpec{true, 2}, SurfaceSpec{false, 3}}) {
    for (int k = 0; k < 10; ++k) {
      Tuple t = redundant_tuple(s, 6, rng);
      REQUIRE(static_cast<int>(t.size()) == s.rank() + 1);
      CHECK(run_checked(t, s).status == Status::reducible);
    }
  }
}

TEST_CASE("torus verdicts follow the determinant") {
  // Independent oracle: a pair generates Z^2 iff its abelianized determinant
  // is +-1, and for pairs in the torus group that is Nielsen equivalence.
  std::mt19937_64 rng(33);
  for (int k = 0; k < 300; ++k) {
    Tuple t{random_word(2, 5, rng), random_word(2, 5, rng)};
    auto a = oracle::abel(t[0], 2), b = oracle::abel(t[1], 2);
    long long det = a[0] * b[1] - a[1] * b[0];
    EngineResult r = run_checked(t, torus);
    CHECK(r.status == (std::abs(det) == 1 ? Status::standard : Status::non_generating));
  }
}

TEST_CASE("trace and complexity bookkeeping") {
  std::mt19937_64 rng(34);
  Scramble sc = scramble({true, 2}, 10, rng);
  EngineOptions opt;
  opt.audit = true;
  std::size_t snapshots = 0;
  opt.snapshot = [&](const MarkedGog&, std::size_t) { ++snapshots; };
  EngineResult r = standardize(sc.tuple, {true, 2}, opt);
  CHECK(r.route == "moves");
  CHECK(snapshots == r.trace.size());
  for (std::size_t i = 1; i < r.outer.size(); ++i) CHECK(r.outer[i] < r.outer[i - 1]);
  std::string jsonl = trace_jsonl(r.trace);
  CHECK(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) == r.trace.size());
  REQUIRE(r.certificate);
  CHECK(r.certificate->trace_digest == digest_hex(jsonl));
}
