#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nielsen/certificate.hpp"
#include "nielsen/graph_core.hpp"
#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/links.hpp"
#include "nielsen/moves.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/rose.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

enum class Status { standard, reducible, non_generating, undecided };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::standard: return "standard";
    case Status::reducible: return "reducible";
    case Status::non_generating: return "non-generating";
    case Status::undecided: return "undecided";
  }
  return "?";
}

inline int exit_code(Status s) { return static_cast<int>(s); }

class EngineInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EngineOptions {
  std::size_t whitehead_length_budget = 64;
  int whitehead_rank_budget = 8;
  int max_outer = 100000;
  std::size_t search_budget = 20000;  // states of the fallback move search
  int search_depth = 8;
  bool audit = false;                 // check every move against the marking
  std::function<void(const MarkedGog&, std::size_t)> snapshot;
};

struct AuditReport {
  std::size_t moves_checked = 0;
  std::size_t rank_contract_failures = 0;
  std::size_t image_failures = 0;
  std::size_t marking_failures = 0;
  bool outer_monotone = true;
  std::string first_failure;

  bool ok() const { return rank_contract_failures == 0 && image_failures == 0 && marking_failures == 0 && outer_monotone; }
};

struct EngineResult {
  Status status = Status::undecided;
  std::optional<Certificate> certificate;
  std::vector<MoveRecord> trace;
  std::vector<Complexity> outer;     // complexity at each outer iteration
  std::vector<std::string> stages;   // strategy taken at each outer iteration
  std::string route;                 // elementary, precheck, moves or search
  std::string reason;
  AuditReport audit;
};

inline std::string trace_jsonl(const std::vector<MoveRecord>& trace) {
  std::string out;
  for (const MoveRecord& r : trace) out += to_json_line(r) + "\n";
  return out;
}

inline const SurfacePattern& cached_pattern(const SurfaceSpec& s) {
  static thread_local std::vector<std::pair<SurfaceSpec, std::unique_ptr<SurfacePattern>>> cache;
  for (const auto& [spec, p] : cache)
    if (spec == s) return *p;
  cache.emplace_back(s, std::make_unique<SurfacePattern>(surface_pattern(s)));
  return *cache.back().second;
}

// Moves conjugating every entry by W(t), W a word in the entry indices
// (letter k+1 is entry k); entries are processed so that the total is
// t -> W(t)^-1 t W(t).
inline std::vector<NielsenMove> conjugation_moves(const Word& w, int arity) {
  std::vector<NielsenMove> out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    int j = generator_of(*it), e = *it > 0 ? 1 : -1;
    for (int i = 0; i < arity; ++i) {
      if (i == j) continue;
      auto r = multiply_moves(i, j, e, false);
      auto l = multiply_moves(i, j, -e, true);
      out.insert(out.end(), r.begin(), r.end());
      out.insert(out.end(), l.begin(), l.end());
    }
  }
  return out;
}

class Engine {
 public:
  Engine(Tuple input, const SurfaceSpec& spec, EngineOptions opt = {})
      : input_(std::move(input)), spec_(spec), opt_(std::move(opt)), pattern_(cached_pattern(spec)),
        g_(rose_over_surface(input_, pattern_)) {
    for (Word& w : input_) w = free_reduce(w);
    install_hook();
  }

  MarkedGog& state() { return g_; }
  const SurfacePattern& pattern() const { return pattern_; }
  const AuditReport& audit() const { return audit_; }

  // Trims, unpulls once-traversed edges of circular edge spaces until none
  // is left, and folds every vertex space to an immersion.
  void eliminate_circular() {
    g_.trim_trees();
    while (has_circle()) {
      auto f = once_traversed_by_circle();
      if (!f) throw EngineInconsistency("circular edge spaces without a once-traversed edge (pseudosurface)");
      g_.unpull(f->first, f->second);
      g_.trim_trees();
    }
    fold_all_vertices();
  }

  // Folds inside vertex spaces and merges point edge spaces of equal type
  // and equal attaching point, after trimming and eliminating circles.
  void normalize() {
    while (true) {
      std::size_t before = g_.trace.size();
      eliminate_circular();
      fold_point_pair();
      if (g_.trace.size() == before) break;
    }
  }

  bool is_standard_state() const {
    const auto& X = g_.X;
    if (X.num_vertices() != 1 || X.num_edges() != 1) return false;
    if (shape_of(X.edge_spaces[0]) != Shape::point) return false;
    const auto& V = X.vertex_spaces[0];
    if (V.num_vertices() != 1 || V.num_edges() != pattern_.petals) return false;
    return is_immersion(V, X.over_vertex[0]);
  }

  // A point edge space whose boundary component (at the head) contains a
  // vertex of another incident edge space of the same type: pull the path to
  // that vertex across and fold the two edge spaces.  Returns true on a move.
  bool reduce_foldable() {
    auto best = find_pull_fold();
    if (!best) return false;
    apply_pull_fold(*best);
    return true;
  }

  // Pulls circular boundaries across point edge spaces until a fold becomes
  // available.  Restores the state and returns false if none does.
  bool make_not_injective() {
    MarkedGog saved = g_;
    std::size_t audit_mark = audit_.moves_checked;
    std::vector<char> pulled(g_.X.num_edges(), 0);
    int limit = g_.X.num_edges();
    for (int round = 0; round < limit; ++round) {
      std::optional<std::pair<Dart, Pullback>> pick;
      const auto& U = g_.X.underlying;
      for (Dart d = 0; d < U.num_darts() && !pick; ++d) {
        if (pulled[d / 2] || shape_of(g_.X.edge_spaces[d / 2]) != Shape::point) continue;
        Pullback k = boundary_at(d);
        if (shape_of(k.graph) == Shape::circle) pick.emplace(d, std::move(k));
      }
      if (!pick) break;
      auto& [d, k] = *pick;
      pulled[d / 2] = 1;
      g_.pull_across(d, k.graph, k.first, k.second, 0);
      g_.fold_in_vertex(g_.X.underlying.tail(d));
      if (rank_dropped()) return true;
      if (auto f = find_pull_fold()) {
        apply_pull_fold(*f);
        return true;
      }
    }
    g_ = saved;
    install_hook();
    audit_.moves_checked = audit_mark;
    return false;
  }

  EngineResult run() {
    EngineResult res;
    res.route = "moves";
    try {
      for (int outer = 0; outer < opt_.max_outer; ++outer) {
        normalize();
        Complexity c = complexity(g_.X);
        if (!res.outer.empty() && !(c < res.outer.back())) audit_.outer_monotone = false;
        res.outer.push_back(c);
        if (rank_dropped()) {
          res.stages.push_back("reduction");
          finish_reducible(res);
          break;
        }
        if (is_standard_state()) {
          res.stages.push_back("endgame");
          finish_standard(res);
          break;
        }
        if (reduce_foldable()) {
          res.stages.push_back("reduce_foldable");
          continue;
        }
        if (make_not_injective()) {
          res.stages.push_back("make_not_injective");
          continue;
        }
        res.stages.push_back("stuck");
        if (!has_circular_boundary()) {
          // Nothing folds and no boundary is a circle: the map is
          // pi1-injective, so its image is free and not the surface group.
          res.status = Status::non_generating;
          res.reason = "no fold or pull configuration: the induced map is injective";
        } else {
          res.reason = "no strategy applies at complexity (" + std::to_string(c.edges) + "," +
                       std::to_string(c.circular) + ")";
        }
        break;
      }
    } catch (const EngineInconsistency& e) {
      res.reason = e.what();
    } catch (const NielsenError& e) {
      res.reason = e.what();
    }
    res.trace = g_.trace;
    if (res.certificate) res.certificate->trace_digest = digest_hex(trace_jsonl(res.trace));
    if (res.status == Status::undecided && res.reason.empty()) res.reason = "outer iteration budget exhausted";
    if (res.status == Status::undecided) search_fallback(res);
    res.audit = audit_;
    return res;
  }

 private:
  struct PullFold {
    std::size_t length = 0;
    Dart d1 = -1, d2 = -1;
    Vertex b = 0;                 // vertex of the second edge space
    OrientedGraph path;           // interval 0 .. length
    MapData into, to_pattern;
  };

  void install_hook() {
    g_.on_record = [this](const MarkedGog& g, const MoveRecord& r) {
      if (opt_.snapshot) opt_.snapshot(g, g.trace.size());
      if (!opt_.audit) return;
      ++audit_.moves_checked;
      int drop = r.rank_before - r.rank_after;
      bool red = r.effect == FoldKind::reduction;
      if (drop != (red ? 1 : 0)) {
        ++audit_.rank_contract_failures;
        note("rank contract fails at move " + std::to_string(g.trace.size()) + " (" + move_name(r.move) + ")");
      }
      if (!g.check_marking().empty()) {
        ++audit_.marking_failures;
        note("marking broken after " + move_name(r.move) + ": " + g.check_marking());
        return;
      }
      Word c = g.mark.shift;
      auto words = g.loop_words();
      for (std::size_t i = 0; i < words.size(); ++i) {
        Word img = pattern_.to_std(concat({c, words[i], inverse(c)}));
        if (!words_equal(img, input_[i], spec_)) {
          ++audit_.image_failures;
          note("image of loop " + std::to_string(i) + " changed by " + move_name(r.move));
          break;
        }
      }
    };
  }

  void note(const std::string& s) {
    if (audit_.first_failure.empty()) audit_.first_failure = s;
  }

  bool has_circle() const {
    for (const auto& e : g_.X.edge_spaces)
      if (is_circle(e)) return true;
    return false;
  }

  bool rank_dropped() const { return g_.X.rank() < static_cast<int>(input_.size()); }

  std::optional<std::pair<Vertex, Dart>> once_traversed_by_circle() const {
    const auto& X = g_.X;
    for (Vertex v = 0; v < X.num_vertices(); ++v) {
      auto count = g_.traversal_counts(v);
      for (int f = 0; f < static_cast<int>(count.size()); ++f) {
        if (count[f] != 1) continue;
        auto t = g_.traversals(v, 2 * f);
        auto tb = g_.traversals(v, 2 * f + 1);
        Dart via = t.empty() ? tb.at(0).via : t[0].via;
        if (is_circle(X.edge_spaces[via / 2])) return std::make_pair(v, 2 * f);
      }
    }
    return std::nullopt;
  }

  void fold_all_vertices() {
    for (Vertex v = 0; v < g_.X.num_vertices(); ++v) g_.fold_in_vertex(v);
  }

  bool fold_point_pair() {
    const auto& X = g_.X;
    const auto& U = X.underlying;
    for (Dart d1 = 0; d1 < U.num_darts(); ++d1) {
      if (shape_of(X.edge_spaces[d1 / 2]) != Shape::point) continue;
      for (Dart d2 = d1 + 1; d2 < U.num_darts(); ++d2) {
        if (d2 / 2 == d1 / 2 || U.head(d2) != U.head(d1)) continue;
        if (shape_of(X.edge_spaces[d2 / 2]) != Shape::point) continue;
        if (X.over.dart[d1] != X.over.dart[d2]) continue;
        if (X.attach[d1].vertex[0] != X.attach[d2].vertex[0]) continue;
        if (X.over_edge[d1 / 2].vertex[0] != X.over_edge[d2 / 2].vertex[0]) continue;
        g_.fold_edge_spaces(d1, d2, 0, 0);
        return true;
      }
    }
    return false;
  }

  // Boundary component of the point edge space of d inside X_head(d).
  Pullback boundary_at(Dart d) const {
    const auto& X = g_.X;
    Vertex v = X.underlying.head(d);
    return pullback_component(X.vertex_spaces[v], X.over_vertex[v], pattern_.circle(),
                              pattern_.gog.attach[X.over.dart[d]], pattern_.gamma().num_darts(),
                              X.attach[d].vertex[0], X.over_edge[d / 2].vertex[0]);
  }

  bool has_circular_boundary() const {
    const auto& U = g_.X.underlying;
    for (Dart d = 0; d < U.num_darts(); ++d)
      if (shape_of(g_.X.edge_spaces[d / 2]) == Shape::point && shape_of(boundary_at(d).graph) == Shape::circle)
        return true;
    return false;
  }

  std::optional<PullFold> find_pull_fold() const {
    const auto& X = g_.X;
    const auto& U = X.underlying;
    std::optional<PullFold> best;
    for (Dart d1 = 0; d1 < U.num_darts(); ++d1) {
      if (shape_of(X.edge_spaces[d1 / 2]) != Shape::point) continue;
      Vertex v = U.head(d1);
      Pullback k = boundary_at(d1);
      std::map<std::pair<Vertex, Vertex>, Vertex> where;
      for (Vertex x = 0; x < k.graph.num_vertices(); ++x) where[{k.first.vertex[x], k.second.vertex[x]}] = x;
      // Breadth-first distances from the base of the component.
      std::vector<int> dist(k.graph.num_vertices(), -1);
      std::vector<Dart> via(k.graph.num_vertices(), -1);
      auto out = k.graph.darts_out();
      std::deque<Vertex> queue{0};
      dist[0] = 0;
      while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        for (Dart c : out[x]) {
          Vertex y = k.graph.head(c);
          if (dist[y] >= 0) continue;
          dist[y] = dist[x] + 1;
          via[y] = c;
          queue.push_back(y);
        }
      }
      for (Dart d2 = 0; d2 < U.num_darts(); ++d2) {
        if (d2 / 2 == d1 / 2 || U.head(d2) != v || X.over.dart[d2] != X.over.dart[d1]) continue;
        const auto& E2 = X.edge_spaces[d2 / 2];
        for (Vertex b = 0; b < E2.num_vertices(); ++b) {
          auto it = where.find({X.attach[d2].vertex[b], X.over_edge[d2 / 2].vertex[b]});
          if (it == where.end()) continue;
          std::size_t len = static_cast<std::size_t>(dist[it->second]);
          if (best && best->length <= len) continue;
          PullFold pf;
          pf.length = len;
          pf.d1 = d1;
          pf.d2 = d2;
          pf.b = b;
          std::vector<Dart> steps;
          for (Vertex y = it->second; y != 0; y = k.graph.tail(via[y])) steps.push_back(via[y]);
          std::reverse(steps.begin(), steps.end());
          pf.path = OrientedGraph(static_cast<int>(len) + 1);
          pf.into.vertex.push_back(k.first.vertex[0]);
          pf.to_pattern.vertex.push_back(k.second.vertex[0]);
          for (std::size_t s = 0; s < steps.size(); ++s) {
            Dart c = steps[s];
            pf.path.add_edge(static_cast<Vertex>(s), static_cast<Vertex>(s + 1));
            Vertex y = k.graph.head(c);
            pf.into.vertex.push_back(k.first.vertex[y]);
            pf.to_pattern.vertex.push_back(k.second.vertex[y]);
            pf.into.dart.push_back(k.first.dart[c]);
            pf.into.dart.push_back(k.first.dart[OrientedGraph::bar(c)]);
            pf.to_pattern.dart.push_back(k.second.dart[c]);
            pf.to_pattern.dart.push_back(k.second.dart[OrientedGraph::bar(c)]);
          }
          best = std::move(pf);
        }
      }
    }
    return best;
  }

  void apply_pull_fold(const PullFold& pf) {
    if (pf.length > 0) g_.pull_across(pf.d1, pf.path, pf.into, pf.to_pattern, 0);
    g_.fold_edge_spaces(pf.d1, pf.d2, static_cast<Vertex>(pf.length), pf.b);
  }

  void finish_standard(EngineResult& res) {
    Tuple u;
    for (const Word& w : g_.loop_words()) u.push_back(pattern_.to_std(w));
    std::vector<NielsenMove> moves = nielsen_reduce(u);
    if (!sort_letters(u, moves) || u != standard_tuple(spec_))
      throw EngineInconsistency("standard state but the marked loops do not reduce to the standard letters");
    Word c = pattern_.to_std(g_.mark.shift);
    auto conj = conjugation_moves(c, static_cast<int>(u.size()));
    moves.insert(moves.end(), conj.begin(), conj.end());
    emit(res, Verdict::standard, std::move(moves));
  }

  // Words of the marked loops in a free basis of the graph formed by the
  // vertex spaces and the point edge spaces; a Nielsen reduction there ends
  // with an empty entry since the rank is smaller than the arity.
  void finish_reducible(EngineResult& res) {
    const auto& X = g_.X;
    for (const auto& e : X.edge_spaces)
      if (shape_of(e) != Shape::point) throw EngineInconsistency("reduction read off with non-point edge spaces");
    std::vector<int> voff(X.num_vertices() + 1, 0), doff(X.num_vertices() + 1, 0);
    for (Vertex v = 0; v < X.num_vertices(); ++v) {
      voff[v + 1] = voff[v] + X.vertex_spaces[v].num_vertices();
      doff[v + 1] = doff[v] + X.vertex_spaces[v].num_darts();
    }
    OrientedGraph G(voff.back());
    for (Vertex v = 0; v < X.num_vertices(); ++v) {
      const auto& V = X.vertex_spaces[v];
      for (Dart d = 0; d < V.num_darts(); d += 2) G.add_edge(voff[v] + V.tail(d), voff[v] + V.head(d));
    }
    const auto& U = X.underlying;
    for (Dart d = 0; d < U.num_darts(); d += 2)
      G.add_edge(voff[U.tail(d)] + X.attach[d + 1].vertex[0], voff[U.head(d)] + X.attach[d].vertex[0]);
    // Rebase so that the base point is vertex 0 of the basis tree.
    Vertex base = voff[g_.mark.base_space] + g_.mark.base_vertex;
    OrientedGraph H(G.num_vertices());
    auto relabel = [&](Vertex x) { return x == base ? 0 : (x == 0 ? base : x); };
    for (Dart d = 0; d < G.num_darts(); d += 2) H.add_edge(relabel(G.tail(d)), relabel(G.head(d)));
    CoreBasis b = core_basis(H);
    Tuple t;
    for (const Path& p : g_.mark.loops) {
      Word w;
      for (const Step& s : p) {
        Dart gd = s.cross ? doff.back() + s.a : doff[s.a] + s.b;
        int l = basis_letter(b, gd);
        if (l != 0) w.push_back(l);
      }
      t.push_back(free_reduce(w));
    }
    std::vector<NielsenMove> moves = nielsen_reduce(t);
    bool empty = false;
    for (const Word& w : t) empty = empty || w.empty();
    if (!empty) throw EngineInconsistency("rank dropped but the marked loops reduce to a basis");
    emit(res, Verdict::reducible, std::move(moves));
  }

  void emit(EngineResult& res, Verdict v, std::vector<NielsenMove> moves) {
    Certificate c;
    c.verdict = v;
    c.final_tuple = apply_all(input_, moves);
    c.moves = std::move(moves);
    Verification ver = verify_certificate(input_, spec_, c);
    if (!ver.ok) throw EngineInconsistency("certificate failed verification: " + ver.message);
    res.status = v == Verdict::standard ? Status::standard : Status::reducible;
    res.certificate = std::move(c);
  }

  // Breadth-first move search on the tuple itself, for states the fold
  // strategies leave undecided.  Any result is checked like every other.
  void search_fallback(EngineResult& res) {
    if (opt_.search_budget == 0) return;
    GeneratingTuple from{input_, spec_};
    std::optional<std::vector<NielsenMove>> found;
    Verdict v = Verdict::standard;
    try {
      if (static_cast<int>(input_.size()) == spec_.rank())
        found = brute_force_nielsen(from, {standard_tuple(spec_), spec_}, opt_.search_depth, opt_.search_budget);
    } catch (const BudgetExceeded&) {
    }
    if (!found) return;
    Certificate c;
    c.verdict = v;
    c.final_tuple = apply_all(input_, *found);
    c.moves = std::move(*found);
    if (!verify_certificate(input_, spec_, c).ok) return;
    c.trace_digest = digest_hex(trace_jsonl(res.trace));
    res.status = Status::standard;
    res.route = "search";
    res.certificate = std::move(c);
  }

  Tuple input_;
  SurfaceSpec spec_;
  EngineOptions opt_;
  const SurfacePattern& pattern_;
  MarkedGog g_;
  AuditReport audit_;
};

// The main entry point: prechecks, elementary cases, then the engine.
inline EngineResult standardize(const Tuple& tuple, const SurfaceSpec& spec, const EngineOptions& opt = {}) {
  EngineResult res;
  int rank = spec.rank();
  Tuple t;
  for (const Word& w : tuple) {
    check_letters(w, rank);
    t.push_back(free_reduce(w));
  }
  auto done = [&](Status s, Verdict v, std::vector<NielsenMove> moves, std::string route, std::string reason) {
    res.status = s;
    res.route = std::move(route);
    res.reason = std::move(reason);
    Certificate c;
    c.verdict = v;
    c.final_tuple = apply_all(t, moves);
    c.moves = std::move(moves);
    c.trace_digest = digest_hex("");
    res.certificate = std::move(c);
    return res;
  };
  if (!spec.admissible()) {
    // The sphere (trivial group) and RP^2 (Z/2, decided by parity).
    auto odd = [&](const Word& w) { return rank == 1 && w.size() % 2 == 1; };
    if (t.empty()) {
      if (rank == 0) return done(Status::standard, Verdict::standard, {}, "elementary", "sphere");
      res.status = Status::non_generating;
      res.route = "elementary";
      res.reason = "empty tuple";
      return res;
    }
    if (rank == 1 && std::none_of(t.begin(), t.end(), odd)) {
      res.status = Status::non_generating;
      res.route = "elementary";
      res.reason = "every entry is trivial";
      return res;
    }
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!odd(t[i]))
        return done(Status::reducible, Verdict::reducible, {}, "elementary", "entry " + std::to_string(i) + " is trivial");
    if (t.size() == 1) return done(Status::standard, Verdict::standard, {}, "elementary", "projective plane");
    return done(Status::reducible, Verdict::reducible, {{MoveKind::right_multiply, 1, 0}}, "elementary",
                "two odd entries multiply to the identity");
  }
  if (static_cast<int>(t.size()) < rank) {
    res.status = Status::non_generating;
    res.route = "precheck";
    res.reason = "arity below the rank of the surface group";
    return res;
  }
  if (!abelianization_surjective(t, spec)) {
    res.status = Status::non_generating;
    res.route = "precheck";
    res.reason = "abelianized images do not span H1";
    return res;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (word_equals_identity(t[i], spec))
      return done(Status::reducible, Verdict::reducible, {}, "precheck", "entry " + std::to_string(i) + " is trivial");
  Engine e(t, spec, opt);
  return e.run();
}

}  // namespace nielsen
