#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nielsen/nielsen.hpp"

namespace fs = std::filesystem;
using namespace nielsen;
using nlohmann::json;

namespace {

struct Config {
  std::string surface;
  std::string words;
  std::string certificate;
  std::string trace;
  std::string dot_dir;
  std::string graph, graph2, word;
  std::string corpus_dir;
  std::size_t budget_whitehead = 64;
  std::uint64_t seed = default_seed;
  int jobs = 1;
  int rank = 2;
  int count = 20;
  int max_moves = 10;
  bool audit = false;
};

// Tuple from --words: an existing file (JSON tuple file, or one word per
// line), otherwise comma-separated words.
Tuple load_words(const std::string& arg, const SurfaceSpec& s) {
  Alphabet a = standard_presentation(s).alphabet();
  if (!fs::is_regular_file(arg)) return parse_words(arg, a);
  std::string text = read_file(arg);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    TupleFile t = tuple_from_json(parse_json(text));
    if (!(t.surface == s)) throw std::invalid_argument("tuple file is for surface " + surface_name(t.surface));
    return t.words;
  }
  Tuple t;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      t.push_back(a.parse(line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
  }
  return t;
}

OrientedGraph load_graph(const std::string& path, int rank) {
  Alphabet a = letters_alphabet(rank);
  return parse_graph(read_file(path), &a);
}

int cmd_standardize(const Config& c) {
  SurfaceSpec s = parse_surface(c.surface);
  Tuple t = load_words(c.words, s);
  EngineOptions opt;
  opt.whitehead_length_budget = c.budget_whitehead;
  opt.audit = c.audit;
  if (!c.dot_dir.empty()) {
    fs::create_directories(c.dot_dir);
    std::string dir = c.dot_dir;
    opt.snapshot = [dir](const MarkedGog& g, std::size_t step) {
      std::ostringstream name;
      name << dir << "/step_" << std::setw(5) << std::setfill('0') << step << ".dot";
      write_file(name.str(), emit_dot(g));
    };
  }
  EngineResult r = standardize(t, s, opt);
  Alphabet a = standard_presentation(s).alphabet();
  if (!c.trace.empty()) write_file(c.trace, trace_jsonl(r.trace));
  if (r.certificate) {
    std::string text = to_json(*r.certificate, a).dump(2) + "\n";
    if (c.certificate.empty())
      std::cout << text;
    else
      write_file(c.certificate, text);
  }
  std::cerr << "route: " << r.route << ", outer iterations: " << r.outer.size() << ", moves: " << r.trace.size() << "\n";
  if (!r.reason.empty()) std::cerr << "reason: " << r.reason << "\n";
  if (c.audit) std::cerr << "audit: " << (r.audit.ok() ? "ok" : "FAILED " + r.audit.first_failure) << "\n";
  std::cerr << "status: " << status_name(r.status) << " (exit " << exit_code(r.status) << ")\n";
  return exit_code(r.status);
}

int cmd_verify(const Config& c) {
  SurfaceSpec s = parse_surface(c.surface);
  Tuple t = load_words(c.words, s);
  Alphabet a = standard_presentation(s).alphabet();
  Certificate cert = certificate_from_json(parse_json(read_file(c.certificate)), a);
  Verification v = verify_certificate(t, s, cert);
  if (v.ok) {
    std::cout << "ok: " << verdict_name(cert.verdict) << "\n";
    return 0;
  }
  std::cout << (v.replay_mismatch ? "replay mismatch: " : "verdict failure: ") << v.message << "\n";
  return 1;
}

int cmd_fold(const Config& c) {
  OrientedGraph g = load_graph(c.graph, c.rank);
  FoldSequence fs = fold_sequence(label_morphism(g, c.rank));
  Alphabet a = letters_alphabet(c.rank);
  std::cout << write_graph(fs.immersion.source, &a);
  int reductions = 0;
  for (const FoldRecord& r : fs.records) reductions += r.kind == FoldKind::reduction;
  std::cerr << fs.records.size() << " folds, " << reductions << " reductions\n";
  if (!c.dot_dir.empty()) {
    fs::create_directories(c.dot_dir);
    write_file(c.dot_dir + "/folded.dot", emit_dot(fs.immersion.source, &a));
  }
  return 0;
}

int cmd_membership(const Config& c) {
  Alphabet a = letters_alphabet(c.rank);
  SubgroupGraph s = subgroup_of(load_graph(c.graph, c.rank), c.rank);
  bool in = accepts(s, free_reduce(a.parse(c.word)));
  std::cout << (in ? "yes" : "no") << "\n";
  return 0;
}

int cmd_pullback(const Config& c) {
  Alphabet a = letters_alphabet(c.rank);
  SubgroupGraph s = subgroup_of(load_graph(c.graph, c.rank), c.rank);
  SubgroupGraph t = subgroup_of(load_graph(c.graph2, c.rank), c.rank);
  SubgroupGraph i = intersect(s, t, c.rank);
  std::cout << "# base " << i.base << ", rank " << total_rank(i.graph) << "\n" << write_graph(i.graph, &a);
  return 0;
}

struct CaseRow {
  std::string name;
  std::string verdict;
  std::size_t moves = 0;
  double seconds = 0;
};

int cmd_corpus(const Config& c) {
  struct Case {
    std::string name;
    TupleFile t;
  };
  std::vector<Case> cases;
  if (!c.corpus_dir.empty()) {
    for (const auto& e : fs::directory_iterator(c.corpus_dir))
      if (e.is_regular_file() && e.path().extension() == ".json")
        cases.push_back({e.path().stem().string(), tuple_from_json(parse_json(read_file(e.path().string())))});
  } else {
    // Scrambles of the standard tuple, reproducible from --seed.
    SurfaceSpec s = parse_surface(c.surface.empty() ? "g2" : c.surface);
    std::mt19937_64 rng(c.seed);
    for (int k = 0; k < c.count; ++k) {
      std::ostringstream name;
      name << surface_name(s) << "_" << std::setw(3) << std::setfill('0') << k;
      cases.push_back({name.str(), {s, scramble(s, c.max_moves, rng).tuple}});
    }
  }
  std::sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
  std::vector<CaseRow> rows(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < cases.size(); k = next++) {
      auto t0 = std::chrono::steady_clock::now();
      EngineOptions opt;
      opt.whitehead_length_budget = c.budget_whitehead;
      EngineResult r = standardize(cases[k].t.words, cases[k].t.surface, opt);
      rows[k] = {cases[k].name, status_name(r.status), r.certificate ? r.certificate->moves.size() : 0,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, c.jobs); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  std::cout << std::left << std::setw(24) << "case" << std::setw(16) << "verdict" << std::setw(8) << "moves"
            << "seconds\n";
  int worst = 0;
  for (const CaseRow& r : rows) {
    std::cout << std::left << std::setw(24) << r.name << std::setw(16) << r.verdict << std::setw(8) << r.moves
              << std::fixed << std::setprecision(4) << r.seconds << "\n";
    if (r.verdict == "undecided") worst = 3;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nielsen equivalence of generating tuples of surface groups"};
  app.require_subcommand(1);
  Config c;

  auto* st = app.add_subcommand("standardize", "decide a tuple and write a certificate");
  st->add_option("--surface", c.surface, "g<genus>, n<genus>, torus, klein or surface JSON")->required();
  st->add_option("--words", c.words, "tuple file or comma-separated words")->required();
  st->add_option("--certificate", c.certificate, "certificate output path (default stdout)");
  st->add_option("--trace", c.trace, "JSON-lines move trace path");
  st->add_option("--dot-dir", c.dot_dir, "directory for per-move DOT snapshots");
  st->add_option("--budget-whitehead", c.budget_whitehead, "length budget of the decomposability search");
  st->add_flag("--audit", c.audit, "check every move against the marking");

  auto* ve = app.add_subcommand("verify", "replay a certificate against a tuple");
  ve->add_option("--surface", c.surface)->required();
  ve->add_option("--words", c.words)->required();
  ve->add_option("--certificate", c.certificate)->required()->check(CLI::ExistingFile);

  auto* fo = app.add_subcommand("fold", "fold a labeled graph to an immersion");
  fo->add_option("--graph", c.graph)->required()->check(CLI::ExistingFile);
  fo->add_option("--rank", c.rank, "rank of the free group (labels a, b, c, ...)");
  fo->add_option("--dot-dir", c.dot_dir);

  auto* me = app.add_subcommand("membership", "is a word in the subgroup read by a graph at vertex 0");
  me->add_option("--graph", c.graph)->required()->check(CLI::ExistingFile);
  me->add_option("--word", c.word)->required();
  me->add_option("--rank", c.rank);

  auto* pb = app.add_subcommand("pullback", "core of the intersection of two subgroups");
  pb->add_option("--graph", c.graph)->required()->check(CLI::ExistingFile);
  pb->add_option("--graph2", c.graph2)->required()->check(CLI::ExistingFile);
  pb->add_option("--rank", c.rank);

  auto* co = app.add_subcommand("corpus", "run a directory of tuple files, or generated scrambles");
  co->add_option("dir", c.corpus_dir, "directory of *.json tuple files");
  co->add_option("--surface", c.surface, "surface of generated scrambles");
  co->add_option("--count", c.count);
  co->add_option("--max-moves", c.max_moves);
  co->add_option("--seed", c.seed);
  co->add_option("--jobs", c.jobs);
  co->add_option("--budget-whitehead", c.budget_whitehead);

  CLI11_PARSE(app, argc, argv);
  try {
    if (st->parsed()) return cmd_standardize(c);
    if (ve->parsed()) return cmd_verify(c);
    if (fo->parsed()) return cmd_fold(c);
    if (me->parsed()) return cmd_membership(c);
    if (pb->parsed()) return cmd_pullback(c);
    if (co->parsed()) return cmd_corpus(c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
  return 0;
}
