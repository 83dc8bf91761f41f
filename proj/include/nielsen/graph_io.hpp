#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nielsen/certificate.hpp"
#include "nielsen/graph_core.hpp"
#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/links.hpp"
#include "nielsen/moves.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline std::string strip_comment(const std::string& s) {
  auto p = s.find('#');
  return p == std::string::npos ? s : s.substr(0, p);
}

inline int to_int(const std::string& s, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad " + what + " '" + s + "'");
  }
}

// key=value fields after the leading tokens.
inline std::map<std::string, std::string> fields(const std::vector<std::string>& toks, std::size_t from, int line) {
  std::map<std::string, std::string> f;
  for (std::size_t i = from; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
    if (!f.emplace(toks[i].substr(0, eq), toks[i].substr(eq + 1)).second)
      throw ParseError(line, "duplicate field '" + toks[i].substr(0, eq) + "'");
  }
  return f;
}

struct DartLine {
  int id, bar, head, label, line;
};

// Assembles dart records into a graph; darts 2k and 2k+1 must be bars.
inline OrientedGraph assemble(std::vector<DartLine> darts, int vertices, int line0) {
  std::map<int, DartLine> by_id;
  for (const DartLine& d : darts)
    if (!by_id.emplace(d.id, d).second) throw ParseError(d.line, "duplicate dart " + std::to_string(d.id));
  int n = static_cast<int>(by_id.size());
  if (n % 2) throw ParseError(line0, "odd number of darts");
  int maxv = vertices;
  for (const auto& [id, d] : by_id) {
    if (id < 0 || id >= n) throw ParseError(d.line, "dart ids must be 0.." + std::to_string(n - 1));
    if (d.bar != (id ^ 1)) throw ParseError(d.line, "bar of dart " + std::to_string(id) + " must be " + std::to_string(id ^ 1));
    if (d.head < 0) throw ParseError(d.line, "negative head");
    if (vertices < 0) maxv = std::max(maxv, d.head + 1);
    else if (d.head >= vertices) throw ParseError(d.line, "head beyond the declared vertex count");
  }
  OrientedGraph g(std::max(maxv, 0));
  for (int k = 0; k < n / 2; ++k) {
    const DartLine& a = by_id.at(2 * k);
    const DartLine& b = by_id.at(2 * k + 1);
    if (a.label != -b.label) throw ParseError(b.line, "label of a bar must be the inverse symbol");
    g.add_edge(b.head, a.head, a.label);
  }
  return g;
}

inline int parse_label(const std::string& s, const Alphabet* a, int line) {
  if (!a) throw ParseError(line, "labels need an alphabet");
  try {
    return a->letter(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

// Graph text format:
//   vertices <n>            (optional; otherwise one more than the largest head)
//   dart <id> bar=<id> head=<v> [label=<sym>]
// Blank lines and '#' comments are skipped.
inline OrientedGraph parse_graph(const std::string& text, const Alphabet* alphabet = nullptr) {
  std::istringstream in(text);
  std::string raw;
  int line = 0, vertices = -1;
  std::vector<detail::DartLine> darts;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;
    if (toks[0] == "vertices") {
      if (toks.size() != 2) throw ParseError(line, "expected 'vertices <n>'");
      vertices = detail::to_int(toks[1], line, "vertex count");
      if (vertices < 0) throw ParseError(line, "negative vertex count");
      continue;
    }
    if (toks[0] != "dart") throw ParseError(line, "unknown record '" + toks[0] + "'");
    if (toks.size() < 2) throw ParseError(line, "dart without id");
    auto f = detail::fields(toks, 2, line);
    for (const auto& [k, v] : f)
      if (k != "bar" && k != "head" && k != "label") throw ParseError(line, "unknown field '" + k + "'");
    if (!f.count("bar") || !f.count("head")) throw ParseError(line, "dart needs bar= and head=");
    detail::DartLine d{detail::to_int(toks[1], line, "dart id"), detail::to_int(f["bar"], line, "bar"),
                       detail::to_int(f["head"], line, "head"), 0, line};
    if (f.count("label")) d.label = detail::parse_label(f["label"], alphabet, line);
    darts.push_back(d);
  }
  return detail::assemble(std::move(darts), vertices, line);
}

inline std::string write_graph(const OrientedGraph& g, const Alphabet* alphabet = nullptr) {
  std::ostringstream o;
  o << "vertices " << g.num_vertices() << "\n";
  for (Dart d = 0; d < g.num_darts(); ++d) {
    o << "dart " << d << " bar=" << OrientedGraph::bar(d) << " head=" << g.head(d);
    if (g.label(d) != 0) {
      if (!alphabet) throw std::invalid_argument("write_graph: labeled graph needs an alphabet");
      o << " label=" << alphabet->token(g.label(d));
    }
    o << "\n";
  }
  return o.str();
}

// Link text format: the core in graph format, then one line per incident
// edge space:
//   incident <id> shape=point attach=<vertex>
//   incident <id> shape=interval|circle attach=<d0>,<d1>,...
// where the darts are consecutive core darts traced by the edge space.
inline Link parse_link(const std::string& text) {
  std::istringstream in(text);
  std::string raw, core_text;
  int line = 0;
  struct Inc {
    int id, line;
    Shape shape;
    std::vector<int> seq;
  };
  std::vector<Inc> incs;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty() || toks[0] != "incident") {
      core_text += raw + "\n";
      continue;
    }
    core_text += "\n";
    if (toks.size() < 2) throw ParseError(line, "incident without id");
    auto f = detail::fields(toks, 2, line);
    if (!f.count("shape") || !f.count("attach")) throw ParseError(line, "incident needs shape= and attach=");
    Inc e{detail::to_int(toks[1], line, "incident id"), line, Shape::other, {}};
    if (f["shape"] == "point") e.shape = Shape::point;
    else if (f["shape"] == "interval") e.shape = Shape::interval;
    else if (f["shape"] == "circle") e.shape = Shape::circle;
    else throw ParseError(line, "shape must be point, interval or circle");
    std::stringstream seq(f["attach"]);
    std::string item;
    while (std::getline(seq, item, ',')) e.seq.push_back(detail::to_int(item, line, "attach entry"));
    if (e.seq.empty()) throw ParseError(line, "empty attach");
    if (e.shape == Shape::point && e.seq.size() != 1) throw ParseError(line, "a point attaches at one vertex");
    incs.push_back(std::move(e));
  }
  Link l;
  // Core lines keep their numbering since every line went to core_text.
  l.core = parse_graph(core_text);
  std::sort(incs.begin(), incs.end(), [](const Inc& a, const Inc& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < incs.size(); ++k) {
    const Inc& e = incs[k];
    if (e.id != static_cast<int>(k)) throw ParseError(e.line, "incident ids must be 0..n-1");
    IncidentEdge ie;
    if (e.shape == Shape::point) {
      if (e.seq[0] < 0 || e.seq[0] >= l.core.num_vertices()) throw ParseError(e.line, "attach vertex out of range");
      ie.graph = OrientedGraph(1);
      ie.attach.vertex = {e.seq[0]};
    } else {
      for (int d : e.seq)
        if (d < 0 || d >= l.core.num_darts()) throw ParseError(e.line, "attach dart out of range");
      for (std::size_t s = 0; s + 1 < e.seq.size(); ++s)
        if (l.core.head(e.seq[s]) != l.core.tail(e.seq[s + 1])) throw ParseError(e.line, "attach darts are not consecutive");
      int n = static_cast<int>(e.seq.size());
      bool circ = e.shape == Shape::circle;
      if (circ && l.core.head(e.seq.back()) != l.core.tail(e.seq.front()))
        throw ParseError(e.line, "circle attach does not close up");
      int nv = circ ? n : n + 1;
      ie.graph = OrientedGraph(nv);
      ie.attach.vertex.resize(nv);
      for (int s = 0; s < n; ++s) {
        ie.graph.add_edge(s, (s + 1) % nv);
        ie.attach.vertex[s] = l.core.tail(e.seq[s]);
        ie.attach.dart.push_back(e.seq[s]);
        ie.attach.dart.push_back(OrientedGraph::bar(e.seq[s]));
      }
      if (!circ) ie.attach.vertex[n] = l.core.head(e.seq.back());
    }
    l.incident.push_back(std::move(ie));
  }
  return l;
}

// Inverse of parse_link for links whose incident spaces are points, paths
// 0 -> 1 -> ... or cycles 0 -> 1 -> ... -> 0 in edge order.
inline std::string write_link(const Link& l) {
  std::ostringstream o;
  o << write_graph(l.core);
  for (std::size_t k = 0; k < l.incident.size(); ++k) {
    const auto& e = l.incident[k];
    Shape s = e.shape();
    o << "incident " << k << " shape=" << shape_name(s) << " attach=";
    if (s == Shape::point) {
      o << e.attach.vertex[0];
    } else if (s == Shape::interval || s == Shape::circle) {
      for (int c = 0; c < e.graph.num_edges(); ++c) o << (c ? "," : "") << e.attach.dart[2 * c];
    } else {
      throw std::invalid_argument("write_link: incident space is not a point, interval or circle");
    }
    o << "\n";
  }
  return o.str();
}

// -- JSON ---------------------------------------------------------------------

inline nlohmann::json to_json(const SurfaceSpec& s) { return {{"orientable", s.orientable}, {"genus", s.genus}}; }

inline SurfaceSpec surface_from_json(const nlohmann::json& j) {
  SurfaceSpec s;
  s.orientable = j.at("orientable").get<bool>();
  s.genus = j.at("genus").get<int>();
  if (s.orientable ? s.genus < 0 : s.genus < 1) throw std::invalid_argument("nonorientable genus must be positive");
  return s;
}

// "g2" / "torus" / "n3" / "klein" / JSON text.
inline SurfaceSpec parse_surface(const std::string& text) {
  const std::string& t = text;
  if (t == "torus") return {true, 1};
  if (t == "klein") return {false, 2};
  if (t.size() >= 2 && (t[0] == 'g' || t[0] == 'n') && t.find_first_not_of("0123456789", 1) == std::string::npos) {
    SurfaceSpec s{t[0] == 'g', std::stoi(t.substr(1))};
    if (!s.orientable && s.genus < 1) throw std::invalid_argument("nonorientable genus must be positive");
    return s;
  }
  try {
    return surface_from_json(nlohmann::json::parse(t));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad surface '" + text + "': " + e.what());
  }
}

inline std::string surface_name(const SurfaceSpec& s) { return (s.orientable ? "g" : "n") + std::to_string(s.genus); }

// Words separated by commas, e.g. "a1 b1 a1', b1".
inline Tuple parse_words(const std::string& text, const Alphabet& a) {
  Tuple t;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) t.push_back(a.parse(item));
  return t;
}

struct TupleFile {
  SurfaceSpec surface;
  Tuple words;
};

// {"surface": {"orientable": true, "genus": 1}, "words": ["a1 b1 a1'", "b1"]}
inline nlohmann::json to_json(const TupleFile& t) {
  Alphabet a = standard_presentation(t.surface).alphabet();
  nlohmann::json j{{"surface", to_json(t.surface)}, {"words", nlohmann::json::array()}};
  for (const Word& w : t.words) j["words"].push_back(format_word(w, a));
  return j;
}

inline TupleFile tuple_from_json(const nlohmann::json& j) {
  TupleFile t;
  t.surface = surface_from_json(j.at("surface"));
  Alphabet a = standard_presentation(t.surface).alphabet();
  for (const auto& w : j.at("words")) t.words.push_back(a.parse(w.get<std::string>()));
  return t;
}

// Parse errors from the JSON reader carry a line number too.
inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(line, e.what());
  }
}

// -- DOT ------------------------------------------------------------------------

inline std::string emit_dot(const OrientedGraph& g, const Alphabet* alphabet = nullptr, const std::string& name = "G") {
  std::ostringstream o;
  o << "digraph " << name << " {\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v) o << "  v" << v << ";\n";
  for (Dart d = 0; d < g.num_darts(); d += 2) {
    o << "  v" << g.tail(d) << " -> v" << g.head(d);
    if (g.label(d) != 0)
      o << " [label=\"" << (alphabet ? alphabet->token(g.label(d)) : std::to_string(g.label(d))) << "\"]";
    o << ";\n";
  }
  o << "}\n";
  return o.str();
}

// One cluster per vertex space; edges of vertex spaces are labeled by their
// x letters, point edge spaces drawn as dashed crossings and other edge
// spaces as dotted bundles between their attaching images.
inline std::string emit_dot(const MarkedGog& m, const std::string& name = "X") {
  const GraphOfGraphs& X = m.X;
  std::ostringstream o;
  o << "digraph " << name << " {\n  compound=true;\n";
  for (Vertex v = 0; v < X.num_vertices(); ++v) {
    const auto& g = X.vertex_spaces[v];
    o << "  subgraph cluster_" << v << " {\n    label=\"X" << v << "\";\n";
    for (Vertex x = 0; x < g.num_vertices(); ++x) {
      o << "    s" << v << "_" << x;
      if (v == m.mark.base_space && x == m.mark.base_vertex) o << " [shape=doublecircle]";
      o << ";\n";
    }
    for (Dart d = 0; d < g.num_darts(); d += 2) {
      o << "    s" << v << "_" << g.tail(d) << " -> s" << v << "_" << g.head(d);
      if (X.has_over && m.pattern) o << " [label=\"x" << m.pattern->x_letter(X.over_vertex[v].dart[d]) << "\"]";
      o << ";\n";
    }
    o << "  }\n";
  }
  const auto& U = X.underlying;
  for (Dart d = 0; d < U.num_darts(); d += 2) {
    const auto& E = X.edge_spaces[d / 2];
    std::string style = shape_of(E) == Shape::point ? "dashed" : "dotted";
    for (Vertex x = 0; x < E.num_vertices(); ++x) {
      o << "  s" << U.tail(d) << "_" << X.attach[d + 1].vertex[x] << " -> s" << U.head(d) << "_" << X.attach[d].vertex[x]
        << " [style=" << style << ", label=\"e" << d / 2;
      if (X.has_over) o << (X.over.dart[d] == 0 ? "+" : "-");
      o << "\"];\n";
    }
  }
  o << "}\n";
  return o.str();
}

}  // namespace nielsen
