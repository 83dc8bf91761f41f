#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/words.hpp"

namespace nielsen {

enum class Verdict { standard, reducible };

inline std::string verdict_name(Verdict v) { return v == Verdict::standard ? "standard" : "reducible"; }

inline Verdict verdict_from_name(const std::string& s) {
  if (s == "standard") return Verdict::standard;
  if (s == "reducible") return Verdict::reducible;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

struct Certificate {
  Verdict verdict = Verdict::standard;
  std::vector<NielsenMove> moves;
  Tuple final_tuple;
  std::string trace_digest;
};

// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string digest_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_word(const Word& w, const Alphabet& a) { return w.empty() ? "1" : a.format(w); }

inline nlohmann::json to_json(const Certificate& c, const Alphabet& a) {
  nlohmann::json j;
  j["verdict"] = verdict_name(c.verdict);
  j["moves"] = nlohmann::json::array();
  for (const NielsenMove& m : c.moves) {
    nlohmann::json mj{{"kind", kind_name(m.kind)}, {"i", m.i}};
    if (m.kind != MoveKind::invert) mj["j"] = m.j;
    j["moves"].push_back(mj);
  }
  j["final"] = nlohmann::json::array();
  for (const Word& w : c.final_tuple) j["final"].push_back(format_word(w, a));
  if (!c.trace_digest.empty()) j["trace_digest"] = c.trace_digest;
  return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j, const Alphabet& a) {
  Certificate c;
  c.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  for (const auto& mj : j.at("moves")) {
    NielsenMove m;
    m.kind = kind_from_name(mj.at("kind").get<std::string>());
    m.i = mj.at("i").get<int>();
    m.j = mj.contains("j") ? mj.at("j").get<int>() : 0;
    c.moves.push_back(m);
  }
  for (const auto& w : j.at("final")) c.final_tuple.push_back(a.parse(w.get<std::string>()));
  if (j.contains("trace_digest")) c.trace_digest = j.at("trace_digest").get<std::string>();
  return c;
}

struct Verification {
  bool ok = false;
  bool replay_mismatch = false;
  bool verdict_failure = false;
  std::string message;
};

// Replays the moves and checks the verdict with the word-problem solver only.
inline Verification verify_certificate(const Tuple& input, const SurfaceSpec& s, const Certificate& c) {
  Verification v;
  int rank = s.rank();
  try {
    for (const Word& w : input) check_letters(w, rank);
    for (const Word& w : c.final_tuple) check_letters(w, rank);
  } catch (const std::invalid_argument& e) {
    v.replay_mismatch = true;
    v.message = e.what();
    return v;
  }
  Tuple t = input;
  for (Word& w : t) w = free_reduce(w);
  for (std::size_t k = 0; k < c.moves.size(); ++k) {
    if (!move_in_range(c.moves[k], t.size())) {
      v.replay_mismatch = true;
      v.message = "move " + std::to_string(k) + " is out of range";
      return v;
    }
    apply_in_place(t, c.moves[k]);
  }
  if (t.size() != c.final_tuple.size()) {
    v.replay_mismatch = true;
    v.message = "replay arity differs from the final tuple";
    return v;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != free_reduce(c.final_tuple[i])) {
      v.replay_mismatch = true;
      v.message = "replay differs from the final tuple at entry " + std::to_string(i);
      return v;
    }
  if (c.verdict == Verdict::standard) {
    auto target = standard_tuple(s);
    if (t.size() != target.size()) {
      v.verdict_failure = true;
      v.message = "arity differs from the standard tuple";
      return v;
    }
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!words_equal(t[i], target[i], s)) {
        v.verdict_failure = true;
        v.message = "entry " + std::to_string(i) + " is not the standard generator";
        return v;
      }
  } else {
    bool trivial = false;
    for (const Word& w : t) trivial = trivial || word_equals_identity(w, s);
    if (!trivial) {
      v.verdict_failure = true;
      v.message = "no entry of the final tuple is trivial";
      return v;
    }
  }
  v.ok = true;
  return v;
}

}  // namespace nielsen
