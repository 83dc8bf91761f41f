#pragma once

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nielsen {

// Letters are nonzero ints: generator i (0-based) is i+1, its inverse -(i+1).
using Word = std::vector<int>;

inline Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (l == 0) throw std::invalid_argument("free_reduce: zero letter");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(out);
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const Word& p : parts) out.insert(out.end(), p.begin(), p.end());
  return free_reduce(out);
}

inline Word power(const Word& w, int k) {
  Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
  return free_reduce(out);
}

// Strips matching first/last letters of a freely reduced word.
inline Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Word(r.begin() + i, r.begin() + j);
}

inline Word rotate_word(const Word& w, std::size_t k) {
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[(i + k) % w.size()];
  return out;
}

// True iff the cyclically reduced forms are rotations of each other.
inline bool conjugate_in_free_group(const Word& a, const Word& b) {
  Word x = cyclic_reduce(a), y = cyclic_reduce(b);
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (rotate_word(x, k) == y) return true;
  return false;
}

inline int generator_of(int letter) { return std::abs(letter) - 1; }

// Generator names; a token is a name optionally followed by an apostrophe.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {}

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  int letter(const std::string& token) const {
    std::string name = token;
    bool inv = false;
    if (!name.empty() && name.back() == '\'') {
      inv = true;
      name.pop_back();
    }
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::invalid_argument("unknown generator '" + token + "'");
    int l = static_cast<int>(it - names_.begin()) + 1;
    return inv ? -l : l;
  }

  std::string token(int letter) const {
    int g = generator_of(letter);
    if (g < 0 || g >= size()) throw std::invalid_argument("letter out of alphabet");
    return letter > 0 ? names_[g] : names_[g] + "'";
  }

  Word parse(const std::string& text) const {
    std::istringstream in(text);
    Word w;
    std::string tok;
    while (in >> tok) {
      if (tok == "1") continue;
      w.push_back(letter(tok));
    }
    return w;
  }

  std::string format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += token(w[i]);
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
};

// Plain a, b, c, ... names for free groups in tests and graph files.
inline Alphabet letters_alphabet(int rank) {
  std::vector<std::string> names;
  for (int i = 0; i < rank; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return Alphabet(names);
}

// Applies a substitution given as images of generators.
inline Word substitute(const Word& w, const std::vector<Word>& images) {
  Word out;
  for (int l : w) {
    const Word& img = images.at(generator_of(l));
    if (l > 0)
      out.insert(out.end(), img.begin(), img.end());
    else
      for (auto it = img.rbegin(); it != img.rend(); ++it) out.push_back(-*it);
  }
  return free_reduce(out);
}

}  // namespace nielsen
