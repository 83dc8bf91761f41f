#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "nielsen/words.hpp"

namespace nielsen {

// Result of bringing a one-vertex surface relator to standard form.
// std_to_old[i] is the image of standard generator i+1 as a word in the
// original generators, and old_to_std the inverse substitution.  The
// standard relator mapped through std_to_old is a cyclic conjugate of the
// input relator.
struct SurfaceWordForm {
  bool orientable = true;
  int genus = 0;  // handles, or crosscaps when nonorientable
  std::vector<Word> std_to_old;
  std::vector<Word> old_to_std;
};

namespace detail {

class SurfaceWordNormalizer {
 public:
  SurfaceWordNormalizer(const Word& relator, int rank) : rank_(rank), r_(cyclic_reduce(relator)), done_(rank + 1, 0) {
    for (int g = 1; g <= rank; ++g) {
      cur_to_old_.push_back({g});
      old_to_cur_.push_back({g});
    }
    std::vector<int> count(rank + 1, 0);
    for (int l : r_) ++count[std::abs(l)];
    for (int g = 1; g <= rank; ++g)
      if (count[g] != 2) throw std::invalid_argument("surface word: every generator must occur exactly twice");
  }

  SurfaceWordForm run() {
    while (true) {
      if (extract_crosscap()) continue;
      if (extract_handle()) continue;
      if (dyck_step()) continue;
      break;
    }
    return finish();
  }

 private:
  // Replace generator g by c = P g^s Q, where P and Q avoid g.
  void change(int g, const Word& p, int s, const Word& q) {
    Word inv = concat({inverse(p), Word{g}, inverse(q)});  // g^s in terms of the new c (same index)
    Word g_image = s > 0 ? inv : inverse(inv);
    std::vector<Word> images;
    for (int k = 1; k <= rank_; ++k) images.push_back(k == g ? g_image : Word{k});
    std::size_t before = r_.size();
    r_ = cyclic_reduce(substitute(r_, images));
    if (r_.size() != before) throw std::invalid_argument("surface word: relator is not Whitehead minimal");
    for (Word& w : old_to_cur_) w = substitute(w, images);
    Word c_old = concat({substitute_old(p), s > 0 ? cur_to_old_[g - 1] : inverse(cur_to_old_[g - 1]), substitute_old(q)});
    cur_to_old_[g - 1] = c_old;
  }

  Word substitute_old(const Word& w) const { return substitute(w, cur_to_old_); }

  void rotate_to(std::size_t pos) { r_ = rotate_word(r_, pos); }

  void rotate_to_positive(int g) {
    auto pos = positions(g);
    rotate_to(r_[pos[0]] > 0 ? pos[0] : pos[1]);
  }

  std::vector<std::size_t> positions(int g) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r_.size(); ++i)
      if (std::abs(r_[i]) == g) out.push_back(i);
    return out;
  }

  // U a V a W  ->  c c V^-1 W U with c = a V.
  bool extract_crosscap() {
    for (int g = 1; g <= rank_; ++g) {
      if (done_[g]) continue;
      auto pos = positions(g);
      if (r_[pos[0]] != r_[pos[1]]) continue;
      if (r_[pos[0]] < 0) change(g, {}, -1, {});
      return extract_crosscap_at(g);
    }
    return false;
  }

  bool extract_crosscap_at(int g) {
    auto pos = positions(g);
    rotate_to(pos[0]);
    pos = positions(g);
    Word v(r_.begin() + 1, r_.begin() + pos[1]);
    change(g, {}, 1, v);
    done_[g] = 1;
    return true;
  }

  // a X b Y a' Z b' T  ->  [C, D] Y X T Z.
  bool extract_handle() {
    for (int a = 1; a <= rank_; ++a) {
      if (done_[a]) continue;
      rotate_to_positive(a);
      auto pa = positions(a);
      std::size_t close = pa[1];
      for (std::size_t i = 1; i < close; ++i) {
        int b = std::abs(r_[i]);
        if (done_[b] || b == a) continue;
        auto pb = positions(b);
        if (pb[1] <= close) continue;
        if (r_[i] < 0) {
          change(b, {}, -1, {});
          return true;  // retry with b flipped
        }
        Word x(r_.begin() + 1, r_.begin() + pb[0]);
        change(b, x, 1, {});  // bn = X b: a bn Y a' Z bn' X T
        rotate_to_positive(a);
        pa = positions(a);
        pb = positions(b);
        Word z(r_.begin() + pa[1] + 1, r_.begin() + pb[1]);
        change(a, inverse(z), 1, {});  // A = Z' a: A bn Y A' bn' X T Z
        rotate_to_positive(a);
        pa = positions(a);
        pb = positions(b);
        Word y(r_.begin() + pb[0] + 1, r_.begin() + pa[1]);
        change(a, {}, 1, inverse(y));  // C = A Y': C Y bn C' bn' X T Z
        change(b, y, 1, {});           // D = Y bn: C D C' D' Y X T Z
        done_[a] = done_[b] = 1;
        return true;
      }
      throw std::invalid_argument("surface word: relator is not a one-vertex surface word");
    }
    return false;
  }

  struct Block {
    std::size_t start;
    bool handle;
  };

  std::vector<Block> blocks() const {
    std::vector<Block> out;
    std::size_t n = r_.size();
    std::size_t i = 0;
    // Rotate reading so a block starts at position 0.
    while (i < n) {
      if (i + 1 < n && r_[i] == r_[i + 1]) {
        out.push_back({i, false});
        i += 2;
      } else if (i + 3 < n && r_[i + 2] == -r_[i] && r_[i + 3] == -r_[i + 1]) {
        out.push_back({i, true});
        i += 4;
      } else {
        return {};
      }
    }
    return out;
  }

  std::vector<Block> aligned_blocks() {
    for (std::size_t k = 0; k < std::max<std::size_t>(r_.size(), 1); ++k) {
      auto b = blocks();
      if (!b.empty() || r_.empty()) return b;
      rotate_to(1);
    }
    throw std::logic_error("surface word: blocks not aligned");
  }

  // [p, q] c c -> p q p' d q d with c = q d: converts a handle next to a
  // crosscap into crosscaps.
  bool dyck_step() {
    auto bs = aligned_blocks();
    bool any_handle = false, any_cap = false;
    for (auto& b : bs) (b.handle ? any_handle : any_cap) = true;
    if (!any_handle || !any_cap) return false;
    for (std::size_t k = 0; k < bs.size(); ++k) {
      const Block& h = bs[k];
      const Block& c = bs[(k + 1) % bs.size()];
      if (!h.handle || c.handle) continue;
      int p = r_[h.start], q = r_[h.start + 1], cap = r_[c.start];
      int g = std::abs(cap);
      change(g, {-q}, cap > 0 ? 1 : -1, {});
      done_[std::abs(p)] = done_[std::abs(q)] = done_[g] = 0;
      return true;
    }
    throw std::logic_error("surface word: no adjacent handle and crosscap");
  }

  SurfaceWordForm finish() {
    auto bs = aligned_blocks();
    SurfaceWordForm f;
    std::vector<int> std_letters;  // signed current letters for standard generators in order
    for (auto& b : bs) {
      if (b.handle) {
        std_letters.push_back(r_[b.start]);
        std_letters.push_back(r_[b.start + 1]);
      } else {
        std_letters.push_back(r_[b.start]);
        f.orientable = false;
      }
    }
    f.genus = static_cast<int>(bs.size());
    if (static_cast<int>(std_letters.size()) != rank_) throw std::logic_error("surface word: rank mismatch");
    std::vector<Word> cur_to_std(rank_);
    for (int i = 0; i < rank_; ++i) {
      int l = std_letters[i];
      f.std_to_old.push_back(l > 0 ? cur_to_old_[l - 1] : inverse(cur_to_old_[-l - 1]));
      cur_to_std[std::abs(l) - 1] = l > 0 ? Word{i + 1} : Word{-(i + 1)};
    }
    for (const Word& w : old_to_cur_) f.old_to_std.push_back(substitute(w, cur_to_std));
    return f;
  }

  int rank_;
  Word r_;
  std::vector<char> done_;
  std::vector<Word> cur_to_old_;
  std::vector<Word> old_to_cur_;
};

}  // namespace detail

inline SurfaceWordForm normalize_surface_word(const Word& relator, int rank) {
  return detail::SurfaceWordNormalizer(relator, rank).run();
}

}  // namespace nielsen
