#pragma once

// Eventually periodic subsets of the positive integers.
//
// Membership of n <= threshold is read from the prefix; for n > threshold it is
// pattern[(n - threshold - 1) % period]. Values are kept canonical (minimal period, then
// minimal threshold), so structural equality is set equality.

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/syntax.hpp"

namespace cdkit {

class EPSet {
 public:
  EPSet() : EPSet(0, {}, 1, {false}) {}

  EPSet(int threshold, std::vector<bool> prefix, int period, std::vector<bool> pattern)
      : threshold_(threshold), prefix_(std::move(prefix)), period_(period), pattern_(std::move(pattern)) {
    if (threshold_ < 0 || static_cast<int>(prefix_.size()) != threshold_)
      throw std::invalid_argument("EPSet: prefix length must equal the threshold");
    if (period_ < 1 || static_cast<int>(pattern_.size()) != period_)
      throw std::invalid_argument("EPSet: pattern length must equal the period");
    canonicalize();
  }

  /// Builds the set {n | pred(n)} for a predicate known to be periodic with the given
  /// period beyond the given threshold.
  template <class Pred>
  static EPSet from_predicate(int threshold, int period, Pred pred) {
    std::vector<bool> prefix(threshold), pattern(period);
    for (int n = 1; n <= threshold; ++n) prefix[n - 1] = pred(n);
    for (int i = 0; i < period; ++i) pattern[i] = pred(threshold + 1 + i);
    return EPSet(threshold, std::move(prefix), period, std::move(pattern));
  }

  static EPSet empty() { return EPSet(); }
  static EPSet naturals() { return EPSet(0, {}, 1, {true}); }

  /// {k*n + l | n >= 0}, keeping only positive members.
  static EPSet progression(int k, int l) {
    if (k < 1 || l < 0) throw std::invalid_argument("progression needs k >= 1 and l >= 0");
    return from_predicate(l, k, [k, l](int n) { return n >= l && (n - l) % k == 0; });
  }

  static EPSet finite(const std::vector<int>& elems) {
    int t = 0;
    for (int e : elems) {
      if (e < 1) throw std::invalid_argument("EPSet elements must be positive");
      t = std::max(t, e);
    }
    std::vector<bool> prefix(t, false);
    for (int e : elems) prefix[e - 1] = true;
    return EPSet(t, std::move(prefix), 1, {false});
  }

  int threshold() const { return threshold_; }
  int period() const { return period_; }
  const std::vector<bool>& prefix() const { return prefix_; }
  const std::vector<bool>& pattern() const { return pattern_; }

  bool contains(long long n) const {
    if (n < 1) return false;
    if (n <= threshold_) return prefix_[n - 1];
    return pattern_[(n - threshold_ - 1) % period_];
  }

  bool is_infinite() const { return std::find(pattern_.begin(), pattern_.end(), true) != pattern_.end(); }
  bool is_empty() const { return !is_infinite() && std::find(prefix_.begin(), prefix_.end(), true) == prefix_.end(); }

  std::optional<int> least() const {
    for (int n = 1; n <= threshold_ + period_; ++n)
      if (contains(n)) return n;
    return std::nullopt;
  }

  /// Members in increasing order, stopping after `limit` of them.
  std::vector<int> first(std::size_t limit) const {
    std::vector<int> out;
    if (is_empty()) return out;
    for (int n = 1; out.size() < limit; ++n) {
      if (contains(n)) out.push_back(n);
      if (!is_infinite() && n >= threshold_) break;
    }
    return out;
  }

  /// Number of members (only meaningful for finite sets).
  std::size_t finite_size() const {
    if (is_infinite()) throw std::logic_error("finite_size of an infinite set");
    return static_cast<std::size_t>(std::count(prefix_.begin(), prefix_.end(), true));
  }

  friend bool operator==(const EPSet&, const EPSet&) = default;

  template <class Op>
  static EPSet combine(const EPSet& x, const EPSet& y, Op op) {
    const int t = std::max(x.threshold_, y.threshold_);
    const int p = std::lcm(x.period_, y.period_);
    return from_predicate(t, p, [&](int n) { return op(x.contains(n), y.contains(n)); });
  }

 private:
  void canonicalize() {
    // minimal period
    for (int q = 1; q < period_; ++q) {
      if (period_ % q) continue;
      bool ok = true;
      for (int i = q; i < period_ && ok; ++i) ok = pattern_[i] == pattern_[i - q];
      if (ok) {
        pattern_.resize(q);
        period_ = q;
        break;
      }
    }
    // minimal threshold: pull the last prefix bit into the pattern while it matches
    while (threshold_ > 0 && prefix_[threshold_ - 1] == pattern_[period_ - 1]) {
      std::rotate(pattern_.begin(), pattern_.end() - 1, pattern_.end());
      prefix_.pop_back();
      --threshold_;
    }
  }

  int threshold_;
  std::vector<bool> prefix_;
  int period_;
  std::vector<bool> pattern_;
};

inline EPSet set_union(const EPSet& x, const EPSet& y) { return EPSet::combine(x, y, [](bool a, bool b) { return a || b; }); }
inline EPSet set_intersect(const EPSet& x, const EPSet& y) {
  return EPSet::combine(x, y, [](bool a, bool b) { return a && b; });
}
inline EPSet set_difference(const EPSet& x, const EPSet& y) {
  return EPSet::combine(x, y, [](bool a, bool b) { return a && !b; });
}
inline EPSet complement(const EPSet& x) { return set_difference(EPSet::naturals(), x); }
inline bool is_subset(const EPSet& x, const EPSet& y) { return set_difference(x, y).is_empty(); }
inline bool disjoint(const EPSet& x, const EPSet& y) { return set_intersect(x, y).is_empty(); }

/// Removes the elements of a tuple (the D \ d notation).
inline EPSet without(const EPSet& x, const std::vector<int>& tuple) {
  std::vector<int> pos;
  for (int d : tuple)
    if (d >= 1) pos.push_back(d);
  return set_difference(x, EPSet::finite(pos));
}

/// Splits an infinite set into the members of even rank (2nd, 4th, ...) and odd rank
/// (1st, 3rd, ...), counting in increasing order.
inline std::pair<EPSet, EPSet> split_two_infinite(const EPSet& s) {
  if (!s.is_infinite()) throw std::invalid_argument("split_two_infinite: set is finite");
  const int t = s.threshold();
  const int p = 2 * s.period();
  std::vector<bool> even(t + p), odd(t + p);
  int rank = 0;
  for (int n = 1; n <= t + p; ++n) {
    if (!s.contains(n)) continue;
    ++rank;
    (rank % 2 == 0 ? even : odd)[n - 1] = true;
  }
  // rank parity repeats with period 2p beyond the threshold
  auto build = [&](const std::vector<bool>& bits) {
    return EPSet::from_predicate(t, p, [&](int n) { return bits[n - 1]; });
  };
  return {build(even), build(odd)};
}

// ---------------------------------------------------------------------------
// Text form: progressions pN+r, finite sets {a,b}, combined with + (union),
// - (difference) and & (intersection), left to right; parentheses group.

inline std::string to_string(const EPSet& s) {
  if (s.is_empty()) return "{}";
  const int p = s.period();
  std::vector<int> residues;
  for (int i = 0; i < p; ++i)
    if (s.pattern()[i]) residues.push_back((s.threshold() + 1 + i) % p);
  std::sort(residues.begin(), residues.end());
  EPSet covered;
  std::string out;
  for (int r : residues) {
    covered = set_union(covered, EPSet::progression(p, r));
    if (!out.empty()) out += " + ";
    if (p == 1)
      out += "N";
    else
      out += std::to_string(p) + "N" + (r ? "+" + std::to_string(r) : "");
  }
  auto list = [](const EPSet& f) {
    std::string t = "{";
    bool first = true;
    for (int n : f.first(static_cast<std::size_t>(f.threshold()) + 1)) {
      t += (first ? "" : ",") + std::to_string(n);
      first = false;
    }
    return t + "}";
  };
  EPSet extra = set_difference(s, covered);
  EPSet missing = set_difference(covered, s);
  if (!extra.is_empty()) out += (out.empty() ? "" : " + ") + list(extra);
  if (!missing.is_empty()) out += " - " + list(missing);
  return out;
}

namespace detail {

class EPSetParser {
 public:
  explicit EPSetParser(const std::string& text, std::size_t offset = 0) : s_(text), pos_(offset) {}

  EPSet parse_all() {
    EPSet e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

  EPSet expr() {
    EPSet acc = term();
    while (true) {
      skip();
      if (pos_ >= s_.size()) return acc;
      char c = s_[pos_];
      if (c == '+') {
        ++pos_;
        acc = set_union(acc, term());
      } else if (c == '-') {
        ++pos_;
        acc = set_difference(acc, term());
      } else if (c == '&') {
        ++pos_;
        acc = set_intersect(acc, term());
      } else {
        return acc;
      }
    }
  }

  std::size_t position() const { return pos_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("set expression: " + what, pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  int number() {
    skip();
    if (!peek_digit()) fail("expected a number");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1000000) fail("number too large");
    }
    return static_cast<int>(v);
  }

  EPSet term() {
    skip();
    if (pos_ >= s_.size()) fail("expected a set");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      EPSet e = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == '{') {
      ++pos_;
      std::vector<int> elems;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '}') {
        ++pos_;
        return EPSet::empty();
      }
      while (true) {
        int n = number();
        if (n < 1) fail("set elements must be positive");
        elems.push_back(n);
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < s_.size() && s_[pos_] == '}') {
          ++pos_;
          break;
        }
        fail("expected ',' or '}'");
      }
      return EPSet::finite(elems);
    }
    int k = 1;
    if (peek_digit()) k = number();
    skip();
    if (pos_ >= s_.size() || s_[pos_] != 'N') fail("expected 'N'");
    ++pos_;
    if (k < 1) fail("period must be positive");
    // "+l" right after N is an offset unless the next term is itself a progression
    std::size_t save = pos_;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      if (peek_digit()) {
        std::size_t before = pos_;
        int l = number();
        skip();
        if (pos_ >= s_.size() || s_[pos_] != 'N') return EPSet::progression(k, l);
        pos_ = before;
      }
    }
    pos_ = save;
    return EPSet::progression(k, 0);
  }

  const std::string& s_;
  std::size_t pos_;
};

}  // namespace detail

inline EPSet parse_epset(const std::string& text) { return detail::EPSetParser(text).parse_all(); }

/// A random canonical set with threshold < max_threshold and period <= max_period.
template <class Rng>
EPSet random_epset(Rng& rng, int max_threshold = 8, int max_period = 6, double density = 0.5) {
  std::uniform_int_distribution<int> th(0, max_threshold - 1), pe(1, max_period);
  std::bernoulli_distribution b(density);
  int t = th(rng), p = pe(rng);
  std::vector<bool> prefix(t), pattern(p);
  for (int i = 0; i < t; ++i) prefix[i] = b(rng);
  for (int i = 0; i < p; ++i) pattern[i] = b(rng);
  return EPSet(t, std::move(prefix), p, std::move(pattern));
}

}  // namespace cdkit
