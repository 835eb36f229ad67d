#pragma once

// CD-asimulations between two finite G-models.
//
// An entry relates (state, tuple) of one model to (state, tuple) of the other, in a fixed
// direction. Conditions 4 and 5 ask for longer and longer tuples, so a finite relation
// carries a horizon: entries shorter than the horizon must extend, entries at the horizon
// need not. Forcing transfers along an entry of length k for formulas of quantifier rank
// at most horizon - k.

#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/enumerate.hpp"
#include "cdkit/kripke.hpp"
#include "cdkit/syntax.hpp"

namespace cdkit {

struct AsimEntry {
  int dir = 1;  // 1: from model 1 to model 2; 2: from model 2 to model 1
  int from_state = 0;
  std::vector<int> from_tuple;
  int to_state = 0;
  std::vector<int> to_tuple;

  friend auto operator<=>(const AsimEntry&, const AsimEntry&) = default;
};

struct AsimRelation {
  std::set<AsimEntry> entries;
  int horizon = -1;  // -1: the longest tuple present

  int effective_horizon() const {
    if (horizon >= 0) return horizon;
    int h = 0;
    for (const auto& e : entries) h = std::max(h, static_cast<int>(e.from_tuple.size()));
    return h;
  }
  bool contains(const AsimEntry& e) const { return entries.contains(e); }
};

namespace detail {

inline const GModel& from_model(int dir, const GModel& m1, const GModel& m2) { return dir == 1 ? m1 : m2; }
inline const GModel& to_model(int dir, const GModel& m1, const GModel& m2) { return dir == 1 ? m2 : m1; }

inline std::string entry_text(const AsimEntry& e) {
  auto tup = [](const std::vector<int>& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + "]";
  };
  return (e.dir == 1 ? "1->2 " : "2->1 ") + std::to_string(e.from_state) + " " + tup(e.from_tuple) + " " +
         std::to_string(e.to_state) + " " + tup(e.to_tuple);
}

inline void require_well_formed(const AsimEntry& e, const GModel& m1, const GModel& m2) {
  if (e.dir != 1 && e.dir != 2) throw std::invalid_argument("malformed entry: direction must be 1 or 2");
  const GModel& f = from_model(e.dir, m1, m2);
  const GModel& t = to_model(e.dir, m1, m2);
  if (e.from_tuple.size() != e.to_tuple.size())
    throw std::invalid_argument("malformed entry: tuple lengths differ in " + entry_text(e));
  if (e.from_state < 0 || e.from_state >= f.num_states || e.to_state < 0 || e.to_state >= t.num_states)
    throw std::invalid_argument("malformed entry: state out of range in " + entry_text(e));
  for (int d : e.from_tuple)
    if (f.domain_index(d) < 0) throw std::invalid_argument("malformed entry: element outside domain in " + entry_text(e));
  for (int d : e.to_tuple)
    if (t.domain_index(d) < 0) throw std::invalid_argument("malformed entry: element outside domain in " + entry_text(e));
}

// Calls fn(positions) for every position tuple of the given arity over a tuple of length len.
template <class Fn>
void for_each_positions(int arity, int len, Fn fn) {
  if (arity > 0 && len == 0) return;
  std::vector<int> pos(arity, 0);
  while (true) {
    fn(pos);
    int i = arity - 1;
    while (i >= 0 && pos[i] == len - 1) pos[i--] = 0;
    if (i < 0) return;
    ++pos[i];
  }
}

inline bool atom_at(const GModel& m, const std::string& pred, int state, const std::vector<int>& tuple,
                    const std::vector<int>& pos) {
  std::vector<int> t{state};
  for (int p : pos) t.push_back(tuple[p]);
  return m.holds(pred, t);
}

}  // namespace detail

/// Lists every breach of conditions 2-5 (conditions 4 and 5 only below the horizon).
inline std::vector<Violation> check(const AsimRelation& z, const GModel& m1, const GModel& m2) {
  for (const auto& e : z.entries) detail::require_well_formed(e, m1, m2);
  std::vector<Violation> out;
  const int horizon = z.effective_horizon();
  for (const auto& e : z.entries) {
    const GModel& f = detail::from_model(e.dir, m1, m2);
    const GModel& t = detail::to_model(e.dir, m1, m2);
    const int len = static_cast<int>(e.from_tuple.size());
    // 2: atoms over the tuple
    for (const auto& [pred, rel] : f.interp)
      detail::for_each_positions(rel.arity, len, [&](const std::vector<int>& pos) {
        if (detail::atom_at(f, pred, e.from_state, e.from_tuple, pos) &&
            !detail::atom_at(t, pred, e.to_state, e.to_tuple, pos)) {
          std::string args;
          for (int p : pos) args += (args.empty() ? "" : ",") + std::string("x") + std::to_string(p + 1);
          out.push_back({"condition 2", detail::entry_text(e) + ": " + pred + "(" + args + ") not preserved"});
        }
      });
    // 3: every successor of the target is matched both ways by a successor of the source
    for (int v = 0; v < t.num_states; ++v) {
      if (!t.leq(e.to_state, v)) continue;
      bool found = false;
      for (int w = 0; w < f.num_states && !found; ++w)
        found = f.leq(e.from_state, w) && z.contains({e.dir, w, e.from_tuple, v, e.to_tuple}) &&
                z.contains({3 - e.dir, v, e.to_tuple, w, e.from_tuple});
      if (!found)
        out.push_back({"condition 3", detail::entry_text(e) + ": no match for target successor " + std::to_string(v)});
    }
    if (len >= horizon) continue;
    // 4: left extensions
    for (int fe : f.domain) {
      bool found = false;
      for (int g : t.domain) {
        AsimEntry x = e;
        x.from_tuple.push_back(fe);
        x.to_tuple.push_back(g);
        if ((found = z.contains(x))) break;
      }
      if (!found) out.push_back({"condition 4", detail::entry_text(e) + ": no extension for " + std::to_string(fe)});
    }
    // 5: right extensions
    for (int g : t.domain) {
      bool found = false;
      for (int fe : f.domain) {
        AsimEntry x = e;
        x.from_tuple.push_back(fe);
        x.to_tuple.push_back(g);
        if ((found = z.contains(x))) break;
      }
      if (!found) out.push_back({"condition 5", detail::entry_text(e) + ": no extension for " + std::to_string(g)});
    }
  }
  return out;
}

namespace detail {

// Position of variable name x<k> (1-based), or 0.
inline int positional_index(const std::string& v) {
  if (v.size() < 2 || v[0] != 'x') return 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return 0;
  return std::stoi(v.substr(1));
}

inline std::vector<std::string> positional_vars(int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

inline std::size_t tuple_index(const GModel& m, const std::vector<int>& t) {
  std::size_t idx = 0;
  for (int d : t) idx = idx * m.domain.size() + static_cast<std::size_t>(m.domain_index(d));
  return idx;
}

}  // namespace detail

/// Checks that forcing transfers along every entry. Free variables are positional: x1 is
/// the first tuple element, x2 the second, and so on. A formula is tested on the entries
/// whose tuple covers its free variables and whose length leaves enough horizon for its
/// quantifier rank.
inline std::vector<Violation> preserves(const AsimRelation& z, const GModel& m1, const GModel& m2,
                                        const std::vector<Formula>& formulas) {
  for (const auto& e : z.entries) detail::require_well_formed(e, m1, m2);
  std::vector<Violation> out;
  const int horizon = z.effective_horizon();
  int longest = -1;
  for (const auto& e : z.entries) longest = std::max(longest, static_cast<int>(e.from_tuple.size()));
  Evaluator ev1(m1), ev2(m2);
  for (const auto& f : formulas) {
    int need = 0;
    for (const auto& v : free_vars(f)) {
      int k = detail::positional_index(v);
      if (k == 0) throw std::invalid_argument("free variable " + v + " is not positional (x1, x2, ...)");
      need = std::max(need, k);
    }
    if (!z.entries.empty() && need > longest)
      throw std::invalid_argument("free variables of " + to_string(f) + " are not covered by any tuple");
    const int rank = quantifier_rank(f);
    std::map<std::pair<int, int>, std::vector<StateMask>> tables;  // (model, len)
    auto table = [&](int model, int len) -> const std::vector<StateMask>& {
      auto key = std::make_pair(model, len);
      auto it = tables.find(key);
      if (it == tables.end())
        it = tables.emplace(key, (model == 1 ? ev1 : ev2).forcing_table(f, detail::positional_vars(len))).first;
      return it->second;
    };
    for (const auto& e : z.entries) {
      const int len = static_cast<int>(e.from_tuple.size());
      if (len < need || rank > horizon - len) continue;
      const GModel& fm = detail::from_model(e.dir, m1, m2);
      const GModel& tm = detail::to_model(e.dir, m1, m2);
      const int to = 3 - e.dir;
      bool src = (table(e.dir, len)[detail::tuple_index(fm, e.from_tuple)] >> e.from_state) & 1U;
      bool dst = (table(to, len)[detail::tuple_index(tm, e.to_tuple)] >> e.to_state) & 1U;
      if (src && !dst) out.push_back({"preservation", detail::entry_text(e) + ": " + to_string(f)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Greatest stratified relation

/// Entries of tuple length 0..max_len, stratum by stratum, stored as flags over
/// (from state, from tuple, to state, to tuple) with tuples in mixed-radix order.
class StratifiedAsim {
 public:
  StratifiedAsim(const GModel& m1, const GModel& m2, int max_len, double ceiling = 4e7)
      : m1_(&m1), m2_(&m2), max_len_(max_len) {
    if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
    double total = 0;
    for (int l = 0; l <= max_len; ++l)
      total += 2.0 * m1.num_states * m2.num_states * std::pow(static_cast<double>(m1.domain.size() * m2.domain.size()), l);
    if (total > ceiling) throw CeilingExceeded("stratified relation would have " + std::to_string(total) + " entries");
    for (int dir = 1; dir <= 2; ++dir)
      for (int l = 0; l <= max_len; ++l) alive_[dir - 1].emplace_back(size(dir, l), 1);
  }

  int max_len() const { return max_len_; }
  const GModel& model(int i) const { return i == 1 ? *m1_ : *m2_; }

  std::size_t tuples(int model_id, int l) const {
    std::size_t t = 1;
    for (int i = 0; i < l; ++i) t *= model(model_id).domain.size();
    return t;
  }

  std::size_t size(int dir, int l) const {
    const int f = dir, t = 3 - dir;
    return static_cast<std::size_t>(model(f).num_states) * tuples(f, l) * model(t).num_states * tuples(t, l);
  }

  std::size_t index(int dir, int l, int s, std::size_t a, int s2, std::size_t b) const {
    const int f = dir, t = 3 - dir;
    return ((static_cast<std::size_t>(s) * tuples(f, l) + a) * model(t).num_states + s2) * tuples(t, l) + b;
  }

  bool alive(int dir, int l, int s, std::size_t a, int s2, std::size_t b) const {
    return alive_[dir - 1][l][index(dir, l, s, a, s2, b)];
  }
  void kill(int dir, int l, std::size_t idx) { alive_[dir - 1][l][idx] = 0; }
  bool alive_at(int dir, int l, std::size_t idx) const { return alive_[dir - 1][l][idx]; }

  bool related(const AsimEntry& e) const {
    const int l = static_cast<int>(e.from_tuple.size());
    if (l > max_len_ || e.to_tuple.size() != e.from_tuple.size()) return false;
    const GModel& f = model(e.dir);
    const GModel& t = model(3 - e.dir);
    for (int d : e.from_tuple)
      if (f.domain_index(d) < 0) return false;
    for (int d : e.to_tuple)
      if (t.domain_index(d) < 0) return false;
    return alive(e.dir, l, e.from_state, detail::tuple_index(f, e.from_tuple), e.to_state,
                 detail::tuple_index(t, e.to_tuple));
  }

  std::size_t count(int dir, int l) const {
    std::size_t c = 0;
    for (char x : alive_[dir - 1][l]) c += x != 0;
    return c;
  }

  /// Decodes a flat index into an entry.
  AsimEntry entry(int dir, int l, std::size_t idx) const {
    const GModel& f = model(dir);
    const GModel& t = model(3 - dir);
    AsimEntry e;
    e.dir = dir;
    const std::size_t tb = tuples(3 - dir, l), ta = tuples(dir, l);
    std::size_t b = idx % tb;
    idx /= tb;
    e.to_state = static_cast<int>(idx % t.num_states);
    idx /= t.num_states;
    std::size_t a = idx % ta;
    e.from_state = static_cast<int>(idx / ta);
    e.from_tuple = decode(f, l, a);
    e.to_tuple = decode(t, l, b);
    return e;
  }

  static std::vector<int> decode(const GModel& m, int l, std::size_t idx) {
    std::vector<int> out(l);
    for (int i = l; i-- > 0;) {
      out[i] = m.domain[idx % m.domain.size()];
      idx /= m.domain.size();
    }
    return out;
  }

  /// All surviving entries as a relation with horizon max_len.
  AsimRelation to_relation(std::size_t ceiling = 2'000'000) const {
    AsimRelation z;
    z.horizon = max_len_;
    for (int dir = 1; dir <= 2; ++dir)
      for (int l = 0; l <= max_len_; ++l)
        for (std::size_t i = 0; i < alive_[dir - 1][l].size(); ++i)
          if (alive_[dir - 1][l][i]) {
            if (z.entries.size() >= ceiling) throw CeilingExceeded("relation too large to list");
            z.entries.insert(entry(dir, l, i));
          }
    return z;
  }

 private:
  const GModel* m1_;
  const GModel* m2_;
  int max_len_;
  std::vector<std::vector<char>> alive_[2];
};

namespace detail {

// Atomic type of (state, tuple) as one flag per (predicate, positions), predicates taken
// from the union of both signatures.
struct AtomTypes {
  std::vector<std::pair<std::string, int>> preds;
  // types[model-1][l][state * T + tuple] = flags
  std::vector<std::vector<std::vector<std::vector<bool>>>> types;

  AtomTypes(const StratifiedAsim& s) {
    std::map<std::string, int> all;
    for (int i = 1; i <= 2; ++i)
      for (const auto& [n, r] : s.model(i).interp) all.emplace(n, r.arity);
    for (const auto& [n, a] : all) preds.emplace_back(n, a);
    types.resize(2);
    for (int i = 1; i <= 2; ++i) {
      const GModel& m = s.model(i);
      for (int l = 0; l <= s.max_len(); ++l) {
        const std::size_t T = s.tuples(i, l);
        std::vector<std::vector<bool>> per(m.num_states * T);
        for (int st = 0; st < m.num_states; ++st)
          for (std::size_t a = 0; a < T; ++a) {
            std::vector<int> tuple = StratifiedAsim::decode(m, l, a);
            std::vector<bool>& flags = per[st * T + a];
            for (const auto& [name, arity] : preds) {
              auto it = m.interp.find(name);
              const bool present = it != m.interp.end() && it->second.arity == arity;
              for_each_positions(arity, l, [&](const std::vector<int>& pos) {
                flags.push_back(present && atom_at(m, name, st, tuple, pos));
              });
            }
          }
        types[i - 1].push_back(std::move(per));
      }
    }
  }

  bool preserved(int dir, int l, int s, std::size_t a, std::size_t ta, int s2, std::size_t b, std::size_t tb) const {
    const auto& x = types[dir - 1][l][s * ta + a];
    const auto& y = types[2 - dir][l][s2 * tb + b];
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] && !y[i]) return false;
    return true;
  }
};

}  // namespace detail

/// The largest stratified family in which every entry at length l satisfies conditions 2
/// and 3 inside stratum l and conditions 4 and 5 into stratum l+1 (for l < max_len).
/// Computed by refining the full relation until nothing changes.
inline StratifiedAsim bounded_greatest(const GModel& m1, const GModel& m2, int max_len, double ceiling = 4e7) {
  require_valid(m1);
  require_valid(m2);
  StratifiedAsim z(m1, m2, max_len, ceiling);
  detail::AtomTypes types(z);
  // condition 2
  for (int dir = 1; dir <= 2; ++dir) {
    const GModel& f = z.model(dir);
    const GModel& t = z.model(3 - dir);
    for (int l = 0; l <= max_len; ++l) {
      const std::size_t ta = z.tuples(dir, l), tb = z.tuples(3 - dir, l);
      for (int s = 0; s < f.num_states; ++s)
        for (std::size_t a = 0; a < ta; ++a)
          for (int s2 = 0; s2 < t.num_states; ++s2)
            for (std::size_t b = 0; b < tb; ++b)
              if (!types.preserved(dir, l, s, a, ta, s2, b, tb)) z.kill(dir, l, z.index(dir, l, s, a, s2, b));
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = max_len; l >= 0; --l)
      for (int dir = 1; dir <= 2; ++dir) {
        const GModel& f = z.model(dir);
        const GModel& t = z.model(3 - dir);
        const std::size_t ta = z.tuples(dir, l), tb = z.tuples(3 - dir, l);
        const std::size_t df = f.domain.size(), dt = t.domain.size();
        for (int s = 0; s < f.num_states; ++s)
          for (std::size_t a = 0; a < ta; ++a)
            for (int s2 = 0; s2 < t.num_states; ++s2)
              for (std::size_t b = 0; b < tb; ++b) {
                const std::size_t idx = z.index(dir, l, s, a, s2, b);
                if (!z.alive_at(dir, l, idx)) continue;
                bool ok = true;
                if (l < max_len) {
                  for (std::size_t x = 0; x < df && ok; ++x) {
                    bool any = false;
                    for (std::size_t y = 0; y < dt && !any; ++y) any = z.alive(dir, l + 1, s, a * df + x, s2, b * dt + y);
                    ok = any;
                  }
                  for (std::size_t y = 0; y < dt && ok; ++y) {
                    bool any = false;
                    for (std::size_t x = 0; x < df && !any; ++x) any = z.alive(dir, l + 1, s, a * df + x, s2, b * dt + y);
                    ok = any;
                  }
                }
                for (int v = 0; v < t.num_states && ok; ++v) {
                  if (!t.leq(s2, v)) continue;
                  bool any = false;
                  for (int w = 0; w < f.num_states && !any; ++w)
                    any = f.leq(s, w) && z.alive(dir, l, w, a, v, b) && z.alive(3 - dir, l, v, b, w, a);
                  ok = any;
                }
                if (!ok) {
                  z.kill(dir, l, idx);
                  changed = true;
                }
              }
      }
  }
  return z;
}

/// A random asimulation inside the greatest stratified relation: a few surviving
/// length-0 seeds closed under randomly chosen witnesses for conditions 3-5. The result
/// satisfies conditions 2-5 with horizon max_len; it is empty when nothing survives.
template <class Rng>
AsimRelation random_asimulation(Rng& rng, const StratifiedAsim& g, int seeds = 2) {
  AsimRelation z;
  z.horizon = g.max_len();
  std::vector<AsimEntry> pool;
  for (int dir = 1; dir <= 2; ++dir)
    for (std::size_t i = 0; i < g.size(dir, 0); ++i)
      if (g.alive_at(dir, 0, i)) pool.push_back(g.entry(dir, 0, i));
  if (pool.empty()) return z;
  std::vector<AsimEntry> work;
  auto add = [&](const AsimEntry& e) {
    if (z.entries.insert(e).second) work.push_back(e);
  };
  for (int i = 0; i < seeds; ++i) add(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  auto pick = [&rng](std::vector<AsimEntry>& opts) {
    return opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
  };
  while (!work.empty()) {
    AsimEntry e = work.back();
    work.pop_back();
    const GModel& f = g.model(e.dir);
    const GModel& t = g.model(3 - e.dir);
    for (int v = 0; v < t.num_states; ++v) {
      if (!t.leq(e.to_state, v)) continue;
      std::vector<int> ws;
      for (int w = 0; w < f.num_states; ++w)
        if (f.leq(e.from_state, w) && g.related({e.dir, w, e.from_tuple, v, e.to_tuple}) &&
            g.related({3 - e.dir, v, e.to_tuple, w, e.from_tuple}))
          ws.push_back(w);
      if (ws.empty()) throw std::logic_error("random_asimulation: greatest relation is not closed");
      // reuse an existing match when there is one
      int w = -1;
      for (int c : ws)
        if (z.contains({e.dir, c, e.from_tuple, v, e.to_tuple}) && z.contains({3 - e.dir, v, e.to_tuple, c, e.from_tuple}))
          w = c;
      if (w < 0) w = ws[std::uniform_int_distribution<std::size_t>(0, ws.size() - 1)(rng)];
      add({e.dir, w, e.from_tuple, v, e.to_tuple});
      add({3 - e.dir, v, e.to_tuple, w, e.from_tuple});
    }
    if (static_cast<int>(e.from_tuple.size()) >= g.max_len()) continue;
    for (int side = 0; side < 2; ++side) {
      const auto& fixed_dom = side == 0 ? f.domain : t.domain;
      const auto& free_dom = side == 0 ? t.domain : f.domain;
      for (int x : fixed_dom) {
        std::vector<AsimEntry> opts;
        bool have = false;
        for (int y : free_dom) {
          AsimEntry n = e;
          n.from_tuple.push_back(side == 0 ? x : y);
          n.to_tuple.push_back(side == 0 ? y : x);
          if (g.related(n)) opts.push_back(n);
          have = have || z.contains(n);
        }
        if (opts.empty()) throw std::logic_error("random_asimulation: greatest relation is not closed");
        if (!have) add(pick(opts));
      }
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Exhaustive preservation oracle

/// Formula banks for checking preservation up to a horizon: bank l has free variables
/// x1..xl and rank horizon - l.
class FormulaOracle {
 public:
  FormulaOracle(int max_size, int horizon, const Signature& preds) : horizon_(horizon) {
    if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
    for (int l = 0; l <= horizon; ++l) banks_.emplace_back(max_size, horizon - l, preds, detail::positional_vars(l));
    for (const auto& b : banks_) roots_.push_back(b.roots());
  }

  int horizon() const { return horizon_; }
  const FormulaBank& bank(int len) const { return banks_.at(len); }
  const std::vector<int>& roots(int len) const { return roots_.at(len); }

  std::vector<BankTables> tables(const GModel& m) const {
    std::vector<BankTables> out;
    for (const auto& b : banks_) out.emplace_back(b, m);
    return out;
  }

 private:
  int horizon_;
  std::vector<FormulaBank> banks_;
  std::vector<std::vector<int>> roots_;
};

/// preserves() against every formula of the oracle whose rank fits the relation's horizon.
inline std::vector<Violation> preserves_exhaustive(const AsimRelation& z, const GModel& m1, const GModel& m2,
                                                   const FormulaOracle& o, std::size_t max_reports = 20) {
  for (const auto& e : z.entries) detail::require_well_formed(e, m1, m2);
  std::vector<Violation> out;
  const int horizon = z.effective_horizon();
  const auto t1 = o.tables(m1), t2 = o.tables(m2);
  for (const auto& e : z.entries) {
    const int len = static_cast<int>(e.from_tuple.size());
    if (len > o.horizon()) continue;
    const GModel& fm = detail::from_model(e.dir, m1, m2);
    const GModel& tm = detail::to_model(e.dir, m1, m2);
    const auto& tf = (e.dir == 1 ? t1 : t2)[len];
    const auto& tt = (e.dir == 1 ? t2 : t1)[len];
    const std::size_t a = detail::tuple_index(fm, e.from_tuple), b = detail::tuple_index(tm, e.to_tuple);
    for (int id : o.roots(len)) {
      if (o.bank(len).nodes()[id].rank > horizon - len) continue;
      if (((tf.at(id, a) >> e.from_state) & 1U) && !((tt.at(id, b) >> e.to_state) & 1U)) {
        out.push_back({"preservation", detail::entry_text(e) + ": " + to_string(o.bank(len).formula(id))});
        if (out.size() >= max_reports) return out;
        break;
      }
    }
  }
  return out;
}

/// The contract of bounded_greatest checked against every formula of the oracle: an entry
/// in stratum l must transfer every formula of rank <= max_len - l.
inline std::vector<Violation> contract_violations(const StratifiedAsim& g, const FormulaOracle& o,
                                                  std::size_t max_reports = 20) {
  if (o.horizon() < g.max_len()) throw std::invalid_argument("oracle horizon below max_len");
  std::vector<Violation> out;
  const auto t1 = o.tables(g.model(1)), t2 = o.tables(g.model(2));
  for (int dir = 1; dir <= 2; ++dir)
    for (int l = 0; l <= g.max_len(); ++l) {
      const auto& tf = (dir == 1 ? t1 : t2)[l];
      const auto& tt = (dir == 1 ? t2 : t1)[l];
      const std::size_t total = g.size(dir, l);
      for (std::size_t idx = 0; idx < total; ++idx) {
        if (!g.alive_at(dir, l, idx)) continue;
        const AsimEntry e = g.entry(dir, l, idx);
        const std::size_t a = detail::tuple_index(g.model(dir), e.from_tuple);
        const std::size_t b = detail::tuple_index(g.model(3 - dir), e.to_tuple);
        for (int id : o.roots(l)) {
          if (o.bank(l).nodes()[id].rank > g.max_len() - l) continue;
          if (((tf.at(id, a) >> e.from_state) & 1U) && !((tt.at(id, b) >> e.to_state) & 1U)) {
            out.push_back({"contract", detail::entry_text(e) + ": " + to_string(o.bank(l).formula(id))});
            if (out.size() >= max_reports) return out;
            break;
          }
        }
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// File format: optional "horizon: k", then one entry per line
//   1->2 0 [1,2] 3 [2,2]

inline AsimRelation read_asim(std::istream& in) {
  AsimRelation z;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.rfind("horizon:", 0) == 0) {
      z.horizon = detail::parse_int(line.substr(8), ln);
      if (z.horizon < 0) throw ParseError("asimulation: horizon must be non-negative on line " + std::to_string(ln), ln);
      continue;
    }
    AsimEntry e;
    std::string dir;
    std::istringstream ss(line);
    ss >> dir;
    if (dir == "1->2" || dir == "1")
      e.dir = 1;
    else if (dir == "2->1" || dir == "2")
      e.dir = 2;
    else
      throw ParseError("asimulation: expected 1->2 or 2->1 on line " + std::to_string(ln), ln);
    auto tuple = [&](std::vector<int>& out) {
      std::string rest;
      std::getline(ss, rest, ']');
      rest = detail::trim(rest);
      if (rest.empty() || rest[0] != '[') throw ParseError("asimulation: expected [ on line " + std::to_string(ln), ln);
      std::stringstream items(rest.substr(1));
      std::string item;
      while (std::getline(items, item, ','))
        if (!detail::trim(item).empty()) out.push_back(detail::parse_int(item, ln));
    };
    std::string st;
    if (!(ss >> st)) throw ParseError("asimulation: missing state on line " + std::to_string(ln), ln);
    e.from_state = detail::parse_int(st, ln);
    tuple(e.from_tuple);
    if (!(ss >> st)) throw ParseError("asimulation: missing state on line " + std::to_string(ln), ln);
    e.to_state = detail::parse_int(st, ln);
    tuple(e.to_tuple);
    std::string extra;
    if (ss >> extra) throw ParseError("asimulation: trailing text on line " + std::to_string(ln), ln);
    if (e.from_tuple.size() != e.to_tuple.size())
      throw ParseError("asimulation: tuple lengths differ on line " + std::to_string(ln), ln);
    z.entries.insert(std::move(e));
  }
  return z;
}

inline AsimRelation read_asim_text(const std::string& text) {
  std::istringstream in(text);
  return read_asim(in);
}

inline void write_asim(std::ostream& out, const AsimRelation& z, const std::vector<std::string>& header = {}) {
  for (const auto& h : header) out << "# " << h << "\n";
  if (z.horizon >= 0) out << "horizon: " << z.horizon << "\n";
  for (const auto& e : z.entries) out << detail::entry_text(e) << "\n";
}

inline std::string asim_to_string(const AsimRelation& z, const std::vector<std::string>& header = {}) {
  std::ostringstream out;
  write_asim(out, z, header);
  return out.str();
}

}  // namespace cdkit
