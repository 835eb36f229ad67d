#pragma once

// Finite constant-domain Kripke models (G-models) and their forcing relation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdkit/syntax.hpp"

namespace cdkit {

/// States are indices 0..n-1; sets of states are bitmasks, so a model holds at most 64 states.
inline constexpr int kMaxStates = 64;
using StateMask = std::uint64_t;
using Signature = std::map<std::string, int>;

inline StateMask bit(int state) { return StateMask{1} << state; }
inline StateMask all_states(int n) { return n >= 64 ? ~StateMask{0} : (bit(n) - 1); }

/// A (k+1)-ary relation over W x D^k; each tuple is (state, d1, ..., dk).
struct MonotoneRelation {
  int arity = 0;
  std::set<std::vector<int>> tuples;

  friend bool operator==(const MonotoneRelation&, const MonotoneRelation&) = default;
};

struct GModel {
  int num_states = 1;
  std::vector<StateMask> up{1};  // up[v] = { w | v <= w }
  int base = 0;
  std::vector<int> domain{1};  // sorted, distinct, positive
  std::map<std::string, MonotoneRelation> interp;

  bool leq(int a, int b) const { return (up[a] >> b) & 1U; }
  StateMask states() const { return all_states(num_states); }

  Signature signature() const {
    Signature sig;
    for (const auto& [name, rel] : interp) sig.emplace(name, rel.arity);
    return sig;
  }

  int domain_index(int element) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), element);
    return (it != domain.end() && *it == element) ? static_cast<int>(it - domain.begin()) : -1;
  }

  bool holds(const std::string& pred, const std::vector<int>& tuple) const {
    auto it = interp.find(pred);
    return it != interp.end() && it->second.tuples.contains(tuple);
  }

  friend bool operator==(const GModel&, const GModel&) = default;
};

/// Reflexive-transitive closure of a relation given as successor masks.
inline std::vector<StateMask> reflexive_transitive_closure(std::vector<StateMask> up) {
  const int n = static_cast<int>(up.size());
  for (int v = 0; v < n; ++v) up[v] |= bit(v);
  for (int k = 0; k < n; ++k)
    for (int v = 0; v < n; ++v)
      if (up[v] & bit(k)) up[v] |= up[k];
  return up;
}

/// Builds the order masks from explicit pairs (a <= b), closing reflexively and transitively.
inline std::vector<StateMask> order_from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  if (n < 1 || n > kMaxStates) throw std::invalid_argument("state count out of range");
  std::vector<StateMask> up(n, 0);
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("order pair out of range");
    up[a] |= bit(b);
  }
  return reflexive_transitive_closure(std::move(up));
}

/// Smallest up-closed set containing `seed`.
inline StateMask up_closure(const GModel& m, StateMask seed) {
  StateMask out = 0;
  for (int v = 0; v < m.num_states; ++v)
    if (seed & bit(v)) out |= m.up[v];
  return out;
}

inline bool is_up_closed(const GModel& m, StateMask s) { return up_closure(m, s) == s; }

struct Violation {
  std::string kind;  // "order", "base", "domain", "arity", "range", "monotonicity"
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline std::string tuple_text(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace detail

/// Lists every breach of the G-model invariants; empty iff the model is valid.
inline std::vector<Violation> validate(const GModel& m) {
  std::vector<Violation> out;
  if (m.num_states < 1 || m.num_states > kMaxStates) {
    out.push_back({"order", "state count must be in 1.." + std::to_string(kMaxStates)});
    return out;
  }
  if (static_cast<int>(m.up.size()) != m.num_states) {
    out.push_back({"order", "order table size differs from state count"});
    return out;
  }
  const StateMask all = m.states();
  for (int v = 0; v < m.num_states; ++v) {
    if (m.up[v] & ~all) out.push_back({"order", "state " + std::to_string(v) + " is related to a missing state"});
    if (!m.leq(v, v)) out.push_back({"order", "not reflexive at state " + std::to_string(v)});
  }
  for (int a = 0; a < m.num_states; ++a)
    for (int b = 0; b < m.num_states; ++b)
      if (a != b && m.leq(a, b) && (m.up[b] & ~m.up[a]))
        out.push_back({"order", "not transitive through " + std::to_string(a) + " <= " + std::to_string(b)});
  if (m.base < 0 || m.base >= m.num_states) {
    out.push_back({"base", "base state out of range"});
  } else {
    for (int v = 0; v < m.num_states; ++v)
      if (!m.leq(m.base, v)) out.push_back({"base", "base state is not below state " + std::to_string(v)});
  }
  if (m.domain.empty()) out.push_back({"domain", "domain is empty"});
  for (std::size_t i = 0; i < m.domain.size(); ++i) {
    if (m.domain[i] < 1) out.push_back({"domain", "domain element " + std::to_string(m.domain[i]) + " is not positive"});
    if (i && m.domain[i] <= m.domain[i - 1]) out.push_back({"domain", "domain is not sorted and distinct"});
  }
  for (const auto& [name, rel] : m.interp) {
    for (const auto& t : rel.tuples) {
      if (static_cast<int>(t.size()) != rel.arity + 1) {
        out.push_back({"arity", name + " has tuple " + detail::tuple_text(t) + " of wrong length"});
        continue;
      }
      bool in_range = t[0] >= 0 && t[0] < m.num_states;
      for (std::size_t i = 1; i < t.size(); ++i) in_range = in_range && m.domain_index(t[i]) >= 0;
      if (!in_range) {
        out.push_back({"range", name + " has tuple " + detail::tuple_text(t) + " outside W x D^k"});
        continue;
      }
      for (int w = 0; w < m.num_states; ++w) {
        if (w == t[0] || !m.leq(t[0], w)) continue;
        std::vector<int> moved = t;
        moved[0] = w;
        if (!rel.tuples.contains(moved))
          out.push_back({"monotonicity", name + " holds at " + detail::tuple_text(t) + " but not at state " +
                                             std::to_string(w)});
      }
    }
  }
  return out;
}

inline void require_valid(const GModel& m) {
  auto v = validate(m);
  if (!v.empty()) throw std::invalid_argument("invalid model: " + v.front().kind + ": " + v.front().detail);
}

/// Checks that f is a sentence of L(D) over the model's signature.
inline void require_sentence_over(const GModel& m, const Formula& f) {
  if (auto fv = free_vars(f); !fv.empty()) throw std::invalid_argument("free variable " + *fv.begin() + " in sentence");
  for (const auto& [name, arity] : predicates(f)) {
    auto it = m.interp.find(name);
    if (it == m.interp.end()) throw std::invalid_argument("unknown predicate " + name);
    if (it->second.arity != arity) throw std::invalid_argument("arity mismatch for predicate " + name);
  }
  for (int c : constants(f))
    if (m.domain_index(c) < 0) throw std::invalid_argument("unknown constant " + std::to_string(c));
}

namespace detail {

inline bool forces_rec(const GModel& m, int v, const Formula& f) {
  switch (f.op()) {
    case Op::Atom: {
      std::vector<int> tuple{v};
      for (const auto& t : f.args()) tuple.push_back(t.value);
      return m.holds(f.predicate(), tuple);
    }
    case Op::And:
      return forces_rec(m, v, f.lhs()) && forces_rec(m, v, f.rhs());
    case Op::Or:
      return forces_rec(m, v, f.lhs()) || forces_rec(m, v, f.rhs());
    case Op::Implies:
      for (int w = 0; w < m.num_states; ++w)
        if (m.leq(v, w) && forces_rec(m, w, f.lhs()) && !forces_rec(m, w, f.rhs())) return false;
      return true;
    case Op::Falsum:
      return false;
    case Op::Exists:
      for (int a : m.domain)
        if (forces_rec(m, v, substitute(f.body(), f.variable(), Term::constant(a)))) return true;
      return false;
    case Op::Forall:
      for (int a : m.domain)
        if (!forces_rec(m, v, substitute(f.body(), f.variable(), Term::constant(a)))) return false;
      return true;
  }
  return false;
}

}  // namespace detail

/// The forcing relation, evaluated clause by clause with substitution of domain constants.
/// Throws std::invalid_argument for a free variable, unknown predicate or unknown constant.
inline bool forces(const GModel& m, int v, const Formula& f) {
  if (v < 0 || v >= m.num_states) throw std::invalid_argument("state out of range");
  require_sentence_over(m, f);
  return detail::forces_rec(m, v, f);
}

inline bool valid_at_base(const GModel& m, const Formula& f) { return forces(m, m.base, f); }

// ---------------------------------------------------------------------------
// Set-at-a-time evaluation. Computes the set of forcing states for every assignment
// of the free variables at once; used wherever many formulas or models are scanned.

class Evaluator {
 public:
  explicit Evaluator(const GModel& m) : model_(&m), all_(m.states()), dsize_(static_cast<int>(m.domain.size())) {
    for (const auto& [name, rel] : m.interp) {
      Table t;
      t.arity = rel.arity;
      std::size_t cells = 1;
      for (int i = 0; i < rel.arity; ++i) cells *= static_cast<std::size_t>(dsize_);
      t.masks.assign(cells, 0);
      for (const auto& tuple : rel.tuples) {
        std::size_t idx = 0;
        bool ok = static_cast<int>(tuple.size()) == rel.arity + 1 && tuple[0] >= 0 && tuple[0] < m.num_states;
        for (int i = 1; ok && i <= rel.arity; ++i) {
          int di = m.domain_index(tuple[i]);
          ok = di >= 0;
          idx = idx * dsize_ + static_cast<std::size_t>(di);
        }
        if (ok) t.masks[idx] |= bit(tuple[0]);
      }
      tables_.emplace(name, std::move(t));
    }
  }

  const GModel& model() const { return *model_; }

  /// States forcing the sentence f.
  StateMask forcing_states(const Formula& f) const {
    Program p = compile(f, {});
    std::vector<int> env(p.slots, 0);
    return eval(p, p.root, env);
  }

  bool forces_at(int state, const Formula& f) const { return (forcing_states(f) >> state) & 1U; }

  /// For an open formula: entry i is the set of states forcing f under the assignment whose
  /// domain indices are the mixed-radix digits of i (first variable most significant).
  std::vector<StateMask> forcing_table(const Formula& f, const std::vector<std::string>& vars) const {
    Program p = compile(f, vars);
    std::size_t cells = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) cells *= static_cast<std::size_t>(dsize_);
    std::vector<StateMask> out(cells, 0);
    std::vector<int> env(std::max<std::size_t>(p.slots, vars.size()), 0);
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      for (std::size_t i = vars.size(); i-- > 0;) {
        env[i] = static_cast<int>(rest % dsize_);
        rest /= dsize_;
      }
      out[c] = eval(p, p.root, env);
    }
    return out;
  }

 private:
  struct Table {
    int arity = 0;
    std::vector<StateMask> masks;
  };
  struct Node {
    Op op = Op::Falsum;
    const Table* table = nullptr;
    std::vector<int> args;  // >= 0: slot, < 0: -(domain index + 1)
    int left = -1;
    int right = -1;
    int slot = -1;
  };
  struct Program {
    std::vector<Node> nodes;
    int root = -1;
    int slots = 0;
  };

  Program compile(const Formula& f, const std::vector<std::string>& vars) const {
    Program p;
    std::vector<std::pair<std::string, int>> scope;
    for (std::size_t i = 0; i < vars.size(); ++i) scope.emplace_back(vars[i], static_cast<int>(i));
    p.slots = static_cast<int>(vars.size());
    p.root = compile_rec(f, scope, p, static_cast<int>(vars.size()));
    return p;
  }

  int compile_rec(const Formula& f, std::vector<std::pair<std::string, int>>& scope, Program& p, int depth) const {
    Node n;
    n.op = f.op();
    switch (f.op()) {
      case Op::Falsum:
        break;
      case Op::Atom: {
        auto it = tables_.find(f.predicate());
        if (it == tables_.end()) throw std::invalid_argument("unknown predicate " + f.predicate());
        if (it->second.arity != static_cast<int>(f.args().size()))
          throw std::invalid_argument("arity mismatch for predicate " + f.predicate());
        n.table = &it->second;
        for (const auto& t : f.args()) {
          if (t.is_const()) {
            int di = model_->domain_index(t.value);
            if (di < 0) throw std::invalid_argument("unknown constant " + std::to_string(t.value));
            n.args.push_back(-(di + 1));
          } else {
            int slot = -1;
            for (auto s = scope.rbegin(); s != scope.rend(); ++s)
              if (s->first == t.name) {
                slot = s->second;
                break;
              }
            if (slot < 0) throw std::invalid_argument("free variable " + t.name + " in sentence");
            n.args.push_back(slot);
          }
        }
        break;
      }
      case Op::Forall:
      case Op::Exists:
        n.slot = depth;
        p.slots = std::max(p.slots, depth + 1);
        scope.emplace_back(f.variable(), depth);
        n.left = compile_rec(f.body(), scope, p, depth + 1);
        scope.pop_back();
        break;
      default:
        n.left = compile_rec(f.lhs(), scope, p, depth);
        n.right = compile_rec(f.rhs(), scope, p, depth);
    }
    p.nodes.push_back(std::move(n));
    return static_cast<int>(p.nodes.size()) - 1;
  }

  StateMask eval(const Program& p, int idx, std::vector<int>& env) const {
    const Node& n = p.nodes[idx];
    switch (n.op) {
      case Op::Falsum:
        return 0;
      case Op::Atom: {
        std::size_t cell = 0;
        for (int a : n.args) cell = cell * dsize_ + static_cast<std::size_t>(a >= 0 ? env[a] : -a - 1);
        return n.table->masks[cell];
      }
      case Op::And: {
        StateMask l = eval(p, n.left, env);
        return l ? (l & eval(p, n.right, env)) : 0;
      }
      case Op::Or: {
        StateMask l = eval(p, n.left, env);
        return l == all_ ? l : (l | eval(p, n.right, env));
      }
      case Op::Implies: {
        StateMask good = (~eval(p, n.left, env) | eval(p, n.right, env)) & all_;
        if (good == all_) return all_;
        StateMask out = 0;
        const auto& up = model_->up;
        for (int v = 0; v < model_->num_states; ++v)
          if ((up[v] & ~good) == 0) out |= bit(v);
        return out;
      }
      case Op::Exists: {
        StateMask out = 0;
        for (int a = 0; a < dsize_ && out != all_; ++a) {
          env[n.slot] = a;
          out |= eval(p, n.left, env);
        }
        return out;
      }
      case Op::Forall: {
        StateMask out = all_;
        for (int a = 0; a < dsize_ && out; ++a) {
          env[n.slot] = a;
          out &= eval(p, n.left, env);
        }
        return out;
      }
    }
    return 0;
  }

  const GModel* model_;
  StateMask all_;
  int dsize_;
  std::map<std::string, Table> tables_;
};

// ---------------------------------------------------------------------------
// Second-order expansion

/// Adds interp(sym) = r. Throws on a symbol clash, an out-of-range tuple or a non-monotone r.
inline GModel expand(const GModel& m, const std::string& sym, const MonotoneRelation& r) {
  if (m.interp.contains(sym)) throw std::invalid_argument("symbol clash: " + sym + " is already interpreted");
  GModel out = m;
  out.interp.emplace(sym, r);
  for (const auto& v : validate(out)) {
    if (v.detail.rfind(sym + " ", 0) == 0)
      throw std::invalid_argument("relation for " + sym + " rejected: " + v.kind + ": " + v.detail);
  }
  return out;
}

/// All up-closed state sets in increasing mask order (the empty set first).
inline std::vector<StateMask> up_sets(const GModel& m, int max_states = 20) {
  if (m.num_states > max_states) throw std::length_error("too many states to list up-sets");
  std::vector<StateMask> out;
  for (StateMask s = 0; s <= m.states(); ++s)
    if (is_up_closed(m, s)) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration up to isomorphism

namespace detail {

struct OrderShape {
  int n = 1;
  std::vector<StateMask> up;
  std::vector<std::vector<int>> automorphisms;  // permutations fixing state 0
  std::vector<StateMask> upsets;                // increasing mask order
};

inline StateMask permute_mask(StateMask s, const std::vector<int>& perm) {
  StateMask out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (s & bit(static_cast<int>(i))) out |= bit(perm[i]);
  return out;
}

inline std::vector<StateMask> permute_order(const std::vector<StateMask>& up, const std::vector<int>& perm) {
  std::vector<StateMask> out(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) out[perm[i]] = permute_mask(up[i], perm);
  return out;
}

/// Quasi-orders on n states with state 0 below everything, one per isomorphism class.
inline std::vector<OrderShape> order_shapes(int n) {
  // 0 <= b is forced for every b; every other off-diagonal pair is free
  std::vector<std::pair<int, int>> free_pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && a != 0) free_pairs.emplace_back(a, b);
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm[0] == 0) perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<OrderShape> shapes;
  std::set<std::vector<StateMask>> seen;
  const std::size_t combos = std::size_t{1} << free_pairs.size();
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<StateMask> up(n, 0);
    for (int v = 0; v < n; ++v) up[v] = bit(v);
    up[0] = all_states(n);
    for (std::size_t i = 0; i < free_pairs.size(); ++i)
      if (c & (std::size_t{1} << i)) up[free_pairs[i].first] |= bit(free_pairs[i].second);
    if (reflexive_transitive_closure(up) != up) continue;
    std::vector<StateMask> best = up;
    for (const auto& p : perms) best = std::min(best, permute_order(up, p));
    if (!seen.insert(best).second) continue;
    OrderShape s;
    s.n = n;
    s.up = best;
    for (const auto& p : perms)
      if (permute_order(best, p) == best) s.automorphisms.push_back(p);
    GModel probe;
    probe.num_states = n;
    probe.up = best;
    s.upsets = up_sets(probe);
    shapes.push_back(std::move(s));
  }
  return shapes;
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

/// Thrown when an exhaustive computation would exceed its configured size ceiling.
class CeilingExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct EnumerationStats {
  std::size_t raw = 0;      // labelled structures visited
  std::size_t emitted = 0;  // isomorphism classes
};

/// Calls fn once per isomorphism class of valid G-models with 1..max_states states, domain
/// {1..d} for d in 1..max_domain, over the signature. Isomorphisms map base to base and may
/// permute both states and domain elements. Deterministic order.
inline EnumerationStats for_each_model(int max_states, int max_domain, const Signature& sig,
                                       const std::function<void(const GModel&)>& fn, double ceiling = 2e8) {
  if (max_states < 1 || max_domain < 1) throw std::invalid_argument("enumeration bounds must be >= 1");
  if (max_states > 5) throw CeilingExceeded("enumeration supports at most 5 states");
  std::vector<std::vector<detail::OrderShape>> shapes_by_n;
  double estimate = 0;
  for (int n = 1; n <= max_states; ++n) {
    shapes_by_n.push_back(detail::order_shapes(n));
    for (const auto& s : shapes_by_n.back())
      for (int d = 1; d <= max_domain; ++d) {
        double cells = 0;
        for (const auto& [name, arity] : sig) cells += std::pow(d, arity);
        estimate += std::pow(static_cast<double>(s.upsets.size()), cells);
      }
  }
  if (estimate > ceiling)
    throw CeilingExceeded("estimated " + std::to_string(estimate) + " structures exceeds ceiling");

  EnumerationStats stats;
  for (const auto& shapes : shapes_by_n) {
    for (const auto& shape : shapes) {
      const int n = shape.n;
      const std::size_t nu = shape.upsets.size();
      std::map<StateMask, int> upset_index;
      for (std::size_t i = 0; i < nu; ++i) upset_index[shape.upsets[i]] = static_cast<int>(i);
      // upset_perm[a][u] = index of automorphism a applied to up-set u
      std::vector<std::vector<int>> upset_perm;
      for (const auto& a : shape.automorphisms) {
        std::vector<int> row(nu);
        for (std::size_t u = 0; u < nu; ++u) row[u] = upset_index.at(detail::permute_mask(shape.upsets[u], a));
        upset_perm.push_back(std::move(row));
      }
      for (int d = 1; d <= max_domain; ++d) {
        // Cells: for each predicate (sorted by name), each tuple in lexicographic order.
        struct Block {
          std::string name;
          int arity;
          std::size_t offset;
          std::size_t count;
        };
        std::vector<Block> blocks;
        std::size_t cells = 0;
        for (const auto& [name, arity] : sig) {
          std::size_t cnt = detail::ipow(static_cast<std::size_t>(d), arity);
          blocks.push_back({name, arity, cells, cnt});
          cells += cnt;
        }
        std::vector<std::vector<int>> dperms;
        std::vector<int> dp(d);
        std::iota(dp.begin(), dp.end(), 0);
        do {
          dperms.push_back(dp);
        } while (std::next_permutation(dp.begin(), dp.end()));
        // cell_perm[p][c] = image of cell c under domain permutation p
        std::vector<std::vector<std::size_t>> cell_perm;
        for (const auto& p : dperms) {
          std::vector<std::size_t> row(cells);
          for (const auto& b : blocks)
            for (std::size_t t = 0; t < b.count; ++t) {
              std::size_t rest = t, image = 0, scale = 1;
              for (int i = 0; i < b.arity; ++i) {
                image += static_cast<std::size_t>(p[rest % d]) * scale;
                rest /= d;
                scale *= d;
              }
              row[b.offset + t] = b.offset + image;
            }
          cell_perm.push_back(std::move(row));
        }

        std::vector<int> code(cells, 0), image(cells, 0);
        auto canonical = [&]() {
          for (std::size_t a = 0; a < shape.automorphisms.size(); ++a)
            for (std::size_t p = 0; p < dperms.size(); ++p) {
              if (a == 0 && p == 0) continue;
              for (std::size_t c = 0; c < cells; ++c) image[cell_perm[p][c]] = upset_perm[a][code[c]];
              if (image < code) return false;
            }
          return true;
        };
        bool more = true;
        while (more) {
          ++stats.raw;
          if (canonical()) {
            GModel m;
            m.num_states = n;
            m.up = shape.up;
            m.base = 0;
            m.domain.resize(d);
            std::iota(m.domain.begin(), m.domain.end(), 1);
            for (const auto& b : blocks) {
              MonotoneRelation rel;
              rel.arity = b.arity;
              for (std::size_t t = 0; t < b.count; ++t) {
                StateMask s = shape.upsets[code[b.offset + t]];
                std::vector<int> elems(b.arity);
                std::size_t rest = t;
                for (int i = b.arity; i-- > 0;) {
                  elems[i] = static_cast<int>(rest % d) + 1;
                  rest /= d;
                }
                for (int v = 0; v < n; ++v)
                  if (s & bit(v)) {
                    std::vector<int> tuple{v};
                    tuple.insert(tuple.end(), elems.begin(), elems.end());
                    rel.tuples.insert(std::move(tuple));
                  }
              }
              m.interp.emplace(b.name, std::move(rel));
            }
            ++stats.emitted;
            fn(m);
          }
          // odometer, last cell fastest
          more = false;
          for (std::size_t c = cells; c-- > 0;) {
            if (++code[c] < static_cast<int>(nu)) {
              more = true;
              break;
            }
            code[c] = 0;
          }
        }
      }
    }
  }
  return stats;
}

inline std::vector<GModel> enumerate_models(int max_states, int max_domain, const Signature& sig,
                                            double ceiling = 2e8) {
  std::vector<GModel> out;
  for_each_model(max_states, max_domain, sig, [&](const GModel& m) { out.push_back(m); }, ceiling);
  return out;
}

// ---------------------------------------------------------------------------
// Random models

/// A random valid model with 1..max_states states and domain {1..d}, d in 1..max_domain.
/// The base is state 0.
template <class Rng>
GModel random_model(Rng& rng, int max_states, int max_domain, const Signature& sig, double edge_p = 0.35,
                    double atom_p = 0.3) {
  std::uniform_int_distribution<int> ns(1, max_states), ds(1, max_domain);
  std::bernoulli_distribution edge(edge_p), seed(atom_p);
  GModel m;
  m.num_states = ns(rng);
  const int d = ds(rng);
  std::vector<StateMask> up(m.num_states, 0);
  up[0] = all_states(m.num_states);
  for (int a = 1; a < m.num_states; ++a)
    for (int b = 0; b < m.num_states; ++b)
      if (a != b && edge(rng)) up[a] |= bit(b);
  m.up = reflexive_transitive_closure(std::move(up));
  m.base = 0;
  m.domain.resize(d);
  std::iota(m.domain.begin(), m.domain.end(), 1);
  for (const auto& [name, arity] : sig) {
    MonotoneRelation rel;
    rel.arity = arity;
    std::size_t cells = detail::ipow(static_cast<std::size_t>(d), arity);
    for (std::size_t t = 0; t < cells; ++t) {
      StateMask s = 0;
      for (int v = 0; v < m.num_states; ++v)
        if (seed(rng)) s |= bit(v);
      s = up_closure(m, s);
      std::vector<int> elems(arity);
      std::size_t rest = t;
      for (int i = arity; i-- > 0;) {
        elems[i] = static_cast<int>(rest % d) + 1;
        rest /= d;
      }
      for (int v = 0; v < m.num_states; ++v)
        if (s & bit(v)) {
          std::vector<int> tuple{v};
          tuple.insert(tuple.end(), elems.begin(), elems.end());
          rel.tuples.insert(std::move(tuple));
        }
    }
    m.interp.emplace(name, std::move(rel));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Model file format
//
//   # comments
//   states: 0 1 2
//   order: 0<=1 1<=2
//   base: 0
//   domain: 1 2 3
//   pred P/1: (0,1) (1,1) (1,2)
//   pred S/0: (1) (2)
//
// State ids are arbitrary non-negative integers; the order is closed reflexively and
// transitively on load.

struct LoadedModel {
  GModel model;
  std::vector<std::string> warnings;
  std::vector<std::string> state_ids;  // file id of each state index
};

namespace detail {

inline std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

inline int parse_int(const std::string& s, std::size_t line) {
  std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("-0123456789") != std::string::npos)
    throw ParseError("model: expected integer, got '" + t + "' on line " + std::to_string(line), line);
  return std::stoi(t);
}

}  // namespace detail

inline LoadedModel read_model(std::istream& in) {
  LoadedModel out;
  std::map<int, int> index_of;
  std::vector<std::pair<int, int>> pairs;
  std::optional<int> base;
  std::vector<int> domain;
  bool have_states = false, have_domain = false;
  std::map<std::string, MonotoneRelation> interp;
  std::string line;
  std::size_t lineno = 0;
  auto state = [&](int id, std::size_t ln) {
    auto it = index_of.find(id);
    if (it == index_of.end()) throw ParseError("model: unknown state " + std::to_string(id) + " on line " + std::to_string(ln), ln);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("model: expected 'key: value' on line " + std::to_string(lineno), lineno);
    std::string key = detail::trim(line.substr(0, colon));
    std::string value = detail::trim(line.substr(colon + 1));
    std::istringstream vs(value);
    std::string tok;
    if (key == "states") {
      while (vs >> tok) {
        int id = detail::parse_int(tok, lineno);
        if (id < 0) throw ParseError("model: state ids must be non-negative", lineno);
        if (!index_of.emplace(id, static_cast<int>(out.state_ids.size())).second)
          throw ParseError("model: duplicate state " + tok, lineno);
        out.state_ids.push_back(tok);
      }
      have_states = true;
    } else if (key == "order") {
      if (!have_states) throw ParseError("model: 'states' must precede 'order'", lineno);
      while (vs >> tok) {
        auto le = tok.find("<=");
        if (le == std::string::npos) throw ParseError("model: expected a<=b, got '" + tok + "'", lineno);
        pairs.emplace_back(state(detail::parse_int(tok.substr(0, le), lineno), lineno),
                           state(detail::parse_int(tok.substr(le + 2), lineno), lineno));
      }
    } else if (key == "base") {
      if (!have_states) throw ParseError("model: 'states' must precede 'base'", lineno);
      base = state(detail::parse_int(value, lineno), lineno);
    } else if (key == "domain") {
      while (vs >> tok) {
        int d = detail::parse_int(tok, lineno);
        if (d < 1) throw ParseError("model: domain elements must be >= 1", lineno);
        domain.push_back(d);
      }
      have_domain = true;
    } else if (key.rfind("pred ", 0) == 0) {
      if (!have_states) throw ParseError("model: 'states' must precede predicates", lineno);
      std::string spec = detail::trim(key.substr(5));
      auto slash = spec.find('/');
      if (slash == std::string::npos) throw ParseError("model: expected 'pred NAME/ARITY'", lineno);
      std::string name = spec.substr(0, slash);
      int arity = detail::parse_int(spec.substr(slash + 1), lineno);
      if (arity < 0) throw ParseError("model: negative arity", lineno);
      MonotoneRelation rel;
      rel.arity = arity;
      std::size_t pos = 0;
      while ((pos = value.find('(', pos)) != std::string::npos) {
        auto close = value.find(')', pos);
        if (close == std::string::npos) throw ParseError("model: unterminated tuple", lineno);
        std::string inner = value.substr(pos + 1, close - pos - 1);
        std::vector<int> tuple;
        std::istringstream is(inner);
        std::string part;
        while (std::getline(is, part, ',')) tuple.push_back(detail::parse_int(part, lineno));
        if (static_cast<int>(tuple.size()) != arity + 1)
          throw ParseError("model: tuple of wrong length for " + name, lineno);
        tuple[0] = state(tuple[0], lineno);
        rel.tuples.insert(std::move(tuple));
        pos = close + 1;
      }
      if (!interp.emplace(name, std::move(rel)).second) throw ParseError("model: duplicate predicate " + name, lineno);
    } else {
      throw ParseError("model: unknown key '" + key + "'", lineno);
    }
  }
  if (!have_states || out.state_ids.empty()) throw ParseError("model: missing 'states'", lineno);
  if (!have_domain || domain.empty()) throw ParseError("model: missing 'domain'", lineno);
  const int n = static_cast<int>(out.state_ids.size());
  if (n > kMaxStates) throw ParseError("model: more than " + std::to_string(kMaxStates) + " states", lineno);
  std::vector<StateMask> given(n, 0);
  for (auto [a, b] : pairs) given[a] |= bit(b);
  std::vector<StateMask> closed = reflexive_transitive_closure(given);
  for (int v = 0; v < n; ++v) {
    StateMask added = closed[v] & ~given[v] & ~bit(v);
    if (added) out.warnings.push_back("order: closure added pairs above state " + out.state_ids[v]);
  }
  std::sort(domain.begin(), domain.end());
  if (std::adjacent_find(domain.begin(), domain.end()) != domain.end()) throw ParseError("model: duplicate domain element", lineno);
  out.model.num_states = n;
  out.model.up = std::move(closed);
  out.model.base = base.value_or(0);
  if (!base) out.warnings.push_back("base: not given, using the first state");
  out.model.domain = std::move(domain);
  out.model.interp = std::move(interp);
  return out;
}

inline LoadedModel read_model_text(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

inline void write_model(std::ostream& out, const GModel& m, const std::vector<std::string>& header = {}) {
  for (const auto& h : header) out << "# " << h << '\n';
  out << "states:";
  for (int v = 0; v < m.num_states; ++v) out << ' ' << v;
  out << "\norder:";
  for (int a = 0; a < m.num_states; ++a)
    for (int b = 0; b < m.num_states; ++b)
      if (a != b && m.leq(a, b)) out << ' ' << a << "<=" << b;
  out << "\nbase: " << m.base << "\ndomain:";
  for (int d : m.domain) out << ' ' << d;
  out << '\n';
  for (const auto& [name, rel] : m.interp) {
    out << "pred " << name << '/' << rel.arity << ':';
    for (const auto& t : rel.tuples) out << ' ' << detail::tuple_text(t);
    out << '\n';
  }
}

inline std::string model_to_string(const GModel& m, const std::vector<std::string>& header = {}) {
  std::ostringstream os;
  write_model(os, m, header);
  return os.str();
}

}  // namespace cdkit
