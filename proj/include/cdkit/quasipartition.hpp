#pragma once

// Quasi-partitions of the positive integers, the two infinite models built from them, the
// relation Z between them, witness constructions for the asimulation conditions, and
// finite truncations of both models.

#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/conditions.hpp"
#include "cdkit/epset.hpp"
#include "cdkit/kripke.hpp"

namespace cdkit {

struct QuasiPartition {
  EPSet a, b, c;

  friend bool operator==(const QuasiPartition&, const QuasiPartition&) = default;
};

/// kN+l is read as {kn + l | n >= 0} restricted to positive integers.
inline constexpr const char* kProgressionConvention = "kN+l = {kn+l | n >= 0} restricted to positive integers";

/// (3N, 3N+1, 3N+2): base of the first model.
inline QuasiPartition qp_v() { return {EPSet::progression(3, 0), EPSet::progression(3, 1), EPSet::progression(3, 2)}; }

/// (2N, {}, 2N+1): base of the second model.
inline QuasiPartition qp_w() { return {EPSet::progression(2, 0), EPSet::empty(), EPSet::progression(2, 1)}; }

inline bool is_quasipartition(const EPSet& a, const EPSet& b, const EPSet& c) {
  return set_union(a, set_union(b, c)) == EPSet::naturals() && disjoint(a, b) && disjoint(a, c) && disjoint(b, c) &&
         a.is_infinite() && c.is_infinite() && (b.is_empty() || b.is_infinite());
}
inline bool is_quasipartition(const QuasiPartition& p) { return is_quasipartition(p.a, p.b, p.c); }

/// (A,B,C) below (D,E,F) iff A within D and F within C.
inline bool sqsubseteq(const QuasiPartition& p, const QuasiPartition& q) { return is_subset(p.a, q.a) && is_subset(q.c, p.c); }

/// Membership in the state set of model 1 or 2.
inline bool in_state_space(const QuasiPartition& p, int model) {
  if (model == 1) return sqsubseteq(qp_v(), p) && set_intersect(p.b, qp_v().b).is_infinite();
  if (model == 2) return p == qp_w() || (sqsubseteq(qp_w(), p) && !p.b.is_empty());
  throw std::invalid_argument("model must be 1 or 2");
}

/// P holds at A and B, Q at A.
inline bool atom_forces(const QuasiPartition& p, char pred, long long a) {
  if (pred == 'P') return p.a.contains(a) || p.b.contains(a);
  if (pred == 'Q') return p.a.contains(a);
  throw std::invalid_argument("predicate must be P or Q");
}

inline std::string to_string(const QuasiPartition& p) {
  return "(" + to_string(p.a) + "; " + to_string(p.b) + "; " + to_string(p.c) + ")";
}

inline QuasiPartition parse_quasipartition(const std::string& text) {
  std::size_t open = text.find('('), close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError("quasi-partition: expected '(A; B; C)'", 0);
  std::string body = text.substr(open + 1, close - open - 1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && body[i] == '(') ++depth;
    if (i < body.size() && body[i] == ')') --depth;
    if (i == body.size() || (body[i] == ';' && depth == 0)) {
      parts.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) throw ParseError("quasi-partition: expected three components", open);
  return {parse_epset(parts[0]), parse_epset(parts[1]), parse_epset(parts[2])};
}

// ---------------------------------------------------------------------------
// The relation Z

/// [d -> e]^{-1}(S) = { d_l | e_l in S }.
inline EPSet inverse_image(const std::vector<int>& d, const std::vector<int>& e, const EPSet& s) {
  std::vector<int> out;
  for (std::size_t l = 0; l < d.size() && l < e.size(); ++l)
    if (s.contains(e[l])) out.push_back(d[l]);
  return EPSet::finite(out);
}

/// [d -> e] is a bijection: both tuples have the same pattern of repetitions.
inline bool same_repetition_pattern(const std::vector<int>& d, const std::vector<int>& e) {
  if (d.size() != e.size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if ((d[i] == d[j]) != (e[i] == e[j])) return false;
  return true;
}

struct ZQuery {
  int from_model = 1;  // the model holding `from`; `to` lives in the other one
  QuasiPartition from;
  std::vector<int> d;
  QuasiPartition to;
  std::vector<int> e;
};

/// Z without the state-space check.
inline bool z_conditions(const QuasiPartition& t, const std::vector<int>& d, const QuasiPartition& u,
                         const std::vector<int>& e) {
  if (!same_repetition_pattern(d, e)) return false;
  for (std::size_t l = 0; l < d.size(); ++l) {
    if (d[l] < 1 || e[l] < 1) return false;
    if (t.a.contains(d[l]) && !u.a.contains(e[l])) return false;
    if (t.b.contains(d[l]) && !(u.a.contains(e[l]) || u.b.contains(e[l]))) return false;
  }
  return true;
}

inline int other_model(int model) {
  if (model != 1 && model != 2) throw std::invalid_argument("model must be 1 or 2");
  return 3 - model;
}

inline bool z_related(const ZQuery& q) {
  return in_state_space(q.from, q.from_model) && in_state_space(q.to, other_model(q.from_model)) &&
         z_conditions(q.from, q.d, q.to, q.e);
}

// ---------------------------------------------------------------------------
// Witnesses

struct SuccessorWitness {
  QuasiPartition w;
  bool split_case = false;  // the empty-B construction was used
  bool extends = false;     // t below w
  bool in_space = false;    // w is a state of t's model
  bool forward = false;     // (w,d) Z (v,e)
  bool backward = false;    // (v,e) Z (w,d)

  bool ok() const { return extends && in_space && forward && backward; }
};

/// Given (t,d) Z (u,e) with t in model `model` and u below v in the other model, builds w
/// above t related to (v,e) in both directions.
inline SuccessorWitness witness_successor(int model, const QuasiPartition& t, const std::vector<int>& d,
                                          const QuasiPartition& u, const std::vector<int>& e,
                                          const QuasiPartition& v) {
  const int other = other_model(model);
  if (!z_related({model, t, d, u, e})) throw std::invalid_argument("witness_successor: (t,d) Z (u,e) fails");
  if (!in_state_space(v, other) || !sqsubseteq(u, v))
    throw std::invalid_argument("witness_successor: v is not a successor of u");
  SuccessorWitness out;
  EPSet inv_g = inverse_image(d, e, v.a), inv_h = inverse_image(d, e, v.b), inv_i = inverse_image(d, e, v.c);
  if (t.b.is_infinite()) {
    out.w = {set_union(without(t.a, d), inv_g), set_union(without(t.b, d), inv_h), set_union(without(t.c, d), inv_i)};
  } else {
    out.split_case = true;
    auto [c1, c2] = split_two_infinite(without(t.c, d));
    out.w = {set_union(without(t.a, d), inv_g), set_union(c1, inv_h), set_union(c2, inv_i)};
  }
  out.extends = sqsubseteq(t, out.w);
  out.in_space = is_quasipartition(out.w) && in_state_space(out.w, model);
  out.forward = z_related({model, out.w, d, v, e});
  out.backward = z_related({other, v, e, out.w, d});
  return out;
}

namespace detail {

inline std::optional<int> index_of(const std::vector<int>& xs, int x) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace detail

/// Condition 4: extends (t,d) Z (u,e) by f on the left; returns g.
inline int witness_left_extension(int model, const QuasiPartition& t, const std::vector<int>& d,
                                  const QuasiPartition& u, const std::vector<int>& e, int f) {
  if (f < 1) throw std::invalid_argument("elements must be positive");
  if (!z_related({model, t, d, u, e})) throw std::invalid_argument("witness_left_extension: (t,d) Z (u,e) fails");
  if (auto l = detail::index_of(d, f)) return e[*l];
  return *without(u.a, e).least();
}

/// Condition 5: extends (t,d) Z (u,e) by g on the right; returns f, drawn from t's third
/// component minus d when g is new.
inline int witness_right_extension(int model, const QuasiPartition& t, const std::vector<int>& d,
                                   const QuasiPartition& u, const std::vector<int>& e, int g) {
  if (g < 1) throw std::invalid_argument("elements must be positive");
  if (!z_related({model, t, d, u, e})) throw std::invalid_argument("witness_right_extension: (t,d) Z (u,e) fails");
  if (auto l = detail::index_of(e, g)) return d[*l];
  return *without(t.c, d).least();
}

// ---------------------------------------------------------------------------
// Random states and related pairs

namespace detail {

// Labels 0=A, 1=B, 2=C for n in 1..t+p, then reads off the quasi-partition.
template <class Label>
QuasiPartition qp_from_labels(int t, int p, Label label) {
  std::vector<int> lab(t + p);
  for (int n = 1; n <= t + p; ++n) lab[n - 1] = label(n);
  auto comp = [&](int k) { return EPSet::from_predicate(t, p, [&](int n) { return lab[n - 1] == k; }); };
  return {comp(0), comp(1), comp(2)};
}

}  // namespace detail

/// A random state above p in the given model: A-elements stay, B-elements may move to A,
/// C-elements may move anywhere.
template <class Rng>
QuasiPartition random_successor(Rng& rng, const QuasiPartition& p, int model, int max_threshold = 8) {
  std::uniform_int_distribution<int> th(0, max_threshold), mult(1, 3), pick3(0, 2), pick2(0, 1);
  std::bernoulli_distribution stay(0.5);
  const int base_period = std::lcm(std::lcm(p.a.period(), p.b.period()), p.c.period());
  const int base_threshold = std::max({p.a.threshold(), p.b.threshold(), p.c.threshold()});
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int t = base_threshold + th(rng);
    const int period = base_period * (model == 1 ? 3 : 2) * mult(rng);
    QuasiPartition q = detail::qp_from_labels(t, period, [&](int n) {
      if (p.a.contains(n)) return 0;
      if (p.b.contains(n)) return stay(rng) ? 1 : 0;
      if (stay(rng)) return 2;
      return pick3(rng);
    });
    if (is_quasipartition(q) && in_state_space(q, model) && sqsubseteq(p, q)) return q;
  }
  return p;
}

/// A random state strictly inside the given model's state space.
template <class Rng>
QuasiPartition random_state(Rng& rng, int model, int max_threshold = 8) {
  const QuasiPartition base = model == 1 ? qp_v() : qp_w();
  if (model == 2 && std::bernoulli_distribution(0.1)(rng)) return base;
  return random_successor(rng, base, model, max_threshold);
}

/// A random tuple e with (t,d) Z (u,e), or nothing if the draw fails.
template <class Rng>
std::optional<std::vector<int>> random_related_tuple(Rng& rng, const QuasiPartition& t, const std::vector<int>& d,
                                                     const QuasiPartition& u) {
  std::map<int, int> image;
  std::set<int> used;
  std::vector<int> e;
  for (int x : d) {
    if (!image.contains(x)) {
      EPSet pool = t.a.contains(x) ? u.a : t.b.contains(x) ? set_union(u.a, u.b) : EPSet::naturals();
      std::vector<int> cands;
      for (int c : pool.first(40))
        if (!used.contains(c)) cands.push_back(c);
      if (cands.empty()) return std::nullopt;
      int c = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
      image[x] = c;
      used.insert(c);
    }
    e.push_back(image[x]);
  }
  return e;
}

template <class Rng>
std::vector<int> random_tuple(Rng& rng, int max_len = 4, int max_elem = 24) {
  std::uniform_int_distribution<int> len(0, max_len), el(1, max_elem);
  std::vector<int> d(len(rng));
  for (int& x : d) x = el(rng);
  return d;
}

// ---------------------------------------------------------------------------
// Finite truncations

namespace detail {

// 0=A, 1=B, 2=C for each of 1..n
using Labelling = std::vector<int>;

inline Labelling restrict(const QuasiPartition& p, int n) {
  Labelling l(n);
  for (int i = 1; i <= n; ++i) l[i - 1] = p.a.contains(i) ? 0 : p.b.contains(i) ? 1 : 2;
  return l;
}

inline bool truncation_state_ok(const Labelling& l, int model, const Labelling& base) {
  bool has_a = false, has_c = false, has_b = false, b_in_v2 = false;
  for (std::size_t i = 0; i < l.size(); ++i) {
    has_a |= l[i] == 0;
    has_b |= l[i] == 1;
    has_c |= l[i] == 2;
    b_in_v2 |= l[i] == 1 && (i + 1) % 3 == 1;
  }
  if (!has_a || !has_c) return false;
  if (model == 1) return b_in_v2;
  return has_b || l == base;
}

}  // namespace detail

/// Finite approximant of model 1 or 2 over the domain {1..max_n}: states are the
/// restrictions reachable from the base restriction by at most `depth` single-element
/// moves C->B, C->A, B->A that keep the model's side conditions; the order is the
/// restriction of the quasi-partition order and P, Q are read off the components.
inline GModel finite_truncation(int model, int max_n, int depth) {
  other_model(model);
  if (max_n < 6) throw std::invalid_argument("finite_truncation: max_n must be at least 6");
  if (depth < 0) throw std::invalid_argument("finite_truncation: depth must be non-negative");
  const detail::Labelling base = detail::restrict(model == 1 ? qp_v() : qp_w(), max_n);
  std::vector<detail::Labelling> states{base};
  std::map<detail::Labelling, int> index{{base, 0}};
  std::vector<int> frontier{0};
  for (int step = 0; step < depth; ++step) {
    std::vector<int> next;
    for (int s : frontier)
      for (int i = 0; i < max_n; ++i)
        for (auto [from, to] : {std::pair{2, 1}, std::pair{2, 0}, std::pair{1, 0}}) {
          if (states[s][i] != from) continue;
          detail::Labelling l = states[s];
          l[i] = to;
          if (!detail::truncation_state_ok(l, model, base) || index.contains(l)) continue;
          if (static_cast<int>(states.size()) >= kMaxStates)
            throw std::length_error("finite_truncation: more than " + std::to_string(kMaxStates) + " states");
          index[l] = static_cast<int>(states.size());
          states.push_back(l);
          next.push_back(index[l]);
        }
    frontier = std::move(next);
  }
  GModel m;
  m.num_states = static_cast<int>(states.size());
  m.up.assign(m.num_states, 0);
  for (int x = 0; x < m.num_states; ++x)
    for (int y = 0; y < m.num_states; ++y) {
      bool le = true;
      for (int i = 0; i < max_n && le; ++i) {
        if (states[x][i] == 0 && states[y][i] != 0) le = false;  // A grows
        if (states[y][i] == 2 && states[x][i] != 2) le = false;  // C shrinks
      }
      if (le) m.up[x] |= bit(y);
    }
  m.base = 0;
  m.domain.resize(max_n);
  std::iota(m.domain.begin(), m.domain.end(), 1);
  MonotoneRelation p{1, {}}, q{1, {}};
  for (int s = 0; s < m.num_states; ++s)
    for (int i = 0; i < max_n; ++i) {
      if (states[s][i] <= 1) p.tuples.insert({s, i + 1});
      if (states[s][i] == 0) q.tuples.insert({s, i + 1});
    }
  m.interp["P"] = std::move(p);
  m.interp["Q"] = std::move(q);
  require_valid(m);
  if (model == 1 && !check_I(m).holds) throw std::logic_error("finite_truncation: condition I fails on model 1");
  if (model == 2 && check_J(m).holds) throw std::logic_error("finite_truncation: condition J holds on model 2");
  return m;
}

}  // namespace cdkit
