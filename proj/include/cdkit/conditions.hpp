#pragma once

// The implication Gamma -> Delta, the first-order conditions I(P,Q) and J(P,Q) that
// capture the second-order sentences "exists R. Gamma" and "forall S. Delta", and the
// model expansions that realise them.

#include <optional>
#include <string>
#include <vector>

#include "cdkit/kripke.hpp"
#include "cdkit/syntax.hpp"

namespace cdkit {

inline constexpr const char* kGammaText = "(forall x. exists y. (P(y) & (Q(y) -> R(x)))) & ~(forall x. R(x))";
inline constexpr const char* kDeltaText = "(forall x. (P(x) -> Q(x) | S)) -> S";

inline const Formula& gamma_formula() {
  static const Formula f = parse(kGammaText);
  return f;
}

inline const Formula& delta_formula() {
  static const Formula f = parse(kDeltaText);
  return f;
}

/// forall x. exists y. (P(y) & (Q(y) -> R(x)))
inline const Formula& beta_formula() { return gamma_formula().lhs(); }

/// forall x. (P(x) -> Q(x) | S)
inline const Formula& alpha_formula() { return delta_formula().lhs(); }

inline const Formula& gamma_implies_delta() {
  static const Formula f = Formula::implies(gamma_formula(), delta_formula());
  return f;
}

struct ConditionReport {
  bool holds = false;
  /// For each state w: the least element a satisfying the clause at w, if any.
  std::vector<std::optional<int>> witnesses;
  /// First state without a witness, when the condition fails.
  std::optional<int> violating_state;
};

namespace detail {

inline void require_unary_pq(const GModel& m) {
  for (const char* p : {"P", "Q"}) {
    auto it = m.interp.find(p);
    if (it == m.interp.end() || it->second.arity != 1)
      throw std::invalid_argument(std::string("signature mismatch: need unary ") + p);
  }
}

inline bool unary(const GModel& m, const char* pred, int state, int a) { return m.holds(pred, {state, a}); }

template <class Clause>
ConditionReport check_condition(const GModel& m, Clause clause) {
  require_unary_pq(m);
  ConditionReport r;
  r.holds = true;
  r.witnesses.resize(m.num_states);
  for (int w = 0; w < m.num_states; ++w) {
    for (int a : m.domain)
      if (clause(w, a)) {
        r.witnesses[w] = a;
        break;
      }
    if (!r.witnesses[w] && r.holds) {
      r.holds = false;
      r.violating_state = w;
    }
  }
  return r;
}

}  // namespace detail

/// I(P,Q): every state w has some a with base |- P(a) and w |/- Q(a).
inline ConditionReport check_I(const GModel& m) {
  return detail::check_condition(
      m, [&](int w, int a) { return detail::unary(m, "P", m.base, a) && !detail::unary(m, "Q", w, a); });
}

/// J(P,Q): every state w has some a with w |- P(a) and w |/- Q(a).
inline ConditionReport check_J(const GModel& m) {
  return detail::check_condition(m,
                                 [&](int w, int a) { return detail::unary(m, "P", w, a) && !detail::unary(m, "Q", w, a); });
}

/// E = { a | base |- P(a) and some state does not force Q(a) }, in increasing order.
inline std::vector<int> realizing_set(const GModel& m) {
  detail::require_unary_pq(m);
  std::vector<int> e;
  for (int a : m.domain) {
    if (!detail::unary(m, "P", m.base, a)) continue;
    for (int w = 0; w < m.num_states; ++w)
      if (!detail::unary(m, "Q", w, a)) {
        e.push_back(a);
        break;
      }
  }
  return e;
}

/// The surjection D -> E used by realize_R: the i-th domain element maps to E[i mod |E|].
inline std::map<int, int> realizing_surjection(const GModel& m) {
  std::vector<int> e = realizing_set(m);
  if (e.empty()) throw std::invalid_argument("condition I fails: no realizing elements");
  std::map<int, int> f;
  for (std::size_t i = 0; i < m.domain.size(); ++i) f[m.domain[i]] = e[i % e.size()];
  return f;
}

/// Expands an I-model with R(a) := Q(f(a)); the base of the result forces Gamma.
inline GModel realize_R(const GModel& m, const std::string& sym = "R") {
  require_valid(m);
  if (!check_I(m).holds) throw std::invalid_argument("condition I fails");
  std::map<int, int> f = realizing_surjection(m);
  MonotoneRelation r;
  r.arity = 1;
  for (int w = 0; w < m.num_states; ++w)
    for (int a : m.domain)
      if (detail::unary(m, "Q", w, f.at(a))) r.tuples.insert({w, a});
  return expand(m, sym, r);
}

/// States strictly above w: w <= u and not u <= w.
inline StateMask strictly_above(const GModel& m, int w) {
  StateMask out = 0;
  for (int u = 0; u < m.num_states; ++u)
    if (m.leq(w, u) && !m.leq(u, w)) out |= bit(u);
  return out;
}

/// True when some state other than w is order-equivalent to w, i.e. when "strictly above"
/// and "above and distinct" give different sets.
inline bool strict_readings_differ(const GModel& m, int w) {
  for (int u = 0; u < m.num_states; ++u)
    if (u != w && m.leq(u, w) && m.leq(w, u)) return true;
  return false;
}

/// States at which J(P,Q) has no witness.
inline std::vector<int> j_violations(const GModel& m) {
  ConditionReport r = check_J(m);
  std::vector<int> out;
  for (int w = 0; w < m.num_states; ++w)
    if (!r.witnesses[w]) out.push_back(w);
  return out;
}

/// Expands a model whose state w violates J with nullary S true exactly strictly above w.
/// In the result w forces forall x. (P(x) -> Q(x) | S) but not S.
inline GModel realize_S(const GModel& m, int w, const std::string& sym = "S") {
  require_valid(m);
  detail::require_unary_pq(m);
  if (w < 0 || w >= m.num_states) throw std::invalid_argument("state out of range");
  for (int a : m.domain)
    if (detail::unary(m, "P", w, a) && !detail::unary(m, "Q", w, a))
      throw std::invalid_argument("state " + std::to_string(w) + " satisfies J (witness " + std::to_string(a) + ")");
  MonotoneRelation s;
  s.arity = 0;
  StateMask above = strictly_above(m, w);
  for (int u = 0; u < m.num_states; ++u)
    if (above & bit(u)) s.tuples.insert({u});
  return expand(m, sym, s);
}

struct SecondOrderResult {
  bool exists_r_gamma = false;
  bool forall_s_delta = false;

  friend bool operator==(const SecondOrderResult&, const SecondOrderResult&) = default;
};

/// Decides base |- exists R. Gamma and base |- forall S. Delta by enumerating every monotone
/// unary R and every up-closed nullary S.
inline SecondOrderResult brute_second_order(const GModel& m, double ceiling = 1e6) {
  require_valid(m);
  detail::require_unary_pq(m);
  if (m.interp.contains("R") || m.interp.contains("S")) throw std::invalid_argument("R and S must be uninterpreted");
  std::vector<StateMask> ups = up_sets(m);
  const double candidates = std::pow(static_cast<double>(ups.size()), static_cast<double>(m.domain.size()));
  if (candidates > ceiling) throw CeilingExceeded("too many monotone relations to enumerate");

  SecondOrderResult out;
  const std::size_t d = m.domain.size();
  std::vector<std::size_t> choice(d, 0);
  bool more = true;
  GModel with_r = m;
  with_r.interp["R"].arity = 1;
  while (more && !out.exists_r_gamma) {
    auto& tuples = with_r.interp["R"].tuples;
    tuples.clear();
    for (std::size_t i = 0; i < d; ++i)
      for (int v = 0; v < m.num_states; ++v)
        if (ups[choice[i]] & bit(v)) tuples.insert({v, m.domain[i]});
    if (Evaluator(with_r).forces_at(m.base, gamma_formula())) out.exists_r_gamma = true;
    more = false;
    for (std::size_t i = d; i-- > 0;) {
      if (++choice[i] < ups.size()) {
        more = true;
        break;
      }
      choice[i] = 0;
    }
  }

  out.forall_s_delta = true;
  GModel with_s = m;
  with_s.interp["S"].arity = 0;
  for (StateMask s : ups) {
    auto& tuples = with_s.interp["S"].tuples;
    tuples.clear();
    for (int v = 0; v < m.num_states; ++v)
      if (s & bit(v)) tuples.insert({v});
    if (!Evaluator(with_s).forces_at(m.base, delta_formula())) {
      out.forall_s_delta = false;
      break;
    }
  }
  return out;
}

}  // namespace cdkit
