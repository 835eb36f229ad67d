#pragma once

// Random formulas and model pairs for property suites.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cdkit/kripke.hpp"
#include "cdkit/syntax.hpp"

namespace cdkit {

struct FormulaSpace {
  Signature signature;
  std::vector<std::string> binders;     // names quantifiers may bind
  std::vector<std::string> free_names;  // names usable without a binder
  std::vector<int> constants;           // domain constants usable as arguments
  int max_rank = 2;
};

namespace detail {

template <class Rng>
Formula random_formula_rec(Rng& rng, int budget, const FormulaSpace& space, std::vector<std::string>& scope,
                           int rank_left) {
  auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto leaf = [&]() -> Formula {
    std::vector<Term> pool;
    for (const auto& v : scope) pool.push_back(Term::var(v));
    for (const auto& v : space.free_names) pool.push_back(Term::var(v));
    for (int c : space.constants) pool.push_back(Term::constant(c));
    std::vector<std::pair<std::string, int>> usable;
    for (const auto& [name, arity] : space.signature)
      if (arity == 0 || !pool.empty()) usable.emplace_back(name, arity);
    if (usable.empty() || pick(10) == 0) return Formula::falsum();
    const auto& [name, arity] = usable[pick(usable.size())];
    std::vector<Term> args;
    for (int i = 0; i < arity; ++i) args.push_back(pool[pick(pool.size())]);
    return Formula::atom(name, std::move(args));
  };
  if (budget <= 1) return leaf();
  // 0: leaf, 1: quantifier, 2: negation, 3-5: binary
  int choice = static_cast<int>(pick(6));
  if (choice == 1 && (rank_left == 0 || space.binders.empty())) choice = 3 + static_cast<int>(pick(3));
  if (choice == 2 && budget < 3) choice = 0;
  if (choice >= 3 && budget < 3) choice = (rank_left > 0 && !space.binders.empty()) ? 1 : 0;
  switch (choice) {
    case 0:
      return leaf();
    case 1: {
      std::string var = space.binders[pick(space.binders.size())];
      scope.push_back(var);
      Formula body = random_formula_rec(rng, budget - 1, space, scope, rank_left - 1);
      scope.pop_back();
      return pick(2) ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    case 2:
      return Formula::negation(random_formula_rec(rng, budget - 2, space, scope, rank_left));
    default: {
      int left = 1 + static_cast<int>(pick(static_cast<std::size_t>(budget - 2)));
      Formula a = random_formula_rec(rng, left, space, scope, rank_left);
      Formula b = random_formula_rec(rng, budget - 1 - left, space, scope, rank_left);
      if (choice == 3) return Formula::conj(a, b);
      if (choice == 4) return Formula::disj(a, b);
      return Formula::implies(a, b);
    }
  }
}

}  // namespace detail

/// A random formula of size at most max_size and quantifier rank at most space.max_rank.
template <class Rng>
Formula random_formula(Rng& rng, int max_size, const FormulaSpace& space) {
  std::vector<std::string> scope;
  int budget = std::uniform_int_distribution<int>(1, std::max(1, max_size))(rng);
  return detail::random_formula_rec(rng, budget, space, scope, space.max_rank);
}

/// A random sentence of L(D) over the model's signature and domain.
template <class Rng>
Formula random_sentence(Rng& rng, int max_size, const GModel& m, int max_rank = 2) {
  FormulaSpace space;
  space.signature = m.signature();
  space.binders = {"x", "y", "z"};
  space.constants = m.domain;
  space.max_rank = max_rank;
  return random_formula(rng, max_size, space);
}

/// Adds a copy of element `a` (new largest element) with the same atoms everywhere.
inline GModel clone_element(const GModel& m, int a) {
  GModel out = m;
  const int fresh = m.domain.back() + 1;
  out.domain.push_back(fresh);
  for (auto& [name, rel] : out.interp) {
    std::set<std::vector<int>> extra;
    for (auto t : rel.tuples) {
      bool hit = false;
      for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == a) t[i] = fresh, hit = true;
      if (hit) extra.insert(t);
    }
    rel.tuples.insert(extra.begin(), extra.end());
  }
  return out;
}

/// Adds a copy of state `s` that sits exactly where s sits in the order and forces the same atoms.
inline GModel clone_state(const GModel& m, int s) {
  GModel out = m;
  const int fresh = m.num_states;
  if (fresh >= kMaxStates) return out;
  out.num_states = fresh + 1;
  out.up.push_back(m.up[s] | bit(fresh));
  for (int v = 0; v < fresh; ++v)
    if (m.leq(v, s)) out.up[v] |= bit(fresh);
  for (auto& [name, rel] : out.interp) {
    std::set<std::vector<int>> extra;
    for (auto t : rel.tuples)
      if (t[0] == s) t[0] = fresh, extra.insert(t);
    rel.tuples.insert(extra.begin(), extra.end());
  }
  return out;
}

/// A pair of models that usually admits a nonempty asimulation: a random model and a
/// variant of it with a cloned state or element, or an independent random model.
template <class Rng>
std::pair<GModel, GModel> random_pair(Rng& rng, int max_states, int max_domain,
                                      const Signature& sig = Signature{{"P", 1}, {"Q", 1}}) {
  GModel a = random_model(rng, max_states, max_domain, sig, 0.4, 0.35);
  std::uniform_int_distribution<int> mode(0, 3);
  switch (mode(rng)) {
    case 0:
      return {a, random_model(rng, max_states, max_domain, sig, 0.4, 0.35)};
    case 1: {
      int s = std::uniform_int_distribution<int>(0, a.num_states - 1)(rng);
      return {a, clone_state(a, s)};
    }
    case 2: {
      int e = a.domain[std::uniform_int_distribution<std::size_t>(0, a.domain.size() - 1)(rng)];
      return {clone_element(a, e), a};
    }
    default:
      return {a, a};
  }
}

}  // namespace cdkit
