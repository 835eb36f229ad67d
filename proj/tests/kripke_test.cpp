#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cdkit/kripke.hpp"
#include "test_support.hpp"

using namespace cdkit;

namespace {

GModel one_state(std::set<std::vector<int>> p_tuples, std::vector<int> domain = {1}) {
  GModel m;
  m.domain = std::move(domain);
  m.interp["P"] = MonotoneRelation{1, std::move(p_tuples)};
  return m;
}

// v=0 < u=1
GModel chain2() {
  GModel m;
  m.num_states = 2;
  m.up = {0b11, 0b10};
  return m;
}

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

// Classical first-order truth, written directly against the interpretation.
bool classical(const GModel& m, const Formula& f, std::map<std::string, int>& env) {
  switch (f.op()) {
    case Op::Falsum:
      return false;
    case Op::Atom: {
      std::vector<int> t{0};
      for (const auto& a : f.args()) t.push_back(a.kind == Term::Kind::Const ? a.value : env.at(a.name));
      return m.holds(f.predicate(), t);
    }
    case Op::And:
      return classical(m, f.lhs(), env) && classical(m, f.rhs(), env);
    case Op::Or:
      return classical(m, f.lhs(), env) || classical(m, f.rhs(), env);
    case Op::Implies:
      return !classical(m, f.lhs(), env) || classical(m, f.rhs(), env);
    case Op::Forall:
    case Op::Exists: {
      const bool all = f.op() == Op::Forall;
      auto saved = env.find(f.variable()) != env.end() ? std::optional<int>(env[f.variable()]) : std::nullopt;
      bool result = all;
      for (int d : m.domain) {
        env[f.variable()] = d;
        bool v = classical(m, f.body(), env);
        if (all && !v) result = false;
        if (!all && v) result = true;
      }
      if (saved)
        env[f.variable()] = *saved;
      else
        env.erase(f.variable());
      return result;
    }
  }
  return false;
}

// Independent enumeration oracle: every labelled structure with base 0, reduced by brute-force
// canonical form over all state permutations fixing 0 and all domain permutations.
std::size_t brute_force_class_count(int max_states, int max_domain, const Signature& sig) {
  std::set<std::vector<int>> classes;
  for (int n = 1; n <= max_states; ++n) {
    for (int d = 1; d <= max_domain; ++d) {
      // all tuples over D for each predicate
      std::vector<std::pair<std::string, std::vector<int>>> cells;
      for (const auto& [name, arity] : sig) {
        std::vector<int> t(arity, 1);
        while (true) {
          cells.emplace_back(name, t);
          int i = arity - 1;
          while (i >= 0 && t[i] == d) t[i--] = 1;
          if (i < 0) break;
          ++t[i];
        }
      }
      const int bits_order = n * n;
      const int bits_interp = static_cast<int>(cells.size()) * n;
      for (long ord = 0; ord < (1L << bits_order); ++ord) {
        auto le = [&](int a, int b) { return (ord >> (a * n + b)) & 1L; };
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) {
          ok = le(a, a) && le(0, a);
          for (int b = 0; b < n && ok; ++b)
            for (int c = 0; c < n && ok; ++c)
              if (le(a, b) && le(b, c) && !le(a, c)) ok = false;
        }
        if (!ok) continue;
        for (long in = 0; in < (1L << bits_interp); ++in) {
          auto val = [&](std::size_t cell, int s) { return (in >> (cell * n + s)) & 1L; };
          bool mono = true;
          for (std::size_t c = 0; c < cells.size() && mono; ++c)
            for (int a = 0; a < n && mono; ++a)
              for (int b = 0; b < n && mono; ++b)
                if (le(a, b) && val(c, a) && !val(c, b)) mono = false;
          if (!mono) continue;
          std::vector<int> sp(n), dp(d);
          std::iota(sp.begin(), sp.end(), 0);
          std::vector<int> best;
          do {
            if (sp[0] != 0) continue;
            std::iota(dp.begin(), dp.end(), 1);
            do {
              std::vector<int> code{n, d};
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                  // find preimages
                  int pa = static_cast<int>(std::find(sp.begin(), sp.end(), a) - sp.begin());
                  int pb = static_cast<int>(std::find(sp.begin(), sp.end(), b) - sp.begin());
                  code.push_back(static_cast<int>(le(pa, pb)));
                }
              std::map<std::pair<std::string, std::vector<int>>, std::vector<int>> image;
              for (std::size_t c = 0; c < cells.size(); ++c) {
                std::vector<int> t;
                for (int x : cells[c].second) t.push_back(dp[x - 1]);
                std::vector<int> states(n, 0);
                for (int s = 0; s < n; ++s) states[sp[s]] = static_cast<int>(val(c, s));
                image[{cells[c].first, t}] = states;
              }
              for (const auto& [k, v] : image) code.insert(code.end(), v.begin(), v.end());
              if (best.empty() || code < best) best = code;
            } while (std::next_permutation(dp.begin(), dp.end()));
          } while (std::next_permutation(sp.begin(), sp.end()));
          classes.insert(best);
        }
      }
    }
  }
  return classes.size();
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(one_state({{0, 1}})).empty());

  GModel m = chain2();
  m.interp["P"] = MonotoneRelation{1, {{0, 1}}};
  auto vs = validate(m);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, "monotonicity");

  GModel b;
  b.num_states = 2;
  b.up = {0b01, 0b11};  // 1 <= 0 but not 0 <= 1; base 0 is not below 1
  EXPECT_TRUE(has_kind(validate(b), "base"));

  GModel e = one_state({});
  e.domain.clear();
  EXPECT_FALSE(validate(e).empty());
}

TEST(Forces, Examples) {
  GModel m = one_state({{0, 1}});
  EXPECT_FALSE(forces(m, 0, Formula::falsum()));
  EXPECT_TRUE(forces(m, 0, parse("P(1)")));

  GModel c = chain2();
  c.interp["P"] = MonotoneRelation{1, {}};
  c.interp["Q"] = MonotoneRelation{1, {{1, 1}}};
  EXPECT_TRUE(forces(c, 0, parse("forall x. (P(x) | ~P(x))")));
  EXPECT_TRUE(Evaluator(c).forces_at(0, parse("forall x. (P(x) | ~P(x))")));
  // Q(1) | ~Q(1) fails at the bottom of the chain
  EXPECT_FALSE(forces(c, 0, parse("Q(1) | ~Q(1)")));
  EXPECT_FALSE(forces(c, 0, parse("~~Q(1) -> Q(1)")));
}

TEST(Forces, Errors) {
  GModel m = one_state({{0, 1}});
  EXPECT_THROW(forces(m, 0, parse("P(2)")), std::invalid_argument);
  EXPECT_THROW(forces(m, 0, parse("Q(1)")), std::invalid_argument);
  EXPECT_THROW(forces(m, 0, parse("P(x)")), std::invalid_argument);
}

TEST(ValidAtBase, Examples) {
  GModel m;
  m.interp["P"] = MonotoneRelation{0, {}};
  EXPECT_FALSE(valid_at_base(m, parse("P")));
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_models(1, 1, {{"P", 1}}).size(), 2u);
  EXPECT_EQ(enumerate_models(1, 1, {}).size(), 1u);
}

TEST(Enumerate, MatchesBruteForceCanonicalForms) {
  const std::vector<std::tuple<int, int, Signature>> cases = {
      {2, 1, {{"P", 0}}}, {3, 1, {{"P", 0}}}, {2, 2, {{"P", 1}}}, {3, 2, {{"P", 1}}},
      {2, 2, {{"P", 1}, {"Q", 1}}}, {3, 1, {{"P", 0}, {"Q", 1}}}, {2, 2, {{"R", 2}}}, {4, 1, {{"P", 0}}}};
  for (const auto& [ns, nd, sig] : cases) {
    auto models = enumerate_models(ns, nd, sig);
    EXPECT_EQ(models.size(), brute_force_class_count(ns, nd, sig)) << ns << "," << nd;
    for (const auto& m : models) ASSERT_TRUE(validate(m).empty());
  }
}

TEST(Enumerate, DeterministicAndCeiling) {
  EXPECT_EQ(enumerate_models(3, 2, test::kPQ), enumerate_models(3, 2, test::kPQ));
  EXPECT_THROW(enumerate_models(5, 3, {{"R", 2}}, 1e6), CeilingExceeded);
  EXPECT_THROW(enumerate_models(0, 1, {}), std::invalid_argument);
}

TEST(Evaluator, AgreesWithPointwiseForcing) {
  std::mt19937_64 rng(11);
  const Signature sig{{"P", 1}, {"Q", 1}, {"R", 2}, {"S", 0}};
  for (int i = 0; i < 1500; ++i) {
    GModel m = random_model(rng, 4, 3, sig);
    ASSERT_TRUE(validate(m).empty());
    Formula f = random_sentence(rng, 9, m, 2);
    StateMask s = Evaluator(m).forcing_states(f);
    for (int v = 0; v < m.num_states; ++v) ASSERT_EQ(((s >> v) & 1U) != 0, forces(m, v, f)) << to_string(f);
  }
}

TEST(Forces, MonotoneAlongOrder) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    GModel m = random_model(rng, 4, 3, test::kPQRS);
    Formula f = random_sentence(rng, 9, m, 2);
    StateMask s = Evaluator(m).forcing_states(f);
    for (int v = 0; v < m.num_states; ++v)
      if (s & bit(v)) ASSERT_EQ(m.up[v] & ~s, 0u) << to_string(f);
  }
}

TEST(Forces, ClassicalCollapseOnOneState) {
  std::mt19937_64 rng(13);
  const Signature sig{{"P", 1}, {"Q", 1}, {"R", 2}, {"S", 0}};
  for (int i = 0; i < 2000; ++i) {
    GModel m = random_model(rng, 1, 3, sig);
    Formula f = random_sentence(rng, 9, m, 2);
    std::map<std::string, int> env;
    ASSERT_EQ(forces(m, 0, f), classical(m, f, env)) << to_string(f);
  }
}

TEST(SchemeD, HoldsOnEnumeratedModels) {
  std::mt19937_64 rng(14);
  FormulaSpace a_space, b_space;
  a_space.signature = b_space.signature = test::kPQRS;
  a_space.binders = b_space.binders = {"y"};
  b_space.free_names = {"x"};
  a_space.max_rank = b_space.max_rank = 1;
  int checked = 0;
  for_each_model(2, 2, {{"P", 1}, {"S", 0}}, [&](const GModel& base) {
    GModel m = base;
    m.interp["Q"] = MonotoneRelation{1, {}};
    m.interp["R"] = MonotoneRelation{1, {}};
    a_space.constants = b_space.constants = m.domain;
    Evaluator ev(m);
    for (int k = 0; k < 20; ++k) {
      Formula a = random_formula(rng, 5, a_space);
      Formula b = random_formula(rng, 5, b_space);
      Formula d = Formula::implies(Formula::forall("x", Formula::disj(a, b)), Formula::disj(a, Formula::forall("x", b)));
      ASSERT_EQ(ev.forcing_states(d), m.states()) << to_string(d);
      ++checked;
    }
  });
  EXPECT_GT(checked, 0);
}

TEST(Expand, Examples) {
  GModel c = chain2();
  c.interp["P"] = MonotoneRelation{1, {}};
  GModel e = expand(c, "R", MonotoneRelation{1, {}});
  EXPECT_FALSE(forces(e, 1, parse("R(1)")));
  EXPECT_THROW(expand(c, "P", MonotoneRelation{1, {}}), std::invalid_argument);
  EXPECT_THROW(expand(c, "R", MonotoneRelation{1, {{0, 1}}}), std::invalid_argument);
  EXPECT_NO_THROW(expand(c, "R", MonotoneRelation{1, {{1, 1}}}));
}

TEST(UpSets, CountOnChain) {
  // a 3-chain has 4 up-sets, the 2-antichain above a base has 5 (with the empty set)
  GModel m;
  m.num_states = 3;
  m.up = {0b111, 0b110, 0b100};
  EXPECT_EQ(up_sets(m).size(), 4u);
  m.up = {0b111, 0b010, 0b100};
  EXPECT_EQ(up_sets(m).size(), 5u);
}

TEST(ModelFile, RoundTripAndClosureWarning) {
  const std::string text =
      "# sample\n"
      "states: 0 1 2\n"
      "order: 0<=1 1<=2\n"
      "base: 0\n"
      "domain: 1 2\n"
      "pred P/1: (1,1) (2,1)\n"
      "pred S/0: (2)\n";
  LoadedModel lm = read_model_text(text);
  EXPECT_FALSE(lm.warnings.empty());  // 0<=2 added by closure
  EXPECT_TRUE(lm.model.leq(0, 2));
  EXPECT_TRUE(validate(lm.model).empty());
  LoadedModel again = read_model_text(model_to_string(lm.model, {"header"}));
  EXPECT_EQ(again.model, lm.model);
  EXPECT_TRUE(again.warnings.empty());
  EXPECT_THROW(read_model_text("states: 0\nbase: 0\ndomain: 1\npred P/1: (0,x)\n"), ParseError);
}

TEST(ModelFile, RandomRoundTrip) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 300; ++i) {
    GModel m = random_model(rng, 5, 3, {{"P", 1}, {"R", 2}, {"S", 0}});
    EXPECT_EQ(read_model_text(model_to_string(m)).model, m);
  }
}
