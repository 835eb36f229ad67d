#include <gtest/gtest.h>

#include <random>

#include "cdkit/conditions.hpp"
#include "test_support.hpp"

using namespace cdkit;

namespace {

GModel one_state_pq(std::set<std::vector<int>> p, std::set<std::vector<int>> q, std::vector<int> domain = {1}) {
  GModel m;
  m.domain = std::move(domain);
  m.interp["P"] = MonotoneRelation{1, std::move(p)};
  m.interp["Q"] = MonotoneRelation{1, std::move(q)};
  return m;
}

// Direct reading of the two conditions, quantifier by quantifier.
bool naive_I(const GModel& m) {
  for (int w = 0; w < m.num_states; ++w) {
    bool found = false;
    for (int a : m.domain) found = found || (m.holds("P", {m.base, a}) && !m.holds("Q", {w, a}));
    if (!found) return false;
  }
  return true;
}

bool naive_J(const GModel& m) {
  for (int w = 0; w < m.num_states; ++w) {
    bool found = false;
    for (int a : m.domain) found = found || (m.holds("P", {w, a}) && !m.holds("Q", {w, a}));
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(CheckI, Examples) {
  auto r = check_I(one_state_pq({{0, 1}}, {}));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.witnesses[0], 1);
  auto f = check_I(one_state_pq({{0, 1}}, {{0, 1}}));
  EXPECT_FALSE(f.holds);
  EXPECT_EQ(f.violating_state, 0);
}

TEST(CheckJ, Examples) {
  EXPECT_TRUE(check_J(one_state_pq({{0, 1}}, {})).holds);
  // P contained in Q at the base
  GModel m = one_state_pq({{0, 1}, {0, 2}}, {{0, 1}, {0, 2}}, {1, 2});
  auto r = check_J(m);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.violating_state, m.base);
}

TEST(Conditions, SignatureMismatch) {
  GModel m;
  m.interp["P"] = MonotoneRelation{1, {}};
  EXPECT_THROW(check_I(m), std::invalid_argument);
  m.interp["Q"] = MonotoneRelation{0, {}};
  EXPECT_THROW(check_J(m), std::invalid_argument);
}

TEST(Conditions, AgreeWithNaiveReadingExhaustively) {
  for_each_model(3, 2, test::kPQ, [](const GModel& m) {
    auto i = check_I(m);
    auto j = check_J(m);
    ASSERT_EQ(i.holds, naive_I(m));
    ASSERT_EQ(j.holds, naive_J(m));
    for (int w = 0; w < m.num_states; ++w) {
      if (i.witnesses[w]) {
        int a = *i.witnesses[w];
        ASSERT_TRUE(m.holds("P", {m.base, a}) && !m.holds("Q", {w, a}));
      }
      if (j.witnesses[w]) {
        int a = *j.witnesses[w];
        ASSERT_TRUE(m.holds("P", {w, a}) && !m.holds("Q", {w, a}));
      }
    }
  });
}

TEST(RealizeR, OneStateExample) {
  GModel m = one_state_pq({{0, 1}}, {});
  EXPECT_EQ(realizing_set(m), std::vector<int>{1});
  EXPECT_EQ(realizing_surjection(m), (std::map<int, int>{{1, 1}}));
  GModel r = realize_R(m);
  EXPECT_TRUE(r.interp.at("R").tuples.empty());
  EXPECT_TRUE(valid_at_base(r, test::gamma()));
  EXPECT_THROW(realize_R(one_state_pq({{0, 1}}, {{0, 1}})), std::invalid_argument);
  EXPECT_THROW(realize_R(r), std::invalid_argument);  // R already present
}

TEST(RealizeR, SurjectionIsOnto) {
  GModel m = one_state_pq({{0, 1}, {0, 3}}, {}, {1, 2, 3, 4, 5});
  auto f = realizing_surjection(m);
  EXPECT_EQ(f, (std::map<int, int>{{1, 1}, {2, 3}, {3, 1}, {4, 3}, {5, 1}}));
}

TEST(RealizeR, ForcesGammaOnEveryIModel) {
  int n = 0;
  for_each_model(3, 3, test::kPQ, [&](const GModel& m) {
    if (!check_I(m).holds) return;
    ++n;
    ASSERT_TRUE(valid_at_base(realize_R(m), test::gamma())) << model_to_string(m);
  });
  EXPECT_GT(n, 0);
}

TEST(RealizeS, TwoStateChain) {
  GModel m;
  m.num_states = 2;
  m.up = {0b11, 0b10};
  m.interp["P"] = MonotoneRelation{1, {}};
  m.interp["Q"] = MonotoneRelation{1, {}};
  ASSERT_FALSE(check_J(m).holds);
  GModel s = realize_S(m, 0);
  EXPECT_EQ(s.interp.at("S").tuples, (std::set<std::vector<int>>{{1}}));
  EXPECT_FALSE(valid_at_base(s, test::delta()));
}

TEST(RealizeS, OneState) {
  GModel m = one_state_pq({}, {});
  GModel s = realize_S(m, 0);
  EXPECT_TRUE(s.interp.at("S").tuples.empty());
  EXPECT_TRUE(forces(s, 0, alpha_formula()));
  EXPECT_FALSE(forces(s, 0, parse("S")));
  EXPECT_THROW(realize_S(one_state_pq({{0, 1}}, {}), 0), std::invalid_argument);
}

TEST(RealizeS, StrictAboveInQuasiOrder) {
  // 0 below the cluster {1,2}
  GModel m;
  m.num_states = 3;
  m.up = {0b111, 0b110, 0b110};
  m.interp["P"] = MonotoneRelation{1, {}};
  m.interp["Q"] = MonotoneRelation{1, {}};
  EXPECT_EQ(strictly_above(m, 1), 0u);
  EXPECT_EQ(strictly_above(m, 0), 0b110u);
  EXPECT_TRUE(strict_readings_differ(m, 1));
  EXPECT_FALSE(strict_readings_differ(m, 0));
  GModel s = realize_S(m, 1);
  EXPECT_TRUE(validate(s).empty());
}

TEST(RealizeS, RefutesDeltaOnEveryJFailure) {
  int n = 0;
  for_each_model(3, 2, test::kPQ, [&](const GModel& m) {
    for (int w : j_violations(m)) {
      ++n;
      GModel s = realize_S(m, w);
      ASSERT_TRUE(forces(s, w, alpha_formula()));
      ASSERT_FALSE(forces(s, w, parse("S")));
      ASSERT_FALSE(valid_at_base(s, test::delta()));
    }
  });
  EXPECT_GT(n, 0);
}

TEST(BruteSecondOrder, AgreesWithConditions) {
  for_each_model(2, 2, test::kPQ, [](const GModel& m) {
    auto so = brute_second_order(m);
    ASSERT_EQ(so.exists_r_gamma, check_I(m).holds) << model_to_string(m);
    ASSERT_EQ(so.forall_s_delta, check_J(m).holds) << model_to_string(m);
    if (so.exists_r_gamma) ASSERT_TRUE(so.forall_s_delta);
  });
}

TEST(BruteSecondOrder, RandomLargerModels) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    GModel m = random_model(rng, 5, 3, test::kPQ);
    auto so = brute_second_order(m);
    ASSERT_EQ(so.exists_r_gamma, check_I(m).holds);
    ASSERT_EQ(so.forall_s_delta, check_J(m).holds);
  }
}

TEST(GammaImpliesDelta, RandomModels) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 3000; ++i) {
    GModel m = random_model(rng, 5, 3, test::kPQRS);
    ASSERT_TRUE(Evaluator(m).forces_at(m.base, gamma_implies_delta())) << model_to_string(m);
  }
}
