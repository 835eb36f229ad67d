#include <gtest/gtest.h>

#include <set>

#include "cdkit/verify.hpp"

using namespace cdkit;

namespace {

VerifyConfig small() {
  VerifyConfig c;
  c.monotone_models = 200;
  c.d_states = 2;
  c.gd_random = 200;
  c.asim_relations = 10;
  c.asim_size = 5;
  c.qp_samples = 50;
  c.sweep_size = 5;
  c.sweep_rank = 1;
  c.proof_models = 5;
  return c;
}

}  // namespace

TEST(Verify, SmallScaleAllPass) {
  for (const auto& r : verify_all(small())) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Verify, TableIsDeterministicForASeed) {
  VerifyConfig c = small();
  c.seed = 7;
  EXPECT_EQ(claims_table(verify_all(c, {1, 5, 6})), claims_table(verify_all(c, {1, 5, 6})));
}

TEST(Verify, ClaimStreamsAreIndependent) {
  // running a claim alone or after others gives the same result
  VerifyConfig c = small();
  auto alone = verify_all(c, {5});
  auto all = verify_all(c, {1, 3, 5});
  ASSERT_EQ(alone.size(), 1u);
  EXPECT_EQ(alone[0].detail, all[2].detail);
  EXPECT_EQ(alone[0].cases, all[2].cases);
}

TEST(Verify, EveryCriterionHasAClaim) {
  std::set<int> seen;
  for (const auto& r : verify_all(small())) seen.insert(r.criterion);
  EXPECT_EQ(seen, (std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(Verify, BrokenPropertyIsReported) {
  ClaimResult r = detail::run_claim(0, "x", "y", [](ClaimResult& c) {
    c.cases = 3;
    detail::fail(c, "first");
    detail::fail(c, "second");
  });
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.failures, 2u);
  EXPECT_EQ(r.detail, "first");
  ClaimResult e = detail::run_claim(0, "x", "y", [](ClaimResult&) { throw std::runtime_error("boom"); });
  EXPECT_FALSE(e.passed);
  EXPECT_NE(e.detail.find("boom"), std::string::npos);
  EXPECT_FALSE(detail::run_claim(0, "x", "y", [](ClaimResult&) {}).passed);  // no cases
}

TEST(Verify, SchemeDInstancesAreSentences) {
  GModel m = enumerate_models(1, 2, {{"P", 1}, {"Q", 1}}).back();
  ASSERT_EQ(m.domain.size(), 2u);
  auto fs = scheme_d_instances(m);
  EXPECT_EQ(fs.size(), 5u * 7u + 8u);
  for (const auto& f : fs) EXPECT_TRUE(is_sentence(f)) << to_string(f);
}

TEST(Mutations, LibraryGeneratorCoversKinds) {
  auto ms = single_node_mutations(gamma_delta_proof());
  EXPECT_GE(ms.size(), 20u);
  bool rule = false, prem = false, drop = false;
  for (const auto& m : ms) {
    rule |= m.change.rfind("rule", 0) == 0;
    prem |= m.change.rfind("premise", 0) == 0;
    drop |= m.change.find("dropped") != std::string::npos;
  }
  EXPECT_TRUE(rule && prem && drop);
}
