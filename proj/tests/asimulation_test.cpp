#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cdkit/asimulation.hpp"
#include "cdkit/quasipartition.hpp"
#include "test_support.hpp"

using namespace cdkit;

namespace {

GModel one_state(std::set<std::vector<int>> p, std::vector<int> domain = {1}) {
  GModel m;
  m.domain = std::move(domain);
  m.interp["P"] = MonotoneRelation{1, std::move(p)};
  return m;
}

GModel chain2_pq() {
  // 0 <= 1, P(1) appears at the top only
  GModel m;
  m.num_states = 2;
  m.up = {0b11, 0b10};
  m.domain = {1, 2};
  m.interp["P"] = MonotoneRelation{1, {{1, 1}}};
  m.interp["Q"] = MonotoneRelation{1, {}};
  return m;
}

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
  for (const auto& v : vs)
    if (v.kind == kind) return true;
  return false;
}

std::set<std::pair<int, std::size_t>> alive_set(const StratifiedAsim& g, int l) {
  std::set<std::pair<int, std::size_t>> out;
  for (int dir = 1; dir <= 2; ++dir)
    for (std::size_t i = 0; i < g.size(dir, l); ++i)
      if (g.alive_at(dir, l, i)) out.emplace(dir, i);
  return out;
}

}  // namespace

TEST(Check, EmptyRelationIsVacuous) {
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    EXPECT_TRUE(check(AsimRelation{}, a, b).empty());
  }
}

TEST(Check, IsomorphicOneStateModels) {
  GModel m = one_state({{0, 1}});
  AsimRelation z;
  z.entries = {{1, 0, {}, 0, {}}, {2, 0, {}, 0, {}}, {1, 0, {1}, 0, {1}}, {2, 0, {1}, 0, {1}}};
  EXPECT_TRUE(check(z, m, m).empty());
  // the two-way pair is needed for condition 3
  AsimRelation one_way;
  one_way.entries = {{1, 0, {}, 0, {}}, {1, 0, {1}, 0, {1}}};
  EXPECT_TRUE(has_kind(check(one_way, m, m), "condition 3"));
}

TEST(Check, AtomNotPreserved) {
  GModel m1 = one_state({{0, 1}}), m2 = one_state({});
  AsimRelation z;
  z.horizon = 1;
  z.entries = {{1, 0, {1}, 0, {1}}, {2, 0, {1}, 0, {1}}};
  auto vs = check(z, m1, m2);
  ASSERT_TRUE(has_kind(vs, "condition 2"));
  EXPECT_NE(vs.front().detail.find("P(x1)"), std::string::npos);
}

TEST(Check, ExtensionsBelowHorizonOnly) {
  GModel m = one_state({}, {1, 2});
  AsimRelation z;
  z.entries = {{1, 0, {}, 0, {}}, {2, 0, {}, 0, {}}, {1, 0, {1}, 0, {1}}, {2, 0, {1}, 0, {1}}};
  auto vs = check(z, m, m);  // 2 has no left or right extension
  EXPECT_TRUE(has_kind(vs, "condition 4"));
  EXPECT_TRUE(has_kind(vs, "condition 5"));
  z.entries.insert({1, 0, {2}, 0, {2}});
  z.entries.insert({2, 0, {2}, 0, {2}});
  EXPECT_TRUE(check(z, m, m).empty());
  z.horizon = 0;  // length-0 entries no longer need extensions; the longer ones are still checked
  EXPECT_TRUE(check(z, m, m).empty());
  z.horizon = 2;
  EXPECT_TRUE(has_kind(check(z, m, m), "condition 4"));
}

TEST(Check, MalformedEntriesThrow) {
  GModel m = one_state({});
  AsimRelation bad_state, bad_elem, bad_len, bad_dir;
  bad_state.entries = {{1, 3, {}, 0, {}}};
  bad_elem.entries = {{1, 0, {7}, 0, {1}}};
  bad_len.entries = {{1, 0, {1}, 0, {}}};
  bad_dir.entries = {{0, 0, {}, 0, {}}};
  for (const auto* z : {&bad_state, &bad_elem, &bad_len, &bad_dir}) EXPECT_THROW(check(*z, m, m), std::invalid_argument);
}

TEST(Preserves, BotAndAtoms) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    auto g = bounded_greatest(a, b, 2);
    AsimRelation z = random_asimulation(rng, g);
    ASSERT_TRUE(check(z, a, b).empty());
    std::vector<Formula> fs{Formula::falsum()};
    for (const char* p : {"P", "Q"})
      for (const char* v : {"x1", "x2"}) fs.push_back(Formula::atom(p, {Term::var(v)}));
    EXPECT_TRUE(preserves(z, a, b, fs).empty());
  }
}

TEST(Preserves, FreeVariablesMustBePositionalAndCovered) {
  GModel m = one_state({{0, 1}});
  AsimRelation z;
  z.entries = {{1, 0, {}, 0, {}}, {2, 0, {}, 0, {}}};
  EXPECT_THROW(preserves(z, m, m, {parse("P(y)")}), std::invalid_argument);
  EXPECT_THROW(preserves(z, m, m, {parse("P(x1)")}), std::invalid_argument);
  EXPECT_TRUE(preserves(z, m, m, {parse("exists x. P(x)")}).empty());
}

TEST(Preserves, ReportsTransferFailure) {
  GModel m1 = one_state({{0, 1}}), m2 = one_state({});
  AsimRelation z;
  z.horizon = 1;
  z.entries = {{1, 0, {}, 0, {}}};
  auto vs = preserves(z, m1, m2, {parse("exists x. P(x)")});
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, "preservation");
  z.horizon = 0;  // rank 1 is beyond the horizon, nothing is claimed
  EXPECT_TRUE(preserves(z, m1, m2, {parse("exists x. P(x)")}).empty());
}

TEST(Preserves, RandomAsimulationsExhaustiveRank2Size7) {
  FormulaOracle oracle(7, 2, test::kPQ);
  std::mt19937 rng(2024);
  int nonempty = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto [a, b] = test::random_pair(rng, 3, 2);
    auto g = bounded_greatest(a, b, 2);
    AsimRelation z = random_asimulation(rng, g, 3);
    ASSERT_TRUE(check(z, a, b).empty());
    nonempty += !z.entries.empty();
    auto vs = preserves_exhaustive(z, a, b, oracle);
    EXPECT_TRUE(vs.empty()) << vs.front().detail;
  }
  EXPECT_GT(nonempty, 30);
}

TEST(Preserves, ExhaustiveAgreesWithPointwise) {
  FormulaOracle oracle(4, 1, test::kPQ);
  std::mt19937 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    AsimRelation z;
    z.horizon = 1;
    // arbitrary (usually invalid) relation so that failures occur
    std::uniform_int_distribution<int> sa(0, a.num_states - 1), sb(0, b.num_states - 1);
    for (int i = 0; i < 4; ++i) {
      z.entries.insert({1, sa(rng), {}, sb(rng), {}});
      z.entries.insert({1, sa(rng), {a.domain.back()}, sb(rng), {b.domain.front()}});
    }
    std::vector<Formula> fs;
    for (int len = 0; len <= 1; ++len)
      for (int id : oracle.roots(len)) fs.push_back(oracle.bank(len).formula(id));
    bool fast = !preserves_exhaustive(z, a, b, oracle).empty();
    bool slow = !preserves(z, a, b, fs).empty();
    EXPECT_EQ(fast, slow);
  }
}

TEST(Preserves, SoundnessUnderEntryRemoval) {
  // whatever subset of a valid relation still passes check must still preserve
  FormulaOracle oracle(6, 2, test::kPQ);
  std::mt19937 rng(77);
  int accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    GModel a = random_model(rng, 2, 2, test::kPQ, 0.5, 0.4), b = random_model(rng, 2, 2, test::kPQ, 0.5, 0.4);
    auto z = random_asimulation(rng, bounded_greatest(a, b, 2), 1);
    if (z.entries.empty()) continue;
    std::vector<AsimEntry> es(z.entries.begin(), z.entries.end());
    z.entries.erase(es[std::uniform_int_distribution<std::size_t>(0, es.size() - 1)(rng)]);
    if (!check(z, a, b).empty()) continue;
    ++accepted;
    EXPECT_TRUE(preserves_exhaustive(z, a, b, oracle).empty());
  }
  EXPECT_GT(accepted, 0);
}

TEST(Greatest, IdenticalModelsKeepTheDiagonal) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    GModel m = random_model(rng, 3, 2, test::kPQ);
    auto g = bounded_greatest(m, m, 2);
    for (int l = 0; l <= 2; ++l)
      for (int dir = 1; dir <= 2; ++dir)
        for (int s = 0; s < m.num_states; ++s)
          for (std::size_t a = 0; a < g.tuples(1, l); ++a) EXPECT_TRUE(g.alive(dir, l, s, a, s, a));
  }
  GModel bare;  // one state, one element, no atoms: everything survives
  bare.interp["P"] = MonotoneRelation{1, {}};
  auto g = bounded_greatest(bare, bare, 2);
  for (int l = 0; l <= 2; ++l) EXPECT_EQ(g.count(1, l) + g.count(2, l), 2 * g.size(1, l));
}

TEST(Greatest, NullaryAtomSeparatesBases) {
  GModel m1, m2;
  m1.interp["P"] = MonotoneRelation{0, {{0}}};
  m2.interp["P"] = MonotoneRelation{0, {}};
  auto g = bounded_greatest(m1, m2, 1);
  EXPECT_FALSE(g.related({1, 0, {}, 0, {}}));
  // the reverse entry needs the two-way pair of condition 3 as well
  EXPECT_FALSE(g.related({2, 0, {}, 0, {}}));
  EXPECT_EQ(g.count(1, 0) + g.count(2, 0), 0u);
  auto z = g.to_relation();
  EXPECT_TRUE(check(z, m1, m2).empty());
}

TEST(Greatest, ContractOnAllSmallPairs) {
  auto models = enumerate_models(2, 2, test::kPQ);
  FormulaOracle oracle(6, 2, test::kPQ);
  std::printf("%zu models, %zu pairs\n", models.size(), models.size() * models.size());
  std::size_t related_bases = 0;
  for (const auto& a : models)
    for (const auto& b : models) {
      auto g = bounded_greatest(a, b, 2);
      auto vs = contract_violations(g, oracle, 1);
      ASSERT_TRUE(vs.empty()) << model_to_string(a) << "\n" << model_to_string(b) << "\n" << vs.front().detail;
      related_bases += g.related({1, a.base, {}, b.base, {}});
    }
  EXPECT_GT(related_bases, 0u);
}

TEST(Greatest, SurvivorsFormAValidRelation) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    auto z = bounded_greatest(a, b, 2).to_relation();
    EXPECT_TRUE(check(z, a, b).empty());
  }
}

TEST(Greatest, RefinementMonotonicity) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    auto g1 = bounded_greatest(a, b, 1), g2 = bounded_greatest(a, b, 2), g3 = bounded_greatest(a, b, 3);
    for (int l = 0; l <= 1; ++l) {
      auto s1 = alive_set(g1, l), s2 = alive_set(g2, l), s3 = alive_set(g3, l);
      EXPECT_TRUE(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()));
      EXPECT_TRUE(std::includes(s2.begin(), s2.end(), s3.begin(), s3.end()));
    }
  }
}

TEST(Greatest, SymmetrizedEntriesTransferAtomsBothWays) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
    auto g = bounded_greatest(a, b, 2);
    for (int l = 0; l <= 2; ++l)
      for (std::size_t i = 0; i < g.size(1, l); ++i) {
        if (!g.alive_at(1, l, i)) continue;
        AsimEntry e = g.entry(1, l, i);
        if (!g.related({2, e.to_state, e.to_tuple, e.from_state, e.from_tuple})) continue;
        for (const char* p : {"P", "Q"})
          for (int k = 0; k < l; ++k)
            EXPECT_EQ(a.holds(p, {e.from_state, e.from_tuple[k]}), b.holds(p, {e.to_state, e.to_tuple[k]}));
      }
  }
}

TEST(Greatest, CeilingThrows) {
  GModel big = finite_truncation(1, 9, 1);
  EXPECT_THROW(bounded_greatest(big, big, 4, 1e6), CeilingExceeded);
}

TEST(Greatest, TruncationBasesAtNineOne) {
  // The depth-1 tops freeze every element, which a rank-1 sentence can see; by the
  // contract no stratified relation with max_len >= 1 can then relate the bases.
  GModel m1 = finite_truncation(1, 9, 1), m2 = finite_truncation(2, 9, 1);
  Formula sep = parse("(exists x. ~Q(x)) -> (exists x. ~P(x))");
  EXPECT_TRUE(forces(m1, m1.base, sep));
  EXPECT_FALSE(forces(m2, m2.base, sep));
  auto g = bounded_greatest(m1, m2, 1);
  EXPECT_FALSE(g.related({1, m1.base, {}, m2.base, {}}));
  EXPECT_FALSE(g.related({2, m2.base, {}, m1.base, {}}));
  EXPECT_GT(g.count(1, 0), 0u);  // other pairs of states do survive
  auto g0 = bounded_greatest(m1, m2, 0);
  EXPECT_TRUE(g0.related({1, m1.base, {}, m2.base, {}}));
}

TEST(Greatest, AgreesWithNaiveRefinement) {
  // oracle: start from everything and delete whatever check() complains about
  std::mt19937 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    auto [a, b] = test::random_pair(rng, 3, 2);
    const int len = trial % 3;
    StratifiedAsim full(a, b, len);
    AsimRelation z = full.to_relation();
    std::map<std::string, AsimEntry> by_text;
    for (const auto& e : z.entries) by_text[detail::entry_text(e)] = e;
    for (auto vs = check(z, a, b); !vs.empty(); vs = check(z, a, b))
      for (const auto& v : vs) z.entries.erase(by_text.at(v.detail.substr(0, v.detail.find(':'))));
    EXPECT_EQ(bounded_greatest(a, b, len).to_relation().entries, z.entries);
  }
}

TEST(Random, AsimulationsAreValidAndInsideGreatest) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    GModel a = random_model(rng, 4, 3, test::kPQ), b = random_model(rng, 4, 3, test::kPQ);
    auto g = bounded_greatest(a, b, 2);
    auto z = random_asimulation(rng, g);
    EXPECT_EQ(z.horizon, 2);
    EXPECT_TRUE(check(z, a, b).empty());
    for (const auto& e : z.entries) EXPECT_TRUE(g.related(e));
  }
}

TEST(File, RoundTripAndErrors) {
  std::mt19937 rng(14);
  GModel a = random_model(rng, 3, 2, test::kPQ), b = random_model(rng, 3, 2, test::kPQ);
  auto z = random_asimulation(rng, bounded_greatest(a, b, 2));
  auto back = read_asim_text(asim_to_string(z, {"generated"}));
  EXPECT_EQ(back.entries, z.entries);
  EXPECT_EQ(back.horizon, z.horizon);
  auto plain = read_asim_text("1 0 [] 0 []\n2 1 [1, 2] 0 [2,2]  # comment\n");
  EXPECT_EQ(plain.horizon, -1);
  EXPECT_EQ(plain.entries.size(), 2u);
  EXPECT_EQ(plain.effective_horizon(), 2);
  EXPECT_THROW(read_asim_text("3->1 0 [] 0 []"), ParseError);
  EXPECT_THROW(read_asim_text("1->2 0 [1] 0 []"), ParseError);
  EXPECT_THROW(read_asim_text("1->2 0 [1] 0 [1] extra"), ParseError);
  EXPECT_THROW(read_asim_text("1->2 0 1 0 [1]"), ParseError);
  EXPECT_THROW(read_asim_text("horizon: -1"), ParseError);
}
