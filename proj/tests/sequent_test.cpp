#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cdkit/sequent.hpp"
#include "test_support.hpp"

using namespace cdkit;

namespace {

ProofNode node(const std::string& rule, const std::string& seq, std::vector<std::string> prem = {}) {
  ProofNode n;
  n.id = "t";
  n.rule = rule;
  n.premises = std::move(prem);
  n.conclusion = parse_sequent(seq);
  return n;
}

RuleResult one(const ProofNode& n, std::vector<std::string> premises = {}) {
  std::vector<Sequent> ps;
  for (const auto& p : premises) ps.push_back(parse_sequent(p));
  return rule_check(n, ps);
}

bool valid_everywhere(const GModel& m, const Sequent& s) {
  Evaluator ev(m);
  for (StateMask mask : ev.forcing_table(sequent_formula(s), {"x", "y"}))
    if (!((mask >> m.base) & 1U)) return false;
  return true;
}

}  // namespace

TEST(Rules, AxiomExample) {
  EXPECT_TRUE(one(node("ax", "P(y) => P(y)")).ok);
  EXPECT_FALSE(one(node("ax", "P(y) => P(x)")).ok);
  EXPECT_FALSE(one(node("ax", "P(y), Q(y) => P(y)")).ok);
}

TEST(Rules, DAxiom) {
  EXPECT_TRUE(one(node("D", "forall x. (R(x) | S) => (forall x. R(x)) | S")).ok);
  EXPECT_TRUE(one(node("D", "forall x. (S | R(x)) => S | forall x. R(x)")).ok);
  EXPECT_TRUE(one(node("D", "forall z. (S | R(z)) => S | forall x. R(x)")).ok);  // renaming
  auto bad = one(node("D", "forall x. (R(x) | P(x)) => R(x) | forall x. P(x)"));
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.message.find("free"), std::string::npos);
  EXPECT_FALSE(one(node("D", "forall x. (R(x) | S) => (forall x. R(x)), S")).ok);
  EXPECT_FALSE(one(node("D", "forall x. (R(x) | S) => (exists x. R(x)) | S")).ok);
}

TEST(Rules, EigenvariableConditions) {
  ProofNode fr = node("forall-right", "R(x) => forall x. R(x)");
  fr.eigen = "x";
  auto r = one(fr, {"R(x) => R(x)"});
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("eigenvariable"), std::string::npos);
  ProofNode ok = node("forall-right", "Q => forall x. R(x), S");  // CD: context kept
  ok.eigen = "x";
  EXPECT_TRUE(one(ok, {"Q => R(x), S"}).ok);
  ProofNode el = node("exists-left", "exists y. P(y), Q(y) => S");
  el.eigen = "y";
  EXPECT_FALSE(one(el, {"P(y), Q(y) => S"}).ok);
  el.conclusion = parse_sequent("exists y. P(y), Q(z) => S");
  EXPECT_TRUE(one(el, {"P(y), Q(z) => S"}).ok);
  ProofNode missing = node("forall-right", "Q => forall x. R(x)");
  EXPECT_FALSE(one(missing, {"Q => R(x)"}).ok);
}

TEST(Rules, ContextHandling) {
  // imp-right drops the succedent context in the premise
  EXPECT_TRUE(one(node("imp-right", "G => S, P -> Q"), {"G, P => Q"}).ok);
  EXPECT_FALSE(one(node("imp-right", "G => S, P -> Q"), {"G, P => Q, S"}).ok);
  // neg-left keeps it
  EXPECT_TRUE(one(node("neg-left", "G, ~P => S"), {"G => S, P"}).ok);
  EXPECT_FALSE(one(node("neg-left", "G, P -> Q => S"), {"G => S, P"}).ok);
  EXPECT_TRUE(one(node("neg-right", "G => S, ~P"), {"G, P =>"}).ok);
  EXPECT_TRUE(one(node("imp-left", "P -> Q, G => S"), {"G => S, P", "Q, G => S"}).ok);
  EXPECT_TRUE(one(node("and-right", "G => P & Q, S"), {"G => P, S", "G => Q, S"}).ok);
  EXPECT_TRUE(one(node("or-right", "G => P | Q"), {"G => P, Q"}).ok);
  EXPECT_TRUE(one(node("contract", "P => Q"), {"P, P => Q"}).ok);
  EXPECT_FALSE(one(node("contract", "P => Q"), {"P, R => Q"}).ok);
  EXPECT_TRUE(one(node("weaken", "P, R => Q, S"), {"P => Q"}).ok);
  EXPECT_FALSE(one(node("weaken", "P => Q"), {"P, R => Q"}).ok);
  EXPECT_TRUE(one(node("bot-left", "bot =>")).ok);
  ProofNode er = node("exists-right", "G => exists x. P(x)");
  er.term = Term::constant(2);
  EXPECT_TRUE(one(er, {"G => P(2)"}).ok);
  ProofNode cut = node("cut", "A, B => C, D", {"l", "r"});
  cut.cut = parse("M");
  EXPECT_TRUE(one(cut, {"A => C, M", "B, M => D"}).ok);
  EXPECT_FALSE(one(cut, {"A => C", "B, M => D"}).ok);
}

TEST(Rules, UnknownRuleAndArity) {
  auto r = one(node("magic", "P => P"));
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("unknown rule"), std::string::npos);
  EXPECT_FALSE(one(node("and-left", "P & Q => P")).ok);
}

TEST(Fixture, AcceptsGammaDelta) {
  Proof p = gamma_delta_proof();
  auto r = check_proof(p, gamma_delta_sequent());
  EXPECT_TRUE(r.ok) << r.node << ": " << r.message;
  EXPECT_GE(p.nodes.size(), 30u);
  // the displayed intermediate lines appear as conclusions
  std::vector<std::string> lines{
      "P(y) & (Q(y) -> R(x)), forall x. (P(x) -> Q(x) | S) => R(x) | S",
      "forall x. exists y. (P(y) & (Q(y) -> R(x))), forall x. (P(x) -> Q(x) | S) => forall x. (R(x) | S)",
      "forall x. (R(x) | S) => forall x. R(x), S",
      "(forall x. R(x)) | S => forall x. R(x), S",
  };
  for (const auto& l : lines) {
    Sequent s = parse_sequent(l);
    bool found = false;
    for (const auto& n : p.nodes)
      found = found || detail::seq_eq(n.conclusion, s.antecedent, s.succedent);
    EXPECT_TRUE(found) << l;
  }
}

TEST(Fixture, DataFileMatchesEmbeddedText) {
  std::ifstream in(std::string(CDKIT_DATA_DIR) + "/gamma-delta.prf");
  ASSERT_TRUE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), kGammaDeltaProof);
}

TEST(Fixture, PrintParseRoundTrip) {
  Proof p = gamma_delta_proof();
  Proof q = read_proof_text(proof_to_string(p));
  ASSERT_EQ(q.nodes.size(), p.nodes.size());
  EXPECT_TRUE(check_proof(q, gamma_delta_sequent()).ok);
}

TEST(Fixture, WrongRootRejected) {
  auto r = check_proof(gamma_delta_proof(), Sequent{{delta_formula()}, {gamma_formula()}});
  EXPECT_FALSE(r.ok);
}

TEST(Mutations, RuleNameSwapsRejected) {
  const Proof base = gamma_delta_proof();
  int mutants = 0;
  for (std::size_t i = 0; i < base.nodes.size(); ++i)
    for (const auto& name : rule_names()) {
      if (name == base.nodes[i].rule) continue;
      Proof p = base;
      p.nodes[i].rule = name;
      ++mutants;
      auto r = check_proof(p, gamma_delta_sequent());
      EXPECT_FALSE(r.ok) << base.nodes[i].id << " as " << name;
      if (!r.ok) EXPECT_EQ(r.node, base.nodes[i].id);
    }
  EXPECT_GE(mutants, 20);
}

TEST(Mutations, PremiseDeletionRejectedAtThatNode) {
  const Proof base = gamma_delta_proof();
  for (std::size_t i = 0; i < base.nodes.size(); ++i)
    for (std::size_t k = 0; k < base.nodes[i].premises.size(); ++k) {
      Proof p = base;
      p.nodes[i].premises.erase(p.nodes[i].premises.begin() + static_cast<long>(k));
      auto r = check_proof(p, gamma_delta_sequent());
      EXPECT_FALSE(r.ok);
      EXPECT_EQ(r.node, base.nodes[i].id);
      EXPECT_EQ(r.path.front(), "n32");
    }
}

TEST(Mutations, DroppedFormulasRejected) {
  const Proof base = gamma_delta_proof();
  int mutants = 0;
  for (std::size_t i = 0; i < base.nodes.size(); ++i)
    for (int side = 0; side < 2; ++side) {
      const auto& fs = side ? base.nodes[i].conclusion.succedent : base.nodes[i].conclusion.antecedent;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        Proof p = base;
        auto& target = side ? p.nodes[i].conclusion.succedent : p.nodes[i].conclusion.antecedent;
        target.erase(target.begin() + static_cast<long>(k));
        ++mutants;
        EXPECT_FALSE(check_proof(p, gamma_delta_sequent()).ok) << base.nodes[i].id;
      }
    }
  EXPECT_GE(mutants, 20);
}

TEST(Mutations, DWithFreeVariableRejected) {
  std::string text = kGammaDeltaProof;
  const std::string from = "n22: D :: forall x. (R(x) | S) => (forall x. R(x)) | S";
  const std::string to = "n22: D :: forall x. (R(x) | P(x)) => (forall x. R(x)) | P(x)";
  ASSERT_NE(text.find(from), std::string::npos);
  text.replace(text.find(from), from.size(), to);
  auto r = check_proof(read_proof_text(text), gamma_delta_sequent());
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.node, "n22");
  EXPECT_NE(r.message.find("free"), std::string::npos);
}

TEST(Mutations, WrongTermsAndCutsRejected) {
  const Proof base = gamma_delta_proof();
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    Proof p = base;
    auto& n = p.nodes[i];
    if (n.term) n.term = Term::var("z");
    else if (n.eigen) n.eigen = "z";
    else if (n.cut) n.cut = parse("S");
    else continue;
    EXPECT_FALSE(check_proof(p, gamma_delta_sequent()).ok) << n.id;
  }
}

TEST(Soundness, EveryFixtureSequentHoldsOnRandomModels) {
  const Proof p = gamma_delta_proof();
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    GModel m = random_model(rng, 4, 3, test::kPQRS, 0.4, 0.35);
    for (const auto& n : p.nodes) EXPECT_TRUE(valid_everywhere(m, n.conclusion)) << n.id << "\n" << model_to_string(m);
  }
}

TEST(Soundness, DAxiomOnAllSmallModels) {
  Sequent d = parse_sequent("forall x. (P(x) | S) => (forall x. P(x)) | S");
  for (const auto& m : enumerate_models(2, 2, {{"P", 1}, {"S", 0}})) EXPECT_TRUE(valid_everywhere(m, d));
}

TEST(Format, Errors) {
  EXPECT_THROW(read_proof_text("n1 ax P => P"), ParseError);
  EXPECT_THROW(read_proof_text("n1: ax {bogus 1} :: P => P"), ParseError);
  EXPECT_THROW(read_proof_text("n1: ax :: P -> => P"), ParseError);
  EXPECT_THROW(read_proof_text("n1: ax :: P, , Q => P"), ParseError);
  EXPECT_THROW(read_proof_text("n1: forall-left {term x y} :: P => P"), ParseError);
  auto dup = read_proof_text("n1: ax :: P => P\nn1: ax :: Q => Q\n");
  EXPECT_FALSE(check_proof(dup).ok);
  auto cyc = read_proof_text("n1: weaken n2 :: P => P\nn2: weaken n1 :: P => P\nroot n1\n");
  auto r = check_proof(cyc);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("cycle"), std::string::npos);
  EXPECT_FALSE(check_proof(read_proof_text("n1: weaken n9 :: P => P")).ok);
}
