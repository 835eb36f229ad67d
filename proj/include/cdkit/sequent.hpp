#pragma once

// Multiple-succedent sequent calculus for CD and a line-based proof format.
//
// Sequents are pairs of multisets compared up to renaming of bound variables. Rules:
//   ax            A => A
//   bot-left      bot =>
//   D             forall x.(A | B) => A | forall x.B      (x not free in A; mirrored form too)
//   weaken        premise sides are sub-multisets of the conclusion's
//   contract      premise has one extra copy of a formula already in the conclusion
//   and-left/right, or-left/right, imp-left, exists-right, forall-left   (context kept)
//   imp-right     G, A => B  /  G => D, A -> B            (premise succedent is B alone)
//   neg-left      G => D, A  /  G, A -> bot => D
//   neg-right     G, A =>    /  G => D, A -> bot
//   forall-right  G => D, A[y/x]  /  G => D, forall x.A   (y not free below; CD form)
//   exists-left   G, A[y/x] => D  /  G, exists x.A => D   (y not free below)
//   cut           G1 => D1, C   and   G2, C => D2   /   G1, G2 => D1, D2
//
// File format, one record per line ('#' starts a comment):
//   abbrev NAME = FORMULA
//   ID: RULE [PREMISE-ID ...] [{term T}] [{eigen V}] [{cut FORMULA}] [{principal FORMULA}] :: ANTE => SUCC
//   root ID
// Abbreviations are nullary atoms replaced by their formula. Sides are comma-separated.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/conditions.hpp"
#include "cdkit/kripke.hpp"
#include "cdkit/syntax.hpp"

namespace cdkit {

struct Sequent {
  std::vector<Formula> antecedent;
  std::vector<Formula> succedent;
};

struct ProofNode {
  std::string id;
  std::string rule;
  std::vector<std::string> premises;
  Sequent conclusion;
  std::optional<Formula> principal;
  std::optional<Formula> cut;
  std::optional<Term> term;
  std::optional<std::string> eigen;
  std::size_t line = 0;
};

struct Proof {
  std::vector<ProofNode> nodes;
  std::string root;  // empty: the last node
  std::map<std::string, Formula> abbreviations;

  const ProofNode* find(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const ProofNode& root_node() const {
    if (nodes.empty()) throw std::invalid_argument("empty proof");
    const ProofNode* r = root.empty() ? &nodes.back() : find(root);
    if (!r) throw std::invalid_argument("unknown root " + root);
    return *r;
  }
};

inline const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names{
      "ax",        "bot-left",  "D",         "weaken",   "contract",     "and-left",    "and-right",
      "or-left",   "or-right",  "imp-left",  "imp-right", "neg-left",    "neg-right",   "forall-left",
      "forall-right", "exists-left", "exists-right", "cut"};
  return names;
}

inline std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) out += (i ? ", " : "") + to_string(s.antecedent[i]);
  out += s.antecedent.empty() ? "=>" : " =>";
  for (std::size_t i = 0; i < s.succedent.size(); ++i) out += (i ? ", " : " ") + to_string(s.succedent[i]);
  return out;
}

/// The formula a sequent asserts: conjunction of the antecedent implies disjunction of the succedent.
inline Formula sequent_formula(const Sequent& s) {
  Formula lhs, rhs;
  bool have_l = false, have_r = false;
  for (const auto& f : s.antecedent) {
    lhs = have_l ? Formula::conj(lhs, f) : f;
    have_l = true;
  }
  for (const auto& f : s.succedent) {
    rhs = have_r ? Formula::disj(rhs, f) : f;
    have_r = true;
  }
  if (!have_l) lhs = Formula::implies(Formula::falsum(), Formula::falsum());
  return Formula::implies(lhs, rhs);  // empty succedent: rhs is bot
}

namespace detail {

// Multisets of formulas up to alpha-equivalence.
using Bag = std::vector<Formula>;

inline Bag bag(const std::vector<Formula>& fs) {
  Bag out;
  for (const auto& f : fs) out.push_back(alpha_normalize(f));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool bag_eq(const std::vector<Formula>& a, const std::vector<Formula>& b) { return bag(a) == bag(b); }

inline std::optional<std::vector<Formula>> minus(std::vector<Formula> fs, const Formula& f) {
  auto it = std::find_if(fs.begin(), fs.end(), [&](const Formula& g) { return alpha_equal(f, g); });
  if (it == fs.end()) return std::nullopt;
  fs.erase(it);
  return fs;
}

inline std::vector<Formula> plus(std::vector<Formula> fs, std::initializer_list<Formula> extra) {
  fs.insert(fs.end(), extra.begin(), extra.end());
  return fs;
}

inline bool sub_bag(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  Bag x = bag(a), y = bag(b);
  return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

inline bool seq_eq(const Sequent& a, const std::vector<Formula>& ante, const std::vector<Formula>& succ) {
  return bag_eq(a.antecedent, ante) && bag_eq(a.succedent, succ);
}

inline std::set<std::string> free_in(const Sequent& s) {
  std::set<std::string> out;
  for (const auto* side : {&s.antecedent, &s.succedent})
    for (const auto& f : *side)
      for (const auto& v : free_vars(f)) out.insert(v);
  return out;
}

// Candidate principal formulas: the given one (if it occurs) or every formula of the side
// with the right main connective.
inline std::vector<Formula> candidates(const std::vector<Formula>& side, Op op, const std::optional<Formula>& given) {
  std::vector<Formula> out;
  for (const auto& f : side)
    if (f.op() == op && (!given || alpha_equal(*given, f))) out.push_back(f);
  return out;
}

inline bool is_negation(const Formula& f) { return f.op() == Op::Implies && f.rhs().op() == Op::Falsum; }

}  // namespace detail

struct RuleResult {
  bool ok = true;
  std::string message;
  static RuleResult pass() { return {}; }
  static RuleResult fail(std::string m) { return {false, std::move(m)}; }
};

/// Checks one inference: the node's conclusion against its rule applied to the given premises.
inline RuleResult rule_check(const ProofNode& node, const std::vector<Sequent>& prem) {
  using namespace detail;
  const auto& rules = rule_names();
  if (std::find(rules.begin(), rules.end(), node.rule) == rules.end())
    return RuleResult::fail("unknown rule '" + node.rule + "'");
  const Sequent& c = node.conclusion;
  const auto& G = c.antecedent;
  const auto& D = c.succedent;
  auto arity = [&](std::size_t k) -> std::optional<RuleResult> {
    if (prem.size() != k)
      return RuleResult::fail(node.rule + " takes " + std::to_string(k) + " premise(s), got " + std::to_string(prem.size()));
    return std::nullopt;
  };
  auto mismatch = [&]() { return RuleResult::fail(node.rule + ": conclusion does not match the rule schema"); };
  const std::string& r = node.rule;

  if (r == "ax") {
    if (auto e = arity(0)) return *e;
    if (G.size() == 1 && D.size() == 1 && alpha_equal(G[0], D[0])) return RuleResult::pass();
    return mismatch();
  }
  if (r == "bot-left") {
    if (auto e = arity(0)) return *e;
    if (G.size() == 1 && D.empty() && G[0].op() == Op::Falsum) return RuleResult::pass();
    return mismatch();
  }
  if (r == "D") {
    if (auto e = arity(0)) return *e;
    if (G.size() != 1 || D.size() != 1 || G[0].op() != Op::Forall || G[0].body().op() != Op::Or || D[0].op() != Op::Or)
      return mismatch();
    const std::string& x = G[0].variable();
    const Formula& l = G[0].body().lhs();
    const Formula& rr = G[0].body().rhs();
    // forall x.(A | B) => A | forall x.B, or the mirror forall x.(B | A) => forall x.B | A
    Formula plain = Formula::disj(l, Formula::forall(x, rr));
    Formula mirror = Formula::disj(Formula::forall(x, l), rr);
    if (alpha_equal(D[0], plain)) {
      if (free_vars(l).contains(x)) return RuleResult::fail("D: " + x + " occurs free in " + to_string(l));
      return RuleResult::pass();
    }
    if (alpha_equal(D[0], mirror)) {
      if (free_vars(rr).contains(x)) return RuleResult::fail("D: " + x + " occurs free in " + to_string(rr));
      return RuleResult::pass();
    }
    return mismatch();
  }
  if (r == "weaken") {
    if (auto e = arity(1)) return *e;
    if (sub_bag(prem[0].antecedent, G) && sub_bag(prem[0].succedent, D)) return RuleResult::pass();
    return mismatch();
  }
  if (r == "contract") {
    if (auto e = arity(1)) return *e;
    for (const auto& f : G)
      if (seq_eq(prem[0], plus(G, {f}), D)) return RuleResult::pass();
    for (const auto& f : D)
      if (seq_eq(prem[0], G, plus(D, {f}))) return RuleResult::pass();
    return mismatch();
  }
  if (r == "cut") {
    if (auto e = arity(2)) return *e;
    if (!node.cut) return RuleResult::fail("cut: missing {cut FORMULA}");
    auto d1 = minus(prem[0].succedent, *node.cut);
    auto g2 = minus(prem[1].antecedent, *node.cut);
    if (!d1 || !g2) return RuleResult::fail("cut: cut formula missing from a premise");
    std::vector<Formula> ante = prem[0].antecedent, succ = *d1;
    ante.insert(ante.end(), g2->begin(), g2->end());
    succ.insert(succ.end(), prem[1].succedent.begin(), prem[1].succedent.end());
    if (seq_eq(c, ante, succ)) return RuleResult::pass();
    return mismatch();
  }

  // Logical rules: try each candidate principal formula.
  struct Shape {
    bool left;
    Op op;
    std::size_t premises;
  };
  static const std::map<std::string, Shape> shapes{
      {"and-left", {true, Op::And, 1}},      {"and-right", {false, Op::And, 2}},
      {"or-left", {true, Op::Or, 2}},        {"or-right", {false, Op::Or, 1}},
      {"imp-left", {true, Op::Implies, 2}},  {"imp-right", {false, Op::Implies, 1}},
      {"neg-left", {true, Op::Implies, 1}},  {"neg-right", {false, Op::Implies, 1}},
      {"forall-left", {true, Op::Forall, 1}}, {"forall-right", {false, Op::Forall, 1}},
      {"exists-left", {true, Op::Exists, 1}}, {"exists-right", {false, Op::Exists, 1}}};
  const Shape& sh = shapes.at(r);
  if (auto e = arity(sh.premises)) return *e;
  if ((r == "forall-left" || r == "exists-right") && !node.term) return RuleResult::fail(r + ": missing {term T}");
  if ((r == "forall-right" || r == "exists-left") && !node.eigen) return RuleResult::fail(r + ": missing {eigen V}");
  auto cands = candidates(sh.left ? G : D, sh.op, node.principal);
  if (cands.empty()) return RuleResult::fail(r + ": no principal formula of the right shape in the conclusion");
  std::string eigen_error;
  for (const auto& p : cands) {
    const auto rest = *minus(sh.left ? G : D, p);
    const auto& GG = sh.left ? rest : G;
    const auto& DD = sh.left ? D : rest;
    bool ok = false;
    if (r == "and-left") {
      ok = seq_eq(prem[0], plus(GG, {p.lhs(), p.rhs()}), D);
    } else if (r == "and-right") {
      ok = seq_eq(prem[0], G, plus(DD, {p.lhs()})) && seq_eq(prem[1], G, plus(DD, {p.rhs()}));
    } else if (r == "or-left") {
      ok = seq_eq(prem[0], plus(GG, {p.lhs()}), D) && seq_eq(prem[1], plus(GG, {p.rhs()}), D);
    } else if (r == "or-right") {
      ok = seq_eq(prem[0], G, plus(DD, {p.lhs(), p.rhs()}));
    } else if (r == "imp-left") {
      ok = seq_eq(prem[0], GG, plus(D, {p.lhs()})) && seq_eq(prem[1], plus(GG, {p.rhs()}), D);
    } else if (r == "imp-right") {
      ok = seq_eq(prem[0], plus(G, {p.lhs()}), {p.rhs()});
    } else if (r == "neg-left") {
      ok = is_negation(p) && seq_eq(prem[0], GG, plus(D, {p.lhs()}));
    } else if (r == "neg-right") {
      ok = is_negation(p) && seq_eq(prem[0], plus(G, {p.lhs()}), {});
    } else if (r == "forall-left") {
      ok = seq_eq(prem[0], plus(GG, {substitute(p.body(), p.variable(), *node.term)}), D);
    } else if (r == "exists-right") {
      ok = seq_eq(prem[0], G, plus(DD, {substitute(p.body(), p.variable(), *node.term)}));
    } else if (r == "forall-right" || r == "exists-left") {
      Formula inst = substitute(p.body(), p.variable(), Term::var(*node.eigen));
      ok = sh.left ? seq_eq(prem[0], plus(GG, {inst}), D) : seq_eq(prem[0], G, plus(DD, {inst}));
      if (ok && free_in(c).contains(*node.eigen)) {
        eigen_error = r + ": eigenvariable " + *node.eigen + " occurs free in the conclusion";
        ok = false;
      }
    }
    if (ok) return RuleResult::pass();
  }
  if (!eigen_error.empty()) return RuleResult::fail(eigen_error);
  return mismatch();
}

struct ProofCheck {
  bool ok = true;
  std::string node;               // failing node id
  std::vector<std::string> path;  // root ... failing node
  std::string message;
};

/// Checks every node reachable from the root, and that the root proves `expected` when given.
inline ProofCheck check_proof(const Proof& p, const std::optional<Sequent>& expected = std::nullopt) {
  ProofCheck out;
  if (p.nodes.empty()) return {false, "", {}, "empty proof"};
  std::set<std::string> ids;
  for (const auto& n : p.nodes)
    if (!ids.insert(n.id).second) return {false, n.id, {n.id}, "duplicate node id " + n.id};
  const ProofNode* root = p.root.empty() ? &p.nodes.back() : p.find(p.root);
  if (!root) return {false, p.root, {}, "unknown root " + p.root};
  if (expected && !detail::seq_eq(root->conclusion, expected->antecedent, expected->succedent))
    return {false, root->id, {root->id}, "root proves " + to_string(root->conclusion) + ", expected " + to_string(*expected)};
  std::set<std::string> done, on_path;
  std::vector<std::string> path;
  auto visit = [&](auto&& self, const ProofNode& n) -> bool {
    path.push_back(n.id);
    if (on_path.contains(n.id)) {
      out = {false, n.id, path, "cycle through " + n.id};
      return false;
    }
    if (!done.contains(n.id)) {
      on_path.insert(n.id);
      std::vector<Sequent> prem;
      for (const auto& pid : n.premises) {
        const ProofNode* q = p.find(pid);
        if (!q) {
          out = {false, n.id, path, "unknown premise " + pid};
          return false;
        }
        if (!self(self, *q)) return false;
        prem.push_back(q->conclusion);
      }
      RuleResult r = rule_check(n, prem);
      if (!r.ok) {
        out = {false, n.id, path, r.message};
        return false;
      }
      on_path.erase(n.id);
      done.insert(n.id);
    }
    path.pop_back();
    return true;
  };
  visit(visit, *root);
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline Formula expand_abbreviations(const Formula& f, const std::map<std::string, Formula>& abbrevs) {
  switch (f.op()) {
    case Op::Falsum:
      return f;
    case Op::Atom: {
      auto it = abbrevs.find(f.predicate());
      return (it != abbrevs.end() && f.args().empty()) ? it->second : f;
    }
    case Op::And:
      return Formula::conj(expand_abbreviations(f.lhs(), abbrevs), expand_abbreviations(f.rhs(), abbrevs));
    case Op::Or:
      return Formula::disj(expand_abbreviations(f.lhs(), abbrevs), expand_abbreviations(f.rhs(), abbrevs));
    case Op::Implies:
      return Formula::implies(expand_abbreviations(f.lhs(), abbrevs), expand_abbreviations(f.rhs(), abbrevs));
    case Op::Forall:
      return Formula::forall(f.variable(), expand_abbreviations(f.body(), abbrevs));
    case Op::Exists:
      return Formula::exists(f.variable(), expand_abbreviations(f.body(), abbrevs));
  }
  return f;
}

inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline Formula parse_with(const std::string& text, const std::map<std::string, Formula>& abbrevs) {
  return detail::expand_abbreviations(parse(text), abbrevs);
}

/// Parses "A, B => C, D" (either side may be empty).
inline Sequent parse_sequent(const std::string& text, const std::map<std::string, Formula>& abbrevs = {}) {
  auto arrow = text.find("=>");
  if (arrow == std::string::npos) throw ParseError("sequent: missing '=>'", 0);
  Sequent s;
  auto side = [&](const std::string& part, std::vector<Formula>& out, std::size_t offset) {
    if (detail::trim(part).empty()) return;
    for (const auto& item : detail::split_top_level(part, ',')) {
      if (detail::trim(item).empty()) throw ParseError("sequent: empty formula", offset);
      out.push_back(parse_with(item, abbrevs));
    }
  };
  side(text.substr(0, arrow), s.antecedent, 0);
  side(text.substr(arrow + 2), s.succedent, arrow + 2);
  return s;
}

inline Term parse_term(const std::string& text, std::size_t line) {
  std::string t = detail::trim(text);
  if (t.empty()) throw ParseError("proof: empty term on line " + std::to_string(line), line);
  if (std::isdigit(static_cast<unsigned char>(t[0]))) return Term::constant(detail::parse_int(t, line));
  for (char ch : t)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
      throw ParseError("proof: bad term '" + t + "' on line " + std::to_string(line), line);
  return Term::var(t);
}

inline Proof read_proof(std::istream& in) {
  Proof p;
  std::string raw;
  std::size_t ln = 0;
  auto err = [&](const std::string& m) { return ParseError("proof: " + m + " on line " + std::to_string(ln), ln); };
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = raw;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.rfind("abbrev ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw err("expected 'abbrev NAME = FORMULA'");
      std::string name = detail::trim(line.substr(7, eq - 7));
      if (name.empty()) throw err("missing abbreviation name");
      try {
        p.abbreviations[name] = parse_with(line.substr(eq + 1), p.abbreviations);
      } catch (const ParseError& e) {
        throw err(e.what());
      }
      continue;
    }
    if (line.rfind("root ", 0) == 0) {
      p.root = detail::trim(line.substr(5));
      continue;
    }
    auto colon = line.find(':');
    auto sep = line.find("::");
    if (colon == std::string::npos || sep == std::string::npos || colon >= sep) throw err("expected 'ID: RULE ... :: SEQUENT'");
    ProofNode n;
    n.line = ln;
    n.id = detail::trim(line.substr(0, colon));
    if (n.id.empty()) throw err("missing node id");
    std::string head = line.substr(colon + 1, sep - colon - 1);
    // pull out {key value} groups
    std::string words;
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (head[i] != '{') {
        words += head[i];
        continue;
      }
      auto close = head.find('}', i);
      if (close == std::string::npos) throw err("unclosed '{'");
      std::string group = detail::trim(head.substr(i + 1, close - i - 1));
      auto sp = group.find(' ');
      std::string key = group.substr(0, sp), value = sp == std::string::npos ? "" : group.substr(sp + 1);
      try {
        if (key == "term")
          n.term = parse_term(value, ln);
        else if (key == "eigen")
          n.eigen = parse_term(value, ln).name;
        else if (key == "cut")
          n.cut = parse_with(value, p.abbreviations);
        else if (key == "principal")
          n.principal = parse_with(value, p.abbreviations);
        else
          throw err("unknown key '" + key + "'");
      } catch (const ParseError& e) {
        throw err(e.what());
      }
      i = close;
    }
    std::istringstream ws(words);
    if (!(ws >> n.rule)) throw err("missing rule name");
    for (std::string id; ws >> id;) n.premises.push_back(id);
    try {
      n.conclusion = parse_sequent(line.substr(sep + 2), p.abbreviations);
    } catch (const ParseError& e) {
      throw err(e.what());
    }
    p.nodes.push_back(std::move(n));
  }
  return p;
}

inline Proof read_proof_text(const std::string& text) {
  std::istringstream in(text);
  return read_proof(in);
}

inline std::string proof_to_string(const Proof& p) {
  std::ostringstream out;
  for (const auto& [name, f] : p.abbreviations) out << "abbrev " << name << " = " << to_string(f) << "\n";
  for (const auto& n : p.nodes) {
    out << n.id << ": " << n.rule;
    for (const auto& q : n.premises) out << " " << q;
    if (n.term) out << " {term " << to_string(*n.term) << "}";
    if (n.eigen) out << " {eigen " << *n.eigen << "}";
    if (n.cut) out << " {cut " << to_string(*n.cut) << "}";
    if (n.principal) out << " {principal " << to_string(*n.principal) << "}";
    out << " :: " << to_string(n.conclusion) << "\n";
  }
  if (!p.root.empty()) out << "root " << p.root << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// The bundled derivation of Gamma => Delta. The first block derives the intuitionistic
// core beta, alpha => forall x.(R(x) | S); the second cuts it against an instance of D.

inline constexpr const char* kGammaDeltaProof = R"(# Gamma => Delta in the multiple-succedent calculus for CD
abbrev alpha = forall x. (P(x) -> Q(x) | S)
abbrev beta = forall x. exists y. (P(y) & (Q(y) -> R(x)))
abbrev gamma = beta & ~(forall x. R(x))
abbrev delta = alpha -> S

# (Qy -> Rx), Qy => Rx | S
n1: ax :: Q(y) => Q(y)
n2: weaken n1 :: Q(y) => Q(y), R(x) | S
n3: ax :: R(x) => R(x)
n4: weaken n3 :: R(x) => R(x), S
n5: or-right n4 :: R(x) => R(x) | S
n6: weaken n5 :: Q(y), R(x) => R(x) | S
n7: imp-left n2 n6 :: Q(y) -> R(x), Q(y) => R(x) | S

# S => Rx | S
n8: ax :: S => S
n9: weaken n8 :: S => R(x), S
n10: or-right n9 :: S => R(x) | S
n11: weaken n10 :: Q(y) -> R(x), S => R(x) | S

n12: or-left n7 n11 :: Q(y) -> R(x), Q(y) | S => R(x) | S
n13: ax :: P(y) => P(y)
n14: weaken n13 :: P(y), Q(y) -> R(x) => R(x) | S, P(y)
n15: weaken n12 :: P(y), Q(y) -> R(x), Q(y) | S => R(x) | S
n16: imp-left n14 n15 :: P(y), Q(y) -> R(x), P(y) -> Q(y) | S => R(x) | S
n17: and-left n16 :: P(y) & (Q(y) -> R(x)), P(y) -> Q(y) | S => R(x) | S
n18: forall-left n17 {term y} :: P(y) & (Q(y) -> R(x)), alpha => R(x) | S
n19: exists-left n18 {eigen y} :: exists y. (P(y) & (Q(y) -> R(x))), alpha => R(x) | S
n20: forall-left n19 {term x} :: beta, alpha => R(x) | S
n21: forall-right n20 {eigen x} :: beta, alpha => forall x. (R(x) | S)

# D, then cut
n22: D :: forall x. (R(x) | S) => (forall x. R(x)) | S
n23: ax :: forall x. R(x) => forall x. R(x)
n24: weaken n23 :: forall x. R(x) => forall x. R(x), S
n25: ax :: S => S
n26: weaken n25 :: S => forall x. R(x), S
n27: or-left n24 n26 :: (forall x. R(x)) | S => forall x. R(x), S
n28: cut n22 n27 {cut (forall x. R(x)) | S} :: forall x. (R(x) | S) => forall x. R(x), S
n29: cut n21 n28 {cut forall x. (R(x) | S)} :: beta, alpha => forall x. R(x), S
n30: neg-left n29 :: beta, ~(forall x. R(x)), alpha => S
n31: and-left n30 :: gamma, alpha => S
n32: imp-right n31 :: gamma => delta
root n32
)";

inline Proof gamma_delta_proof() { return read_proof_text(kGammaDeltaProof); }

inline Sequent gamma_delta_sequent() { return {{gamma_formula()}, {delta_formula()}}; }

/// True when every instance of the sequent (free variables ranging over the domain) is
/// forced at the base.
inline bool sequent_valid_at_base(const GModel& m, const Sequent& s) {
  const Formula f = sequent_formula(s);
  const std::set<std::string> fv = free_vars(f);
  Evaluator ev(m);
  for (StateMask mask : ev.forcing_table(f, {fv.begin(), fv.end()}))
    if (!((mask >> m.base) & 1U)) return false;
  return true;
}

struct ProofMutant {
  Proof proof;
  std::string node;  // id of the changed node
  std::string change;
};

/// Single-node mutations of a proof: rule renames, premise deletions, dropped conclusion
/// formulas and replaced term / eigenvariable / cut annotations.
inline std::vector<ProofMutant> single_node_mutations(const Proof& base) {
  std::vector<ProofMutant> out;
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    const ProofNode& n = base.nodes[i];
    for (const auto& name : rule_names()) {
      if (name == n.rule) continue;
      Proof p = base;
      p.nodes[i].rule = name;
      out.push_back({std::move(p), n.id, "rule " + n.rule + " -> " + name});
    }
    for (std::size_t k = 0; k < n.premises.size(); ++k) {
      Proof p = base;
      p.nodes[i].premises.erase(p.nodes[i].premises.begin() + static_cast<long>(k));
      out.push_back({std::move(p), n.id, "premise " + n.premises[k] + " deleted"});
    }
    for (int side = 0; side < 2; ++side) {
      const auto& fs = side ? n.conclusion.succedent : n.conclusion.antecedent;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        Proof p = base;
        auto& target = side ? p.nodes[i].conclusion.succedent : p.nodes[i].conclusion.antecedent;
        target.erase(target.begin() + static_cast<long>(k));
        out.push_back({std::move(p), n.id, std::string(side ? "succedent" : "antecedent") + " formula dropped: " + to_string(fs[k])});
      }
    }
    Proof p = base;
    auto& m = p.nodes[i];
    if (m.term) {
      m.term = Term::var("z");
      out.push_back({std::move(p), n.id, "term -> z"});
    } else if (m.eigen) {
      m.eigen = "z";
      out.push_back({std::move(p), n.id, "eigenvariable -> z"});
    } else if (m.cut) {
      m.cut = parse("S");
      out.push_back({std::move(p), n.id, "cut formula -> S"});
    }
  }
  return out;
}

}  // namespace cdkit
