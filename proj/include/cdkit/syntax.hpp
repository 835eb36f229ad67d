#pragma once

// First-order formulas over the connectives &, |, ->, bot and the
// quantifiers forall/exists. Negation is sugar for A -> bot.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdkit {

/// Thrown for malformed input text (formulas, models, relations, proofs).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A variable or a domain constant. Constants name domain elements and are >= 1.
struct Term {
  enum class Kind : unsigned char { Var, Const };

  Kind kind = Kind::Var;
  std::string name;
  int value = 0;

  static Term var(std::string n) { return Term{Kind::Var, std::move(n), 0}; }
  static Term constant(int v) {
    if (v < 1) throw std::invalid_argument("domain constants must be >= 1");
    return Term{Kind::Const, {}, v};
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_const() const { return kind == Kind::Const; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Op : unsigned char { Atom, Falsum, And, Or, Implies, Forall, Exists };

/// Immutable formula value with shared subterms.
class Formula {
 public:
  Formula();  // bot

  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula falsum();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula negation(Formula a) { return implies(std::move(a), falsum()); }
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Op op() const;
  const std::string& predicate() const;  // Atom
  const std::vector<Term>& args() const;  // Atom
  const std::string& variable() const;    // Forall / Exists
  const Formula& lhs() const;             // And / Or / Implies
  const Formula& rhs() const;
  const Formula& body() const;  // Forall / Exists

  bool is_atom() const { return op() == Op::Atom; }
  bool is_quantifier() const { return op() == Op::Forall || op() == Op::Exists; }
  bool is_binary() const { return op() == Op::And || op() == Op::Or || op() == Op::Implies; }
  bool is_negation() const { return op() == Op::Implies && rhs().op() == Op::Falsum; }

  /// Structural comparison; bound-variable names are significant.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op = Op::Falsum;
  std::string name;  // predicate or bound variable
  std::vector<Term> args;
  Formula left;
  Formula right;
};

// ---------------------------------------------------------------------------
// Construction and access

inline Formula::Formula() : node_(nullptr) {}

inline Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->name = std::move(predicate);
  n->args = std::move(args);
  return Formula(std::move(n));
}

inline Formula Formula::falsum() { return Formula(); }

inline Formula Formula::conj(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  n->left = std::move(a);
  n->right = std::move(b);
  return Formula(std::move(n));
}

inline Formula Formula::disj(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  n->left = std::move(a);
  n->right = std::move(b);
  return Formula(std::move(n));
}

inline Formula Formula::implies(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  n->left = std::move(a);
  n->right = std::move(b);
  return Formula(std::move(n));
}

inline Formula Formula::forall(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->op = Op::Forall;
  n->name = std::move(var);
  n->left = std::move(body);
  return Formula(std::move(n));
}

inline Formula Formula::exists(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->op = Op::Exists;
  n->name = std::move(var);
  n->left = std::move(body);
  return Formula(std::move(n));
}

inline Op Formula::op() const { return node_ ? node_->op : Op::Falsum; }

inline const std::string& Formula::predicate() const {
  if (op() != Op::Atom) throw std::logic_error("predicate() on non-atom");
  return node_->name;
}

inline const std::vector<Term>& Formula::args() const {
  if (op() != Op::Atom) throw std::logic_error("args() on non-atom");
  return node_->args;
}

inline const std::string& Formula::variable() const {
  if (!is_quantifier()) throw std::logic_error("variable() on non-quantifier");
  return node_->name;
}

inline const Formula& Formula::lhs() const {
  if (!is_binary()) throw std::logic_error("lhs() on non-binary formula");
  return node_->left;
}

inline const Formula& Formula::rhs() const {
  if (!is_binary()) throw std::logic_error("rhs() on non-binary formula");
  return node_->right;
}

inline const Formula& Formula::body() const {
  if (!is_quantifier()) throw std::logic_error("body() on non-quantifier");
  return node_->left;
}

inline std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  switch (a.op()) {
    case Op::Falsum:
      return std::strong_ordering::equal;
    case Op::Atom:
      if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
      return a.node_->args <=> b.node_->args;
    case Op::Forall:
    case Op::Exists:
      if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
      return a.body() <=> b.body();
    default:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Analysis

namespace detail {

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Falsum:
      return;
    case Op::Atom:
      for (const auto& t : f.args())
        if (t.is_var() && !bound.contains(t.name)) out.insert(t.name);
      return;
    case Op::Forall:
    case Op::Exists: {
      bool fresh = bound.insert(f.variable()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.variable());
      return;
    }
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
  }
}

inline void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Falsum:
      return;
    case Op::Atom:
      for (const auto& t : f.args())
        if (t.is_var()) out.insert(t.name);
      return;
    case Op::Forall:
    case Op::Exists:
      out.insert(f.variable());
      collect_names(f.body(), out);
      return;
    default:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  detail::collect_free(f, bound, out);
  return out;
}

/// Every variable name occurring in f, bound or free.
inline std::set<std::string> variable_names(const Formula& f) {
  std::set<std::string> out;
  detail::collect_names(f, out);
  return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

inline int quantifier_rank(const Formula& f) {
  switch (f.op()) {
    case Op::Falsum:
    case Op::Atom:
      return 0;
    case Op::Forall:
    case Op::Exists:
      return 1 + quantifier_rank(f.body());
    default:
      return std::max(quantifier_rank(f.lhs()), quantifier_rank(f.rhs()));
  }
}

/// Number of AST nodes; atoms and bot count one each.
inline int formula_size(const Formula& f) {
  switch (f.op()) {
    case Op::Falsum:
    case Op::Atom:
      return 1;
    case Op::Forall:
    case Op::Exists:
      return 1 + formula_size(f.body());
    default:
      return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
  }
}

/// Predicate symbols with their arities. Throws std::invalid_argument on an arity clash.
inline std::map<std::string, int> predicates(const Formula& f) {
  std::map<std::string, int> out;
  auto walk = [&out](auto&& self, const Formula& g) -> void {
    switch (g.op()) {
      case Op::Falsum:
        return;
      case Op::Atom: {
        auto [it, inserted] = out.emplace(g.predicate(), static_cast<int>(g.args().size()));
        if (!inserted && it->second != static_cast<int>(g.args().size()))
          throw std::invalid_argument("arity clash for predicate " + g.predicate());
        return;
      }
      case Op::Forall:
      case Op::Exists:
        self(self, g.body());
        return;
      default:
        self(self, g.lhs());
        self(self, g.rhs());
    }
  };
  walk(walk, f);
  return out;
}

/// Domain constants occurring in f.
inline std::set<int> constants(const Formula& f) {
  std::set<int> out;
  auto walk = [&out](auto&& self, const Formula& g) -> void {
    switch (g.op()) {
      case Op::Falsum:
        return;
      case Op::Atom:
        for (const auto& t : g.args())
          if (t.is_const()) out.insert(t.value);
        return;
      case Op::Forall:
      case Op::Exists:
        self(self, g.body());
        return;
      default:
        self(self, g.lhs());
        self(self, g.rhs());
    }
  };
  walk(walk, f);
  return out;
}

inline bool in_language(const Formula& f, const std::set<std::string>& preds) {
  for (const auto& [name, arity] : predicates(f))
    if (!preds.contains(name)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Renaming and substitution

/// Deterministic fresh name: base_1, base_2, ... skipping anything in `avoid`.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  if (auto pos = stem.rfind('_'); pos != std::string::npos && pos + 1 < stem.size() &&
                                  stem.find_first_not_of("0123456789", pos + 1) == std::string::npos)
    stem.erase(pos);
  for (int k = 1;; ++k) {
    std::string candidate = stem + "_" + std::to_string(k);
    if (!avoid.contains(candidate)) return candidate;
  }
}

namespace detail {

inline Formula rename_free(const Formula& f, const std::string& from, const std::string& to) {
  switch (f.op()) {
    case Op::Falsum:
      return f;
    case Op::Atom: {
      bool hit = false;
      std::vector<Term> args = f.args();
      for (auto& t : args)
        if (t.is_var() && t.name == from) {
          t.name = to;
          hit = true;
        }
      return hit ? Formula::atom(f.predicate(), std::move(args)) : f;
    }
    case Op::Forall:
    case Op::Exists: {
      if (f.variable() == from) return f;
      Formula b = rename_free(f.body(), from, to);
      return f.op() == Op::Forall ? Formula::forall(f.variable(), std::move(b))
                                  : Formula::exists(f.variable(), std::move(b));
    }
    case Op::And:
      return Formula::conj(rename_free(f.lhs(), from, to), rename_free(f.rhs(), from, to));
    case Op::Or:
      return Formula::disj(rename_free(f.lhs(), from, to), rename_free(f.rhs(), from, to));
    case Op::Implies:
      return Formula::implies(rename_free(f.lhs(), from, to), rename_free(f.rhs(), from, to));
  }
  return f;
}

inline Formula rebuild_binary(const Formula& f, Formula l, Formula r) {
  switch (f.op()) {
    case Op::And:
      return Formula::conj(std::move(l), std::move(r));
    case Op::Or:
      return Formula::disj(std::move(l), std::move(r));
    default:
      return Formula::implies(std::move(l), std::move(r));
  }
}

inline Formula rebuild_quantifier(const Formula& f, std::string var, Formula body) {
  return f.op() == Op::Forall ? Formula::forall(std::move(var), std::move(body))
                              : Formula::exists(std::move(var), std::move(body));
}

}  // namespace detail

/// Capture-avoiding substitution of t for the free occurrences of var.
inline Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  switch (f.op()) {
    case Op::Falsum:
      return f;
    case Op::Atom: {
      bool hit = false;
      std::vector<Term> args = f.args();
      for (auto& a : args)
        if (a.is_var() && a.name == var) {
          a = t;
          hit = true;
        }
      return hit ? Formula::atom(f.predicate(), std::move(args)) : f;
    }
    case Op::Forall:
    case Op::Exists: {
      const std::string& bound = f.variable();
      if (bound == var) return f;
      if (!free_vars(f.body()).contains(var)) return f;
      if (t.is_var() && t.name == bound) {
        std::set<std::string> avoid = variable_names(f.body());
        avoid.insert(var);
        avoid.insert(t.name);
        std::string renamed = fresh_name(bound, avoid);
        Formula body = detail::rename_free(f.body(), bound, renamed);
        return detail::rebuild_quantifier(f, renamed, substitute(body, var, t));
      }
      return detail::rebuild_quantifier(f, bound, substitute(f.body(), var, t));
    }
    default:
      return detail::rebuild_binary(f, substitute(f.lhs(), var, t), substitute(f.rhs(), var, t));
  }
}

/// Renames binders that reuse the name of a free variable of f.
inline Formula unshadow(const Formula& f) {
  const std::set<std::string> free = free_vars(f);
  if (free.empty()) return f;
  std::set<std::string> avoid = variable_names(f);
  auto walk = [&](auto&& self, const Formula& g) -> Formula {
    switch (g.op()) {
      case Op::Falsum:
      case Op::Atom:
        return g;
      case Op::Forall:
      case Op::Exists: {
        Formula body = self(self, g.body());
        std::string var = g.variable();
        if (free.contains(var)) {
          std::string renamed = fresh_name(var, avoid);
          avoid.insert(renamed);
          body = detail::rename_free(body, var, renamed);
          var = renamed;
        }
        return detail::rebuild_quantifier(g, std::move(var), std::move(body));
      }
      default:
        return detail::rebuild_binary(g, self(self, g.lhs()), self(self, g.rhs()));
    }
  };
  return walk(walk, f);
}

/// Renames every binder to a depth-indexed name ("#1", "#2", ...) that cannot clash
/// with a parsed identifier. Two formulas are alpha-equivalent iff their normal forms are equal.
inline Formula alpha_normalize(const Formula& f) {
  auto walk = [](auto&& self, const Formula& g, int depth) -> Formula {
    switch (g.op()) {
      case Op::Falsum:
      case Op::Atom:
        return g;
      case Op::Forall:
      case Op::Exists: {
        std::string canon = "#" + std::to_string(depth + 1);
        Formula body = detail::rename_free(g.body(), g.variable(), canon);
        return detail::rebuild_quantifier(g, canon, self(self, body, depth + 1));
      }
      default:
        return detail::rebuild_binary(g, self(self, g.lhs(), depth), self(self, g.rhs(), depth));
    }
  };
  return walk(walk, f, 0);
}

inline bool alpha_equal(const Formula& a, const Formula& b) {
  return alpha_normalize(a) == alpha_normalize(b);
}

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   formula := disj ('->' formula)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '~' unary | ('forall'|'exists') IDENT '.' formula | primary
//   primary := 'bot' | IDENT [ '(' [term (',' term)*] ')' ] | '(' formula ')'
//   term    := IDENT | INT (>= 1)

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string peek_ident() {
    skip_space();
    std::size_t p = pos_;
    if (p >= text_.size() || !ident_start(text_[p])) return {};
    while (p < text_.size() && ident_char(text_[p])) ++p;
    return std::string(text_.substr(pos_, p - pos_));
  }

  std::string ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return id;
  }

  Formula parse_implication() {
    Formula lhs = parse_disjunction();
    if (accept("->")) return Formula::implies(lhs, parse_implication());
    return lhs;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (accept("|")) f = Formula::disj(f, parse_conjunction());
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept("~")) return Formula::negation(parse_unary());
    std::string id = peek_ident();
    if (id == "forall" || id == "exists") {
      pos_ += id.size();
      std::string var = ident();
      if (is_keyword(var)) fail("keyword used as variable");
      expect(".");
      Formula body = parse_implication();
      return id == "forall" ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    return parse_primary();
  }

  static bool is_keyword(const std::string& s) { return s == "forall" || s == "exists" || s == "bot"; }

  Formula parse_primary() {
    if (accept("(")) {
      Formula f = parse_implication();
      expect(")");
      return f;
    }
    std::string id = peek_ident();
    if (id.empty()) fail("expected formula");
    pos_ += id.size();
    if (id == "bot") return Formula::falsum();
    if (is_keyword(id)) fail("misplaced keyword");
    std::vector<Term> args;
    if (accept("(")) {
      if (!accept(")")) {
        do {
          args.push_back(parse_term());
        } while (accept(","));
        expect(")");
      }
    }
    return Formula::atom(id, std::move(args));
  }

  Term parse_term() {
    skip_space();
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      long value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + (text_[pos_] - '0');
        if (value > 1'000'000'000) fail("constant too large");
        ++pos_;
      }
      if (value < 1) throw ParseError("syntax error: domain constants must be >= 1", start);
      return Term::constant(static_cast<int>(value));
    }
    std::string id = ident();
    if (is_keyword(id)) fail("keyword used as term");
    return Term::var(id);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the ASCII grammar above. Throws ParseError on malformed text or an arity clash.
/// Binders that reuse a free variable's name are renamed.
inline Formula parse(std::string_view text) {
  Formula f = detail::FormulaParser(text).parse_all();
  try {
    (void)predicates(f);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  return unshadow(f);
}

namespace detail {

// Precedence: quantifier 0, -> 1, | 2, & 3, ~ 4.
inline void print_formula(const Formula& f, int context, std::string& out) {
  auto term = [&out](const Term& t) {
    if (t.is_var())
      out += t.name;
    else
      out += std::to_string(t.value);
  };
  auto wrap = [&](int prec, auto&& body) {
    bool paren = prec < context;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (f.op()) {
    case Op::Falsum:
      out += "bot";
      return;
    case Op::Atom:
      out += f.predicate();
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ',';
          term(f.args()[i]);
        }
        out += ')';
      }
      return;
    case Op::Forall:
    case Op::Exists:
      wrap(0, [&] {
        out += f.op() == Op::Forall ? "forall " : "exists ";
        out += f.variable();
        out += ". ";
        print_formula(f.body(), 0, out);
      });
      return;
    case Op::And:
      wrap(3, [&] {
        print_formula(f.lhs(), 3, out);
        out += " & ";
        print_formula(f.rhs(), 4, out);
      });
      return;
    case Op::Or:
      wrap(2, [&] {
        print_formula(f.lhs(), 2, out);
        out += " | ";
        print_formula(f.rhs(), 3, out);
      });
      return;
    case Op::Implies:
      if (f.is_negation()) {
        out += '~';
        print_formula(f.lhs(), 4, out);
        return;
      }
      wrap(1, [&] {
        print_formula(f.lhs(), 2, out);
        out += " -> ";
        print_formula(f.rhs(), 1, out);
      });
      return;
  }
}

}  // namespace detail

/// Prints in the grammar accepted by parse(); A -> bot is printed as ~A.
inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_formula(f, 0, out);
  return out;
}

inline std::string to_string(const Term& t) { return t.is_var() ? t.name : std::to_string(t.value); }

}  // namespace cdkit
