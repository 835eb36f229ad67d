#pragma once

// Exhaustive formula enumeration over a small signature. Formulas are stored as a DAG so
// that a whole bank can be evaluated on a model bottom-up, one truth table per node.
//
// Bound variables are named canonically by binding depth (x, y, z, ...), so
// alpha-equivalent formulas are generated once; & and | operands are taken in node order
// so each commutative pair appears once. Negation is A -> bot and needs no separate case.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/kripke.hpp"
#include "cdkit/syntax.hpp"

namespace cdkit {

/// Name of the variable bound at the given depth: x, y, z, u, v, w, then w1, w2, ...
inline std::string binder_name(int depth) {
  static const char* names[] = {"x", "y", "z", "u", "v", "w"};
  if (depth < 6) return names[depth];
  return "w" + std::to_string(depth - 5);
}

struct BankNode {
  Op op = Op::Falsum;
  int pred = -1;      // index into FormulaBank::predicates (atoms)
  int slot = -1;      // argument slot for unary atoms: free vars first, then bound by depth
  int left = -1;      // operand / quantifier body
  int right = -1;
  int scope = 0;      // number of bound variables in scope
  int size = 1;
  int rank = 0;
};

class FormulaBank {
 public:
  /// All formulas of size <= max_size and rank <= max_rank over the given unary/nullary
  /// predicates, with free variables among `free_vars`.
  FormulaBank(int max_size, int max_rank, const Signature& preds, std::vector<std::string> free_vars = {},
              std::size_t ceiling = 5'000'000)
      : max_size_(max_size), max_rank_(max_rank), free_(std::move(free_vars)) {
    for (const auto& [name, arity] : preds) {
      if (arity > 1) throw std::invalid_argument("formula bank supports predicates of arity 0 and 1 only");
      predicates.push_back({name, arity});
    }
    if (max_size < 0 || max_rank < 0) throw std::invalid_argument("bounds must be non-negative");
    const int scopes = max_rank + 1;
    // groups_[s][d][k]: nodes of size s, scope d, rank exactly k
    groups_.assign(max_size + 1, std::vector<std::vector<std::vector<int>>>(scopes, std::vector<std::vector<int>>(scopes)));
    for (int s = 1; s <= max_size; ++s)
      for (int d = max_rank; d >= 0; --d) build(s, d, ceiling);
  }

  std::vector<std::pair<std::string, int>> predicates;

  const std::vector<BankNode>& nodes() const { return nodes_; }
  int free_count() const { return static_cast<int>(free_.size()); }
  int max_rank() const { return max_rank_; }
  int max_size() const { return max_size_; }
  const std::vector<std::string>& free_vars() const { return free_; }

  /// Top-level formulas (scope 0) in deterministic order: by size, then construction order.
  std::vector<int> roots(int max_size = -1, int max_rank = -1) const {
    if (max_size < 0) max_size = max_size_;
    if (max_rank < 0) max_rank = max_rank_;
    std::vector<int> out;
    for (int s = 1; s <= std::min(max_size, max_size_); ++s)
      for (int k = 0; k <= std::min(max_rank, max_rank_); ++k)
        for (int id : groups_[s][0][k]) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
  }

  Formula formula(int id) const {
    const BankNode& n = nodes_[id];
    switch (n.op) {
      case Op::Falsum:
        return Formula::falsum();
      case Op::Atom: {
        const auto& [name, arity] = predicates[n.pred];
        if (arity == 0) return Formula::atom(name);
        return Formula::atom(name, {Term::var(slot_name(n.slot))});
      }
      case Op::And:
        return Formula::conj(formula(n.left), formula(n.right));
      case Op::Or:
        return Formula::disj(formula(n.left), formula(n.right));
      case Op::Implies:
        return Formula::implies(formula(n.left), formula(n.right));
      case Op::Forall:
        return Formula::forall(binder_name(n.scope), formula(n.left));
      case Op::Exists:
        return Formula::exists(binder_name(n.scope), formula(n.left));
    }
    return Formula::falsum();
  }

  std::string slot_name(int slot) const {
    return slot < free_count() ? free_[slot] : binder_name(slot - free_count());
  }

 private:
  int add(BankNode n, std::size_t ceiling) {
    if (nodes_.size() >= ceiling) throw CeilingExceeded("formula bank exceeds " + std::to_string(ceiling) + " nodes");
    nodes_.push_back(n);
    int id = static_cast<int>(nodes_.size()) - 1;
    groups_[n.size][n.scope][n.rank].push_back(id);
    return id;
  }

  void build(int s, int d, std::size_t ceiling) {
    const int rank_cap = max_rank_ - d;
    if (s == 1) {
      BankNode f;
      f.scope = d;
      add(f, ceiling);
      const int slots = free_count() + d;
      for (std::size_t p = 0; p < predicates.size(); ++p) {
        BankNode a;
        a.op = Op::Atom;
        a.pred = static_cast<int>(p);
        a.scope = d;
        if (predicates[p].second == 0) {
          add(a, ceiling);
        } else {
          for (int sl = 0; sl < slots; ++sl) {
            a.slot = sl;
            add(a, ceiling);
          }
        }
      }
      return;
    }
    // quantifiers
    if (rank_cap >= 1 && d + 1 <= max_rank_)
      for (int k = 0; k + 1 <= rank_cap; ++k)
        for (int body : groups_[s - 1][d + 1][k])
          for (Op q : {Op::Forall, Op::Exists}) {
            BankNode n;
            n.op = q;
            n.left = body;
            n.scope = d;
            n.size = s;
            n.rank = k + 1;
            add(n, ceiling);
          }
    // binary connectives
    for (int s1 = 1; s1 + 1 + 1 <= s; ++s1) {
      const int s2 = s - 1 - s1;
      for (int k1 = 0; k1 <= rank_cap; ++k1)
        for (int k2 = 0; k2 <= rank_cap; ++k2)
          for (int a : groups_[s1][d][k1])
            for (int b : groups_[s2][d][k2])
              for (Op op : {Op::And, Op::Or, Op::Implies}) {
                if (op != Op::Implies && a > b) continue;
                BankNode n;
                n.op = op;
                n.left = a;
                n.right = b;
                n.scope = d;
                n.size = s;
                n.rank = std::max(k1, k2);
                add(n, ceiling);
              }
    }
  }

  int max_size_;
  int max_rank_;
  std::vector<std::string> free_;
  std::vector<BankNode> nodes_;
  std::vector<std::vector<std::vector<std::vector<int>>>> groups_;
};

/// Truth tables of every bank node on one model. The table of a node at scope d has one
/// state mask per assignment of the free variables followed by the d bound variables,
/// first variable most significant (the layout of Evaluator::forcing_table).
class BankTables {
 public:
  BankTables(const FormulaBank& bank, const GModel& m) : bank_(&bank) {
    const int dsize = static_cast<int>(m.domain.size());
    const int n = m.num_states;
    std::vector<std::vector<StateMask>> unary;  // per predicate: mask per element
    std::vector<StateMask> nullary;
    for (const auto& [name, arity] : bank.predicates) {
      auto it = m.interp.find(name);
      if (it == m.interp.end() || it->second.arity != arity)
        throw std::invalid_argument("model lacks predicate " + name + "/" + std::to_string(arity));
      std::vector<StateMask> per(dsize, 0);
      StateMask zero = 0;
      for (const auto& t : it->second.tuples) {
        if (arity == 0)
          zero |= bit(t[0]);
        else
          per[m.domain_index(t[1])] |= bit(t[0]);
      }
      unary.push_back(std::move(per));
      nullary.push_back(zero);
    }
    const StateMask all = m.states();
    std::vector<std::size_t> cells(bank.free_count() + bank.max_rank() + 1, 1);
    for (std::size_t i = 1; i < cells.size(); ++i) cells[i] = cells[i - 1] * static_cast<std::size_t>(dsize);
    const auto& nodes = bank.nodes();
    tables_.resize(nodes.size());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const BankNode& nd = nodes[id];
      const int vars = bank.free_count() + nd.scope;
      const std::size_t size = cells[vars];
      std::vector<StateMask>& out = tables_[id];
      out.assign(size, 0);
      switch (nd.op) {
        case Op::Falsum:
          break;
        case Op::Atom:
          if (bank.predicates[nd.pred].second == 0) {
            std::fill(out.begin(), out.end(), nullary[nd.pred]);
          } else {
            // digit of slot nd.slot in a vars-digit index
            const std::size_t stride = cells[vars - 1 - nd.slot];
            for (std::size_t i = 0; i < size; ++i) out[i] = unary[nd.pred][(i / stride) % dsize];
          }
          break;
        case Op::And: {
          const auto &a = tables_[nd.left], &b = tables_[nd.right];
          for (std::size_t i = 0; i < size; ++i) out[i] = a[i] & b[i];
          break;
        }
        case Op::Or: {
          const auto &a = tables_[nd.left], &b = tables_[nd.right];
          for (std::size_t i = 0; i < size; ++i) out[i] = a[i] | b[i];
          break;
        }
        case Op::Implies: {
          const auto &a = tables_[nd.left], &b = tables_[nd.right];
          for (std::size_t i = 0; i < size; ++i) {
            const StateMask good = (all & ~a[i]) | b[i];
            StateMask r = 0;
            for (int v = 0; v < n; ++v)
              if ((m.up[v] & ~good) == 0) r |= bit(v);
            out[i] = r;
          }
          break;
        }
        case Op::Forall:
        case Op::Exists: {
          const auto& body = tables_[nd.left];
          const bool all_q = nd.op == Op::Forall;
          for (std::size_t i = 0; i < size; ++i) {
            StateMask r = all_q ? all : 0;
            for (int a = 0; a < dsize; ++a) r = all_q ? (r & body[i * dsize + a]) : (r | body[i * dsize + a]);
            out[i] = r;
          }
          break;
        }
      }
    }
  }

  /// States forcing node `id` under the assignment with the given index.
  StateMask at(int id, std::size_t assignment = 0) const { return tables_[id][assignment]; }
  const std::vector<StateMask>& table(int id) const { return tables_[id]; }

 private:
  const FormulaBank* bank_;
  std::vector<std::vector<StateMask>> tables_;
};

/// Closed L(P,Q)-sentences of size <= max_size and rank <= max_rank.
inline std::vector<Formula> enumerate_candidates(int max_size, int max_rank,
                                                 const Signature& preds = {{"P", 1}, {"Q", 1}}) {
  std::vector<Formula> out;
  if (max_size < 1) return out;
  FormulaBank bank(max_size, max_rank, preds);
  for (int id : bank.roots()) out.push_back(bank.formula(id));
  return out;
}

}  // namespace cdkit
