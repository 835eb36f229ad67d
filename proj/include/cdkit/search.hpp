#pragma once

// Bounded refutation of candidate interpolants for Gamma -> Delta.
//
// A candidate Theta over P,Q fails as an interpolant if some model forces Gamma but not
// Theta at its base (gamma side) or forces Theta but not Delta at its base (delta side).
// Gamma-side models are built from P,Q-models satisfying I by interpreting R with
// realize_R; delta-side models from P,Q-models where J fails at some state w, with S
// interpreted by realize_S at w. Theta does not mention R or S, so its forcing is read
// off the P,Q-model. Every refutation is re-verified pointwise on the expanded model.

#include <chrono>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdkit/conditions.hpp"
#include "cdkit/enumerate.hpp"
#include "cdkit/kripke.hpp"
#include "cdkit/quasipartition.hpp"

namespace cdkit {

enum class Side { Gamma, Delta };

inline const char* side_name(Side s) { return s == Side::Gamma ? "gamma-side" : "delta-side"; }

struct Refutation {
  Formula candidate;
  Side side = Side::Gamma;
  GModel model;          // expanded by R (gamma side) or S (delta side)
  std::string source;    // where the underlying P,Q-model came from
  std::string certificate;
};

struct SearchOptions {
  int max_states = 3;
  int max_domain = 3;
  bool truncations = true;
  int truncation_n = 9;
  int truncation_depth = 1;
  std::optional<Side> only;  // restrict to one side
};

/// One P,Q-model usable on one side.
struct ModelSource {
  GModel pq;
  Side side = Side::Gamma;
  int s_state = -1;  // delta side: the state where J fails
  std::string label;
};

/// Gamma-side sources (I holds) and delta-side sources (J fails), truncations first, then
/// every enumerated model within the bounds in enumeration order.
inline std::vector<ModelSource> model_sources(const SearchOptions& o) {
  std::vector<ModelSource> out;
  auto wanted = [&](Side s) { return !o.only || *o.only == s; };
  if (o.truncations) {
    const std::string tag = "," + std::to_string(o.truncation_n) + "," + std::to_string(o.truncation_depth) + ")";
    GModel t1 = finite_truncation(1, o.truncation_n, o.truncation_depth);
    GModel t2 = finite_truncation(2, o.truncation_n, o.truncation_depth);
    if (wanted(Side::Gamma)) out.push_back({t1, Side::Gamma, -1, "truncation(1" + tag});
    if (wanted(Side::Delta)) out.push_back({t2, Side::Delta, j_violations(t2).front(), "truncation(2" + tag});
  }
  std::size_t k = 0;
  for_each_model(o.max_states, o.max_domain, {{"P", 1}, {"Q", 1}}, [&](const GModel& m) {
    const std::string label = "enumerated #" + std::to_string(k++);
    if (wanted(Side::Gamma) && check_I(m).holds) out.push_back({m, Side::Gamma, -1, label});
    auto bad = j_violations(m);
    if (wanted(Side::Delta) && !bad.empty()) out.push_back({m, Side::Delta, bad.front(), label});
  });
  return out;
}

/// The expanded model of a source: R realized on the gamma side, S on the delta side.
inline GModel expanded_model(const ModelSource& s) {
  return s.side == Side::Gamma ? realize_R(s.pq) : realize_S(s.pq, s.s_state);
}

/// Lists, state by state, which of Gamma / Delta / Theta are forced.
inline std::string forcing_trace(const GModel& m, const Formula& theta, Side side) {
  std::ostringstream out;
  const Formula& main = side == Side::Gamma ? gamma_formula() : delta_formula();
  const char* main_name = side == Side::Gamma ? "Gamma" : "Delta";
  out << "theta: " << to_string(theta) << "\n";
  for (int v = 0; v < m.num_states; ++v) {
    out << "state " << v << (v == m.base ? " (base)" : "") << ": " << main_name << " "
        << (forces(m, v, main) ? "forced" : "not forced") << ", theta " << (forces(m, v, theta) ? "forced" : "not forced");
    if (side == Side::Delta)
      out << ", alpha " << (forces(m, v, alpha_formula()) ? "forced" : "not forced") << ", S "
          << (forces(m, v, Formula::atom("S")) ? "forced" : "not forced");
    out << "\n";
  }
  return out.str();
}

/// Re-checks a refutation with the pointwise forcing relation.
inline bool verify_refutation(const Refutation& r) {
  const GModel& m = r.model;
  if (r.side == Side::Gamma) return forces(m, m.base, gamma_formula()) && !forces(m, m.base, r.candidate);
  return forces(m, m.base, r.candidate) && !forces(m, m.base, delta_formula());
}

/// True when a P,Q-model would refute Gamma -> Delta itself (I holds and J fails). Never
/// expected; the sweep counts these.
inline bool double_side_hazard(const GModel& pq) {
  if (!check_I(pq).holds) return false;
  auto bad = j_violations(pq);
  if (bad.empty()) return false;
  GModel both = realize_S(realize_R(pq), bad.front());
  return forces(both, both.base, gamma_formula()) && !forces(both, both.base, delta_formula());
}

inline Refutation make_refutation(const Formula& theta, const ModelSource& s) {
  Refutation r;
  r.candidate = theta;
  r.side = s.side;
  r.model = expanded_model(s);
  r.source = s.label;
  r.certificate = forcing_trace(r.model, theta, s.side);
  return r;
}

/// Searches the sources for a refutation of one candidate; nullopt means exhausted.
inline std::optional<Refutation> refute(const Formula& theta, const SearchOptions& o = {}) {
  if (!is_sentence(theta)) throw std::invalid_argument("candidate must be closed");
  if (!in_language(theta, {"P", "Q"})) throw std::invalid_argument("candidate must be over P and Q");
  for (const auto& s : model_sources(o)) {
    bool forced = forces(s.pq, s.pq.base, theta);
    if ((s.side == Side::Gamma && !forced) || (s.side == Side::Delta && forced)) {
      Refutation r = make_refutation(theta, s);
      if (!verify_refutation(r)) throw std::logic_error("refutation failed to re-verify: " + to_string(theta));
      return r;
    }
  }
  return std::nullopt;
}

struct SweepEntry {
  Formula candidate;
  std::optional<Side> side;  // nullopt: exhausted
  int source = -1;           // index into SweepReport::sources
};

struct SweepReport {
  int max_size = 0;
  int max_rank = 0;
  SearchOptions options;
  std::vector<ModelSource> sources;
  std::vector<SweepEntry> entries;
  std::size_t gamma_refuted = 0;
  std::size_t delta_refuted = 0;
  std::size_t survivors = 0;
  std::size_t double_side = 0;        // sources refuting Gamma -> Delta itself (all sources checked)
  std::size_t unverified = 0;         // refutations failing pointwise re-verification
  std::size_t sources_used = 0;       // models evaluated before every candidate was settled
  std::map<int, std::size_t> by_source;  // source index -> candidates it settled
  double seconds = 0;  // not part of the text report

  bool clean() const { return survivors == 0 && double_side == 0 && unverified == 0; }

  Refutation refutation(std::size_t i) const {
    const SweepEntry& e = entries.at(i);
    if (!e.side) throw std::invalid_argument("candidate survived");
    return make_refutation(e.candidate, sources.at(e.source));
  }
};

/// Refutes every closed P,Q-sentence within the size and rank bounds, scanning model sources
/// in order and evaluating the whole formula bank per model. With verify set, every
/// refutation is rebuilt and re-checked pointwise.
inline SweepReport refutation_sweep(int max_size, int max_rank, const SearchOptions& o = {}, bool verify = true) {
  auto t0 = std::chrono::steady_clock::now();
  SweepReport rep;
  rep.max_size = max_size;
  rep.max_rank = max_rank;
  rep.options = o;
  if (max_size < 1) return rep;
  FormulaBank bank(max_size, max_rank, {{"P", 1}, {"Q", 1}});
  const std::vector<int> roots = bank.roots();
  for (int id : roots) rep.entries.push_back({bank.formula(id), std::nullopt, -1});
  rep.sources = model_sources(o);
  for (const auto& s : rep.sources) rep.double_side += double_side_hazard(s.pq);
  std::size_t open = roots.size();
  for (std::size_t si = 0; si < rep.sources.size() && open > 0; ++si) {
    const ModelSource& s = rep.sources[si];
    ++rep.sources_used;
    BankTables tables(bank, s.pq);
    const StateMask base = bit(s.pq.base);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (rep.entries[i].side) continue;
      const bool forced = (tables.at(roots[i]) & base) != 0;
      if ((s.side == Side::Gamma) != forced) {
        rep.entries[i].side = s.side;
        rep.entries[i].source = static_cast<int>(si);
        --open;
      }
    }
  }
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    if (!e.side) {
      ++rep.survivors;
      continue;
    }
    (*e.side == Side::Gamma ? rep.gamma_refuted : rep.delta_refuted)++;
    rep.by_source[e.source]++;
    if (verify) {
      Refutation r;
      r.candidate = e.candidate;
      r.side = *e.side;
      r.model = expanded_model(rep.sources[e.source]);
      if (!verify_refutation(r)) ++rep.unverified;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Deterministic text report: header, summary counts, then one line per candidate.
inline std::string report_text(const SweepReport& r, bool per_candidate = true) {
  std::ostringstream out;
  out << "# refutation sweep: size <= " << r.max_size << ", rank <= " << r.max_rank << ", models <= ("
      << r.options.max_states << " states, " << r.options.max_domain << " elements)";
  if (r.options.only) out << ", " << side_name(*r.options.only) << " only";
  if (r.options.truncations)
    out << ", truncations (" << r.options.truncation_n << ", " << r.options.truncation_depth << ")";
  out << "\n";
  out << "candidates: " << r.entries.size() << "\n";
  out << "gamma-side refuted: " << r.gamma_refuted << "\n";
  out << "delta-side refuted: " << r.delta_refuted << "\n";
  out << "survivors: " << r.survivors << "\n";
  out << "double-side hazards: " << r.double_side << "\n";
  out << "unverified refutations: " << r.unverified << "\n";
  out << "model sources available: " << r.sources.size() << ", evaluated: " << r.sources_used << "\n";
  for (const auto& [src, n] : r.by_source)
    out << "  " << r.sources[src].label << " (" << side_name(r.sources[src].side) << "): " << n << "\n";
  if (per_candidate)
    for (const auto& e : r.entries) {
      out << to_string(e.candidate) << "\t";
      if (e.side)
        out << side_name(*e.side) << "\t" << r.sources[e.source].label << "\n";
      else
        out << "exhausted\n";
    }
  return out.str();
}

}  // namespace cdkit
