#pragma once

// Bundled verification suites. Each claim runs one property check at a fixed scale and
// reports the number of cases, failures and the first counterexample. Randomized claims
// draw from their own generator seeded by (master seed, claim stream), so one claim's
// draws do not depend on which other claims ran.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cdkit/asimulation.hpp"
#include "cdkit/conditions.hpp"
#include "cdkit/kripke.hpp"
#include "cdkit/quasipartition.hpp"
#include "cdkit/random.hpp"
#include "cdkit/search.hpp"
#include "cdkit/sequent.hpp"

namespace cdkit {

struct ClaimResult {
  int criterion = 0;  // acceptance criterion the claim belongs to
  std::string name;
  std::string check;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;  // first failure, or a summary
  double seconds = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 42;

  int monotone_models = 10000;
  int monotone_states = 4;
  int monotone_domain = 3;
  int monotone_size = 9;
  int monotone_sentences = 3;  // per model

  int d_states = 3;
  int d_domain = 3;

  int gd_states = 3;
  int gd_domain = 2;
  int gd_random = 10000;
  int gd_random_states = 6;
  int gd_random_domain = 4;

  int so_states = 3;
  int so_domain = 2;

  int asim_relations = 500;
  int asim_size = 7;
  int asim_rank = 2;
  int asim_states = 3;
  int asim_domain = 2;

  int qp_samples = 1000;

  int sweep_size = 7;
  int sweep_rank = 2;
  int sweep_states = 3;
  int sweep_domain = 3;

  int proof_models = 100;
};

/// Generator for one claim, derived from the master seed and the claim's stream number.
inline std::mt19937_64 claim_rng(std::uint64_t seed, int stream) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(sq);
}

namespace detail {

inline const Signature kSigPQ{{"P", 1}, {"Q", 1}};
inline const Signature kSigPQRS{{"P", 1}, {"Q", 1}, {"R", 1}, {"S", 0}};

// Runs body, records time, and sets passed from the failure count.
inline ClaimResult run_claim(int criterion, std::string name, std::string check,
                             const std::function<void(ClaimResult&)>& body) {
  ClaimResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  r.check = std::move(check);
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
    r.passed = r.failures == 0 && r.cases > 0;
    if (r.cases == 0 && r.detail.empty()) r.detail = "no cases ran";
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void fail(ClaimResult& r, const std::string& what) {
  if (r.failures++ == 0) r.detail = what;
}

}  // namespace detail

inline ClaimResult claim_forcing_monotone(const VerifyConfig& c) {
  return detail::run_claim(1, "forcing is monotone",
                           "random models (<= " + std::to_string(c.monotone_states) + " states, <= " +
                               std::to_string(c.monotone_domain) + " elements) x random sentences of size <= " +
                               std::to_string(c.monotone_size) + ": forced set is up-closed",
                           [&](ClaimResult& r) {
                             auto rng = claim_rng(c.seed, 1);
                             for (int i = 0; i < c.monotone_models; ++i) {
                               GModel m = random_model(rng, c.monotone_states, c.monotone_domain, detail::kSigPQRS);
                               if (!validate(m).empty()) {
                                 detail::fail(r, "generator produced an invalid model");
                                 continue;
                               }
                               Evaluator ev(m);
                               for (int k = 0; k < c.monotone_sentences; ++k) {
                                 Formula f = random_sentence(rng, c.monotone_size, m, 2);
                                 ++r.cases;
                                 const StateMask s = ev.forcing_states(f);
                                 for (int v = 0; v < m.num_states; ++v)
                                   if ((s & bit(v)) && (m.up[v] & ~s)) {
                                     detail::fail(r, to_string(f) + " at state " + std::to_string(v) + "\n" +
                                                         model_to_string(m));
                                     break;
                                   }
                               }
                             }
                           });
}

/// Instances of forall x.(A | B) -> (A | forall x.B) with atomic A (x not free) and B over
/// the model's constants; a second family leaves y free in A and B and closes it outside.
inline std::vector<Formula> scheme_d_instances(const GModel& m) {
  std::vector<Formula> out;
  auto inst = [](const Formula& a, const Formula& b) {
    return Formula::implies(Formula::forall("x", Formula::disj(a, b)), Formula::disj(a, Formula::forall("x", b)));
  };
  std::vector<Formula> as{Formula::falsum()}, bs{Formula::falsum()};
  for (const char* p : {"P", "Q"}) {
    bs.push_back(Formula::atom(p, {Term::var("x")}));
    for (int c : m.domain) {
      as.push_back(Formula::atom(p, {Term::constant(c)}));
      bs.push_back(Formula::atom(p, {Term::constant(c)}));
    }
  }
  for (const auto& a : as)
    for (const auto& b : bs) out.push_back(inst(a, b));
  std::vector<Formula> ay, by;
  for (const char* p : {"P", "Q"}) {
    ay.push_back(Formula::atom(p, {Term::var("y")}));
    by.push_back(Formula::atom(p, {Term::var("x")}));
    by.push_back(Formula::atom(p, {Term::var("y")}));
  }
  for (const auto& a : ay)
    for (const auto& b : by) out.push_back(Formula::forall("y", inst(a, b)));
  return out;
}

inline ClaimResult claim_scheme_d(const VerifyConfig& c) {
  return detail::run_claim(2, "scheme D is valid on constant-domain models",
                           "every enumerated P,Q-model up to (" + std::to_string(c.d_states) + " states, " +
                               std::to_string(c.d_domain) + " elements), every atomic instance: base forces it",
                           [&](ClaimResult& r) {
                             for_each_model(c.d_states, c.d_domain, detail::kSigPQ, [&](const GModel& m) {
                               for (const auto& f : scheme_d_instances(m)) {
                                 ++r.cases;
                                 if (!forces(m, m.base, f)) detail::fail(r, to_string(f) + "\n" + model_to_string(m));
                               }
                             });
                           });
}

inline ClaimResult claim_gamma_delta(const VerifyConfig& c) {
  return detail::run_claim(
      3, "Gamma -> Delta is valid",
      "every enumerated P,Q,R,S-model up to (" + std::to_string(c.gd_states) + " states, " +
          std::to_string(c.gd_domain) + " elements) and " + std::to_string(c.gd_random) + " random models up to (" +
          std::to_string(c.gd_random_states) + ", " + std::to_string(c.gd_random_domain) + ")",
      [&](ClaimResult& r) {
        const Formula& f = gamma_implies_delta();
        auto check = [&](const GModel& m) {
          ++r.cases;
          if (!forces(m, m.base, f)) detail::fail(r, model_to_string(m));
        };
        for_each_model(c.gd_states, c.gd_domain, detail::kSigPQRS, check);
        auto rng = claim_rng(c.seed, 3);
        for (int i = 0; i < c.gd_random; ++i)
          check(random_model(rng, c.gd_random_states, c.gd_random_domain, detail::kSigPQRS));
      });
}

inline ClaimResult claim_second_order(const VerifyConfig& c) {
  return detail::run_claim(
      4, "I and J capture exists R.Gamma and forall S.Delta",
      "every enumerated P,Q-model up to (" + std::to_string(c.so_states) + " states, " + std::to_string(c.so_domain) +
          " elements): brute-force second-order values equal (I, J), and exists R.Gamma implies forall S.Delta",
      [&](ClaimResult& r) {
        for_each_model(c.so_states, c.so_domain, detail::kSigPQ, [&](const GModel& m) {
          ++r.cases;
          auto so = brute_second_order(m);
          const bool i = check_I(m).holds, j = check_J(m).holds;
          if (so.exists_r_gamma != i || so.forall_s_delta != j)
            detail::fail(r, "brute force (" + std::to_string(so.exists_r_gamma) + ", " +
                                std::to_string(so.forall_s_delta) + ") vs conditions (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")\n" + model_to_string(m));
          else if (so.exists_r_gamma && !so.forall_s_delta)
            detail::fail(r, "exists R.Gamma without forall S.Delta\n" + model_to_string(m));
        });
      });
}

inline ClaimResult claim_asim_preservation(const VerifyConfig& c) {
  return detail::run_claim(
      5, "forcing transfers along asimulations",
      std::to_string(c.asim_relations) + " random relations passing the asimulation check on random pairs (<= " +
          std::to_string(c.asim_states) + " states, <= " + std::to_string(c.asim_domain) +
          " elements), every P,Q-formula of size <= " + std::to_string(c.asim_size) + " and rank <= " +
          std::to_string(c.asim_rank),
      [&](ClaimResult& r) {
        FormulaOracle oracle(c.asim_size, c.asim_rank, detail::kSigPQ);
        auto rng = claim_rng(c.seed, 5);
        std::size_t nonempty = 0, entries = 0;
        for (int i = 0; i < c.asim_relations; ++i) {
          auto [a, b] = random_pair(rng, c.asim_states, c.asim_domain);
          AsimRelation z = random_asimulation(rng, bounded_greatest(a, b, c.asim_rank), 3);
          ++r.cases;
          nonempty += !z.entries.empty();
          entries += z.entries.size();
          if (auto bad = check(z, a, b); !bad.empty()) {
            detail::fail(r, "generated relation fails " + bad.front().kind + ": " + bad.front().detail);
            continue;
          }
          if (auto vs = preserves_exhaustive(z, a, b, oracle, 1); !vs.empty())
            detail::fail(r, vs.front().detail + "\n" + model_to_string(a) + "\n" + model_to_string(b));
        }
        if (r.failures == 0)
          r.detail = std::to_string(nonempty) + " nonempty relations, " + std::to_string(entries) + " entries";
        if (nonempty == 0) detail::fail(r, "every generated relation was empty");
      });
}

inline std::vector<ClaimResult> claims_quasipartition(const VerifyConfig& c) {
  std::vector<ClaimResult> out;
  const QuasiPartition v = qp_v(), w = qp_w();
  out.push_back(detail::run_claim(6, "base points are quasi-partitions",
                                  "v = (3N, 3N+1, 3N+2) and w = (2N, {}, 2N+1) are quasi-partitions and states",
                                  [&](ClaimResult& r) {
                                    r.cases = 4;
                                    if (!is_quasipartition(v)) detail::fail(r, "v: " + to_string(v));
                                    if (!is_quasipartition(w)) detail::fail(r, "w: " + to_string(w));
                                    if (!in_state_space(v, 1)) detail::fail(r, "v is not a state of model 1");
                                    if (!in_state_space(w, 2)) detail::fail(r, "w is not a state of model 2");
                                  }));
  out.push_back(detail::run_claim(6, "J fails at the second model's base",
                                  "w has empty middle component, so P and Q coincide at w",
                                  [&](ClaimResult& r) {
                                    r.cases = 2;
                                    if (!w.b.is_empty()) detail::fail(r, "w.b = " + to_string(w.b));
                                    if (set_union(w.a, w.b) != w.a) detail::fail(r, "P differs from Q at w");
                                  }));
  out.push_back(detail::run_claim(
      6, "I holds at the first model's base",
      std::to_string(c.qp_samples) + " sampled states u of model 1: some k in v.b lies outside u.a, so P(k) at v and not Q(k) at u",
      [&](ClaimResult& r) {
        auto rng = claim_rng(c.seed, 61);
        for (int i = 0; i < c.qp_samples; ++i) {
          QuasiPartition u = random_state(rng, 1);
          ++r.cases;
          auto k = set_intersect(u.b, v.b).least();
          if (!k || !atom_forces(v, 'P', *k) || atom_forces(u, 'Q', *k)) detail::fail(r, "u = " + to_string(u));
        }
      }));

  // random (t,d) Z (u,e) instances for the witness constructors
  struct Instance {
    int model;
    QuasiPartition t, u;
    std::vector<int> d, e;
  };
  auto instances = [&](int stream, int want, const std::function<void(ClaimResult&, const Instance&, std::mt19937_64&)>& f) {
    return [&, stream, want, f](ClaimResult& r) {
      auto rng = claim_rng(c.seed, stream);
      for (int i = 0; static_cast<int>(r.cases) < want && i < 50 * want; ++i) {
        Instance in;
        in.model = 1 + i % 2;
        in.t = random_state(rng, in.model);
        in.u = random_state(rng, other_model(in.model));
        in.d = random_tuple(rng);
        auto e = random_related_tuple(rng, in.t, in.d, in.u);
        if (!e) continue;
        in.e = *e;
        ++r.cases;
        f(r, in, rng);
      }
      if (static_cast<int>(r.cases) < want) detail::fail(r, "only " + std::to_string(r.cases) + " instances drawn");
    };
  };
  auto where = [](const Instance& in) {
    return "t = " + to_string(in.t) + ", d = " + detail::tuple_text(in.d) + ", u = " + to_string(in.u) + ", e = " + detail::tuple_text(in.e);
  };
  out.push_back(detail::run_claim(
      6, "successor witness is related both ways",
      std::to_string(c.qp_samples) + " random instances: w above t, a state, and (w,d) Z (v,e) Z (w,d)",
      instances(62, c.qp_samples, [&](ClaimResult& r, const Instance& in, std::mt19937_64& rng) {
        QuasiPartition nv = random_successor(rng, in.u, other_model(in.model));
        auto s = witness_successor(in.model, in.t, in.d, in.u, in.e, nv);
        if (!s.ok()) detail::fail(r, where(in) + ", v = " + to_string(nv));
      })));
  out.push_back(detail::run_claim(
      6, "left extension witness keeps Z",
      std::to_string(c.qp_samples) + " random instances: (t,d f) Z (u,e g) for the constructed g",
      instances(63, c.qp_samples, [&](ClaimResult& r, const Instance& in, std::mt19937_64& rng) {
        int f = std::uniform_int_distribution<int>(1, 30)(rng);
        int g = witness_left_extension(in.model, in.t, in.d, in.u, in.e, f);
        auto d = in.d, e = in.e;
        d.push_back(f);
        e.push_back(g);
        if (!z_related({in.model, in.t, d, in.u, e})) detail::fail(r, where(in) + ", f = " + std::to_string(f));
      })));
  out.push_back(detail::run_claim(
      6, "right extension witness keeps Z",
      std::to_string(c.qp_samples) + " random instances: (t,d f) Z (u,e g) for the constructed f",
      instances(64, c.qp_samples, [&](ClaimResult& r, const Instance& in, std::mt19937_64& rng) {
        int g = std::uniform_int_distribution<int>(1, 30)(rng);
        int f = witness_right_extension(in.model, in.t, in.d, in.u, in.e, g);
        auto d = in.d, e = in.e;
        d.push_back(f);
        e.push_back(g);
        if (!z_related({in.model, in.t, d, in.u, e})) detail::fail(r, where(in) + ", g = " + std::to_string(g));
      })));
  out.push_back(detail::run_claim(6, "base points are related", "(v, empty tuple) Z (w, empty tuple) in both directions",
                                  [&](ClaimResult& r) {
                                    r.cases = 2;
                                    if (!z_related({1, v, {}, w, {}})) detail::fail(r, "v to w");
                                    if (!z_related({2, w, {}, v, {}})) detail::fail(r, "w to v");
                                  }));
  return out;
}

inline ClaimResult claim_no_interpolant(const VerifyConfig& c) {
  return detail::run_claim(
      7, "no interpolant at desk scale",
      "every P,Q-sentence of size <= " + std::to_string(c.sweep_size) + " and rank <= " + std::to_string(c.sweep_rank) +
          " is refuted on models up to (" + std::to_string(c.sweep_states) + " states, " +
          std::to_string(c.sweep_domain) + " elements); no source refutes Gamma -> Delta itself",
      [&](ClaimResult& r) {
        SearchOptions o;
        o.max_states = c.sweep_states;
        o.max_domain = c.sweep_domain;
        SweepReport rep = refutation_sweep(c.sweep_size, c.sweep_rank, o);
        r.cases = rep.entries.size();
        r.failures = rep.survivors + rep.double_side + rep.unverified;
        std::ostringstream d;
        d << rep.gamma_refuted << " gamma-side, " << rep.delta_refuted << " delta-side, " << rep.survivors
          << " survivors, " << rep.double_side << " double-side, " << rep.unverified << " unverified";
        for (const auto& e : rep.entries)
          if (!e.side) {
            d << "; first survivor: " << to_string(e.candidate);
            break;
          }
        r.detail = d.str();
      });
}

inline std::vector<ClaimResult> claims_proof(const VerifyConfig& c) {
  std::vector<ClaimResult> out;
  const Proof p = gamma_delta_proof();
  out.push_back(detail::run_claim(8, "fixture derivation checks", "bundled derivation of Gamma => Delta is accepted",
                                  [&](ClaimResult& r) {
                                    r.cases = p.nodes.size();
                                    auto res = check_proof(p, gamma_delta_sequent());
                                    if (!res.ok) detail::fail(r, res.node + ": " + res.message);
                                  }));
  out.push_back(detail::run_claim(8, "fixture mutations are rejected", "every single-node mutation of the fixture fails to check",
                                  [&](ClaimResult& r) {
                                    for (const auto& m : single_node_mutations(p)) {
                                      ++r.cases;
                                      if (check_proof(m.proof, gamma_delta_sequent()).ok) detail::fail(r, m.node + ": " + m.change);
                                    }
                                    if (r.cases < 20) detail::fail(r, "fewer than 20 mutations");
                                  }));
  out.push_back(detail::run_claim(
      8, "fixture sequents are sound",
      "every sequent of the fixture holds at the base of " + std::to_string(c.proof_models) + " random P,Q,R,S-models",
      [&](ClaimResult& r) {
        auto rng = claim_rng(c.seed, 8);
        for (int i = 0; i < c.proof_models; ++i) {
          GModel m = random_model(rng, 4, 3, detail::kSigPQRS, 0.4, 0.35);
          for (const auto& n : p.nodes) {
            ++r.cases;
            if (!sequent_valid_at_base(m, n.conclusion)) detail::fail(r, n.id + "\n" + model_to_string(m));
          }
        }
      }));
  return out;
}

/// All claims in criterion order. `only` (if nonempty) restricts to those criteria.
inline std::vector<ClaimResult> verify_all(const VerifyConfig& c, const std::vector<int>& only = {},
                                           const std::function<void(const ClaimResult&)>& progress = {}) {
  auto want = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
  std::vector<ClaimResult> out;
  auto push = [&](ClaimResult r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  if (want(1)) push(claim_forcing_monotone(c));
  if (want(2)) push(claim_scheme_d(c));
  if (want(3)) push(claim_gamma_delta(c));
  if (want(4)) push(claim_second_order(c));
  if (want(5)) push(claim_asim_preservation(c));
  if (want(6))
    for (auto& r : claims_quasipartition(c)) push(std::move(r));
  if (want(7)) push(claim_no_interpolant(c));
  if (want(8))
    for (auto& r : claims_proof(c)) push(std::move(r));
  return out;
}

/// Pass/fail table; with timings off the text depends only on the seed and scale.
inline std::string claims_table(const std::vector<ClaimResult>& rs, bool timings = false) {
  std::ostringstream out;
  for (const auto& r : rs) {
    out << (r.passed ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.name << "  (" << r.cases << " cases, "
        << r.failures << " failures";
    if (timings) out << ", " << std::fixed << std::setprecision(1) << r.seconds << "s";
    out << ")\n      " << r.check << "\n";
    if (!r.detail.empty()) {
      std::string d = r.detail;
      for (std::size_t i = d.find('\n'); i != std::string::npos; i = d.find('\n', i + 7)) d.replace(i, 1, "\n      ");
      out << "      " << d << "\n";
    }
  }
  return out.str();
}

}  // namespace cdkit
