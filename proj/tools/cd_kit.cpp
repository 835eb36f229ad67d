// cd-kit: command-line front end.
//
// Exit status: 0 when the checked property holds, 1 when it fails (violation found,
// condition false, proof rejected, candidate survives), 2 on usage, file or parse errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cdkit/asimulation.hpp"
#include "cdkit/conditions.hpp"
#include "cdkit/kripke.hpp"
#include "cdkit/quasipartition.hpp"
#include "cdkit/search.hpp"
#include "cdkit/sequent.hpp"
#include "cdkit/syntax.hpp"
#include "cdkit/verify.hpp"

using namespace cdkit;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kJsonFormat = "cd-kit-json/1";

constexpr const char* kFormats = R"(File formats

Formulas
  atoms P(x), Q(1), S (nullary); bot; ~A; A & B; A | B; A -> B; forall x. A; exists x. A.
  Integers are domain constants. ~A abbreviates A -> bot.

Model file (.gm)
  # comment
  states: 0 1 2            state ids, any non-negative integers
  order: 0<=1 0<=2         pairs; reflexive-transitive closure applied on load
  base: 0                  least state
  domain: 1 2 3            positive integers
  pred P/1: (0,2) (1,2)    tuples (state, args...); monotone along the order
  pred S/0: (2)

Asimulation file (.asim)
  horizon: 2               optional; default is the longest tuple present
  1->2 0 [1,2] 3 [2,2]     dir, state, tuple in the first model, state, tuple in the other
  2->1 3 [] 0 []           dir may also be written 1 or 2

Proof file (.prf)
  abbrev NAME = FORMULA
  ID: RULE PREMISE... {term T} {eigen V} {cut F} {principal F} :: ANTE => SUCC
  root ID
  Rules: ax bot-left D weaken contract and-left and-right or-left or-right imp-left
  imp-right neg-left neg-right forall-left forall-right exists-left exists-right cut.

Set expressions (qp)
  kN+l = {kn+l | n >= 0} within the positive integers; N; {1,4,9}; {} ; combine with
  + (union), - (difference), & (intersection) and parentheses.
  Quasi-partition: (A; B; C), e.g. (3N; 3N+1; 3N+2).

JSON output (--json)
  One object per run with "format": ")" "cd-kit-json/1" R"(", "command", the inputs, and
  command-specific fields; randomized commands also record "seed".
)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// parse error already formatted with a caret line
struct ArgParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  bool json = false;
  Json j;
  std::ostringstream text;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CDKIT_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
    std::cerr << "warning: ignoring non-numeric CDKIT_SEED\n";
  }
  return 42;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << content;
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  LoadedModel lm = read_model(in);
  for (const auto& w : lm.warnings) std::cerr << path << ": warning: " << w << "\n";
  return lm;
}

Formula parse_formula_arg(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    std::ostringstream msg;
    msg << e.what() << "\n  " << text << "\n  " << std::string(std::min(e.position(), text.size()), ' ') << "^";
    throw ArgParseError(msg.str());
  }
}

// File state id -> index.
int state_index(const LoadedModel& lm, const std::string& id) {
  for (std::size_t i = 0; i < lm.state_ids.size(); ++i)
    if (lm.state_ids[i] == id) return static_cast<int>(i);
  throw UsageError("no state with id " + id);
}

std::string state_id(const LoadedModel& lm, int i) {
  return i >= 0 && i < static_cast<int>(lm.state_ids.size()) ? lm.state_ids[i] : std::to_string(i);
}

Json violations_json(const std::vector<Violation>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back({{"kind", v.kind}, {"detail", v.detail}});
  return a;
}

// ---------------------------------------------------------------------------

int cmd_parse(Output& o, const std::string& text) {
  Formula f = parse_formula_arg(text);
  std::vector<std::string> fv;
  for (const auto& v : free_vars(f)) fv.push_back(v);
  Json preds = Json::object();
  for (const auto& [p, n] : predicates(f)) preds[p] = n;
  o.j = {{"formula", to_string(f)},   {"size", formula_size(f)}, {"rank", quantifier_rank(f)},
         {"sentence", fv.empty()},    {"free", fv},              {"predicates", preds}};
  o.text << "formula: " << to_string(f) << "\nsize: " << formula_size(f) << "\nrank: " << quantifier_rank(f)
         << "\nfree:";
  for (const auto& v : fv) o.text << " " << v;
  o.text << "\npredicates:";
  for (const auto& [p, n] : predicates(f)) o.text << " " << p << "/" << n;
  o.text << "\n";
  return 0;
}

int cmd_force(Output& o, const std::string& path, const std::string& text, const std::string& state) {
  LoadedModel lm = load_model(path);
  Formula f = parse_formula_arg(text);
  require_valid(lm.model);
  const int v = state.empty() ? lm.model.base : state_index(lm, state);
  const bool r = forces(lm.model, v, f);
  o.j = {{"model", path}, {"formula", to_string(f)}, {"state", state_id(lm, v)}, {"forced", r}};
  o.text << (r ? "true" : "false") << "\n";
  return r ? 0 : 1;
}

int cmd_check_model(Output& o, const std::string& path) {
  LoadedModel lm = load_model(path);
  auto vs = validate(lm.model);
  o.j = {{"model", path},
         {"states", lm.model.num_states},
         {"domain", lm.model.domain},
         {"warnings", lm.warnings},
         {"valid", vs.empty()},
         {"violations", violations_json(vs)}};
  o.text << (vs.empty() ? "valid" : "invalid") << " (" << lm.model.num_states << " states, " << lm.model.domain.size()
         << " elements)\n";
  for (const auto& v : vs) o.text << "  " << v.kind << ": " << v.detail << "\n";
  return vs.empty() ? 0 : 1;
}

int cmd_condition(Output& o, const std::string& path, bool is_i) {
  LoadedModel lm = load_model(path);
  require_valid(lm.model);
  ConditionReport r = is_i ? check_I(lm.model) : check_J(lm.model);
  const char* name = is_i ? "I" : "J";
  Json w = Json::array();
  o.text << name << (r.holds ? " holds" : " fails");
  if (r.violating_state) o.text << " (no witness at state " << state_id(lm, *r.violating_state) << ")";
  o.text << "\n";
  for (int s = 0; s < lm.model.num_states; ++s) {
    Json e = {{"state", state_id(lm, s)}};
    if (r.witnesses[s]) e["witness"] = *r.witnesses[s];
    else e["witness"] = nullptr;
    w.push_back(e);
    o.text << "  state " << state_id(lm, s) << ": "
           << (r.witnesses[s] ? "witness " + std::to_string(*r.witnesses[s]) : std::string("none")) << "\n";
  }
  o.j = {{"model", path}, {"condition", name}, {"holds", r.holds}, {"witnesses", w}};
  if (r.violating_state) o.j["violating_state"] = state_id(lm, *r.violating_state);
  return r.holds ? 0 : 1;
}

int emit_model(Output& o, const GModel& m, const std::vector<std::string>& header, const std::string& out_path) {
  const std::string body = model_to_string(m, header);
  if (!out_path.empty()) write_file(out_path, body);
  o.j["output"] = out_path.empty() ? Json(nullptr) : Json(out_path);
  o.j["model_text"] = body;
  if (out_path.empty()) o.text << body;
  return 0;
}

int cmd_realize_r(Output& o, const std::string& path, const std::string& out_path) {
  LoadedModel lm = load_model(path);
  require_valid(lm.model);
  if (!check_I(lm.model).holds) {
    o.j = {{"model", path}, {"condition_I", false}};
    o.text << "I fails; no realizing R is built\n";
    return 1;
  }
  GModel m = realize_R(lm.model);
  const bool g = forces(m, m.base, gamma_formula());
  o.j = {{"model", path}, {"condition_I", true}, {"gamma_forced", g}, {"realizing_set", realizing_set(lm.model)}};
  emit_model(o, m, {"R realized from " + path, std::string("Gamma forced at base: ") + (g ? "yes" : "no")}, out_path);
  if (!out_path.empty()) o.text << "wrote " << out_path << " (Gamma forced at base: " << (g ? "yes" : "no") << ")\n";
  return g ? 0 : 1;
}

int cmd_realize_s(Output& o, const std::string& path, const std::string& state, const std::string& out_path) {
  LoadedModel lm = load_model(path);
  require_valid(lm.model);
  auto bad = j_violations(lm.model);
  int w;
  if (state.empty()) {
    if (bad.empty()) {
      o.j = {{"model", path}, {"condition_J", true}};
      o.text << "J holds at every state; nothing to realize\n";
      return 1;
    }
    w = bad.front();
  } else {
    w = state_index(lm, state);
  }
  GModel m = realize_S(lm.model, w);
  const bool d = forces(m, m.base, delta_formula());
  o.j = {{"model", path}, {"state", state_id(lm, w)}, {"delta_forced", d}};
  emit_model(o, m, {"S realized at state " + state_id(lm, w) + " from " + path,
                    std::string("Delta forced at base: ") + (d ? "yes" : "no")},
             out_path);
  if (!out_path.empty()) o.text << "wrote " << out_path << " (Delta forced at base: " << (d ? "yes" : "no") << ")\n";
  return d ? 1 : 0;
}

int cmd_brute_so(Output& o, const std::string& path) {
  LoadedModel lm = load_model(path);
  auto so = brute_second_order(lm.model);
  const bool i = check_I(lm.model).holds, j = check_J(lm.model).holds;
  const bool agree = so.exists_r_gamma == i && so.forall_s_delta == j;
  o.j = {{"model", path}, {"exists_R_gamma", so.exists_r_gamma}, {"forall_S_delta", so.forall_s_delta},
         {"condition_I", i},  {"condition_J", j},                   {"agree", agree}};
  o.text << "exists R. Gamma: " << (so.exists_r_gamma ? "true" : "false") << "  (I: " << (i ? "true" : "false")
         << ")\nforall S. Delta: " << (so.forall_s_delta ? "true" : "false") << "  (J: " << (j ? "true" : "false")
         << ")\n"
         << (agree ? "agree" : "DISAGREE") << "\n";
  return agree ? 0 : 1;
}

int cmd_check_asim(Output& o, const std::string& p1, const std::string& p2, const std::string& pz, int size) {
  LoadedModel a = load_model(p1), b = load_model(p2);
  require_valid(a.model);
  require_valid(b.model);
  std::istringstream in(slurp(pz));
  AsimRelation z = read_asim(in);
  auto vs = check(z, a.model, b.model);
  o.j = {{"model1", p1}, {"model2", p2}, {"asim", pz}, {"entries", z.entries.size()},
         {"horizon", z.effective_horizon()}, {"valid", vs.empty()}, {"violations", violations_json(vs)}};
  o.text << (vs.empty() ? "valid" : "invalid") << " asimulation (" << z.entries.size() << " entries, horizon "
         << z.effective_horizon() << ")\n";
  for (const auto& v : vs) o.text << "  " << v.kind << ": " << v.detail << "\n";
  if (!vs.empty() || size <= 0) return vs.empty() ? 0 : 1;
  Signature sig;
  for (const auto& [name, ar] : a.model.signature())
    if (ar <= 1) sig[name] = ar;
  FormulaOracle oracle(size, z.effective_horizon(), sig);
  auto pv = preserves_exhaustive(z, a.model, b.model, oracle);
  o.j["preservation_size"] = size;
  o.j["preservation_violations"] = violations_json(pv);
  o.text << "preservation up to size " << size << ": " << (pv.empty() ? "ok" : "VIOLATED") << "\n";
  for (const auto& v : pv) o.text << "  " << v.detail << "\n";
  return pv.empty() ? 0 : 1;
}

int cmd_greatest_asim(Output& o, const std::string& p1, const std::string& p2, int max_len, const std::string& out_path) {
  LoadedModel a = load_model(p1), b = load_model(p2);
  require_valid(a.model);
  require_valid(b.model);
  StratifiedAsim g = bounded_greatest(a.model, b.model, max_len);
  const bool fwd = g.related({1, a.model.base, {}, b.model.base, {}});
  const bool bwd = g.related({2, b.model.base, {}, a.model.base, {}});
  Json counts = Json::array();
  o.text << "greatest asimulation, tuples up to length " << max_len << "\n";
  for (int l = 0; l <= max_len; ++l) {
    counts.push_back({{"length", l}, {"1->2", g.count(1, l)}, {"2->1", g.count(2, l)}});
    o.text << "  length " << l << ": " << g.count(1, l) << " (1->2), " << g.count(2, l) << " (2->1)\n";
  }
  o.text << "bases related 1->2: " << (fwd ? "yes" : "no") << ", 2->1: " << (bwd ? "yes" : "no") << "\n";
  o.j = {{"model1", p1}, {"model2", p2}, {"max_len", max_len}, {"counts", counts},
         {"bases_related_1_2", fwd}, {"bases_related_2_1", bwd}};
  if (!out_path.empty()) {
    write_file(out_path, asim_to_string(g.to_relation(), {"greatest asimulation of " + p1 + " and " + p2}));
    o.j["output"] = out_path;
    o.text << "wrote " << out_path << "\n";
  }
  return 0;
}

Json epset_json(const EPSet& s) {
  Json j = {{"set", to_string(s)}, {"threshold", s.threshold()}, {"period", s.period()},
            {"empty", s.is_empty()}, {"infinite", s.is_infinite()}, {"first", s.first(12)}};
  if (auto l = s.least()) j["least"] = *l;
  return j;
}

void epset_text(std::ostream& out, const EPSet& s) {
  out << to_string(s) << "\n  threshold " << s.threshold() << ", period " << s.period() << ", "
      << (s.is_empty() ? "empty" : s.is_infinite() ? "infinite" : "finite (" + std::to_string(s.finite_size()) + ")")
      << "\n  first:";
  for (int n : s.first(12)) out << " " << n;
  out << "\n";
}

int cmd_qp(Output& o, const std::vector<std::string>& sets, const std::string& split, const std::string& qp_text,
           int model, const std::vector<std::string>& leq) {
  if (sets.empty() && split.empty() && qp_text.empty() && leq.empty())
    throw UsageError("qp: give --set, --split, --partition or --leq");
  int rc = 0;
  if (!sets.empty()) {
    o.j["sets"] = Json::array();
    for (const auto& t : sets) {
      EPSet s = parse_epset(t);
      o.j["sets"].push_back(epset_json(s));
      epset_text(o.text, s);
    }
  }
  if (!split.empty()) {
    EPSet s = parse_epset(split);
    if (!s.is_infinite()) throw UsageError("split needs an infinite set");
    auto [x, y] = split_two_infinite(s);
    o.j["split"] = {{"set", to_string(s)}, {"first", to_string(x)}, {"second", to_string(y)}};
    o.text << "split " << to_string(s) << " = " << to_string(x) << " , " << to_string(y) << "\n";
  }
  if (!qp_text.empty()) {
    QuasiPartition p = parse_quasipartition(qp_text);
    const bool ok = is_quasipartition(p);
    o.j["partition"] = {{"value", to_string(p)}, {"quasi_partition", ok}};
    o.text << to_string(p) << ": " << (ok ? "quasi-partition" : "not a quasi-partition") << "\n";
    if (model) {
      const bool in = ok && in_state_space(p, model);
      o.j["partition"]["model"] = model;
      o.j["partition"]["state"] = in;
      o.text << "  state of model " << model << ": " << (in ? "yes" : "no") << "\n";
      if (!in) rc = 1;
    }
    if (!ok) rc = 1;
  }
  if (!leq.empty()) {
    if (leq.size() != 2) throw UsageError("--leq takes two quasi-partitions");
    QuasiPartition p = parse_quasipartition(leq[0]), q = parse_quasipartition(leq[1]);
    const bool r = sqsubseteq(p, q);
    o.j["leq"] = {{"left", to_string(p)}, {"right", to_string(q)}, {"holds", r}};
    o.text << to_string(p) << (r ? " <= " : " not <= ") << to_string(q) << "\n";
    if (!r) rc = 1;
  }
  return rc;
}

int cmd_truncate(Output& o, int model, int n, int depth, const std::string& out_path) {
  GModel m = finite_truncation(model, n, depth);
  const bool i = check_I(m).holds, j = check_J(m).holds;
  o.j = {{"model", model}, {"max_n", n}, {"depth", depth}, {"states", m.num_states},
         {"condition_I", i}, {"condition_J", j}};
  emit_model(o, m,
             {"truncation of model " + std::to_string(model) + " at n = " + std::to_string(n) + ", depth " +
                  std::to_string(depth),
              std::string("I ") + (i ? "holds" : "fails") + ", J " + (j ? "holds" : "fails")},
             out_path);
  if (!out_path.empty()) o.text << "wrote " << out_path << " (" << m.num_states << " states)\n";
  return 0;
}

int cmd_check_proof(Output& o, const std::string& path, const std::string& goal) {
  std::istringstream in(slurp(path));
  Proof p = read_proof(in);
  std::optional<Sequent> expected;
  if (!goal.empty()) expected = parse_sequent(goal, p.abbreviations);
  ProofCheck r = check_proof(p, expected);
  const Sequent& root = p.root_node().conclusion;
  o.j = {{"proof", path}, {"nodes", p.nodes.size()}, {"root", p.root}, {"conclusion", to_string(root)}, {"ok", r.ok}};
  if (r.ok) {
    o.text << "ok\n" << p.root << ": " << to_string(root) << " (" << p.nodes.size() << " nodes)\n";
    return 0;
  }
  o.j["node"] = r.node;
  o.j["path"] = r.path;
  o.j["message"] = r.message;
  o.text << "rejected at " << r.node << ": " << r.message << "\n  path:";
  for (const auto& id : r.path) o.text << " " << id;
  o.text << "\n";
  return 1;
}

struct RefuteArgs {
  int max_size = 7, max_rank = 2, max_states = 3, max_domain = 3;
  std::uint64_t seed = 42;
  bool no_truncations = false;
  std::string candidate, export_dir, side;
  int export_limit = 20;
  bool summary = false;
};

void export_refutation(const Refutation& r, const std::string& dir, std::size_t k, Json& files) {
  std::filesystem::create_directories(dir);
  const std::string stem = dir + "/refutation-" + std::to_string(k);
  write_file(stem + ".gm", model_to_string(r.model, {"candidate: " + to_string(r.candidate),
                                                     std::string(side_name(r.side)) + " refutation, source " + r.source}));
  write_file(stem + ".trace", r.certificate);
  files.push_back({{"candidate", to_string(r.candidate)}, {"model", stem + ".gm"}, {"trace", stem + ".trace"}});
}

int cmd_refute(Output& o, const RefuteArgs& a) {
  if (a.max_size < 1 || a.max_rank < 0 || a.max_states < 1 || a.max_domain < 1) throw UsageError("bounds must be positive");
  SearchOptions opt;
  opt.max_states = a.max_states;
  opt.max_domain = a.max_domain;
  opt.truncations = !a.no_truncations;
  if (a.side == "gamma") opt.only = Side::Gamma;
  else if (a.side == "delta") opt.only = Side::Delta;
  o.j["seed"] = a.seed;
  o.text << "# cd-kit refute-interpolants seed=" << a.seed << "\n";
  if (!a.candidate.empty()) {
    Formula f = parse_formula_arg(a.candidate);
    auto r = refute(f, opt);
    o.j["candidate"] = to_string(f);
    if (!r) {
      o.j["refuted"] = false;
      o.text << to_string(f) << ": exhausted (no refutation within the bounds)\n";
      return 1;
    }
    o.j["refuted"] = true;
    o.j["side"] = side_name(r->side);
    o.j["source"] = r->source;
    o.j["certificate"] = r->certificate;
    o.text << to_string(f) << ": " << side_name(r->side) << " via " << r->source << "\n" << r->certificate;
    if (!a.export_dir.empty()) {
      Json files = Json::array();
      export_refutation(*r, a.export_dir, 0, files);
      o.j["exported"] = files;
    }
    return 0;
  }
  SweepReport rep = refutation_sweep(a.max_size, a.max_rank, opt);
  o.text << report_text(rep, !a.summary);
  o.j["bounds"] = {{"max_size", a.max_size}, {"max_rank", a.max_rank}, {"max_states", a.max_states},
                   {"max_domain", a.max_domain}, {"truncations", opt.truncations}};
  o.j["candidates"] = rep.entries.size();
  o.j["gamma_refuted"] = rep.gamma_refuted;
  o.j["delta_refuted"] = rep.delta_refuted;
  o.j["survivors"] = rep.survivors;
  o.j["double_side"] = rep.double_side;
  o.j["unverified"] = rep.unverified;
  o.j["clean"] = rep.clean();
  if (!a.summary) {
    Json es = Json::array();
    for (const auto& e : rep.entries)
      es.push_back({{"candidate", to_string(e.candidate)},
                    {"side", e.side ? Json(side_name(*e.side)) : Json("exhausted")},
                    {"source", e.side ? Json(rep.sources[e.source].label) : Json(nullptr)}});
    o.j["entries"] = es;
  }
  if (!a.export_dir.empty()) {
    Json files = Json::array();
    std::size_t k = 0;
    for (std::size_t i = 0; i < rep.entries.size() && static_cast<int>(k) < a.export_limit; ++i)
      if (rep.entries[i].side) export_refutation(rep.refutation(i), a.export_dir, k++, files);
    o.j["exported"] = files;
    if (!o.json) o.text << "exported " << k << " refutations to " << a.export_dir << "\n";
  }
  return rep.clean() ? 0 : 1;
}

int cmd_verify(Output& o, std::uint64_t seed, const std::vector<int>& only, bool timings) {
  VerifyConfig c;
  c.seed = seed;
  for (int k : only)
    if (k < 1 || k > 8) throw UsageError("--only takes criteria 1..8");
  auto rs = verify_all(c, only);
  bool ok = true;
  Json claims = Json::array();
  for (const auto& r : rs) {
    ok = ok && r.passed;
    Json cj = {{"criterion", r.criterion}, {"claim", r.name}, {"check", r.check}, {"passed", r.passed},
               {"cases", r.cases}, {"failures", r.failures}, {"detail", r.detail}};
    if (timings) cj["seconds"] = r.seconds;
    claims.push_back(cj);
  }
  o.j["seed"] = seed;
  o.j["claims"] = claims;
  o.j["passed"] = ok;
  o.text << "# cd-kit verify-paper seed=" << seed << "\n" << claims_table(rs, timings);
  std::size_t n_ok = 0;
  for (const auto& r : rs) n_ok += r.passed;
  o.text << n_ok << "/" << rs.size() << " claims passed\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cd-kit: constant-domain Kripke models, asimulations, sequent proofs and interpolant refutation"};
  app.footer(kFormats);
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.json, "structured JSON output (see below)");
  app.set_help_all_flag("--help-all", "help for every subcommand");
  const std::uint64_t seed0 = default_seed();

  std::string formula, model, model2, state, out_path, asim, proof, goal, split, qp_text;
  std::vector<std::string> sets, leq;
  int max_len = 1, size = 0, which = 0, n = 9, depth = 1;
  int qp_model = 0;
  std::uint64_t seed = seed0;
  std::vector<int> only;
  bool timings = false;
  RefuteArgs ra;
  ra.seed = seed0;
  int rc = 0;
  std::function<int()> run;

  auto* c = app.add_subcommand("parse", "parse a formula and print its normal form, size, rank and free variables");
  c->add_option("--formula,-f", formula, "formula text")->required();
  c->callback([&] { run = [&] { return cmd_parse(out, formula); }; });

  c = app.add_subcommand("force", "decide forcing of a sentence at a state (default: base); prints true/false");
  c->add_option("--model,-m", model, "model file")->required();
  c->add_option("--formula,-f", formula, "sentence")->required();
  c->add_option("--state,-s", state, "state id");
  c->callback([&] { run = [&] { return cmd_force(out, model, formula, state); }; });

  c = app.add_subcommand("check-model", "validate a model file (order, base, domain, monotonicity)");
  c->add_option("--model,-m", model, "model file")->required();
  c->callback([&] { run = [&] { return cmd_check_model(out, model); }; });

  for (bool is_i : {true, false}) {
    c = app.add_subcommand(is_i ? "check-i" : "check-j",
                           is_i ? "check condition I on a P,Q-model, with witnesses" : "check condition J on a P,Q-model, with witnesses");
    c->add_option("--model,-m", model, "model file")->required();
    c->callback([&, is_i] { run = [&, is_i] { return cmd_condition(out, model, is_i); }; });
  }

  c = app.add_subcommand("realize-r", "interpret R on an I-model so that Gamma is forced; writes a model file");
  c->add_option("--model,-m", model, "P,Q-model file")->required();
  c->add_option("--out,-o", out_path, "output model file (default: stdout)");
  c->callback([&] { run = [&] { return cmd_realize_r(out, model, out_path); }; });

  c = app.add_subcommand("realize-s", "interpret S at a J-violating state so that Delta fails; exit 0 when Delta is refuted");
  c->add_option("--model,-m", model, "P,Q-model file")->required();
  c->add_option("--state,-s", state, "state id (default: first state where J fails)");
  c->add_option("--out,-o", out_path, "output model file (default: stdout)");
  c->callback([&] { run = [&] { return cmd_realize_s(out, model, state, out_path); }; });

  c = app.add_subcommand("brute-so", "decide exists R.Gamma and forall S.Delta by enumeration and compare with I, J");
  c->add_option("--model,-m", model, "P,Q-model file")->required();
  c->callback([&] { run = [&] { return cmd_brute_so(out, model); }; });

  c = app.add_subcommand("check-asim", "check an asimulation file between two models");
  c->add_option("--model1", model, "first model file")->required();
  c->add_option("--model2", model2, "second model file")->required();
  c->add_option("--asim,-z", asim, "asimulation file")->required();
  c->add_option("--preserve-size", size, "also check transfer of every formula up to this size (unary predicates)")
      ->check(CLI::NonNegativeNumber);
  c->callback([&] { run = [&] { return cmd_check_asim(out, model, model2, asim, size); }; });

  c = app.add_subcommand("greatest-asim", "compute the greatest asimulation with tuples up to a length");
  c->add_option("--model1", model, "first model file")->required();
  c->add_option("--model2", model2, "second model file")->required();
  c->add_option("--max-len,-l", max_len, "maximum tuple length")->check(CLI::NonNegativeNumber);
  c->add_option("--out,-o", out_path, "write the relation as an asimulation file");
  c->callback([&] { run = [&] { return cmd_greatest_asim(out, model, model2, max_len, out_path); }; });

  c = app.add_subcommand("qp", "eventually periodic set and quasi-partition calculator");
  c->add_option("--set", sets, "set expression to normalize (repeatable)");
  c->add_option("--split", split, "split an infinite set into two infinite halves");
  c->add_option("--partition", qp_text, "quasi-partition (A; B; C) to check");
  c->add_option("--model", qp_model, "with --partition: also test membership in the state set of model 1 or 2")
      ->check(CLI::Range(1, 2));
  c->add_option("--leq", leq, "two quasi-partitions: test the order")->expected(2);
  c->callback([&] { run = [&] { return cmd_qp(out, sets, split, qp_text, qp_model, leq); }; });

  c = app.add_subcommand("truncate", "finite truncation of model 1 or 2 as a model file");
  c->add_option("--model", which, "1 or 2")->required()->check(CLI::Range(1, 2));
  c->add_option("--n", n, "largest element kept")->check(CLI::PositiveNumber);
  c->add_option("--depth", depth, "moves from the base")->check(CLI::NonNegativeNumber);
  c->add_option("--out,-o", out_path, "output model file (default: stdout)");
  c->callback([&] { run = [&] { return cmd_truncate(out, which, n, depth, out_path); }; });

  c = app.add_subcommand("check-proof", "check a sequent proof file");
  c->add_option("--proof,-p", proof, "proof file")->required();
  c->add_option("--goal,-g", goal, "sequent the root must prove, e.g. \"gamma => delta\"");
  c->callback([&] { run = [&] { return cmd_check_proof(out, proof, goal); }; });

  c = app.add_subcommand("refute-interpolants",
                         "refute every P,Q-sentence within the bounds as an interpolant for Gamma -> Delta; exit 1 if any survives");
  c->add_option("--max-size", ra.max_size, "formula size bound")->check(CLI::PositiveNumber);
  c->add_option("--max-rank", ra.max_rank, "quantifier rank bound")->check(CLI::NonNegativeNumber);
  c->add_option("--max-states", ra.max_states, "model state bound")->check(CLI::PositiveNumber);
  c->add_option("--max-domain", ra.max_domain, "model domain bound")->check(CLI::PositiveNumber);
  c->add_option("--seed", ra.seed, "master seed, recorded in the report (default: CDKIT_SEED or 42)");
  c->add_flag("--no-truncations", ra.no_truncations, "use enumerated models only");
  c->add_option("--side", ra.side, "only gamma-side or delta-side models")->check(CLI::IsMember({"gamma", "delta"}));
  c->add_option("--candidate,-c", ra.candidate, "refute one sentence and print its certificate");
  c->add_option("--export", ra.export_dir, "directory for refutation model files and forcing traces");
  c->add_option("--export-limit", ra.export_limit, "maximum refutations exported by a sweep")->check(CLI::NonNegativeNumber);
  c->add_flag("--summary", ra.summary, "omit the per-candidate lines");
  c->callback([&] { run = [&] { return cmd_refute(out, ra); }; });

  c = app.add_subcommand("verify-paper", "run the bundled claim suites and print a pass/fail table");
  c->add_option("--seed", seed, "master seed (default: CDKIT_SEED or 42)");
  c->add_option("--only", only, "criteria to run, e.g. --only 1 5 8");
  c->add_flag("--timings", timings, "include run times (output then varies between runs)");
  c->callback([&] { run = [&] { return cmd_verify(out, seed, only, timings); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    rc = run();
  } catch (const UsageError& e) {
    std::cerr << "cd-kit " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const ArgParseError& e) {
    std::cerr << "cd-kit " << command << ": parse error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "cd-kit " << command << ": parse error: " << e.what() << "\n";
    return 2;
  } catch (const CeilingExceeded& e) {
    std::cerr << "cd-kit " << command << ": too large: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cd-kit " << command << ": " << e.what() << "\n";
    return 2;
  }

  if (out.json) {
    Json j = {{"format", kJsonFormat}, {"command", command}, {"exit", rc}};
    for (auto& [k, v] : out.j.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << out.text.str();
  }
  return rc;
}
