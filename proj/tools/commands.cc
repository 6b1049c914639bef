#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "anyon/cli.h"
#include "anyon/group_spec.h"
#include "anyon/protocols.h"
#include "anyon/qudit_oracle.h"
#include "anyon/verify.h"

#ifndef ANYON_VERSION
#define ANYON_VERSION "dev"
#endif

namespace anyon::cli {

namespace {

using json = nlohmann::json;
using proto::Context;
using proto::Machine;
using proto::ProtocolOutcome;
using sim::Register;
using sim::SlotId;

// Bad input from the user: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string mode = "enumerate";
  double tolerance = 1e-9;
  std::string json_path;
  unsigned max_rounds = 0;
};

struct Outcome {
  json results;
  bool verified = true;
  std::string text;  // printed instead of the report when set
};

Group group_from(const std::string& text) {
  try {
    return build_group(parse_group_spec(text));
  } catch (const SpecError& e) {
    throw UsageError("group spec '" + text + "' " + e.what());
  } catch (const GroupError& e) {
    throw UsageError("group spec '" + text + "': " + e.what());
  }
}

std::shared_ptr<const Context> context_from(const std::string& text) {
  Group g = group_from(text);
  try {
    return proto::make_context(g);
  } catch (const std::exception& e) {
    throw UsageError("no anyon encoding for '" + text + "': " + e.what());
  }
}

unsigned parse_uint(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad " + what + " '" + s + "'");
  return static_cast<unsigned>(v);
}

double deficit(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return 1.0 - oracle::fidelity(a, b); }

// ---- classify / decompose ---------------------------------------------------------

Outcome classify_cmd(const std::string& spec) {
  Group g = group_from(spec);
  auto c = classify(g);
  Outcome o;
  o.results = {{"group", g.label()},     {"order", g.order()},         {"abelian", c.abelian},
               {"nilpotent", c.nilpotent}, {"solvable", c.solvable}, {"power", power_name(c.power)}};
  return o;
}

Outcome decompose_cmd(const std::string& spec) {
  auto ctx = context_from(spec);
  const Decomposition& d = *ctx->dec;
  Outcome o;
  o.results = {{"group", d.G.label()},
               {"order", d.G.order()},
               {"N_order", d.N.size()},
               {"quotient_order", d.Gt().order()},
               {"p", d.p()},
               {"n", d.n()},
               {"q", d.q},
               {"H_tilde_order", d.H_tilde.size()},
               {"period_l", d.period_l},
               {"exhaustive_depth", d.exhaustive_depth},
               {"b", d.b},
               {"a_star", d.a_star},
               {"lambda_order", d.lam.lambda.size()},
               {"killers", d.lam.killers.size()},
               {"phi_maps", d.phi_set.size()},
               {"base_case", ctx->base_case()},
               {"charge_pair_found", ctx->charge_pair_found},
               {"rep_dim", ctx->rep ? ctx->rep->dim : 0},
               {"fallback", ctx->fallback}};
  return o;
}

// ---- fusion tables ----------------------------------------------------------------

Outcome fusion_cmd(const std::string& spec, const std::string& rep_arg, const std::string& gamma_arg,
                   const std::string& format) {
  GroupSpecAST ast;
  try {
    ast = parse_group_spec(spec);
  } catch (const SpecError& e) {
    throw UsageError("group spec '" + spec + "' " + e.what());
  }
  FusionAmplitudeTable table;
  if (ast.kind == GroupSpecAST::Kind::kSemidirectPQ) {
    // closed form F_{i->j}; the induced irrep is fixed by its omega index
    const auto& s = ast.pq;
    unsigned omega = 1;
    if (rep_arg != "default" && rep_arg != std::to_string(s.q) + "d") omega = parse_uint(rep_arg, "rep (omega index)");
    unsigned j = 1;
    if (gamma_arg == "trivial") j = 0;
    else if (gamma_arg == "sign" && s.q == 2) j = 1;
    else if (gamma_arg != "default") j = parse_uint(gamma_arg, "gamma index");
    if (omega < 1 || omega >= s.p) throw UsageError("omega index must lie in [1, p-1]");
    if (j >= s.q) throw UsageError("gamma index must lie in [0, q-1]");
    auto full = fusion_F_semidirect(s, omega);
    table = full;
    table.entries.clear();
    for (const auto& e : full.entries)
      if (e.gamma == j) table.entries.push_back(e);
  } else {
    Group g = group_from(spec);
    auto reps = irreps(g);
    auto gammas = one_dim_reps(g);
    const Irrep* r = nullptr;
    if (rep_arg == "default") {
      for (const auto& x : reps)
        if (x.dim > 1 && !r) r = &x;
    } else if (rep_arg.size() > 1 && rep_arg.back() == 'd') {
      const unsigned dim = parse_uint(rep_arg.substr(0, rep_arg.size() - 1), "rep dimension");
      for (const auto& x : reps)
        if (static_cast<unsigned>(x.dim) == dim && !r) r = &x;
    } else {
      const unsigned k = parse_uint(rep_arg, "rep index");
      if (k < reps.size()) r = &reps[k];
    }
    if (!r) throw UsageError("no irrep matches '" + rep_arg + "'");
    const OneDimRep* gm = nullptr;
    if (gamma_arg == "trivial") gm = &gammas.front();
    else if (gamma_arg == "sign" || gamma_arg == "default") gm = gammas.size() > 1 ? &gammas[1] : nullptr;
    else {
      const unsigned k = parse_uint(gamma_arg, "gamma index");
      if (k < gammas.size()) gm = &gammas[k];
    }
    if (!gm) throw UsageError("no one-dimensional rep matches '" + gamma_arg + "'");
    try {
      table = fusion_table_general(g, *r, *gm, whole(g));
    } catch (const GroupError& e) {
      throw UsageError(e.what());
    }
  }
  Outcome o;
  o.results = json::parse(table.to_json());
  o.results["csv"] = table.to_csv();
  if (format == "csv") o.text = table.to_csv();
  else if (format != "json") throw UsageError("format must be csv or json");
  return o;
}

// ---- simulate ---------------------------------------------------------------------

struct SimArgs {
  std::string protocol;
  std::string group;
  std::string input;
};

std::vector<std::pair<Element, cplx>> single_input(const Context& ctx, const std::string& input, std::uint64_t seed) {
  std::vector<std::pair<Element, cplx>> t;
  auto arg = [&](const std::string& prefix) { return parse_uint(input.substr(prefix.size()), prefix + " index"); };
  if (input.empty() || input == "uniform") {
    for (Element e : ctx.orbit) t.emplace_back(e, 1.0);
  } else if (input.rfind("basis:", 0) == 0) {
    t.emplace_back(ctx.comp(arg("basis:")), 1.0);
  } else if (input.rfind("tilde:", 0) == 0) {
    return ctx.tilde_vector(arg("tilde:") % ctx.d);
  } else if (input.rfind("orbit:", 0) == 0) {
    const unsigned k = arg("orbit:");
    if (k >= ctx.orbit.size()) throw UsageError("orbit index out of range");
    t.emplace_back(ctx.orbit[k], 1.0);
  } else if (input == "random") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (unsigned i = 0; i < ctx.d; ++i) t.emplace_back(ctx.code[i], cplx(nd(rng), nd(rng)));
  } else {
    throw UsageError("input must be uniform, random, basis:<i>, tilde:<s> or orbit:<k>");
  }
  return t;
}

using SlotProtocol = std::function<ProtocolOutcome(Register&, SlotId)>;

json run_single(std::shared_ptr<const Context> ctx, const std::vector<std::pair<Element, cplx>>& input,
                const SlotProtocol& protocol, const Globals& gl, sim::RegisterConfig rc, bool& verified) {
  rc.seed = gl.seed;
  SlotId slot = -1;
  auto factory = [&] {
    Register reg(ctx->group, rc);
    slot = reg.add_flux_superposition(input, "in");
    return reg;
  };
  auto support_of = [&](Register& reg, const ProtocolOutcome& o) {
    json s = json::array();
    if (o.success && !o.slots.empty())
      for (auto v : reg.support(o.slots.front())) s.push_back(v);
    return s;
  };
  if (gl.mode == "sample") {
    Register reg = factory();
    auto o = protocol(reg, slot);
    return {{"outcome", json::parse(o.to_json())}, {"support", support_of(reg, o)}};
  }
  std::vector<json> rows;
  auto bs = sim::enumerate_branches<json>(factory, [&](Register& reg) {
    auto o = protocol(reg, slot);
    return json{{"outcome", json::parse(o.to_json())}, {"support", support_of(reg, o)}};
  });
  double total = 0, success = 0;
  json branches = json::array();
  for (const auto& b : bs) {
    total += b.probability;
    if (b.result["outcome"]["success"].get<bool>()) success += b.probability;
    json row = b.result;
    row["probability"] = b.probability;
    row["choices"] = b.choices;
    if (branches.size() < 64) branches.push_back(row);
  }
  verified = std::abs(total - 1.0) <= gl.tolerance;
  return {{"branch_count", bs.size()},
          {"total_probability", total},
          {"success_probability", success},
          {"branches", branches},
          {"branches_truncated", bs.size() > branches.size()}};
}

std::vector<unsigned> digits_arg(const std::string& input, unsigned count, unsigned d) {
  std::vector<unsigned> out;
  std::stringstream ss(input);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_uint(tok, "digit") % d);
  if (out.size() != count) throw UsageError("expected " + std::to_string(count) + " comma-separated digits");
  return out;
}

Outcome simulate_cmd(const SimArgs& a, const Globals& gl) {
  if (gl.mode != "sample" && gl.mode != "enumerate") throw UsageError("mode must be sample or enumerate");
  auto ctx = context_from(a.group);
  proto::ControllerConfig cc;
  cc.max_rounds = gl.max_rounds;
  cc.seed = gl.seed;
  cc.tolerance = gl.tolerance;
  Outcome o;
  const std::string& p = a.protocol;
  o.results = {{"protocol", p}, {"group", a.group}, {"input", a.input}};
  sim::RegisterConfig rc;

  std::map<std::string, SlotProtocol> single{
      {"pp_zero", [&](Register& r, SlotId s) { return proto::pp_zero(*ctx, r, s); }},
      {"pp_zero_perp", [&](Register& r, SlotId s) { return proto::pp_zero_perp(*ctx, r, s, cc); }},
      {"pp_lambda", [&](Register& r, SlotId s) { return proto::pp_lambda(*ctx, r, s); }},
      {"pp_zero_perp_in_lambda", [&](Register& r, SlotId s) { return proto::pp_zero_perp_in_lambda(*ctx, r, s); }},
      {"pp_computational_subspace", [&](Register& r, SlotId s) { return proto::pp_computational_subspace(*ctx, r, s); }},
      {"amplify_lambda", [&](Register& r, SlotId s) { return proto::amplify_lambda(*ctx, r, s, cc); }},
      {"remove_zero", [&](Register& r, SlotId s) { return proto::remove_zero(*ctx, r, s, cc); }},
  };
  const auto supply = proto::ideal_tilde0_supply(*ctx);
  single["pp_tilde0"] = [&](Register& r, SlotId s) { return proto::pp_tilde0(*ctx, r, s, supply); };
  single["measure_z"] = [&](Register& r, SlotId s) { return proto::measure_basis(*ctx, r, s, false); };
  single["measure_x"] = [&](Register& r, SlotId s) { return proto::measure_basis(*ctx, r, s, true); };

  if (auto it = single.find(p); it != single.end()) {
    if (p.rfind("measure_", 0) == 0) rc.failure = sim::FailurePolicy::kUnravel;
    auto input = single_input(*ctx, a.input, gl.seed);
    o.results["run"] = run_single(ctx, input, it->second, gl, rc, o.verified);
    return o;
  }
  if (p == "distill_tilde0") {
    auto r = run_single(
        ctx, {{ctx->b, 1.0}},
        [&](Register& reg, SlotId s) {
          reg.discard(s);
          return proto::distill_tilde0(*ctx, reg, ctx->b);
        },
        gl, rc, o.verified);
    o.results["run"] = r;
    return o;
  }
  if (p == "cx") {
    double worst = 0;
    for (unsigned i = 0; i < ctx->d; ++i)
      for (unsigned j = 0; j < ctx->d; ++j) {
        Register reg(ctx->group);
        Machine m(ctx, reg);
        SlotId c = m.add_basis(i), t = m.add_basis(j);
        m.cx(c, t);
        auto want = oracle::QuditState::basis(ctx->d, {i, j});
        want.cx(0, 1);
        worst = std::max(worst, deficit(m.code_state({c, t}), want.amplitudes()));
      }
    o.results["max_deficit"] = worst;
    o.verified = worst < gl.tolerance;
    return o;
  }
  if (p == "magic_m1" || p == "magic_m2") {
    const auto kind = p == "magic_m1" ? proto::MagicKind::kM1 : proto::MagicKind::kM2;
    auto m = proto::make_magic(ctx, kind, cc);
    const double def = deficit(Machine(ctx, m.reg).code_state(m.slots), proto::magic_vector(kind, ctx->d));
    o.results["deficit"] = def;
    o.results["acceptance_probability"] = m.probability;
    o.results["projections"] = m.projections;
    o.verified = def < gl.tolerance;
    return o;
  }
  if (p == "magic_p2") {
    if (ctx->d != 2) throw UsageError("magic_p2 needs p = 2");
    auto m = proto::magic_p2(ctx);
    const double def = deficit(Machine(ctx, m.reg).code_state(m.slots), proto::magic_vector(proto::MagicKind::kM1, 2));
    o.results["deficit"] = def;
    o.results["removed_110"] = m.removed_110;
    o.results["acceptance_probability"] = m.probability;
    o.verified = def < gl.tolerance && m.removed_110;
    return o;
  }
  if (p == "toffoli") {
    if (ctx->d < 3) throw UsageError("toffoli needs p >= 3");
    const auto s1 = proto::cached_supply(proto::make_magic(ctx, proto::MagicKind::kM1, cc));
    const auto s2 = proto::cached_supply(proto::make_magic(ctx, proto::MagicKind::kM2, cc));
    std::vector<std::vector<unsigned>> inputs;
    if (!a.input.empty() && a.input != "uniform") {
      inputs.push_back(digits_arg(a.input, 3, ctx->d));
    } else if (gl.mode == "enumerate") {
      for (unsigned x = 0; x < ctx->d * ctx->d * ctx->d; ++x) inputs.push_back({x / (ctx->d * ctx->d), x / ctx->d % ctx->d, x % ctx->d});
    } else {
      inputs.push_back({1, 1, 0});
    }
    double worst = 0;
    std::size_t branches = 0;
    bool all_ok = true;
    for (const auto& in : inputs) {
      auto want = oracle::QuditState::basis(ctx->d, in);
      want.toffoli(0, 1, 2);
      std::vector<SlotId> abc;
      rc.seed = gl.seed;
      auto factory = [&] {
        Register reg(ctx->group, rc);
        Machine m(ctx, reg);
        abc = {m.add_basis(in[0]), m.add_basis(in[1]), m.add_basis(in[2])};
        return reg;
      };
      auto body = [&](Register& reg) {
        Machine m(ctx, reg);
        auto out = proto::apply_toffoli(m, abc, s1, s2, cc);
        if (!out.success) {
          all_ok = false;
          return 1.0;
        }
        return deficit(m.code_state(out.slots), want.amplitudes());
      };
      if (gl.mode == "sample") {
        Register reg = factory();
        worst = std::max(worst, body(reg));
        ++branches;
      } else {
        for (const auto& b : sim::enumerate_branches<double>(factory, body)) {
          worst = std::max(worst, b.result);
          ++branches;
        }
      }
    }
    o.results["inputs"] = inputs.size();
    o.results["branches"] = branches;
    o.results["max_deficit"] = worst;
    o.verified = all_ok && worst < gl.tolerance;
    return o;
  }
  if (p == "leakage") {
    const std::string in = a.input.empty() || a.input == "uniform" ? "random" : a.input;
    auto input = in.rfind("leaked:", 0) == 0
                     ? std::vector<std::pair<Element, cplx>>{{static_cast<Element>(parse_uint(in.substr(7), "element")), 1.0}}
                     : single_input(*ctx, in, gl.seed);
    for (const auto& [e, amp] : input)
      if (e >= ctx->group->order()) throw UsageError("element out of range");
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(ctx->d);
    bool leaked = false;
    for (const auto& [e, amp] : input) {
      auto i = ctx->index_of(e);
      if (i) want[*i] += amp;
      else leaked = true;
    }
    double worst = 0;
    bool confined = true;
    auto body = [&](Register& reg, SlotId s) {
      Machine m(ctx, reg);
      auto out = proto::leakage_correct(m, s);
      if (!m.in_code_space(out.slots.front())) confined = false;
      else if (!leaked) worst = std::max(worst, deficit(m.code_state(out.slots), want.normalized()));
      return out;
    };
    o.results["run"] = run_single(ctx, input, body, gl, rc, o.verified);
    o.results["leaked_input"] = leaked;
    o.results["confined"] = confined;
    if (!leaked) o.results["max_deficit"] = worst;
    o.verified = o.verified && confined && worst < gl.tolerance;
    return o;
  }
  throw UsageError("unknown protocol '" + p + "'");
}

// ---- verify -----------------------------------------------------------------------

Outcome verify_cmd(const std::string& suite, const std::string& expect_fail, const Globals& gl) {
  std::vector<int> ids;
  std::set<int> xfail;
  try {
    ids = verify::parse_suite(suite);
    if (!expect_fail.empty())
      for (int id : verify::parse_suite(expect_fail)) xfail.insert(id);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  verify::Options opts;
  opts.seed = gl.seed;
  Outcome o;
  json arr = json::array();
  std::ostringstream lines;
  for (int id : ids) {
    auto r = verify::run_criterion(id, opts);
    const bool expected = xfail.count(id) > 0;
    lines << verify::format_line(r, expected) << "\n";
    if (r.pass == expected) o.verified = false;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"expected_fail", expected}, {"detail", r.detail}});
  }
  o.results = {{"suite", suite}, {"criteria", arr}};
  o.text = lines.str();
  return o;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Anyon computation toolkit: group analysis, fusion tables and protocol simulation", "anyonctl"};
  app.require_subcommand(1);
  Globals gl;
  app.add_option("--seed", gl.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--mode", gl.mode, "sample or enumerate")->check(CLI::IsMember({"sample", "enumerate"}))->capture_default_str();
  app.add_option("--tolerance", gl.tolerance, "deficit / probability tolerance")->capture_default_str();
  app.add_option("--json", gl.json_path, "also write the report to this path");
  app.add_option("--max-rounds", gl.max_rounds, "round budget for the adaptive protocols (0: default)");

  std::string spec, rep = "default", gamma = "default", format = "csv", suite = "acceptance", expect_fail;
  SimArgs sa;
  auto* c_classify = app.add_subcommand("classify", "abelian / nilpotent / solvable and the gate power of a group");
  c_classify->add_option("group", spec, "group spec, e.g. S3 or Z7xsd(t=2)Z3")->required();
  auto* c_decomp = app.add_subcommand("decompose", "computational subgroup, quotient and protocol data");
  c_decomp->add_option("group", spec)->required();
  auto* c_fusion = app.add_subcommand("fusion-table", "charge-pair fusion amplitudes F_{h->gamma}");
  c_fusion->add_option("group", spec)->required();
  c_fusion->add_option("--rep", rep, "irrep: index, '<dim>d', or omega index for Zp x| Zq")->capture_default_str();
  c_fusion->add_option("--gamma", gamma, "one-dimensional sector: trivial, sign or index")->capture_default_str();
  c_fusion->add_option("--format", format, "csv or json")->capture_default_str();
  auto* c_sim = app.add_subcommand("simulate", "run a protocol on the anyon simulator");
  c_sim->add_option("protocol", sa.protocol, "cx, pp_zero, pp_tilde0, pp_zero_perp, pp_lambda, ... , toffoli, leakage")
      ->required();
  c_sim->add_option("--group", sa.group, "group spec")->default_val("Z3xsd(t=2)Z2");
  c_sim->add_option("--input", sa.input, "uniform | random | basis:<i> | tilde:<s> | orbit:<k> | a,b,c | leaked:<g>");
  auto* c_verify = app.add_subcommand("verify", "acceptance criteria");
  c_verify->add_option("suite", suite, "acceptance, all, or a list like 1,2,7")->capture_default_str();
  c_verify->add_option("--expect-fail", expect_fail, "criteria expected to fail");
  for (auto* sub : {c_classify, c_decomp, c_fusion, c_sim, c_verify}) sub->fallthrough();

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  std::string command = "?";
  auto write_json = [&](const json& report) {
    if (gl.json_path.empty()) return true;
    std::ofstream f(gl.json_path);
    f << report.dump(2) << "\n";
    return static_cast<bool>(f);
  };
  auto base_report = [&] {
    return json{{"schema", kReportSchema},
                {"command", command},
                {"argv", argv},
                {"seed", gl.seed},
                {"mode", gl.mode},
                {"tolerance", gl.tolerance},
                {"max_rounds", gl.max_rounds},
                {"versions", {{"anyonctl", ANYON_VERSION}}}};
  };
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    json r = base_report();
    r["error"] = {{"kind", "usage"}, {"message", e.what()}};
    write_json(r);
    return kUsageError;
  }
  for (auto* sub : app.get_subcommands()) command = sub->get_name();

  Outcome o;
  try {
    if (command == "classify") o = classify_cmd(spec);
    else if (command == "decompose") o = decompose_cmd(spec);
    else if (command == "fusion-table") o = fusion_cmd(spec, rep, gamma, format);
    else if (command == "simulate") o = simulate_cmd(sa, gl);
    else o = verify_cmd(suite, expect_fail, gl);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    json r = base_report();
    r["error"] = {{"kind", "usage"}, {"message", e.what()}};
    write_json(r);
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    json r = base_report();
    r["error"] = {{"kind", "runtime"}, {"message", e.what()}};
    write_json(r);
    return kVerificationFailed;
  }
  json report = base_report();
  report["inputs"] = {{"group", command == "simulate" ? sa.group : spec}};
  report["results"] = o.results;
  report["verified"] = o.verified;
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.text.empty()) out << o.text;
  else out << report.dump(2) << "\n";
  if (!write_json(report)) {
    err << "error: cannot write " << gl.json_path << "\n";
    return kUsageError;
  }
  return o.verified ? kOk : kVerificationFailed;
}

}  // namespace anyon::cli
