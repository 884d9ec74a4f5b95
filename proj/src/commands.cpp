#include "commands.hpp"

#include <cstdio>
#include <map>

#include "hfol/error.hpp"
#include "hfol/invariance.hpp"
#include "hfol/io.hpp"
#include "hfol/parser.hpp"
#include "hfol/proof.hpp"

namespace hfol::cmd {

using namespace gpd;

namespace {

json header(const char* command) {
  return {{"schema", kReportSchema}, {"command", command}};
}

std::vector<std::string> sort_list(const CtxObject& ctx) {
  return std::vector<std::string>(ctx.begin(), ctx.end());
}

const char* pick_backend(const Structure& s, const Options& opts) {
  const std::string want = opts.backend;
  if (want != "auto" && want != "set" && want != "groupoid") {
    throw_usage("unknown backend " + want + " (expected set, groupoid or auto)");
  }
  if (want != "auto" && want != s.backend()) {
    throw_usage("the structure is a " + std::string(s.backend()) +
                " structure but --backend is " + want);
  }
  return s.backend();
}

std::vector<std::string> set_env(const SetStructure& m, const CtxObject& ctx,
                                 std::size_t point) {
  std::vector<std::string> out;
  const auto coords = decode_point(m, ctx, point);
  for (std::size_t i = 0; i < ctx.size(); ++i) out.push_back(m.carriers.at(ctx[i])[coords[i]]);
  return out;
}

// Objects of the context base are mixed radix with the last sort least
// significant, as in the set model.
std::vector<std::string> groupoid_env(const GroupoidStructure& m,
                                      const CtxObject& ctx, std::size_t point) {
  std::vector<std::string> out(ctx.size());
  for (std::size_t i = ctx.size(); i-- > 0;) {
    const std::size_t n = m.carrier(ctx[i]).num_objects();
    const std::size_t o = point % n;
    point /= n;
    auto it = m.object_names.find(ctx[i]);
    out[i] = it != m.object_names.end() ? it->second[o] : std::to_string(o);
  }
  return out;
}

json fiber_json(const FinGroupoid& g) {
  std::vector<std::size_t> orders;
  for (std::uint32_t c = 0; c < g.num_components(); ++c) orders.push_back(g.group(c).order());
  return {{"objects", g.num_objects()},
          {"components", g.num_components()},
          {"automorphism_orders", orders}};
}

SetOptions set_options(const Options& opts) {
  SetOptions so;
  so.max_fiber = opts.max_fiber;
  return so;
}

FamilyOptions family_options(const Options& opts) {
  FamilyOptions fo;
  fo.max_fiber = opts.max_fiber;
  return fo;
}

Signature relation_signature() {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"c", {}, "A"});
  return sig;
}

SetStructure builtin_set() {
  return SetStructure{relation_signature(),
                      {{"A", {"0", "1", "2"}}},
                      {{"f", {0, 1, 2, 1, 2, 0, 2, 0, 1}}, {"c", {1}}}};
}

// B(Z/2) + 1, f the first projection, c the isolated point.
GroupoidStructure builtin_groupoid() {
  const FinGroupoid g = FinGroupoid::coproduct(
      FinGroupoid::delooping(FinGroup::cyclic(2)), FinGroupoid::terminal());
  const FinGroupoid gg = FinGroupoid::product(g, g);
  GroupoidStructure m;
  m.sig = relation_signature();
  m.carriers["A"] = g;
  std::vector<Obj> first;
  for (Obj x = 0; x < gg.num_objects(); ++x) first.push_back(FinGroupoid::split_object(g, x).first);
  m.functions["f"] = make_functor(gg, g, first, [&](const Mor& x) {
    return FinGroupoid::split_mor(g, g, x).first;
  });
  m.functions["c"] = make_functor(FinGroupoid::terminal(), g, {1},
                                  [&](const Mor&) { return g.id(1); });
  m.validate();
  return m;
}

}  // namespace

const Signature& Structure::sig() const { return set ? set->sig : groupoid->sig; }
const char* Structure::backend() const { return set ? "set" : "groupoid"; }

Structure load_structure(std::string_view json_text) {
  const std::string format = io::document_format(json_text);
  Structure s;
  if (format == io::kSetFormat) {
    s.set = io::read_set_structure(json_text);
  } else if (format == io::kGroupoidFormat) {
    s.groupoid = io::read_groupoid_structure(json_text);
  } else {
    throw ParseError("unknown structure format \"" + format + "\" (expected " +
                     io::kSetFormat + " or " + io::kGroupoidFormat + ")");
  }
  return s;
}

json check(const Signature& sig, const std::string& formula,
           const std::string& context) {
  const Context ctx = parse_context(context, sig);
  const Formula phi = parse_formula(formula, sig, ctx);
  json r = header("check");
  r["formula"] = to_string(phi);
  r["context"] = sort_list(ctx.sorts());
  r["canonical"] = to_string(canonicalize(phi, ctx));
  std::vector<std::string> fv;
  for (const auto& v : free_vars(phi)) fv.push_back(v.name + ":" + v.sort);
  r["free_vars"] = fv;
  r["connective_depth"] = phi.connective_depth();
  r["quantifier_depth"] = phi.quantifier_depth();
  return r;
}

json eval(const Structure& s, const std::string& formula,
          const std::string& context, const Options& opts) {
  const std::string backend = pick_backend(s, opts);
  const Context ctx = parse_context(context, s.sig());
  const Formula phi = parse_formula(formula, s.sig(), ctx);
  const CtxObject sorts = ctx.sorts();
  json r = header("eval");
  r["backend"] = backend;
  r["formula"] = to_string(phi);
  r["context"] = sort_list(sorts);
  json points = json::array();
  std::size_t inhabited = 0;
  if (s.set) {
    const auto p = lauchli(phi, ctx, *s.set, set_options(opts));
    for (std::size_t a = 0; a < p->sizes.size(); ++a) {
      const bool in = p->sizes[a] > 0;
      inhabited += in;
      points.push_back({{"point", a},
                        {"env", set_env(*s.set, sorts, a)},
                        {"proofs", p->sizes[a]},
                        {"inhabited", in},
                        {"tarski", tarski_truth(phi, ctx, *s.set, decode_point(*s.set, sorts, a))}});
    }
  } else {
    const auto f = groupoid_interpret(phi, ctx, *s.groupoid, family_options(opts));
    for (Obj a = 0; a < f->base().num_objects(); ++a) {
      const bool in = !f->fiber(a).empty();
      inhabited += in;
      json pt = fiber_json(f->fiber(a));
      pt["point"] = a;
      pt["env"] = groupoid_env(*s.groupoid, sorts, a);
      pt["inhabited"] = in;
      points.push_back(pt);
    }
  }
  r["points"] = points;
  r["inhabited_points"] = inhabited;
  if (sorts.empty()) r["verdict"] = inhabited > 0 ? "inhabited" : "uninhabited";
  return r;
}

json prove_check(const Signature& sig, const std::string& proof_text,
                 const Structure* s, const Options& opts) {
  const ProofFile pf = parse_proof(proof_text, sig);
  const Sequent seq = typecheck(pf.proof, sig);
  json r = header("prove-check");
  r["context"] = sort_list(seq.context);
  r["premise"] = to_string(seq.premise);
  r["conclusion"] = to_string(seq.conclusion);
  r["proof"] = to_string(pf.proof);
  if (!s) return r;
  const std::string backend = pick_backend(*s, opts);
  json ev = {{"backend", backend}};
  json points = json::array();
  if (s->set) {
    SetModel model(*s->set, set_options(opts));
    Interpreter<SetModel> interp(model, sig);
    const auto p = interp.deduction(pf.proof);
    for (std::size_t a = 0; a < p.map.size(); ++a) {
      points.push_back({{"point", a},
                        {"env", set_env(*s->set, seq.context, a)},
                        {"map", p.map[a]}});
    }
  } else {
    GroupoidModel model(*s->groupoid, family_options(opts));
    Interpreter<GroupoidModel> interp(model, sig);
    const auto f = interp.deduction(pf.proof);
    ev["coherent"] = check_fammor(f);
    for (std::size_t a = 0; a < f.at.size(); ++a) {
      points.push_back({{"point", a},
                        {"env", groupoid_env(*s->groupoid, seq.context, a)},
                        {"object_map", f.at[a].obj}});
    }
  }
  ev["points"] = points;
  r["evaluation"] = ev;
  return r;
}

json relations(const Structure* s, std::size_t per_family, const Options& opts) {
  std::string backend = opts.backend;
  Structure builtin;
  if (!s) {
    if (backend == "set") {
      builtin.set = builtin_set();
    } else if (backend == "groupoid" || backend == "auto") {
      builtin.groupoid = builtin_groupoid();
    } else {
      throw_usage("unknown backend " + backend);
    }
    s = &builtin;
  }
  backend = pick_backend(*s, opts);
  RelationBounds bounds;
  bounds.per_family = per_family;

  // "instances" counts evaluated instances; oversized ones are skipped and
  // replaced from further batches until every family reaches per_family.
  struct Counts {
    std::size_t instances = 0, literal = 0, homotopic = 0, failed = 0, skipped = 0;
  };
  std::map<RelationFamily, Counts> counts;
  json failures = json::array();
  constexpr std::size_t kMaxBatches = 16;
  std::size_t batches = 0;
  const auto short_family = [&] {
    for (RelationFamily f : kAllRelationFamilies) {
      if (counts[f].instances < per_family) return true;
    }
    return false;
  };
  for (; batches < kMaxBatches && short_family(); ++batches) {
    const std::uint64_t seed = opts.seed + batches * 0x9E3779B97F4A7C15ull;
    for (const auto& inst : basic_relation_instances(s->sig(), seed, bounds)) {
      Counts& c = counts[inst.family];
      if (c.instances >= per_family) continue;
      bool literal = false, homotopic_only = false;
      try {
        if (s->set) {
          SetModel model(*s->set, set_options(opts));
          Interpreter<SetModel> interp(model, s->sig());
          literal = interp.deduction(inst.lhs) == interp.deduction(inst.rhs);
        } else {
          GroupoidModel model(*s->groupoid, family_options(opts));
          Interpreter<GroupoidModel> interp(model, s->sig());
          const auto l = interp.deduction(inst.lhs);
          const auto r = interp.deduction(inst.rhs);
          literal = l == r;
          homotopic_only = !literal && homotopic(l, r);
        }
      } catch (const SizeGuardError&) {
        ++c.skipped;
        continue;
      }
      ++c.instances;
      if (literal) {
        ++c.literal;
      } else if (homotopic_only) {
        ++c.homotopic;
      } else {
        ++c.failed;
      }
      if (!literal) {
        failures.push_back({{"family", family_name(inst.family)},
                            {"relation", inst.relation},
                            {"lhs", to_string(inst.lhs)},
                            {"rhs", to_string(inst.rhs)},
                            {"homotopic", homotopic_only}});
      }
    }
  }
  json families = json::object();
  bool passed = true;
  for (RelationFamily f : kAllRelationFamilies) {
    const Counts& c = counts[f];
    families[family_name(f)] = {{"instances", c.instances},
                                {"literal", c.literal},
                                {"homotopic", c.homotopic},
                                {"failed", c.failed},
                                {"skipped", c.skipped}};
    passed = passed && c.failed == 0 && c.homotopic == 0 && c.instances >= per_family;
  }
  json r = header("relations");
  r["backend"] = backend;
  r["seed"] = opts.seed;
  r["per_family"] = per_family;
  r["batches"] = batches;
  r["families"] = families;
  r["failures"] = failures;
  r["passed"] = passed;
  return r;
}

json invariance(const GroupoidStructure& m, const GroupoidStructure& n,
                const std::string& equivalence_json,
                const std::vector<std::string>& formulas,
                const std::string& context, std::size_t pool_size,
                std::size_t pool_depth, const Options& opts) {
  if (opts.backend == "set") throw_usage("invariance runs on the groupoid backend");
  const HomotopyEquivalence h = io::read_equivalence(equivalence_json, m, n);
  json r = header("invariance");
  const Verification v = verify_homotopy_equivalence(m, n, h);
  r["verification"] = {{"ok", v.ok}, {"where", v.where}, {"detail", v.detail}};
  if (!v.ok) {
    r["passed"] = false;
    return r;
  }
  const Context ctx = parse_context(context, m.sig);
  std::vector<Formula> phis;
  for (const auto& text : formulas) phis.push_back(parse_formula(text, m.sig, ctx));
  if (phis.empty()) {
    if (!ctx.empty()) throw_usage("the formula pool is closed; give formulas for a context");
    phis = closed_formula_pool(m.sig, opts.seed, pool_size, pool_depth);
  }
  json results = json::array();
  bool all = true;
  for (const auto& phi : phis) {
    const auto rep = invariance_report(phi, ctx, m, n, h, family_options(opts));
    json pts = json::array();
    for (const auto& p : rep.points) {
      pts.push_back({{"point", p.point},
                     {"image", p.image},
                     {"m_objects", p.m_objects},
                     {"n_objects", p.n_objects},
                     {"m_inhabited", p.m_inhabited},
                     {"n_inhabited", p.n_inhabited},
                     {"equivalent", p.equivalent}});
    }
    all = all && rep.all_equivalent();
    results.push_back({{"formula", to_string(phi)},
                       {"equivalent", rep.all_equivalent()},
                       {"points", pts}});
  }
  r["context"] = sort_list(ctx.sorts());
  r["formulas"] = results;
  r["passed"] = all;
  return r;
}

// ---------------------------------------------------------------------------
// Regression suite for the homotopical examples.

namespace {

GroupoidStructure on(const FinGroupoid& g) {
  GroupoidStructure m;
  m.sig.add_sort("A");
  m.carriers["A"] = g;
  return m;
}

// One sort with endofunctors f and g, each given by an object map and an
// element map on root automorphisms (twists trivial).
GroupoidStructure with_endos(const FinGroupoid& c, const std::vector<Obj>& fo,
                             const std::function<Elem(Elem)>& fe,
                             const std::vector<Obj>& go,
                             const std::function<Elem(Elem)>& ge) {
  GroupoidStructure m = on(c);
  m.sig.add_function({"f", {"A"}, "A"});
  m.sig.add_function({"g", {"A"}, "A"});
  const auto endo = [&](const std::vector<Obj>& o, const std::function<Elem(Elem)>& e) {
    return make_functor(c, c, o, [&](const Mor& x) { return Mor{o[x.src], o[x.dst], e(x.elem)}; });
  };
  m.functions["f"] = endo(fo, fe);
  m.functions["g"] = endo(go, ge);
  m.validate();
  return m;
}

}  // namespace

json examples(const Options& opts) {
  const FamilyOptions fo = family_options(opts);
  const FinGroupoid bz2 = FinGroupoid::delooping(FinGroup::cyclic(2));
  const FinGroupoid bz3 = FinGroupoid::delooping(FinGroup::cyclic(3));
  const FinGroupoid i2 = FinGroupoid::indiscrete(2);
  const FinGroupoid d2 = FinGroupoid::discrete(2);
  const auto same = [](Elem e) { return e; };
  const auto inv3 = [](Elem e) { return static_cast<Elem>((3 - e) % 3); };

  struct Case {
    std::string group, carrier, formula;
    GroupoidStructure m;
    bool expected;
  };
  std::vector<Case> cases;
  const char* contr = "exists x. forall y. x = y";
  const char* conn = "exists x. forall y. ~~(x = y)";
  const char* classical = "(exists x. forall y. ~~(x = y)) -> (exists x. forall y. x = y)";
  const char* homot = "forall x. f(x) = g(x)";
  const char* equiv = "(forall x. g(f(x)) = x) & (forall y. f(g(y)) = y)";
  const std::vector<std::pair<std::string, FinGroupoid>> carriers = {
      {"empty", FinGroupoid()},
      {"terminal", FinGroupoid::terminal()},
      {"indiscrete(2)", i2},
      {"indiscrete(3)", FinGroupoid::indiscrete(3)},
      {"discrete(2)", d2},
      {"B(Z/2)", bz2},
      {"B(Z/3)", bz3},
      {"B(S3)", FinGroupoid::delooping(FinGroup::symmetric(3))},
      {"B(Z/2)+1", FinGroupoid::coproduct(bz2, FinGroupoid::terminal())},
  };
  for (const auto& [name, g] : carriers) {
    const bool contractible = g.num_components() == 1 && g.group(0).order() == 1;
    const bool connected = g.num_components() == 1;
    cases.push_back({"contractibility", name, contr, on(g), contractible});
    cases.push_back({"path-connectedness", name, conn, on(g), connected});
  }
  cases.push_back({"classical-failure", "B(Z/2)", classical, on(bz2), false});
  cases.push_back({"classical-failure", "discrete(2)", classical, on(d2), true});
  cases.push_back({"homotopy", "indiscrete(2), f = id, g = swap", homot,
                   with_endos(i2, {0, 1}, same, {1, 0}, same), true});
  cases.push_back({"homotopy", "discrete(2), f = id, g = swap", homot,
                   with_endos(d2, {0, 1}, same, {1, 0}, same), false});
  cases.push_back({"homotopy", "B(Z/3), f = id, g = inverse", homot,
                   with_endos(bz3, {0}, same, {0}, inv3), false});
  cases.push_back({"homotopy", "B(Z/2), f = id, g = inverse", homot,
                   with_endos(bz2, {0}, same, {0}, same), true});
  cases.push_back({"homotopy-equivalence", "indiscrete(2), f = swap, g = const", equiv,
                   with_endos(i2, {1, 0}, same, {0, 0}, same), true});
  cases.push_back({"homotopy-equivalence", "discrete(2), f = g = swap", equiv,
                   with_endos(d2, {1, 0}, same, {1, 0}, same), true});
  cases.push_back({"homotopy-equivalence", "discrete(2), f = g = const", equiv,
                   with_endos(d2, {0, 0}, same, {0, 0}, same), false});
  cases.push_back({"homotopy-equivalence", "B(Z/3), f = g = inverse", equiv,
                   with_endos(bz3, {0}, inv3, {0}, inv3), true});
  cases.push_back({"homotopy-equivalence", "B(Z/3), f = inverse, g = id", equiv,
                   with_endos(bz3, {0}, inv3, {0}, same), false});

  json out = json::array();
  bool passed = true;
  for (const auto& c : cases) {
    const bool actual = groupoid_inhabited(parse_formula(c.formula, c.m.sig), c.m, fo);
    passed = passed && actual == c.expected;
    out.push_back({{"group", c.group},
                   {"carrier", c.carrier},
                   {"formula", c.formula},
                   {"expected", c.expected ? "inhabited" : "uninhabited"},
                   {"actual", actual ? "inhabited" : "uninhabited"},
                   {"pass", actual == c.expected}});
  }
  json r = header("examples");
  r["cases"] = out;
  r["passed"] = passed;
  return r;
}

bool report_failed(const json& report) {
  return report.contains("passed") && !report.at("passed").get<bool>();
}

}  // namespace hfol::cmd

namespace hfol::cmd {

namespace {

std::string join(const json& arr, const char* sep) {
  std::string out;
  for (const auto& v : arr) {
    if (!out.empty()) out += sep;
    out += v.is_string() ? v.get<std::string>() : v.dump();
  }
  return out;
}

std::string env_text(const json& p) {
  return p.contains("env") ? "(" + join(p.at("env"), ", ") + ")" : "()";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string to_text(const json& r) {
  const std::string cmd = r.value("command", "");
  std::string out;
  const auto line = [&](const std::string& s) { out += s + "\n"; };
  if (cmd == "check") {
    line("formula:          " + r.at("formula").get<std::string>());
    line("context:          (" + join(r.at("context"), ", ") + ")");
    line("canonical:        " + r.at("canonical").get<std::string>());
    line("free variables:   " + join(r.at("free_vars"), ", "));
    line("connective depth: " + r.at("connective_depth").dump());
    line("quantifier depth: " + r.at("quantifier_depth").dump());
  } else if (cmd == "eval") {
    line(r.at("formula").get<std::string>() + "  [" + r.at("backend").get<std::string>() + "]");
    for (const auto& p : r.at("points")) {
      std::string s = "  " + env_text(p) + ": ";
      if (p.contains("proofs")) {
        s += p.at("proofs").dump() + " proofs, tarski " + yes_no(p.at("tarski").get<bool>());
      } else {
        s += p.at("objects").dump() + " objects, " + p.at("components").dump() +
             " components, automorphisms [" + join(p.at("automorphism_orders"), ", ") + "]";
      }
      line(s);
    }
    line("inhabited points: " + r.at("inhabited_points").dump() + " of " +
         std::to_string(r.at("points").size()));
    if (r.contains("verdict")) line(r.at("verdict").get<std::string>());
  } else if (cmd == "prove-check") {
    line("(" + join(r.at("context"), ", ") + ") | " + r.at("premise").get<std::string>() +
         " |- " + r.at("conclusion").get<std::string>());
    if (r.contains("evaluation")) {
      const json& ev = r.at("evaluation");
      line("evaluated in the " + ev.at("backend").get<std::string>() + " model");
      if (ev.contains("coherent")) line("coherent: " + yes_no(ev.at("coherent").get<bool>()));
      for (const auto& p : ev.at("points")) {
        const json& m = p.contains("map") ? p.at("map") : p.at("object_map");
        line("  " + env_text(p) + ": [" + join(m, ", ") + "]");
      }
    }
  } else if (cmd == "relations") {
    line("relation soundness, " + r.at("backend").get<std::string>() + " backend, seed " +
         r.at("seed").dump());
    for (const auto& [name, c] : r.at("families").items()) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-28s %3d instances %3d literal %3d homotopic %3d failed %3d skipped",
                    name.c_str(), c.at("instances").get<int>(), c.at("literal").get<int>(),
                    c.at("homotopic").get<int>(), c.at("failed").get<int>(),
                    c.at("skipped").get<int>());
      line(buf);
    }
    for (const auto& f : r.at("failures")) {
      line("  FAIL " + f.at("family").get<std::string>() + ": " + f.at("relation").get<std::string>());
    }
    line(r.at("passed").get<bool>() ? "passed" : "FAILED");
  } else if (cmd == "invariance") {
    const json& v = r.at("verification");
    if (!v.at("ok").get<bool>()) {
      line("not a homotopy equivalence: " + v.at("where").get<std::string>() + ": " +
           v.at("detail").get<std::string>());
    } else {
      std::size_t good = 0;
      for (const auto& f : r.at("formulas")) {
        const bool eq = f.at("equivalent").get<bool>();
        good += eq;
        if (!eq) line("  NOT INVARIANT " + f.at("formula").get<std::string>());
      }
      line(std::to_string(good) + " of " + std::to_string(r.at("formulas").size()) +
           " formulas have equivalent interpretations");
    }
    line(r.at("passed").get<bool>() ? "passed" : "FAILED");
  } else if (cmd == "examples") {
    for (const auto& c : r.at("cases")) {
      line(std::string(c.at("pass").get<bool>() ? "  ok   " : "  FAIL ") +
           c.at("group").get<std::string>() + " on " + c.at("carrier").get<std::string>() +
           ": " + c.at("actual").get<std::string>());
    }
    line(r.at("passed").get<bool>() ? "passed" : "FAILED");
  } else {
    out = r.dump(2) + "\n";
  }
  return out;
}

}  // namespace hfol::cmd
