#include <map>

#include "doctest.h"
#include "hfol/error.hpp"
#include "hfol/parser.hpp"
#include "hfol/set_model.hpp"
#include "support/gen.hpp"

using namespace hfol;

namespace {

Signature sig_c() {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"c", {}, "A"});
  return sig;
}

SetStructure with_carrier(Signature sig, std::size_t n) {
  SetStructure m;
  m.sig = std::move(sig);
  for (std::size_t i = 0; i < n; ++i) m.carriers["A"].push_back(std::to_string(i));
  if (m.sig.find_function("c")) m.tables["c"] = {0};
  return m;
}

Formula parse(const char* text, const Signature& sig, const Context& ctx = {}) {
  return parse_formula(text, sig, ctx);
}

Context ctx_a(std::initializer_list<const char*> names) {
  std::vector<Variable> vs;
  for (const char* n : names) vs.push_back({"A", n});
  return Context(vs);
}

}  // namespace

TEST_CASE("tarski truth") {
  const auto m2 = with_carrier(sig_c(), 2), m1 = with_carrier(sig_c(), 1);
  const Formula contr = parse("exists x. forall y. x = y", m2.sig);
  CHECK(tarski_truth(Formula::top(), {}, m2, {}));
  CHECK_FALSE(tarski_truth(contr, {}, m2, {}));
  CHECK(tarski_truth(contr, {}, m1, {}));
  CHECK_THROWS_AS(tarski_truth(Formula::top(), ctx_a({"x"}), m2, {}), Error);
}

TEST_CASE("proof sets follow the clauses") {
  const auto m = with_carrier(sig_c(), 2);
  CHECK(lauchli(parse("c = c | c = c", m.sig), {}, m)->sizes ==
        std::vector<std::size_t>{2});
  CHECK(lauchli(parse("(c = c) -> (c = c)", m.sig), {}, m)->sizes ==
        std::vector<std::size_t>{1});
  const auto all = lauchli(parse("forall y. x = y", m.sig, ctx_a({"x"})),
                           ctx_a({"x"}), m);
  CHECK(all->sizes == std::vector<std::size_t>{0, 0});
  CHECK(lauchli(parse("exists x. forall y. x = y", m.sig), {}, m)->sizes ==
        std::vector<std::size_t>{0});
  // Equality: singleton on the diagonal.
  const auto e = lauchli(parse("x = y", m.sig, ctx_a({"x", "y"})),
                         ctx_a({"x", "y"}), m);
  CHECK(e->sizes == std::vector<std::size_t>{1, 0, 0, 1});
  SetModel model(m);
  CHECK(model.inhabited(e, 0));
  CHECK_FALSE(model.inhabited(e, 1));
  CHECK(model.inhabited(model.top({"A"}), 1));
  CHECK_FALSE(model.inhabited(model.bot({"A"}), 1));
  // ∃ sums, ∀ multiplies, ⇒ exponentiates.
  const auto m3 = with_carrier(sig_c(), 3);
  CHECK(lauchli(parse("exists x. x = x | x = c", m3.sig), {}, m3)->sizes ==
        std::vector<std::size_t>{4});
  CHECK(lauchli(parse("forall x. x = x | x = c", m3.sig), {}, m3)->sizes ==
        std::vector<std::size_t>{2});
  CHECK(lauchli(parse("(c = c | c = c) -> (c = c | c = c | c = c)", m3.sig), {},
                m3)
            ->sizes == std::vector<std::size_t>{9});
}

TEST_CASE("function tables and reindexing") {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"g", {"A"}, "A"});
  SetStructure m;
  m.sig = sig;
  m.carriers["A"] = {"0", "1"};
  m.tables["f"] = {0, 0, 0, 1};  // and
  m.tables["g"] = {1, 0};        // not
  m.validate();
  // f(g(x), x) is constantly 0.
  SetModel model(m);
  const TermMorphism t = morphism_from_terms(
      {"A"}, {Term::app(sig.function("f"),
                        {Term::app(sig.function("g"), {Term::var("A", "x1")}),
                         Term::var("A", "x1")})});
  CHECK(model.point_map(t) == std::vector<std::size_t>{0, 0});
  const auto p = lauchli(parse("f(g(x), x) = x", sig, ctx_a({"x"})),
                         ctx_a({"x"}), m);
  CHECK(p->sizes == std::vector<std::size_t>{1, 0});
  SetStructure bad = m;
  bad.tables["f"] = {0, 0, 2, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.tables["f"] = {0, 0, 0};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("size guard") {
  const auto m = with_carrier(sig_c(), 3);
  SetOptions opts;
  opts.max_fiber = 100;
  const Formula big = parse(
      "(c = c | c = c | c = c | c = c | c = c) -> "
      "(c = c | c = c | c = c | c = c | c = c)",
      m.sig);
  CHECK_THROWS_AS(lauchli(big, {}, m, opts), SizeGuardError);
}

TEST_CASE("iso check") {
  const auto m = with_carrier(sig_c(), 2);
  SetModel model(m);
  const auto t = model.top({"A"}), b = model.bot({"A"});
  CHECK(iso_check(t, t, {0, 1}));
  CHECK_FALSE(iso_check(t, b, {0, 1}));
  // Relabel the carrier of a structure with a non-constant symbol.
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"g", {"A"}, "A"});
  SetStructure m1{sig, {{"A", {"a", "b", "c"}}}, {{"g", {1, 1, 2}}}};
  // σ = (0 ↦ 2, 1 ↦ 0, 2 ↦ 1); g' = σ g σ⁻¹.
  const std::vector<std::size_t> sigma{2, 0, 1};
  SetStructure m2 = m1;
  for (std::size_t x = 0; x < 3; ++x) m2.tables["g"][sigma[x]] = sigma[m1.tables["g"][x]];
  const Context c = ctx_a({"x", "y"});
  const auto bij = point_bijection(m1, m2, {"A", "A"}, {{"A", sigma}});
  for (const char* text :
       {"g(x) = y", "exists z. g(z) = x -> y = x", "forall z. g(z) = z | x = y"}) {
    const Formula phi = parse(text, sig, c);
    CHECK(iso_check(lauchli(phi, c, m1), lauchli(phi, c, m2), bij));
  }
  // A non-isomorphic structure is told apart by some formula.
  SetStructure m3 = m1;
  m3.tables["g"] = {0, 1, 2};
  const Formula phi = parse("g(x) = x", sig, ctx_a({"x"}));
  const auto b1 = point_bijection(m1, m3, {"A"}, {{"A", {0, 1, 2}}});
  CHECK_FALSE(iso_check(lauchli(phi, ctx_a({"x"}), m1),
                        lauchli(phi, ctx_a({"x"}), m3), b1));
}

TEST_CASE("evaluated deductions") {
  Signature sig;
  sig.add_sort("A");
  const SetStructure m{sig, {{"A", {"a", "b", "c"}}}, {}};
  SetModel model(m);
  Interpreter<SetModel> interp(model, sig);
  const auto r = interp.deduction(Deduction::refl("A"));
  CHECK(r.map == std::vector<std::vector<std::uint32_t>>{{0}, {0}, {0}});
  const CtxObject a{"A", "A"};
  const Formula p = canonicalize(parse("x1 = x2 | T", sig, canonical_context(a)),
                                 canonical_context(a));
  const auto lhs = interp.deduction(Deduction::comp(
      Deduction::proj1(a, p, p),
      Deduction::pair(Deduction::id(a, p), Deduction::id(a, p))));
  const auto rhs = interp.deduction(Deduction::id(a, p));
  CHECK(lhs == rhs);
  CHECK(rhs.map[0] == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("inhabitation agrees with truth on random formulas") {
  const Signature sig = testing::small_signature();
  testing::SyntaxGen gen(sig, 11);
  SetStructure m{sig, {{"A", {"0", "1"}}}, {{"f", {0, 1, 1, 0}}, {"g", {1, 0}}, {"c", {1}}}};
  SetOptions opts;
  opts.max_fiber = 1u << 20;
  std::size_t checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Formula phi = gen.formula(4);
    const VariableSet fv = free_vars(phi);
    const Context ctx(std::vector<Variable>(fv.begin(), fv.end()));
    SetModel::Pred p;
    try {
      p = lauchli(phi, ctx, m, opts);
    } catch (const SizeGuardError&) {
      continue;
    }
    for (std::size_t a = 0; a < p->sizes.size(); ++a) {
      const auto env = decode_point(m, ctx.sorts(), a);
      CHECK((p->sizes[a] > 0) == tarski_truth(phi, ctx, m, env));
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("relation soundness in the set model") {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"c", {}, "A"});
  const SetStructure m{sig, {{"A", {"0", "1", "2"}}},
                       {{"f", {0, 1, 2, 1, 2, 0, 2, 0, 1}}, {"c", {1}}}};
  SetOptions opts;
  opts.max_fiber = 4096;
  std::map<RelationFamily, std::size_t> ok;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const auto& r : basic_relation_instances(sig, seed, {})) {
      SetModel model(m, opts);
      Interpreter<SetModel> interp(model, sig);
      try {
        const auto l = interp.deduction(r.lhs);
        const auto rr = interp.deduction(r.rhs);
        INFO(std::string(family_name(r.family)), " ", r.relation, " ", to_string(r.lhs));
        CHECK(l == rr);
        ++ok[r.family];
      } catch (const SizeGuardError&) {
      }
    }
  }
  for (RelationFamily f : kAllRelationFamilies) {
    INFO(std::string(family_name(f)));
    CHECK(ok[f] >= 20);
  }
}
