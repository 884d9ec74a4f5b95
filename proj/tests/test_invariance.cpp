#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hfol/error.hpp"
#include "hfol/invariance.hpp"
#include "hfol/parser.hpp"
#include "support/gen.hpp"

using namespace hfol;
using namespace hfol::gpd;

namespace {

Signature two_sorts() {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_function({"f", {"A"}, "B"});
  sig.add_function({"g", {"A", "B"}, "A"});
  sig.add_function({"c", {}, "A"});
  return sig;
}

// Number of components and sorted automorphism group orders: an invariant
// of equivalence computed without the matching search.
std::pair<std::size_t, std::vector<std::size_t>> shape(const FinGroupoid& g) {
  std::vector<std::size_t> orders;
  for (std::size_t c = 0; c < g.num_components(); ++c) orders.push_back(g.group(c).order());
  std::sort(orders.begin(), orders.end());
  return {g.num_components(), orders};
}

}  // namespace

TEST_CASE("identity homomorphism") {
  const auto m = random_groupoid_structure(two_sorts(), 5);
  const auto h = identity_equivalence(m);
  CHECK(verify_homotopy_homomorphism(m, m, h.forward).ok);
  CHECK(verify_homotopy_equivalence(m, m, h).ok);
  const Formula phi = parse_formula("exists x:A. g(x, f(x)) = c", m.sig);
  const auto r = invariance_report(phi, {}, m, m, h);
  REQUIRE(r.points.size() == 1);
  CHECK(r.all_equivalent());
}

TEST_CASE("terminal is equivalent to the indiscrete pair") {
  Signature sig;
  sig.add_sort("A");
  GroupoidStructure m{sig, {{"A", FinGroupoid::terminal()}}, {}, {}};
  const FinGroupoid i2 = FinGroupoid::indiscrete(2);
  GroupoidStructure n{sig, {{"A", i2}}, {}, {}};
  HomotopyEquivalence h;
  h.forward.sorts["A"] = make_functor(FinGroupoid::terminal(), i2, {1},
                                      [&](const Mor&) { return i2.id(1); });
  h.inverse["A"] = make_functor(i2, FinGroupoid::terminal(), {0, 0},
                                [](const Mor&) { return Mor{0, 0, 0}; });
  h.unit["A"] = {Mor{0, 0, 0}};
  h.counit["A"] = {Mor{1, 0, 0}, Mor{1, 1, 0}};
  CHECK(verify_homotopy_equivalence(m, n, h).ok);
  const Formula contr = parse_formula("exists x. forall y. x = y", sig);
  const auto r = invariance_report(contr, {}, m, n, h);
  CHECK(r.all_equivalent());
  CHECK(r.points[0].m_inhabited);
  CHECK(r.points[0].n_inhabited);
  CHECK(groupoid_inhabited(contr, m));
  CHECK(groupoid_inhabited(contr, n));
  // Open formula: every point of the context compared.
  const Context ctx({{"A", "x"}, {"A", "y"}});
  const auto r2 = invariance_report(parse_formula("x = y", sig, ctx), ctx, m, n, h);
  CHECK(r2.points.size() == 1);
  CHECK(r2.all_equivalent());
  // A counit that is not natural is caught.
  HomotopyEquivalence bad = h;
  bad.counit["A"] = {Mor{1, 0, 0}, Mor{0, 1, 0}};
  const auto v = verify_homotopy_equivalence(m, n, bad);
  CHECK_FALSE(v.ok);
  CHECK(v.where == "sort A");
  CHECK_THROWS_AS(invariance_report(contr, {}, m, n, bad), Error);
}

TEST_CASE("broken 2-cell is located") {
  const auto m = random_groupoid_structure(two_sorts(), 17);
  auto [n, h] = random_equivalence(m, 3);
  REQUIRE(verify_homotopy_equivalence(m, n, h).ok);
  // Replace one component of α_g by a different parallel morphism, or by a
  // morphism with the wrong endpoints when the hom set is a singleton.
  auto& theta = h.forward.symbols.at("g");
  const FinGroupoid& nb = n.carrier("A");
  Mor& t = theta.front();
  if (nb.hom_size(t.src, t.dst) > 1) {
    t.elem = (t.elem + 1) % nb.group_at(t.src).order();
  } else {
    t = Mor{t.src, t.src == 0 ? 1u : 0u, 0};
  }
  const auto v = verify_homotopy_homomorphism(m, n, h.forward);
  CHECK_FALSE(v.ok);
  CHECK(v.where == "symbol g");
  CHECK_FALSE(v.detail.empty());
}

TEST_CASE("context functor matches the context base") {
  const auto m = random_groupoid_structure(two_sorts(), 23);
  const auto [n, h] = random_equivalence(m, 4);
  const CtxObject ctx{"A", "B", "A"};
  GroupoidModel mm(m), nm(n);
  const Functor a = context_functor(m, n, h.forward.sorts, ctx);
  CHECK_FALSE(functor_defect(*mm.base(ctx), *nm.base(ctx), a).has_value());
  CHECK(*mm.base(ctx) == context_groupoid(m, ctx));
}

TEST_CASE("formula pool") {
  const auto pool = closed_formula_pool(two_sorts(), 1, 60, 3);
  CHECK(pool.size() == 60);
  std::size_t quantified = 0;
  for (const auto& phi : pool) {
    CHECK(phi.connective_depth() <= 3);
    CHECK(free_vars(phi).empty());
    quantified += phi.quantifier_depth() > 0;
  }
  CHECK(quantified > 30);
  CHECK(to_string(closed_formula_pool(two_sorts(), 1, 60, 3)[7]) ==
        to_string(pool[7]));
}

TEST_CASE("invariance over generated equivalences") {
  const Signature sig = two_sorts();
  const auto pool = closed_formula_pool(sig, 2, 50, 3);
  FamilyOptions opts;
  opts.max_fiber = 100000;
  std::size_t checked = 0, inhabited = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = random_groupoid_structure(sig, 100 + seed);
    const auto [n, h] = random_equivalence(m, 200 + seed);
    INFO("seed ", seed);
    REQUIRE(verify_homotopy_equivalence(m, n, h).ok);
    for (const auto& phi : pool) {
      INFO(to_string(phi));
      const auto r = invariance_report(phi, {}, m, n, h, opts);
      CHECK(r.all_equivalent());
      // Independent comparison of the two interpretations.
      const auto fm = groupoid_interpret(phi, {}, m, opts);
      const auto fn = groupoid_interpret(phi, {}, n, opts);
      CHECK(shape(fm->fiber(0)) == shape(fn->fiber(0)));
      inhabited += !fm->fiber(0).empty();
      ++checked;
    }
  }
  CHECK(checked == 500);
  CHECK(inhabited > 50);
  CHECK(inhabited < 450);
}

TEST_CASE("isomorphism invariance in the set model") {
  const Signature sig = testing::small_signature();
  testing::SyntaxGen gen(sig, 31);
  std::mt19937_64 rng(5);
  SetOptions opts;
  opts.max_fiber = 1u << 20;
  for (int round = 0; round < 5; ++round) {
    SetStructure m{sig, {{"A", {"a", "b", "c"}}}, {}};
    m.tables["f"].resize(9);
    m.tables["g"].resize(3);
    m.tables["c"].resize(1);
    for (auto& [name, t] : m.tables) {
      for (auto& v : t) v = gen.below(3);
    }
    std::vector<std::size_t> sigma{0, 1, 2};
    std::shuffle(sigma.begin(), sigma.end(), rng);
    const SetStructure m2 = relabel(m, {{"A", sigma}});
    m2.validate();
    for (int i = 0; i < 40; ++i) {
      const Formula phi = gen.formula(3);
      const VariableSet fv = free_vars(phi);
      const Context ctx(std::vector<Variable>(fv.begin(), fv.end()));
      const auto bij = point_bijection(m, m2, ctx.sorts(), {{"A", sigma}});
      CHECK(iso_check(lauchli(phi, ctx, m, opts), lauchli(phi, ctx, m2, opts), bij));
    }
  }
}
