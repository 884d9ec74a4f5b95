#include "doctest.h"
#include "hfol/error.hpp"
#include "hfol/parser.hpp"
#include "support/gen.hpp"

using namespace hfol;

namespace {

Signature sig_a() {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"c", {}, "A"});
  return sig;
}

Term v(const char* name) { return Term::var("A", name); }
Variable var(const char* name) { return Variable{"A", name}; }

}  // namespace

TEST_CASE("parse forall over context") {
  auto sig = sig_a();
  Context ctx({var("z")});
  Formula phi = parse_formula("forall y. y = z", sig, ctx);
  CHECK(phi == Formula::forall(var("y"), Formula::eq(v("y"), v("z"))));
  CHECK(parse_formula("T", sig) == Formula::top());
  Context ctx2({var("x1"), var("x2")});
  Formula app = parse_formula("f(x1, x2) = x1", sig, ctx2);
  CHECK(app.kind() == Formula::Kind::kEq);
  CHECK(app.lhs().symbol() == "f");
  CHECK(app.rhs() == v("x1"));
}

TEST_CASE("parse precedence and sugar") {
  auto sig = sig_a();
  Formula a = Formula::eq(v("c"), v("c"));
  (void)a;
  Formula p = parse_formula("c = c & T | F -> T -> F", sig);
  REQUIRE(p.kind() == Formula::Kind::kImplies);
  CHECK(p.left().kind() == Formula::Kind::kOr);
  CHECK(p.left().left().kind() == Formula::Kind::kAnd);
  CHECK(p.right().kind() == Formula::Kind::kImplies);
  Formula n = parse_formula("~T", sig);
  CHECK(n == Formula::negation(Formula::top()));
  Formula q = parse_formula("exists x y. x = y", sig);
  CHECK(q.kind() == Formula::Kind::kExists);
  CHECK(q.body().kind() == Formula::Kind::kExists);
}

TEST_CASE("parse errors") {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_function({"h", {"A"}, "B"});
  Context ctx({Variable{"A", "a"}, Variable{"B", "b"}});
  CHECK_THROWS_AS(parse_formula("a = b", sig, ctx), ParseError);
  CHECK_THROWS_AS(parse_formula("h(b) = b", sig, ctx), ParseError);
  CHECK_THROWS_AS(parse_formula("q = a", sig, ctx), ParseError);
  CHECK_THROWS_AS(parse_formula("k(a) = a", sig, ctx), ParseError);
  CHECK_THROWS_AS(parse_formula("a = a &", sig, ctx), ParseError);
  try {
    parse_formula("a = a & $", sig, ctx);
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 8);
  }
  // Sort inference through a function argument.
  Formula f = parse_formula("forall y. h(y) = b", sig, ctx);
  CHECK(f.bound().sort == "A");
  CHECK_THROWS_AS(parse_formula("forall y. y = y", sig, ctx), ParseError);
  CHECK(parse_formula("forall y:B. y = y", sig, ctx).bound().sort == "B");
}

TEST_CASE("free and bound variables") {
  Formula phi = Formula::forall(var("y"), Formula::eq(v("y"), v("z")));
  CHECK(free_vars(phi) == VariableSet{var("z")});
  CHECK(bound_vars(phi) == VariableSet{var("y")});
  CHECK(free_vars(Formula::top()).empty());
  auto sig = sig_a();
  Term t = Term::app(*sig.find_function("f"), {v("x"), v("y")});
  CHECK(free_vars(t) == VariableSet{var("x"), var("y")});
}

TEST_CASE("substitution examples") {
  Formula phi = Formula::forall(var("y"), Formula::eq(v("y"), v("z")));
  CHECK(subst(phi, {var("z")}, {v("x")}) ==
        Formula::forall(var("y"), Formula::eq(v("y"), v("x"))));
  Formula captured = subst(phi, {var("z")}, {v("y")});
  CHECK(alpha_eq(captured,
                 Formula::forall(var("w"), Formula::eq(v("w"), v("y")))));
  CHECK(captured.bound() != var("y"));
  CHECK(free_vars(captured) == VariableSet{var("y")});
  auto sig = sig_a();
  Term t = Term::app(*sig.find_function("f"), {v("x"), v("y")});
  CHECK(subst(t, {var("x"), var("y")}, {v("x"), v("y")}) == t);
  CHECK_THROWS(subst(t, {var("x")}, {}));
  CHECK_THROWS(subst(t, {var("x")}, {Term::var("B", "b")}));
}

TEST_CASE("fresh names") {
  VariableSet used{var("_1"), var("_3")};
  CHECK(fresh_variable("A", used) == var("_2"));
  CHECK(fresh_variable("A", {}) == var("_1"));
}

TEST_CASE("alpha equivalence") {
  Formula a = Formula::forall(var("x"), Formula::eq(v("x"), v("c")));
  Formula b = Formula::forall(var("y"), Formula::eq(v("y"), v("c")));
  CHECK(alpha_eq(a, b));
  CHECK_FALSE(alpha_eq(Formula::eq(v("x"), v("y")), Formula::eq(v("y"), v("x"))));
  Formula c = Formula::forall(
      var("x"), Formula::exists(var("y"), Formula::eq(v("x"), v("y"))));
  Formula d = Formula::forall(
      var("u"), Formula::exists(var("v"), Formula::eq(v("u"), v("v"))));
  CHECK(alpha_eq(c, d));
  // Shadowing: forall x. exists x. x = x  vs  forall y. exists x. y = x.
  Formula e = Formula::forall(
      var("x"), Formula::exists(var("x"), Formula::eq(v("x"), v("x"))));
  Formula g = Formula::forall(
      var("y"), Formula::exists(var("x"), Formula::eq(v("y"), v("x"))));
  CHECK_FALSE(alpha_eq(e, g));
  // Bound vs free occurrence.
  CHECK_FALSE(alpha_eq(Formula::forall(var("x"), Formula::eq(v("x"), v("z"))),
                       Formula::forall(var("z"), Formula::eq(v("z"), v("z")))));
}

TEST_CASE("canonicalize") {
  Formula phi = Formula::forall(var("y"), Formula::eq(v("y"), v("z")));
  CHECK(to_string(canonicalize(phi, Context({var("z")}))) ==
        "forall b1:A. b1 = x1");
  Formula psi = Formula::conj(
      Formula::exists(var("y"), Formula::eq(v("y"), v("z"))),
      Formula::eq(v("z"), v("z")));
  Formula expect = Formula::conj(
      Formula::exists(var("b1"), Formula::eq(v("b1"), v("x2"))),
      Formula::eq(v("x2"), v("x2")));
  CHECK(canonicalize(psi, Context({var("w"), var("z")})) == expect);
  Formula alt = Formula::forall(var("q"), Formula::eq(v("q"), v("z")));
  CHECK(canonicalize(phi, Context({var("z")})) ==
        canonicalize(alt, Context({var("z")})));
  CHECK_THROWS_AS(canonicalize(phi, Context()), ParseError);
}

TEST_CASE("printing round-trips through the parser") {
  auto sig = testing::small_signature();
  testing::SyntaxGen gen(sig, 11);
  Context ctx({Variable{"A", "x"}, Variable{"A", "y"}, Variable{"A", "z"},
               Variable{"A", "u"}, Variable{"A", "v"}, Variable{"A", "w"}});
  for (int i = 0; i < 300; ++i) {
    Formula phi = gen.formula(4);
    Formula back = parse_formula(to_string(phi), sig, ctx);
    CHECK_MESSAGE(back == phi, to_string(phi));
  }
}
