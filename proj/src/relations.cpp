#include <random>

#include "hfol/error.hpp"
#include "hfol/proof.hpp"

namespace hfol {

const char* family_name(RelationFamily family) {
  switch (family) {
    case RelationFamily::kCategory:
      return "category";
    case RelationFamily::kFibration:
      return "fibration";
    case RelationFamily::kProducts:
      return "products";
    case RelationFamily::kExponentials:
      return "exponentials";
    case RelationFamily::kAdjoints:
      return "adjoints";
    case RelationFamily::kEquality:
      return "equality";
    case RelationFamily::kStability:
      return "stability";
  }
  return "?";
}

namespace {

using D = Deduction;
using Kind = Formula::Kind;

class Generator {
 public:
  Generator(const Signature& sig, std::uint64_t seed, const RelationBounds& b)
      : sig_(sig), rng_(seed), bounds_(b) {
    if (sig_.sorts().empty()) throw_usage("signature has no sorts");
  }

  std::vector<RelationInstance> run() {
    std::vector<RelationInstance> out;
    for (RelationFamily fam : kAllRelationFamilies) {
      for (std::size_t i = 0; i < bounds_.per_family; ++i) {
        RelationInstance r = instance(fam, i);
        const Sequent l = typecheck(r.lhs, sig_);
        const Sequent rr = typecheck(r.rhs, sig_);
        if (!(l == rr)) {
          throw TypeError("generated " + std::string(family_name(fam)) + "/" +
                          r.relation + " pair has sequents " + to_string(l) +
                          " and " + to_string(rr));
        }
        out.push_back(std::move(r));
      }
    }
    return out;
  }

 private:
  // -------------------------------------------------------------------------
  // Randomness

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  bool coin() { return pick(2) == 0; }

  Sort any_sort() { return sig_.sorts()[pick(sig_.sorts().size())]; }

  CtxObject context(std::size_t min_size) {
    const std::size_t hi = std::max(min_size, bounds_.max_context);
    const std::size_t n = min_size + pick(hi - min_size + 1);
    CtxObject ctx;
    for (std::size_t i = 0; i < n; ++i) ctx.push_back(any_sort());
    return ctx;
  }

  // -------------------------------------------------------------------------
  // Terms and formulas

  bool buildable(const Sort& s, const CtxObject& ctx, std::size_t depth) const {
    for (const auto& c : ctx) {
      if (c == s) return true;
    }
    if (depth == 0) return false;
    for (const auto& f : sig_.functions()) {
      if (f.codomain != s) continue;
      bool ok = true;
      for (const auto& a : f.arity) ok = ok && buildable(a, ctx, depth - 1);
      if (ok) return true;
    }
    return false;
  }

  Term term(const Sort& s, const CtxObject& ctx, std::size_t depth) {
    std::vector<Term> vars;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (ctx[i] == s) vars.push_back(Term::var(s, positional_name(i + 1)));
    }
    std::vector<const FunctionSymbol*> fns;
    if (depth > 0) {
      for (const auto& f : sig_.functions()) {
        if (f.codomain != s) continue;
        bool ok = true;
        for (const auto& a : f.arity) ok = ok && buildable(a, ctx, depth - 1);
        if (ok) fns.push_back(&f);
      }
    }
    if (!fns.empty() && (vars.empty() || pick(3) == 0)) {
      const FunctionSymbol& f = *fns[pick(fns.size())];
      std::vector<Term> args;
      for (const auto& a : f.arity) args.push_back(term(a, ctx, depth - 1));
      return Term::app(f, std::move(args));
    }
    if (vars.empty()) throw_usage("no term of sort " + s + " over " + to_string(ctx));
    return vars[pick(vars.size())];
  }

  std::vector<Sort> term_sorts(const CtxObject& ctx) const {
    std::vector<Sort> out;
    for (const auto& s : sig_.sorts()) {
      if (buildable(s, ctx, 1)) out.push_back(s);
    }
    return out;
  }

  Formula atom(const CtxObject& ctx) {
    const auto sorts = term_sorts(ctx);
    if (sorts.empty() || pick(4) == 0) {
      return coin() ? Formula::top() : Formula::bot();
    }
    const Sort s = sorts[pick(sorts.size())];
    return Formula::eq(term(s, ctx, 1), term(s, ctx, 1));
  }

  Formula raw_formula(const CtxObject& ctx, std::size_t depth) {
    if (depth == 0 || pick(4) == 0) return atom(ctx);
    switch (pick(5)) {
      case 0:
        return Formula::conj(raw_formula(ctx, depth - 1),
                             raw_formula(ctx, depth - 1));
      case 1:
        return Formula::disj(raw_formula(ctx, depth - 1),
                             raw_formula(ctx, depth - 1));
      case 2:
        return Formula::implies(raw_formula(ctx, depth - 1),
                                raw_formula(ctx, depth - 1));
      default: {
        CtxObject inner = ctx;
        inner.push_back(any_sort());
        const Variable v{inner.back(), positional_name(inner.size())};
        const Formula body = raw_formula(inner, depth - 1);
        return coin() ? Formula::forall(v, body) : Formula::exists(v, body);
      }
    }
  }

  Formula formula(const CtxObject& ctx, std::size_t depth) {
    return canonicalize(raw_formula(ctx, depth), canonical_context(ctx));
  }
  Formula formula(const CtxObject& ctx) {
    return formula(ctx, bounds_.formula_depth);
  }

  // Term morphism from a random domain into cod.
  TermMorphism morphism_into(const CtxObject& cod) {
    CtxObject dom = context(0);
    for (const auto& s : cod) {
      if (!buildable(s, dom, 1)) dom.push_back(s);
    }
    std::vector<Term> terms;
    for (const auto& s : cod) terms.push_back(term(s, dom, 1));
    return TermMorphism(dom, cod, std::move(terms));
  }

  // -------------------------------------------------------------------------
  // Deductions

  Formula conclusion(const D& d) { return typecheck(d, sig_).conclusion; }

  // A random deduction with premise p over ctx.
  D from(const Formula& p, const CtxObject& ctx, std::size_t depth) {
    if (depth == 0) return coin() ? D::id(ctx, p) : D::bang(ctx, p);
    std::vector<int> moves = {0, 1, 2, 3, 4, 5, 6};
    if (p.kind() == Kind::kAnd) moves.insert(moves.end(), {10, 11, 12});
    if (p.kind() == Kind::kOr) moves.push_back(13);
    if (p.kind() == Kind::kBot) moves.push_back(14);
    if (p.kind() == Kind::kExists) moves.push_back(15);
    if (p.kind() == Kind::kAnd && p.left().kind() == Kind::kImplies &&
        p.left().left() == p.right()) {
      moves.push_back(16);
    }
    switch (moves[pick(moves.size())]) {
      case 0:
        return D::id(ctx, p);
      case 1:
        return D::bang(ctx, p);
      case 2:
        return D::inj1(ctx, p, formula(ctx, 1));
      case 3:
        return D::inj2(ctx, formula(ctx, 1), p);
      case 4:
        return D::pair(from(p, ctx, depth - 1), from(p, ctx, depth - 1));
      case 5: {
        const D f = from(p, ctx, depth - 1);
        return D::comp(from(conclusion(f), ctx, depth - 1), f);
      }
      case 6: {
        // p → (Q ⇒ X) by currying a map out of p ∧ Q.
        const Formula q = formula(ctx, 1);
        const D g = from(p, ctx, depth - 1);
        return D::curry(D::comp(g, D::proj1(ctx, p, q)));
      }
      case 10:
        return D::proj1(ctx, p.left(), p.right());
      case 11:
        return D::proj2(ctx, p.left(), p.right());
      case 12:
        return and_swap(ctx, p.left(), p.right());
      case 13: {
        const D f = from(p.left(), ctx, depth - 1);
        const D g = from(p.right(), ctx, depth - 1);
        const Formula x = conclusion(f), y = conclusion(g);
        return D::case_of(D::comp(D::inj1(ctx, x, y), f),
                          D::comp(D::inj2(ctx, x, y), g));
      }
      case 14:
        return D::absurd(ctx, formula(ctx, 1));
      case 15: {
        // μ of an η-expanded map ∃Q → S.
        const D g = from(p, ctx, depth - 1);
        CtxObject inner = ctx;
        inner.push_back(p.bound().sort);
        const Formula body = quantifier_body(ctx, p);
        return D::mu(D::comp(D::reindex(drop_last(inner), g),
                             D::exists_unit(inner, body)));
      }
      case 16:
        return D::eval(ctx, p.right(), p.left().right());
    }
    return D::id(ctx, p);
  }

  D from(const Formula& p, const CtxObject& ctx) { return from(p, ctx, 2); }

  // A deduction into ⊤ with premise p.
  D into_top(const Formula& p, const CtxObject& ctx) {
    switch (pick(3)) {
      case 0:
        return D::bang(ctx, p);
      case 1: {
        const D g = from(p, ctx, 1);
        return D::comp(D::bang(ctx, conclusion(g)), g);
      }
      default: {
        const D g = from(p, ctx, 1);
        const Formula x = conclusion(g);
        return D::comp(D::proj2(ctx, x, Formula::top()),
                       D::pair(g, D::bang(ctx, p)));
      }
    }
  }

  // ⟨x∘π, y∘π'⟩ : P ∧ Q → X ∧ Y for x : P → X and y : Q → Y.
  D times(const D& x, const D& y) {
    const Sequent sx = typecheck(x, sig_), sy = typecheck(y, sig_);
    return D::pair(D::comp(x, D::proj1(sx.context, sx.premise, sy.premise)),
                   D::comp(y, D::proj2(sx.context, sx.premise, sy.premise)));
  }

  // -------------------------------------------------------------------------
  // Families

  RelationInstance instance(RelationFamily fam, std::size_t i) {
    switch (fam) {
      case RelationFamily::kCategory:
        return category(i % 3);
      case RelationFamily::kFibration:
        return fibration(i % 4);
      case RelationFamily::kProducts:
        return products(i % 8);
      case RelationFamily::kExponentials:
        return exponentials(i % 2);
      case RelationFamily::kAdjoints:
        return adjoints(i % 4);
      case RelationFamily::kEquality:
        return equality(i % 2);
      case RelationFamily::kStability:
        return stability(i % 7);
    }
    throw_usage("unknown relation family");
  }

  RelationInstance category(std::size_t which) {
    const CtxObject ctx = context(0);
    const Formula p = formula(ctx);
    const D f = from(p, ctx);
    const Formula q = conclusion(f);
    const auto F = RelationFamily::kCategory;
    if (which == 0) return {F, "f.1=f", D::comp(f, D::id(ctx, p)), f};
    if (which == 1) return {F, "1.f=f", D::comp(D::id(ctx, q), f), f};
    const D g = from(q, ctx);
    const D h = from(conclusion(g), ctx);
    return {F, "(hg)f=h(gf)", D::comp(D::comp(h, g), f),
            D::comp(h, D::comp(g, f))};
  }

  RelationInstance fibration(std::size_t which) {
    const CtxObject cod = context(0);
    const TermMorphism t = morphism_into(cod);
    const Formula p = formula(cod);
    const D f = from(p, cod);
    const auto F = RelationFamily::kFibration;
    switch (which) {
      case 0:
        return {F, "t*1=1", D::reindex(t, D::id(cod, p)),
                D::id(t.domain(), reindex_formula(t, p))};
      case 1: {
        const D g = from(conclusion(f), cod);
        return {F, "t*(gf)=t*g.t*f", D::reindex(t, D::comp(g, f)),
                D::comp(D::reindex(t, g), D::reindex(t, f))};
      }
      case 2:
        return {F, "id*f=f", D::reindex(identity(cod), f), f};
      default: {
        const TermMorphism s = morphism_into(t.domain());
        return {F, "s*t*f=(ts)*f", D::reindex(s, D::reindex(t, f)),
                D::reindex(compose(t, s), f)};
      }
    }
  }

  RelationInstance products(std::size_t which) {
    const CtxObject ctx = context(0);
    const Formula p = formula(ctx);
    const auto F = RelationFamily::kProducts;
    switch (which) {
      case 0:
        return {F, "f=!", into_top(p, ctx), D::bang(ctx, p)};
      case 1: {
        const D g = from(p, ctx);
        const Formula x = conclusion(g);
        const Formula bot = Formula::bot();
        const D f = coin() ? D::comp(g, D::absurd(ctx, p))
                           : D::comp(D::case_of(D::absurd(ctx, x),
                                                D::absurd(ctx, x)),
                                     D::inj1(ctx, bot, bot));
        return {F, "f=ex", f, D::absurd(ctx, x)};
      }
      case 2:
      case 3: {
        const D f = from(p, ctx), g = from(p, ctx);
        const Formula q = conclusion(f), r = conclusion(g);
        if (which == 2) {
          return {F, "pi<f,g>=f", D::comp(D::proj1(ctx, q, r), D::pair(f, g)),
                  f};
        }
        return {F, "pi'<f,g>=g", D::comp(D::proj2(ctx, q, r), D::pair(f, g)),
                g};
      }
      case 4: {
        const D h = conj_valued(p, ctx);
        const Formula qr = conclusion(h);
        return {F, "<pi h,pi' h>=h",
                D::pair(D::comp(D::proj1(ctx, qr.left(), qr.right()), h),
                        D::comp(D::proj2(ctx, qr.left(), qr.right()), h)),
                h};
      }
      case 5:
      case 6: {
        const D f = from(p, ctx);
        const D g = coin() ? D::comp(f, D::proj1(ctx, p, formula(ctx, 1)))
                           : D::comp(f, D::absurd(ctx, p));
        const Formula q2 = typecheck(g, sig_).premise;
        if (which == 5) {
          return {F, "[f,g]k=f",
                  D::comp(D::case_of(f, g), D::inj1(ctx, p, q2)), f};
        }
        return {F, "[f,g]k'=g", D::comp(D::case_of(f, g), D::inj2(ctx, p, q2)),
                g};
      }
      default: {
        const Formula q = formula(ctx);
        const D h = disj_sourced(p, q, ctx);
        return {F, "[hk,hk']=h",
                D::case_of(D::comp(h, D::inj1(ctx, p, q)),
                           D::comp(h, D::inj2(ctx, p, q))),
                h};
      }
    }
  }

  // h : P → Q ∧ R.
  D conj_valued(const Formula& p, const CtxObject& ctx) {
    switch (pick(3)) {
      case 0:
        return D::pair(from(p, ctx), from(p, ctx));
      case 1: {
        const D f = D::pair(from(p, ctx, 1), from(p, ctx, 1));
        const Formula qr = conclusion(f);
        return D::comp(and_swap(ctx, qr.left(), qr.right()), f);
      }
      default: {
        const D g = from(p, ctx, 1);
        const Formula x = conclusion(g);
        return D::comp(D::pair(D::bang(ctx, x), D::id(ctx, x)), g);
      }
    }
  }

  // h : P ∨ Q → R.
  D disj_sourced(const Formula& p, const Formula& q, const CtxObject& ctx) {
    switch (pick(3)) {
      case 0:
        return D::id(ctx, Formula::disj(p, q));
      case 1:
        return D::case_of(D::inj2(ctx, q, p), D::inj1(ctx, q, p));
      default: {
        const D f = from(p, ctx), g = from(q, ctx);
        const Formula x = conclusion(f), y = conclusion(g);
        const D c = D::case_of(D::comp(D::inj1(ctx, x, y), f),
                               D::comp(D::inj2(ctx, x, y), g));
        return D::comp(from(Formula::disj(x, y), ctx, 1), c);
      }
    }
  }

  RelationInstance exponentials(std::size_t which) {
    const CtxObject ctx = context(0);
    const Formula p = formula(ctx), q = formula(ctx, 1);
    const auto F = RelationFamily::kExponentials;
    if (which == 0) {
      const D f = from(Formula::conj(p, q), ctx);
      const Formula r = conclusion(f);
      const D lhs =
          D::comp(D::eval(ctx, q, r), times(D::curry(f), D::id(ctx, q)));
      return {F, "e(f~ x 1)=f", lhs, f};
    }
    // h : P → (Q ⇒ R)
    D h = D::curry(from(Formula::conj(p, q), ctx));
    switch (pick(3)) {
      case 0:
        h = D::id(ctx, Formula::implies(q, formula(ctx, 1)));
        break;
      case 1: {
        const D g = from(p, ctx, 1);
        h = D::comp(D::curry(from(Formula::conj(conclusion(g), q), ctx, 1)), g);
        break;
      }
      default:
        break;
    }
    const Formula qr = conclusion(h);
    const D lhs = D::curry(D::comp(D::eval(ctx, qr.left(), qr.right()),
                                   times(h, D::id(ctx, qr.left()))));
    return {F, "(e(h x 1))~=h", lhs, h};
  }

  RelationInstance adjoints(std::size_t which) {
    CtxObject outer = context(0);
    CtxObject ctx = outer;
    ctx.push_back(any_sort());
    const TermMorphism pi = drop_last(ctx);
    const auto F = RelationFamily::kAdjoints;
    switch (which) {
      case 0: {
        // f : π*S → P
        const Formula s = formula(outer);
        const D f = from(weaken_last(ctx, s), ctx);
        const Formula p = conclusion(f);
        return {F, "counit.pi*(lambda f)=f",
                D::comp(D::forall_counit(ctx, p),
                        D::reindex(pi, D::lambda(f))),
                f};
      }
      case 1: {
        // h : S → ∀P
        const Formula p = formula(ctx);
        const Formula all = forall_last(ctx, p);
        D h = D::id(outer, all);
        if (coin()) {
          const Formula s = formula(outer);
          h = D::lambda(from(weaken_last(ctx, s), ctx));
        } else if (coin()) {
          h = D::comp(D::id(outer, all), D::proj1(outer, all, formula(outer, 1)));
        }
        const Formula pp = quantifier_body(outer, conclusion(h));
        return {F, "lambda(counit.pi*h)=h",
                D::lambda(D::comp(D::forall_counit(ctx, pp),
                                  D::reindex(pi, h))),
                h};
      }
      case 2: {
        // f : P → π*S
        const Formula s0 = formula(outer);
        const D g = from(s0, outer);
        const Formula p0 = formula(ctx, 1);
        const Formula ws0 = weaken_last(ctx, s0);
        const D f = D::comp(D::reindex(pi, g), D::proj2(ctx, p0, ws0));
        const Formula p = Formula::conj(p0, ws0);
        return {F, "pi*(mu f).unit=f",
                D::comp(D::reindex(pi, D::mu(f)), D::exists_unit(ctx, p)), f};
      }
      default: {
        // h : ∃P → S
        const Formula p = formula(ctx);
        const Formula ex = exists_last(ctx, p);
        D h = D::id(outer, ex);
        if (coin()) {
          h = from(ex, outer);
        } else if (coin()) {
          const D g = from(ex, outer, 1);
          h = D::mu(D::comp(D::reindex(pi, g), D::exists_unit(ctx, p)));
        }
        return {F, "mu(pi*h.unit)=h",
                D::mu(D::comp(D::reindex(pi, h), D::exists_unit(ctx, p))), h};
      }
    }
  }

  // A formula T over (B, B) with a deduction ⊤ → Δ*T over (B).
  std::pair<Formula, D> diagonal_provable(const Sort& b) {
    const CtxObject one{b}, two{b, b};
    const TermMorphism delta = diagonal(b);
    const Term x1 = Term::var(b, positional_name(1));
    const Term x2 = Term::var(b, positional_name(2));
    switch (pick(5)) {
      case 0:
        return {eq_formula(b), D::refl(b)};
      case 1:
        return {Formula::eq(x2, x1), D::refl(b)};
      case 2: {
        // f(.., x1, ..) = f(.., x2, ..) for a unary-in-b symbol when one exists.
        for (const auto& fn : sig_.functions()) {
          if (fn.arity.empty()) continue;
          bool all_b = true;
          for (const auto& a : fn.arity) all_b = all_b && a == b;
          if (!all_b) continue;
          std::vector<Term> l, r;
          for (std::size_t i = 0; i < fn.arity.size(); ++i) {
            l.push_back(i % 2 == 0 ? x1 : x2);
            r.push_back(i % 2 == 0 ? x2 : x1);
          }
          const Term tl = Term::app(fn, l);
          const Term tr = Term::app(fn, r);
          const Term diag = Term::app(fn, std::vector<Term>(fn.arity.size(), x1));
          return {Formula::eq(tl, tr), refl_at(one, diag)};
        }
        return {eq_formula(b), D::refl(b)};
      }
      case 3: {
        // (x1 = x2) ∧ T'
        const D g = from(Formula::top(), two, 1);
        const Formula tt = conclusion(g);
        return {Formula::conj(eq_formula(b), tt),
                D::pair(D::refl(b), D::reindex(delta, g))};
      }
      default: {
        // P ⇒ (x1 = x2)
        const Formula q = formula(two, 1);
        const Formula dq = reindex_formula(delta, q);
        return {Formula::implies(q, eq_formula(b)),
                D::curry(D::comp(D::refl(b),
                                 D::bang(one, Formula::conj(Formula::top(), dq))))};
      }
    }
  }

  RelationInstance equality(std::size_t which) {
    const Sort b = any_sort();
    const CtxObject one{b}, two{b, b};
    const TermMorphism delta = diagonal(b);
    const auto F = RelationFamily::kEquality;
    if (which == 0) {
      auto [t, f] = diagonal_provable(b);
      return {F, "D*(xi f).r=f",
              D::comp(D::reindex(delta, D::xi(f, t)), D::refl(b)), f};
    }
    D h = D::id(two, eq_formula(b));
    switch (pick(3)) {
      case 0: {
        auto [t, f] = diagonal_provable(b);
        h = D::xi(f, t);
        break;
      }
      case 1:
        h = from(eq_formula(b), two);
        break;
      default:
        break;
    }
    return {F, "xi(D*h.r)=h",
            D::xi(D::comp(D::reindex(delta, h), D::refl(b)), conclusion(h)), h};
  }

  RelationInstance stability(std::size_t which) {
    const auto F = RelationFamily::kStability;
    if (which >= 5) {
      CtxObject ctx = context(1);
      const Sort last = ctx.back();
      const CtxObject outer(ctx.begin(), ctx.end() - 1);
      const TermMorphism u = morphism_into(outer);
      const TermMorphism ux = extend(u, last);
      const Formula p = formula(ctx);
      const Formula up = reindex_formula(ux, p);
      if (which == 5) {
        return {F, "(u x 1)*counit=counit", D::reindex(ux, D::forall_counit(ctx, p)),
                D::forall_counit(ux.domain(), up)};
      }
      return {F, "(u x 1)*unit=unit", D::reindex(ux, D::exists_unit(ctx, p)),
              D::exists_unit(ux.domain(), up)};
    }
    const CtxObject cod = context(0);
    const TermMorphism t = morphism_into(cod);
    const CtxObject& dom = t.domain();
    const Formula q = formula(cod), r = formula(cod, 1);
    const Formula tq = reindex_formula(t, q), tr = reindex_formula(t, r);
    switch (which) {
      case 0:
        return {F, "t*pi=pi", D::reindex(t, D::proj1(cod, q, r)),
                D::proj1(dom, tq, tr)};
      case 1:
        return {F, "t*pi'=pi'", D::reindex(t, D::proj2(cod, q, r)),
                D::proj2(dom, tq, tr)};
      case 2:
        return {F, "t*k=k", D::reindex(t, D::inj1(cod, q, r)),
                D::inj1(dom, tq, tr)};
      case 3:
        return {F, "t*k'=k'", D::reindex(t, D::inj2(cod, q, r)),
                D::inj2(dom, tq, tr)};
      default:
        return {F, "t*e=e", D::reindex(t, D::eval(cod, q, r)),
                D::eval(dom, tq, tr)};
    }
  }

  const Signature& sig_;
  std::mt19937_64 rng_;
  RelationBounds bounds_;
};

}  // namespace

std::vector<RelationInstance> basic_relation_instances(
    const Signature& sig, std::uint64_t seed, const RelationBounds& bounds) {
  return Generator(sig, seed, bounds).run();
}

}  // namespace hfol
