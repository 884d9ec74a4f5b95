#include "support/properties.hpp"

#include <algorithm>
#include <memory>
#include <random>

#include "hfol/groupoid_model.hpp"
#include "hfol/invariance.hpp"
#include "hfol/proof.hpp"
#include "hfol/set_model.hpp"
#include "hfol/term_category.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/structures.hpp"

namespace hfol::props {

namespace {

std::string term_db(const Term& t, const std::vector<Variable>& binders) {
  if (t.is_var()) {
    for (std::size_t k = binders.size(); k-- > 0;) {
      if (binders[k] == t.variable()) return "#" + std::to_string(binders.size() - k);
    }
    return t.variable().name + ":" + t.variable().sort;
  }
  std::string out = t.symbol() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += term_db(t.args()[i], binders);
  }
  return out + ")";
}

std::string formula_db(const Formula& phi, std::vector<Variable>& binders) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::kTop: return "T";
    case K::kBot: return "F";
    case K::kEq:
      return "(" + term_db(phi.lhs(), binders) + "=" + term_db(phi.rhs(), binders) + ")";
    case K::kAnd:
    case K::kOr:
    case K::kImplies: {
      const char* op = phi.kind() == K::kAnd ? "&" : phi.kind() == K::kOr ? "|" : ">";
      return "(" + formula_db(phi.left(), binders) + op + formula_db(phi.right(), binders) + ")";
    }
    case K::kForall:
    case K::kExists: {
      binders.push_back(phi.bound());
      const std::string body = formula_db(phi.body(), binders);
      binders.pop_back();
      return std::string(phi.kind() == K::kForall ? "A:" : "E:") + phi.bound().sort + "." + body;
    }
  }
  return "?";
}

bool subset(const VariableSet& a, const VariableSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---------------------------------------------------------------------------
// Syntax laws.

class SyntaxDraw {
 public:
  SyntaxDraw(const Signature& sig, std::uint64_t seed) : sig_(sig), gen_(sig, seed) {}

  testing::SyntaxGen& gen() { return gen_; }

  Term term() { return gen_.term("A", gen_.below(4)); }

  // Distinct variables containing `must`, plus up to two extras, shuffled.
  std::vector<Variable> vars_over(const VariableSet& must) {
    std::vector<Variable> xs(must.begin(), must.end());
    const std::size_t extra = gen_.below(3);
    for (std::size_t i = 0; i < extra; ++i) {
      const Variable v = gen_.variable("A");
      if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
    }
    std::shuffle(xs.begin(), xs.end(), gen_.rng());
    return xs;
  }

  std::vector<Term> terms(std::size_t n) {
    std::vector<Term> ts;
    for (std::size_t i = 0; i < n; ++i) ts.push_back(term());
    return ts;
  }

  VariableSet var_set() {
    VariableSet s;
    const std::size_t n = gen_.below(5);
    for (std::size_t i = 0; i < n; ++i) s.insert(gen_.variable("A"));
    return s;
  }

 private:
  const Signature& sig_;
  testing::SyntaxGen gen_;
};

}  // namespace

std::string de_bruijn(const Formula& phi) {
  std::vector<Variable> binders;
  return formula_db(phi, binders);
}

std::vector<LawResult> syntax_laws(std::uint64_t seed, std::size_t count,
                                   std::size_t depth) {
  const Signature sig = testing::small_signature();
  SyntaxDraw d(sig, seed);
  LawResult fv_terms{"substitution: FV(s[x:=t]) within FV(t), terms"};
  LawResult fv_formulas{"substitution: FV(phi[x:=t]) within FV(t), formulas"};
  LawResult comp_terms{"substitution composes, terms"};
  LawResult comp_formulas{"substitution composes, formulas up to alpha"};
  LawResult alpha{"alpha-equivalence is an equivalence preserving FV"};
  LawResult alpha_oracle{"alpha_eq agrees with binder-index comparison"};
  LawResult fresh{"renaming apart avoids a given set"};
  std::map<Formula::Kind, LawResult> conn;
  for (auto [k, n] : {std::pair{Formula::Kind::kAnd, "and"}, {Formula::Kind::kOr, "or"},
                      {Formula::Kind::kImplies, "implies"}, {Formula::Kind::kForall, "forall"},
                      {Formula::Kind::kExists, "exists"}}) {
    conn[k] = LawResult{std::string("substitution commutes with ") + n};
  }

  for (std::size_t i = 0; i < count; ++i) {
    // Terms.
    {
      const Term s = d.term();
      const auto xs = d.vars_over(free_vars(s));
      const auto ts = d.terms(xs.size());
      const Term r = subst(s, xs, ts);
      ++fv_terms.instances;
      if (!subset(free_vars(r), free_vars(ts))) fv_terms.fail(to_string(s));
      const auto ys = d.vars_over(free_vars(ts));
      const auto us = d.terms(ys.size());
      ++comp_terms.instances;
      if (!(subst(r, ys, us) == subst(s, xs, subst(ts, ys, us)))) comp_terms.fail(to_string(s));
    }
    // Formulas.
    const Formula phi = d.gen().formula(depth);
    {
      const auto xs = d.vars_over(free_vars(phi));
      const auto ts = d.terms(xs.size());
      const Formula r = subst(phi, xs, ts);
      ++fv_formulas.instances;
      if (!subset(free_vars(r), free_vars(ts))) fv_formulas.fail(to_string(phi));
      const auto ys = d.vars_over(free_vars(ts));
      const auto us = d.terms(ys.size());
      const Formula a = subst(r, ys, us);
      const Formula b = subst(phi, xs, subst(ts, ys, us));
      ++comp_formulas.instances;
      if (de_bruijn(a) != de_bruijn(b) || !alpha_eq(a, b)) comp_formulas.fail(to_string(phi));
    }
    {
      const Formula p1 = rename_apart(phi, d.var_set());
      const Formula p2 = rename_apart(p1, d.var_set());
      ++alpha.instances;
      if (!alpha_eq(phi, phi) || !alpha_eq(phi, p1) || !alpha_eq(p1, phi) ||
          !alpha_eq(p1, p2) || !alpha_eq(phi, p2) || free_vars(phi) != free_vars(p1)) {
        alpha.fail(to_string(phi) + " vs " + to_string(p1));
      }
      // Oracle on a variant, a perturbed variant and an unrelated formula.
      const Formula other = d.gen().formula(depth);
      const auto xs = d.vars_over(free_vars(p1));
      const Formula moved = subst(p1, xs, d.terms(xs.size()));
      for (const Formula* q : {&p1, &other, &moved}) {
        ++alpha_oracle.instances;
        if (alpha_eq(phi, *q) != (de_bruijn(phi) == de_bruijn(*q))) {
          alpha_oracle.fail(to_string(phi) + " vs " + to_string(*q));
        }
      }
    }
    {
      VariableSet avoid = d.var_set();
      for (const auto& v : free_vars(d.term())) avoid.insert(v);
      const Formula r = rename_apart(phi, avoid);
      VariableSet clash;
      const VariableSet bv = bound_vars(r);
      std::set_intersection(bv.begin(), bv.end(), avoid.begin(), avoid.end(),
                            std::inserter(clash, clash.begin()));
      ++fresh.instances;
      if (!clash.empty() || de_bruijn(r) != de_bruijn(phi)) fresh.fail(to_string(phi));
    }
    // Connectives: the substitution clause of each.
    {
      const Formula psi = d.gen().formula(depth > 0 ? depth - 1 : 0);
      const Formula chi = d.gen().formula(depth > 0 ? depth - 1 : 0);
      VariableSet fv = free_vars(psi);
      for (const auto& v : free_vars(chi)) fv.insert(v);
      const auto xs = d.vars_over(fv);
      const auto ts = d.terms(xs.size());
      VariableSet fts = free_vars(ts);
      for (auto k : {Formula::Kind::kAnd, Formula::Kind::kOr, Formula::Kind::kImplies}) {
        const Formula whole = Formula::binary(k, psi, chi);
        const Formula expect = Formula::binary(k, subst(psi, xs, ts), subst(chi, xs, ts));
        ++conn[k].instances;
        if (de_bruijn(subst(whole, xs, ts)) != de_bruijn(expect)) conn[k].fail(to_string(whole));
      }
      for (auto k : {Formula::Kind::kForall, Formula::Kind::kExists}) {
        const Variable y = d.gen().variable("A");
        const Formula whole = Formula::quantifier(k, y, psi);
        // (Qy.psi)[x:=t] = Qw.psi[y:=w, x':=t'] with w fresh and x' = x minus y.
        std::vector<Variable> xs2{};
        std::vector<Term> ts2{};
        VariableSet used = all_vars(psi);
        used.insert(fts.begin(), fts.end());
        used.insert(xs.begin(), xs.end());
        used.insert(y);
        const Variable w = fresh_variable("A", used);
        xs2.push_back(y);
        ts2.push_back(Term::var(w));
        for (std::size_t j = 0; j < xs.size(); ++j) {
          if (xs[j] == y) continue;
          xs2.push_back(xs[j]);
          ts2.push_back(ts[j]);
        }
        const Formula expect = Formula::quantifier(k, w, subst(psi, xs2, ts2));
        ++conn[k].instances;
        if (de_bruijn(subst(whole, xs, ts)) != de_bruijn(expect)) conn[k].fail(to_string(whole));
      }
    }
  }
  std::vector<LawResult> out{fv_terms, fv_formulas, comp_terms, comp_formulas,
                             alpha, alpha_oracle, fresh};
  for (auto& [k, r] : conn) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------
// Term category.

namespace {

Signature tc_signature() {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"g", {"B"}, "A"});
  return sig;
}

// Canonical terms of sort s over obj with depth ≤ d.
std::vector<Term> terms_upto(const Signature& sig, const CtxObject& obj,
                             const Sort& s, std::size_t d) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    if (obj[i] == s) out.push_back(Term::var(s, positional_name(i + 1)));
  }
  if (d == 0) return out;
  for (const auto& f : sig.functions()) {
    if (f.codomain != s) continue;
    std::vector<std::vector<Term>> choices;
    for (const auto& a : f.arity) choices.push_back(terms_upto(sig, obj, a, d - 1));
    std::vector<std::size_t> idx(choices.size(), 0);
    bool empty = false;
    for (const auto& c : choices) empty = empty || c.empty();
    if (empty) continue;
    while (true) {
      std::vector<Term> args;
      for (std::size_t k = 0; k < idx.size(); ++k) args.push_back(choices[k][idx[k]]);
      out.push_back(Term::app(f, std::move(args)));
      std::size_t k = idx.size();
      while (k > 0 && ++idx[k - 1] == choices[k - 1].size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

std::vector<TermMorphism> homs(const Signature& sig, const CtxObject& dom,
                               const CtxObject& cod, std::size_t d) {
  std::vector<std::vector<Term>> choices;
  for (const auto& s : cod) choices.push_back(terms_upto(sig, dom, s, d));
  std::vector<TermMorphism> out;
  for (const auto& c : choices) {
    if (c.empty()) return out;
  }
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    std::vector<Term> ts;
    for (std::size_t k = 0; k < idx.size(); ++k) ts.push_back(choices[k][idx[k]]);
    out.emplace_back(dom, cod, std::move(ts));
    std::size_t k = idx.size();
    while (k > 0 && ++idx[k - 1] == choices[k - 1].size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

CtxObject concat(const CtxObject& a, const CtxObject& b) {
  CtxObject out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Finite-set target: A = {0,1}, B = {0,1,2}; f = max, g(b) = b mod 2.
struct Tables {
  struct Morphism {
    CtxObject dom, cod;
    std::vector<std::vector<std::size_t>> table;  // per domain point
    bool operator==(const Morphism&) const = default;
  };

  static std::size_t size(const Sort& s) { return s == "A" ? 2 : 3; }

  static std::vector<std::vector<std::size_t>> points(const CtxObject& obj) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (const auto& s : obj) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& p : out) {
        for (std::size_t v = 0; v < size(s); ++v) {
          auto q = p;
          q.push_back(v);
          next.push_back(q);
        }
      }
      out = next;
    }
    return out;
  }

  static std::size_t index(const CtxObject& obj, const std::vector<std::size_t>& p) {
    std::size_t i = 0;
    for (std::size_t k = 0; k < obj.size(); ++k) i = i * size(obj[k]) + p[k];
    return i;
  }

  Morphism projection(const CtxObject& obj, std::size_t i) {
    Morphism m{obj, {obj[i - 1]}, {}};
    for (const auto& p : points(obj)) m.table.push_back({p[i - 1]});
    return m;
  }
  Morphism tuple(const CtxObject& obj, const std::vector<Morphism>& ms) {
    Morphism m{obj, {}, std::vector<std::vector<std::size_t>>(points(obj).size())};
    for (const auto& f : ms) {
      m.cod.insert(m.cod.end(), f.cod.begin(), f.cod.end());
      for (std::size_t p = 0; p < m.table.size(); ++p) {
        m.table[p].insert(m.table[p].end(), f.table[p].begin(), f.table[p].end());
      }
    }
    return m;
  }
  Morphism compose(const Morphism& g, const Morphism& f) {
    Morphism m{f.dom, g.cod, {}};
    for (const auto& v : f.table) m.table.push_back(g.table[index(g.dom, v)]);
    return m;
  }
  Morphism symbol(const std::string& name) {
    if (name == "f") {
      Morphism m{{"A", "A"}, {"A"}, {}};
      for (const auto& p : points({"A", "A"})) m.table.push_back({std::max(p[0], p[1])});
      return m;
    }
    Morphism m{{"B"}, {"A"}, {}};
    for (const auto& p : points({"B"})) m.table.push_back({p[0] % 2});
    return m;
  }
};

static_assert(FiniteProductTarget<Tables>);

}  // namespace

std::vector<LawResult> term_category_laws() {
  const Signature sig = tc_signature();
  const std::vector<CtxObject> objects{{}, {"A"}, {"B"}, {"A", "B"}, {"B", "A"}};
  std::map<std::pair<CtxObject, CtxObject>, std::vector<TermMorphism>> hom;
  for (const auto& x : objects) {
    for (const auto& y : objects) hom[{x, y}] = homs(sig, x, y, 2);
  }
  LawResult unit{"identity laws"};
  LawResult assoc{"associativity"};
  LawResult terminal{"the empty object is terminal"};
  LawResult product{"product universal property"};
  LawResult functor{"interpretation in finite sets is a product-preserving functor"};
  Tables target;

  for (const auto& x : objects) {
    ++terminal.instances;
    if (hom[{x, {}}].size() != 1) terminal.fail("hom(" + to_string(x) + ", ()) size");
    ++functor.instances;
    if (!(interpret_morphism(identity(x), target) ==
          Tables::Morphism{x, x, [&] {
                             std::vector<std::vector<std::size_t>> t;
                             for (const auto& p : Tables::points(x)) t.push_back(p);
                             return t;
                           }()})) {
      functor.fail("identity on " + to_string(x));
    }
    for (std::size_t i = 1; i <= x.size(); ++i) {
      ++functor.instances;
      if (!(interpret_morphism(projection(x, i), target) == target.projection(x, i))) {
        functor.fail("projection " + std::to_string(i) + " of " + to_string(x));
      }
    }
    for (const auto& y : objects) {
      for (const auto& f : hom[{x, y}]) {
        ++unit.instances;
        if (!(compose(identity(y), f) == f) || !(compose(f, identity(x)) == f)) {
          unit.fail(to_string(f));
        }
        for (const auto& z : objects) {
          for (const auto& g : hom[{y, z}]) {
            const TermMorphism gf = compose(g, f);
            ++functor.instances;
            if (!(interpret_morphism(gf, target) ==
                  target.compose(interpret_morphism(g, target), interpret_morphism(f, target)))) {
              functor.fail(to_string(g) + " after " + to_string(f));
            }
            for (const auto& w : objects) {
              for (const auto& h : hom[{z, w}]) {
                ++assoc.instances;
                if (!(compose(h, gf) == compose(compose(h, g), f))) {
                  assoc.fail(to_string(h) + ", " + to_string(g) + ", " + to_string(f));
                }
              }
            }
          }
        }
      }
    }
  }
  // Products: for f : C → X and g : C → Y exactly one h : C → XY of depth ≤ 2
  // has π_X h = f and π_Y h = g, and it is the chosen tuple.
  for (const auto& c : objects) {
    for (const auto& x : objects) {
      for (const auto& y : objects) {
        const CtxObject xy = concat(x, y);
        std::vector<std::size_t> left, right;
        for (std::size_t i = 1; i <= x.size(); ++i) left.push_back(i);
        for (std::size_t i = 1; i <= y.size(); ++i) right.push_back(x.size() + i);
        std::vector<TermMorphism> pl, pr;
        for (auto i : left) pl.push_back(projection(xy, i));
        for (auto i : right) pr.push_back(projection(xy, i));
        const TermMorphism pi_x = tuple(xy, pl);
        const TermMorphism pi_y = tuple(xy, pr);
        const auto hs = homs(sig, c, xy, 2);
        for (const auto& f : hom[{c, x}]) {
          for (const auto& g : hom[{c, y}]) {
            std::size_t found = 0;
            const TermMorphism* witness = nullptr;
            for (const auto& h : hs) {
              if (compose(pi_x, h) == f && compose(pi_y, h) == g) {
                ++found;
                witness = &h;
              }
            }
            std::vector<TermMorphism> parts;
            for (const auto& t : f.terms()) parts.push_back(morphism_from_terms(c, {t}));
            for (const auto& t : g.terms()) parts.push_back(morphism_from_terms(c, {t}));
            ++product.instances;
            if (found != 1 || !(*witness == tuple(c, parts))) {
              product.fail(to_string(f) + " and " + to_string(g) + ": " +
                           std::to_string(found) + " mediating morphisms");
            }
          }
        }
      }
    }
  }
  return {unit, assoc, terminal, product, functor};
}

// ---------------------------------------------------------------------------
// Model laws.

namespace {

Signature model_signature() {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_function({"f", {"A"}, "B"});
  sig.add_function({"g", {"A", "B"}, "A"});
  sig.add_function({"c", {}, "A"});
  return sig;
}

SetStructure random_set_structure(const Signature& sig, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(1, 3);
  SetStructure m{sig, {}, {}};
  for (const auto& s : sig.sorts()) {
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) m.carriers[s].push_back(s + std::to_string(i));
  }
  for (const auto& f : sig.functions()) {
    std::size_t points = 1;
    for (const auto& a : f.arity) points *= m.carriers[a].size();
    std::uniform_int_distribution<std::size_t> v(0, m.carriers[f.codomain].size() - 1);
    for (std::size_t p = 0; p < points; ++p) m.tables[f.name].push_back(v(rng));
  }
  return m;
}

class TermDraw {
 public:
  TermDraw(const Signature& sig, std::mt19937_64& rng) : sig_(sig), rng_(rng) {}

  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // Every sort of this signature has a closed term, so this always succeeds.
  Term term(const CtxObject& ctx, const Sort& s, std::size_t depth) {
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (ctx[i] == s) vars.push_back(i);
    }
    if (!vars.empty() && (depth == 0 || below(2) == 0)) {
      return Term::var(s, positional_name(vars[below(vars.size())] + 1));
    }
    std::vector<const FunctionSymbol*> fs;
    for (const auto& f : sig_.functions()) {
      if (f.codomain == s && (depth > 0 || f.arity.empty())) fs.push_back(&f);
    }
    if (fs.empty()) {
      for (const auto& f : sig_.functions()) {
        if (f.codomain == s) fs.push_back(&f);
      }
    }
    const FunctionSymbol* f = fs[below(fs.size())];
    std::vector<Term> args;
    for (const auto& a : f->arity) args.push_back(term(ctx, a, depth > 0 ? depth - 1 : 0));
    return Term::app(*f, std::move(args));
  }

  CtxObject object(std::size_t max_len) {
    CtxObject out;
    const std::size_t n = below(max_len + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sig_.sorts()[below(sig_.sorts().size())]);
    return out;
  }

  TermMorphism morphism(const CtxObject& dom, const CtxObject& cod) {
    std::vector<Term> ts;
    for (const auto& s : cod) ts.push_back(term(dom, s, 2));
    return TermMorphism(dom, cod, std::move(ts));
  }

  template <class B>
  typename B::Pred pred(B& b, const CtxObject& ctx, std::size_t depth) {
    if (depth == 0) {
      switch (below(5)) {
        case 0: return b.top(ctx);
        case 1: return b.bot(ctx);
        default: {
          const Sort& s = sig_.sorts()[below(sig_.sorts().size())];
          const TermMorphism st(ctx, {s, s}, {term(ctx, s, 1), term(ctx, s, 1)});
          return b.reindex(st, b.eq(s));
        }
      }
    }
    switch (below(6)) {
      case 0: return b.conj(pred(b, ctx, depth - 1), pred(b, ctx, depth - 1));
      case 1: return b.disj(pred(b, ctx, depth - 1), pred(b, ctx, depth - 1));
      case 2: return b.implies(pred(b, ctx, depth - 1), pred(b, ctx, depth - 1));
      case 3:
      case 4: {
        CtxObject inner = ctx;
        inner.push_back(sig_.sorts()[below(sig_.sorts().size())]);
        const auto p = pred(b, inner, depth - 1);
        return below(2) ? b.exists_last(inner, p) : b.forall_last(inner, p);
      }
      default: return pred(b, ctx, depth - 1);
    }
  }

 private:
  const Signature& sig_;
  std::mt19937_64& rng_;
};

bool fibers_match(SetModel&, const SetModel::Pred& p, const SetModel::Pred& q) {
  return p->ctx == q->ctx && p->sizes == q->sizes;
}

bool fibers_match(GroupoidModel&, const GroupoidModel::Pred& p, const GroupoidModel::Pred& q) {
  if (!(p->base() == q->base())) return false;
  for (gpd::Obj a = 0; a < p->base().num_objects(); ++a) {
    if (!gpd::groupoid_equivalent(p->fiber(a), q->fiber(a))) return false;
  }
  return true;
}

template <class B>
void law_round(B& b, TermDraw& d, LawResult& frob, LawResult& bc_ex, LawResult& bc_all) {
  const CtxObject a = d.object(2);
  CtxObject ctx = a;
  ctx.push_back(d.below(2) ? "A" : "B");
  const Sort last = ctx.back();
  const auto p = d.pred(b, ctx, 2);
  const auto q = d.pred(b, a, 1);
  const CtxObject c = d.object(2);
  const TermMorphism t = d.morphism(c, a);
  const TermMorphism tb = extend(t, last);
  CtxObject cb = c;
  cb.push_back(last);
  const std::string where = to_string(ctx) + " along " + to_string(t);

  const auto lhs = b.exists_last(ctx, b.conj(p, b.reindex(drop_last(ctx), q)));
  const auto rhs = b.conj(b.exists_last(ctx, p), q);
  const bool f_ok = fibers_match(b, lhs, rhs);
  const bool e_ok = fibers_match(b, b.reindex(t, b.exists_last(ctx, p)),
                                 b.exists_last(cb, b.reindex(tb, p)));
  const bool a_ok = fibers_match(b, b.reindex(t, b.forall_last(ctx, p)),
                                 b.forall_last(cb, b.reindex(tb, p)));
  ++frob.instances;
  ++bc_ex.instances;
  ++bc_all.instances;
  if (!f_ok) frob.fail(where);
  if (!e_ok) bc_ex.fail(where);
  if (!a_ok) bc_all.fail(where);
}

}  // namespace

std::vector<LawResult> model_laws(const std::string& backend, std::uint64_t seed,
                                  std::size_t pairs) {
  const Signature sig = model_signature();
  std::mt19937_64 rng(seed);
  TermDraw d(sig, rng);
  LawResult frob{backend + ": Frobenius reciprocity"};
  LawResult bc_ex{backend + ": Beck-Chevalley for exists"};
  LawResult bc_all{backend + ": Beck-Chevalley for forall"};
  std::size_t skipped = 0;
  constexpr std::size_t kPerStructure = 10;
  while (frob.instances < pairs && skipped < 50 * pairs) {
    const std::uint64_t s = rng();
    try {
      if (backend == "set") {
        const SetStructure m = random_set_structure(sig, rng);
        SetOptions opts;
        opts.max_fiber = 20000;
        SetModel b(m, opts);
        for (std::size_t i = 0; i < kPerStructure && frob.instances < pairs; ++i) {
          law_round(b, d, frob, bc_ex, bc_all);
        }
      } else {
        const GroupoidStructure m = random_groupoid_structure(sig, s);
        gpd::FamilyOptions opts;
        opts.max_fiber = 5000;
        GroupoidModel b(m, opts);
        for (std::size_t i = 0; i < kPerStructure && frob.instances < pairs; ++i) {
          law_round(b, d, frob, bc_ex, bc_all);
        }
      }
    } catch (const SizeGuardError&) {
      ++skipped;
    }
  }
  frob.skipped = bc_ex.skipped = bc_all.skipped = skipped;
  return {frob, bc_ex, bc_all};
}

LawResult deduction_soundness(const std::string& backend, std::uint64_t seed,
                              std::size_t structures) {
  const Signature sig = model_signature();
  std::mt19937_64 rng(seed);
  LawResult r{backend + ": deductions preserve inhabitation"};
  RelationBounds bounds;
  bounds.per_family = 10;
  for (std::size_t k = 0; k < structures; ++k) {
    const std::uint64_t s = rng();
    const auto instances = basic_relation_instances(sig, s, bounds);
    const auto check = [&](auto& b) {
      Interpreter interp(b, sig);
      for (const auto& inst : instances) {
        for (const Deduction* dd : {&inst.lhs, &inst.rhs}) {
          try {
            const Sequent seq = typecheck(*dd, sig);
            const auto p = interp.formula(seq.premise, seq.context);
            const auto q = interp.formula(seq.conclusion, seq.context);
            (void)interp.deduction(*dd);
            ++r.instances;
            for (std::size_t a = 0; a < b.num_points(seq.context); ++a) {
              if (b.inhabited(p, a) && !b.inhabited(q, a)) {
                r.fail(to_string(*dd) + " at point " + std::to_string(a));
                break;
              }
            }
          } catch (const SizeGuardError&) {
            ++r.skipped;
          }
        }
      }
    };
    if (backend == "set") {
      const SetStructure m = random_set_structure(sig, rng);
      SetModel b(m);
      check(b);
    } else {
      const GroupoidStructure m = random_groupoid_structure(sig, s);
      GroupoidModel b(m);
      check(b);
    }
  }
  return r;
}

}  // namespace hfol::props

// ---------------------------------------------------------------------------
// Relation soundness.

namespace hfol::props {

std::vector<LawResult> relation_soundness(const std::string& backend,
                                          std::uint64_t seed,
                                          std::size_t per_family) {
  const Signature sig = testing::binary_sig();
  std::map<RelationFamily, LawResult> by_family;
  for (RelationFamily f : kAllRelationFamilies) {
    by_family[f] = LawResult{backend + ": " + family_name(f)};
  }
  std::vector<SetStructure> sets;
  std::vector<GroupoidStructure> groupoids;
  if (backend == "set") {
    std::mt19937_64 rng(seed);
    sets.push_back({sig, {{"A", {"0", "1", "2"}}}, {{"f", {0, 1, 2, 1, 2, 0, 2, 0, 1}}, {"c", {1}}}});
    for (int i = 0; i < 2; ++i) {
      SetStructure m{sig, {{"A", {"0", "1", "2"}}}, {{"f", {}}, {"c", {rng() % 3}}}};
      for (int p = 0; p < 9; ++p) m.tables["f"].push_back(rng() % 3);
      sets.push_back(m);
    }
  } else {
    groupoids = {testing::projection_structure(), testing::group_law_structure()};
  }
  const std::size_t n_structures = backend == "set" ? sets.size() : groupoids.size();
  const auto short_family = [&] {
    for (auto& [f, r] : by_family) {
      if (r.instances < per_family * n_structures) return true;
    }
    return false;
  };
  RelationBounds bounds;
  bounds.per_family = per_family;
  for (std::size_t batch = 0; batch < 16 && short_family(); ++batch) {
    const auto instances = basic_relation_instances(sig, seed + 7919 * batch, bounds);
    for (std::size_t k = 0; k < n_structures; ++k) {
      std::map<RelationFamily, std::size_t> done;
      for (const auto& inst : instances) {
        LawResult& r = by_family[inst.family];
        if (done[inst.family] >= per_family || r.instances >= per_family * n_structures) continue;
        try {
          bool equal;
          if (backend == "set") {
            SetOptions opts;
            opts.max_fiber = 4096;
            SetModel b(sets[k], opts);
            Interpreter interp(b, sig);
            equal = interp.deduction(inst.lhs) == interp.deduction(inst.rhs);
          } else {
            gpd::FamilyOptions opts;
            opts.max_fiber = 2000;
            GroupoidModel b(groupoids[k], opts);
            Interpreter interp(b, sig);
            equal = interp.deduction(inst.lhs) == interp.deduction(inst.rhs);
          }
          ++done[inst.family];
          ++r.instances;
          if (!equal) r.fail(inst.relation + ": " + to_string(inst.lhs));
        } catch (const SizeGuardError&) {
          ++r.skipped;
        }
      }
    }
  }
  std::vector<LawResult> out;
  for (auto& [f, r] : by_family) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------
// Tarski and Läuchli.

namespace {

struct Denotation {
  std::vector<std::uint8_t> truth;
  std::vector<std::size_t> sizes;
  auto operator<=>(const Denotation&) const = default;
};

struct FormulaClass {
  Formula rep;
  double count;
};

}  // namespace

TarskiLauchliResult tarski_lauchli(std::size_t max_depth, std::size_t max_quant) {
  TarskiLauchliResult out;
  const std::vector<SetStructure> structures = testing::all_magmas(2);
  const Signature& sig = structures.front().sig;
  const FunctionSymbol& f = sig.function("f");
  out.structures = structures.size();
  SetOptions opts;
  opts.max_fiber = std::size_t(1) << 24;
  std::vector<std::unique_ptr<SetModel>> models;
  std::vector<std::unique_ptr<Interpreter<SetModel>>> interps;
  for (const auto& m : structures) {
    models.push_back(std::make_unique<SetModel>(m, opts));
    interps.push_back(std::make_unique<Interpreter<SetModel>>(*models.back(), sig));
  }

  std::vector<Context> ctxs;
  for (std::size_t k = 0; k <= max_quant; ++k) ctxs.push_back(Context::canonical(CtxObject(k, "A")));

  // Evaluates φ over ctx k in every structure, checking inhabitation against
  // truth at every point.
  const auto denote = [&](const Formula& phi, std::size_t k) {
    Denotation d;
    const Formula canon = canonicalize(phi, ctxs[k]);
    const CtxObject obj(k, "A");
    for (std::size_t s = 0; s < structures.size(); ++s) {
      const auto p = interps[s]->formula(canon, obj);
      for (std::size_t a = 0; a < p->sizes.size(); ++a) {
        const bool truth = tarski_truth(phi, ctxs[k], structures[s],
                                        decode_point(structures[s], obj, a));
        ++out.law.instances;
        if ((p->sizes[a] > 0) != truth) {
          out.law.fail(to_string(phi) + " in structure " + std::to_string(s) + " at point " +
                       std::to_string(a));
        }
        d.truth.push_back(truth);
        d.sizes.push_back(p->sizes[a]);
      }
    }
    ++out.representatives;
    return d;
  };

  // classes[k]: formulas of the current depth bound over ctx k.
  std::vector<std::vector<FormulaClass>> classes(max_quant + 1);
  const auto add = [](std::map<Denotation, std::size_t>& index, std::vector<FormulaClass>& into,
                      const Denotation& d, const Formula& phi, double count) {
    auto [it, fresh] = index.emplace(d, into.size());
    if (fresh) {
      into.push_back({phi, count});
    } else {
      into[it->second].count += count;
    }
  };
  for (std::size_t k = 0; k <= max_quant; ++k) {
    std::map<Denotation, std::size_t> index;
    std::vector<Term> terms;
    for (std::size_t i = 1; i <= k; ++i) terms.push_back(Term::var("A", positional_name(i)));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) terms.push_back(Term::app(f, {terms[i], terms[j]}));
    }
    std::vector<Formula> atoms{Formula::top(), Formula::bot()};
    for (const auto& s : terms) {
      for (const auto& t : terms) atoms.push_back(Formula::eq(s, t));
    }
    for (const auto& a : atoms) add(index, classes[k], denote(a, k), a, 1);
  }
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    std::vector<std::vector<FormulaClass>> next(max_quant + 1);
    const bool last = depth == max_depth;
    for (std::size_t k = 0; k <= max_quant; ++k) {
      // The final round only needs closed formulas.
      if (last && k > 0) continue;
      std::map<Denotation, std::size_t> index;
      std::vector<Term> terms;
      for (std::size_t i = 1; i <= k; ++i) terms.push_back(Term::var("A", positional_name(i)));
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) terms.push_back(Term::app(f, {terms[i], terms[j]}));
      }
      std::vector<Formula> atoms{Formula::top(), Formula::bot()};
      for (const auto& s : terms) {
        for (const auto& t : terms) atoms.push_back(Formula::eq(s, t));
      }
      for (const auto& a : atoms) add(index, next[k], denote(a, k), a, 1);
      for (const auto& p : classes[k]) {
        for (const auto& q : classes[k]) {
          for (auto kind : {Formula::Kind::kAnd, Formula::Kind::kOr, Formula::Kind::kImplies}) {
            const Formula phi = Formula::binary(kind, p.rep, q.rep);
            add(index, next[k], denote(phi, k), phi, p.count * q.count);
          }
        }
      }
      if (k < max_quant) {
        const Variable x{"A", positional_name(k + 1)};
        for (const auto& p : classes[k + 1]) {
          for (auto kind : {Formula::Kind::kForall, Formula::Kind::kExists}) {
            const Formula phi = Formula::quantifier(kind, x, p.rep);
            add(index, next[k], denote(phi, k), phi, p.count);
          }
        }
      }
    }
    classes = std::move(next);
  }
  for (const auto& c : classes[0]) out.closed_formulas += c.count;
  return out;
}

// ---------------------------------------------------------------------------
// Homotopy sentences.

HomotopyResult homotopy_sentences(
    const std::vector<std::pair<std::string, gpd::FinGroupoid>>& carriers) {
  HomotopyResult out;
  Signature hsig;
  hsig.add_sort("A");
  hsig.add_sort("B");
  hsig.add_function({"f", {"A"}, "B"});
  hsig.add_function({"g", {"A"}, "B"});
  Signature esig;
  esig.add_sort("A");
  esig.add_sort("B");
  esig.add_function({"f", {"A"}, "B"});
  esig.add_function({"g", {"B"}, "A"});
  const Formula homotopy = Formula::forall(
      {"A", "x"}, Formula::eq(Term::app(hsig.function("f"), {Term::var("A", "x")}),
                              Term::app(hsig.function("g"), {Term::var("A", "x")})));
  const Term x = Term::var("A", "x"), y = Term::var("B", "y");
  const FunctionSymbol& ef = esig.function("f");
  const FunctionSymbol& eg = esig.function("g");
  const Formula equivalence = Formula::conj(
      Formula::forall({"A", "x"}, Formula::eq(Term::app(eg, {Term::app(ef, {x})}), x)),
      Formula::forall({"B", "y"}, Formula::eq(Term::app(ef, {Term::app(eg, {y})}), y)));

  for (const auto& [an, a] : carriers) {
    for (const auto& [bn, b] : carriers) {
      const auto ab = testing::brute_functors(a, b);
      const auto ba = testing::brute_functors(b, a);
      for (const auto& f : ab) {
        const gpd::Functor ff = testing::to_functor(a, b, f);
        for (const auto& g : ab) {
          GroupoidStructure m{hsig, {{"A", a}, {"B", b}}, {{"f", ff}, {"g", testing::to_functor(a, b, g)}}, {}};
          const bool expect = testing::brute_natural_iso(a, b, f, g);
          ++out.homotopy.instances;
          out.positive_homotopy += expect;
          if (groupoid_inhabited(homotopy, m) != expect) out.homotopy.fail(an + " -> " + bn);
        }
        for (const auto& g : ba) {
          GroupoidStructure m{esig, {{"A", a}, {"B", b}}, {{"f", ff}, {"g", testing::to_functor(b, a, g)}}, {}};
          const bool expect = testing::brute_equivalence_pair(a, b, f, g);
          ++out.equivalence.instances;
          out.positive_equivalence += expect;
          if (groupoid_inhabited(equivalence, m) != expect) out.equivalence.fail(an + " <-> " + bn);
        }
      }
    }
  }
  return out;
}

}  // namespace hfol::props

// ---------------------------------------------------------------------------
// Invariance.

namespace hfol::props {

namespace {

// Number of components and sorted automorphism group orders.
std::pair<std::size_t, std::vector<std::size_t>> shape(const gpd::FinGroupoid& g) {
  std::vector<std::size_t> orders;
  for (std::size_t c = 0; c < g.num_components(); ++c) orders.push_back(g.group(c).order());
  std::sort(orders.begin(), orders.end());
  return {g.num_components(), orders};
}

}  // namespace

InvarianceResult invariance_suite(std::uint64_t seed, std::size_t equivalences,
                                  std::size_t pool) {
  InvarianceResult out;
  const Signature sig = model_signature();
  const auto formulas = closed_formula_pool(sig, seed, pool, 3);
  out.pool = formulas.size();
  gpd::FamilyOptions opts;
  opts.max_fiber = 100000;
  for (std::size_t e = 0; e < equivalences; ++e) {
    const auto m = random_groupoid_structure(sig, seed * 1000 + e);
    const auto [n, h] = random_equivalence(m, seed * 2000 + e);
    const Verification v = verify_homotopy_equivalence(m, n, h);
    ++out.equivalences;
    if (!v.ok) {
      out.law.fail("equivalence " + std::to_string(e) + ": " + v.where + ": " + v.detail);
      continue;
    }
    for (const auto& phi : formulas) {
      ++out.law.instances;
      try {
        const auto r = invariance_report(phi, {}, m, n, h, opts);
        const auto fm = groupoid_interpret(phi, {}, m, opts);
        const auto fn = groupoid_interpret(phi, {}, n, opts);
        out.inhabited += !fm->fiber(0).empty();
        if (!r.all_equivalent() || shape(fm->fiber(0)) != shape(fn->fiber(0))) {
          out.law.fail("equivalence " + std::to_string(e) + ": " + to_string(phi));
        }
      } catch (const SizeGuardError& err) {
        if (out.law.skipped == 0) out.first_skip = "equivalence " + std::to_string(e) + ": " + to_string(phi) + ": " + err.what();
        ++out.law.skipped;
      }
    }
  }
  return out;
}

LawResult set_iso_invariance(std::uint64_t seed, std::size_t rounds, std::size_t formulas) {
  LawResult out{"set isomorphism invariance"};
  const Signature sig = testing::small_signature();
  testing::SyntaxGen gen(sig, seed);
  SetOptions opts;
  opts.max_fiber = 1u << 20;
  for (std::size_t round = 0; round < rounds; ++round) {
    SetStructure m{sig, {{"A", {"a", "b", "c"}}}, {}};
    m.tables["f"].resize(9);
    m.tables["g"].resize(3);
    m.tables["c"].resize(1);
    for (auto& [name, t] : m.tables) {
      for (auto& v : t) v = gen.below(3);
    }
    std::vector<std::size_t> sigma{0, 1, 2};
    std::shuffle(sigma.begin(), sigma.end(), gen.rng());
    const SetStructure m2 = relabel(m, {{"A", sigma}});
    for (std::size_t i = 0; i < formulas; ++i) {
      const Formula phi = gen.formula(3);
      const VariableSet fv = free_vars(phi);
      const Context ctx(std::vector<Variable>(fv.begin(), fv.end()));
      const auto bij = point_bijection(m, m2, ctx.sorts(), {{"A", sigma}});
      try {
        ++out.instances;
        if (!iso_check(lauchli(phi, ctx, m, opts), lauchli(phi, ctx, m2, opts), bij)) {
          out.fail(to_string(phi));
        }
      } catch (const SizeGuardError&) {
        --out.instances;
        ++out.skipped;
      }
    }
  }
  return out;
}

LawResult closed_deductions(const std::vector<std::string>& proofs) {
  LawResult out{"closed deductions are inhabited"};
  const auto magmas = testing::all_magmas(2);
  const Signature& msig = magmas.front().sig;
  const std::vector<GroupoidStructure> groupoids{testing::projection_structure(),
                                                 testing::group_law_structure()};
  for (const auto& text : proofs) {
    const ProofFile pmagma = parse_proof(text, msig);
    const Sequent seq = typecheck(pmagma.proof, msig);
    if (!seq.context.empty() || !(seq.premise == Formula::top())) {
      out.fail(text + ": not a closed proof from T");
      continue;
    }
    for (const auto& m : magmas) {
      ++out.instances;
      SetModel model(m);
      Interpreter<SetModel> interp(model, msig);
      const auto f = interp.deduction(pmagma.proof);
      const bool inhabited = lauchli(seq.conclusion, Context{}, m)->sizes[0] > 0;
      if (!inhabited || f.map.size() != 1) out.fail(text + " in a magma");
    }
    for (const auto& g : groupoids) {
      ++out.instances;
      const ProofFile pg = parse_proof(text, g.sig);
      GroupoidModel model(g);
      Interpreter<GroupoidModel> interp(model, g.sig);
      const auto f = interp.deduction(pg.proof);
      if (!check_fammor(f) || !groupoid_inhabited(typecheck(pg.proof, g.sig).conclusion, g)) {
        out.fail(text + " in a groupoid structure");
      }
    }
  }
  return out;
}

}  // namespace hfol::props
