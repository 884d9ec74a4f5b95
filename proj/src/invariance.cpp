#include "hfol/invariance.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hfol/error.hpp"

namespace hfol {

using namespace gpd;

namespace {

std::string show(const Mor& m) {
  return std::to_string(m.src) + "->" + std::to_string(m.dst) + " [" +
         std::to_string(m.elem) + "]";
}

// First failing naturality square of θ : F ⇒ G, if any.
std::optional<std::string> nat_defect(const FinGroupoid& src,
                                      const FinGroupoid& dst, const Functor& f,
                                      const Functor& g, const NatTrans& theta) {
  if (theta.size() != src.num_objects()) {
    return "expected " + std::to_string(src.num_objects()) + " components, got " +
           std::to_string(theta.size());
  }
  for (Obj a = 0; a < src.num_objects(); ++a) {
    const Mor& t = theta[a];
    if (t.src != f.obj[a] || t.dst != g.obj[a] || t.dst >= dst.num_objects() ||
        !dst.connected(t.src, t.dst) || t.elem >= dst.group_at(t.src).order()) {
      return "component at object " + std::to_string(a) + " is " + show(t) +
             ", not a morphism " + std::to_string(f.obj[a]) + "->" +
             std::to_string(g.obj[a]);
    }
  }
  for (const Mor& m : src.all_morphisms()) {
    const Mor lhs = dst.compose(theta[m.dst], f.apply(src, dst, m));
    const Mor rhs = dst.compose(g.apply(src, dst, m), theta[m.src]);
    if (lhs != rhs) {
      return "naturality square fails at morphism " + show(m) + ": " +
             show(lhs) + " vs " + show(rhs);
    }
  }
  return std::nullopt;
}

const Functor& lookup(const std::map<Sort, Functor>& fs, const Sort& s,
                      const char* what) {
  auto it = fs.find(s);
  if (it == fs.end()) throw_usage(std::string("no ") + what + " for sort " + s);
  return it->second;
}

// α on the product, by the same left fold as the context base.
Functor product_functor(const GroupoidStructure& m, const GroupoidStructure& n,
                        const std::map<Sort, Functor>& per_sort,
                        const CtxObject& ctx, FinGroupoid& src,
                        FinGroupoid& dst) {
  src = FinGroupoid::terminal();
  dst = FinGroupoid::terminal();
  Functor acc = identity_functor(src);
  for (const Sort& s : ctx) {
    const FinGroupoid& ms = m.carrier(s);
    const FinGroupoid& ns = n.carrier(s);
    const Functor& a = lookup(per_sort, s, "functor");
    FinGroupoid src2 = FinGroupoid::product(src, ms);
    FinGroupoid dst2 = FinGroupoid::product(dst, ns);
    std::vector<Obj> obj(src2.num_objects());
    for (Obj x = 0; x < src2.num_objects(); ++x) {
      const auto [p, q] = FinGroupoid::split_object(ms, x);
      obj[x] = FinGroupoid::pair_object(ns, acc.obj[p], a.obj[q]);
    }
    acc = make_functor(src2, dst2, obj, [&](const Mor& x) {
      const auto [p, q] = FinGroupoid::split_mor(src, ms, x);
      return FinGroupoid::pair_mor(dst, ns, acc.apply(src, dst, p),
                                   a.apply(ms, ns, q));
    });
    src = std::move(src2);
    dst = std::move(dst2);
  }
  return acc;
}

// Componentwise product of per-sort transformations over the context base.
NatTrans product_nat(const GroupoidStructure& m,
                     const std::map<Sort, NatTrans>& per_sort,
                     const std::map<Sort, FinGroupoid>& targets,
                     const CtxObject& ctx) {
  FinGroupoid base = FinGroupoid::terminal();
  FinGroupoid tgt = FinGroupoid::terminal();
  NatTrans acc{Mor{0, 0, 0}};
  for (const Sort& s : ctx) {
    const FinGroupoid& ms = m.carrier(s);
    const FinGroupoid& ts = targets.at(s);
    const NatTrans& t = per_sort.at(s);
    NatTrans next(base.num_objects() * ms.num_objects());
    for (Obj x = 0; x < next.size(); ++x) {
      const auto [p, q] = FinGroupoid::split_object(ms, x);
      next[x] = FinGroupoid::pair_mor(tgt, ts, acc[p], t[q]);
    }
    base = FinGroupoid::product(base, ms);
    tgt = FinGroupoid::product(tgt, ts);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

Functor context_functor(const GroupoidStructure& m, const GroupoidStructure& n,
                        const std::map<Sort, Functor>& per_sort,
                        const CtxObject& ctx) {
  FinGroupoid src, dst;
  return product_functor(m, n, per_sort, ctx, src, dst);
}

Verification verify_homotopy_homomorphism(const GroupoidStructure& m,
                                          const GroupoidStructure& n,
                                          const HomotopyHomomorphism& h) {
  if (!(m.sig == n.sig)) return {false, "signature", "structures interpret different signatures"};
  for (const Sort& s : m.sig.sorts()) {
    auto it = h.sorts.find(s);
    if (it == h.sorts.end()) return {false, "sort " + s, "no functor"};
    if (auto why = functor_defect(m.carrier(s), n.carrier(s), it->second)) {
      return {false, "sort " + s, *why};
    }
  }
  for (const auto& f : m.sig.functions()) {
    auto it = h.symbols.find(f.name);
    if (it == h.symbols.end()) return {false, "symbol " + f.name, "no 2-cell"};
    FinGroupoid src, nsrc;
    const Functor a_args = product_functor(m, n, h.sorts, f.arity, src, nsrc);
    const FinGroupoid& mb = m.carrier(f.codomain);
    const FinGroupoid& nb = n.carrier(f.codomain);
    const Functor lhs = compose(src, mb, nb, h.sorts.at(f.codomain), m.functions.at(f.name));
    const Functor rhs = compose(src, nsrc, nb, n.functions.at(f.name), a_args);
    if (auto why = nat_defect(src, nb, lhs, rhs, it->second)) {
      return {false, "symbol " + f.name, *why};
    }
  }
  return {};
}

Verification verify_homotopy_equivalence(const GroupoidStructure& m,
                                         const GroupoidStructure& n,
                                         const HomotopyEquivalence& h) {
  Verification v = verify_homotopy_homomorphism(m, n, h.forward);
  if (!v.ok) return v;
  for (const Sort& s : m.sig.sorts()) {
    const FinGroupoid& ms = m.carrier(s);
    const FinGroupoid& ns = n.carrier(s);
    auto b = h.inverse.find(s);
    if (b == h.inverse.end()) return {false, "sort " + s, "no quasi-inverse"};
    if (auto why = functor_defect(ns, ms, b->second)) {
      return {false, "sort " + s, "quasi-inverse: " + *why};
    }
    const Functor& a = h.forward.sorts.at(s);
    auto u = h.unit.find(s);
    auto c = h.counit.find(s);
    if (u == h.unit.end() || c == h.counit.end()) {
      return {false, "sort " + s, "missing unit or counit"};
    }
    if (auto why = nat_defect(ms, ms, compose(ms, ns, ms, b->second, a),
                              identity_functor(ms), u->second)) {
      return {false, "sort " + s, "unit: " + *why};
    }
    if (auto why = nat_defect(ns, ns, compose(ns, ms, ns, a, b->second),
                              identity_functor(ns), c->second)) {
      return {false, "sort " + s, "counit: " + *why};
    }
  }
  return {};
}

bool InvarianceReport::all_equivalent() const {
  return std::all_of(points.begin(), points.end(),
                     [](const PointVerdict& p) { return p.equivalent; });
}

InvarianceReport invariance_report(const Formula& phi, const Context& ctx,
                                   const GroupoidStructure& m,
                                   const GroupoidStructure& n,
                                   const HomotopyEquivalence& h,
                                   FamilyOptions opts) {
  const Verification v = verify_homotopy_equivalence(m, n, h);
  if (!v.ok) throw Error(ErrorKind::kVerification, v.where + ": " + v.detail);
  const FamilyPtr pm = groupoid_interpret(phi, ctx, m, opts);
  const FamilyPtr pn = groupoid_interpret(phi, ctx, n, opts);
  const Functor a = context_functor(m, n, h.forward.sorts, ctx.sorts());
  InvarianceReport r;
  for (Obj x = 0; x < pm->base().num_objects(); ++x) {
    PointVerdict p;
    p.point = x;
    p.image = a.obj[x];
    const FinGroupoid& fm = pm->fiber(x);
    const FinGroupoid& fn = pn->fiber(p.image);
    p.m_objects = fm.num_objects();
    p.n_objects = fn.num_objects();
    p.m_inhabited = !fm.empty();
    p.n_inhabited = !fn.empty();
    p.equivalent = groupoid_equivalent(fm, fn).has_value();
    r.points.push_back(p);
  }
  return r;
}

HomotopyEquivalence identity_equivalence(const GroupoidStructure& m) {
  HomotopyEquivalence h;
  for (const Sort& s : m.sig.sorts()) {
    const FinGroupoid& g = m.carrier(s);
    h.forward.sorts[s] = identity_functor(g);
    h.inverse[s] = identity_functor(g);
    NatTrans ids;
    for (Obj a = 0; a < g.num_objects(); ++a) ids.push_back(g.id(a));
    h.unit[s] = ids;
    h.counit[s] = ids;
  }
  for (const auto& f : m.sig.functions()) {
    const FinGroupoid src = context_groupoid(m, f.arity);
    const Functor& F = m.functions.at(f.name);
    NatTrans ids;
    for (Obj a = 0; a < src.num_objects(); ++a) ids.push_back(m.carrier(f.codomain).id(F.obj[a]));
    h.forward.symbols[f.name] = ids;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Random structures and equivalences.

namespace {

using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Every homomorphism g → h, as element tables.
std::vector<std::vector<Elem>> homomorphisms(const FinGroup& g,
                                             const FinGroup& h) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> map(g.order(), 0);
  while (true) {
    bool ok = true;
    for (Elem a = 0; a < g.order() && ok; ++a) {
      for (Elem b = 0; b < g.order() && ok; ++b) {
        ok = map[g.mul(a, b)] == h.mul(map[a], map[b]);
      }
    }
    if (ok) out.push_back(map);
    std::size_t i = 1;
    while (i < g.order() && ++map[i] == h.order()) map[i++] = 0;
    if (i >= g.order()) break;
  }
  return out;
}

std::vector<std::vector<Elem>> automorphisms(const FinGroup& g) {
  std::vector<std::vector<Elem>> out;
  for (auto& f : homomorphisms(g, g)) {
    std::set<Elem> image(f.begin(), f.end());
    if (image.size() == g.order()) out.push_back(std::move(f));
  }
  return out;
}

std::vector<Elem> invert_table(const std::vector<Elem>& f) {
  std::vector<Elem> inv(f.size());
  for (Elem a = 0; a < f.size(); ++a) inv[f[a]] = a;
  return inv;
}

// The functor with component map comp, root homomorphisms hom[c] and
// object data (obj, twist): Mor{s, d, e} ↦ Mor{F s, F d, t_d φ(e) t_s⁻¹}.
Functor build_functor(const FinGroupoid& src, const FinGroupoid& dst,
                      const std::vector<std::vector<Elem>>& hom,
                      const std::vector<Obj>& obj,
                      const std::vector<Elem>& twist) {
  return make_functor(src, dst, obj, [&](const Mor& m) {
    const FinGroup& h = dst.group_at(obj[m.src]);
    const Elem e = hom[src.component(m.src)][m.elem];
    return Mor{obj[m.src], obj[m.dst],
               h.mul(twist[m.dst], h.mul(e, h.inv(twist[m.src])))};
  });
}

Functor random_functor(const FinGroupoid& src, const FinGroupoid& dst,
                       Rng& rng) {
  if (src.empty()) return Functor{};
  if (dst.empty()) throw_usage("no functor into the empty groupoid");
  std::vector<std::uint32_t> comp(src.num_components());
  std::vector<std::vector<Elem>> hom(src.num_components());
  for (std::uint32_t c = 0; c < src.num_components(); ++c) {
    comp[c] = static_cast<std::uint32_t>(below(rng, dst.num_components()));
    const auto homs = homomorphisms(src.group(c), dst.group(comp[c]));
    hom[c] = homs[below(rng, homs.size())];
  }
  std::vector<Obj> obj(src.num_objects());
  std::vector<Elem> twist(src.num_objects());
  for (Obj a = 0; a < src.num_objects(); ++a) {
    const std::uint32_t d = comp[src.component(a)];
    std::vector<Obj> choices;
    for (Obj b = 0; b < dst.num_objects(); ++b) {
      if (dst.component(b) == d) choices.push_back(b);
    }
    obj[a] = choices[below(rng, choices.size())];
    twist[a] = static_cast<Elem>(below(rng, dst.group(d).order()));
  }
  return build_functor(src, dst, hom, obj, twist);
}

FinGroup random_group(Rng& rng, std::size_t max_order) {
  std::vector<FinGroup> menu{FinGroup(), FinGroup()};
  if (max_order >= 2) menu.push_back(FinGroup::cyclic(2));
  if (max_order >= 3) menu.push_back(FinGroup::cyclic(3));
  if (max_order >= 4) {
    menu.push_back(FinGroup::cyclic(4));
    menu.push_back(FinGroup::product(FinGroup::cyclic(2), FinGroup::cyclic(2)));
  }
  return menu[below(rng, menu.size())];
}

// Objects in random order, grouped into components of the given sizes.
FinGroupoid layout(const std::vector<std::size_t>& sizes,
                   std::vector<FinGroup> groups, Rng& rng) {
  std::vector<std::uint32_t> comp;
  for (std::uint32_t c = 0; c < sizes.size(); ++c) comp.insert(comp.end(), sizes[c], c);
  std::shuffle(comp.begin(), comp.end(), rng);
  std::vector<Obj> roots(sizes.size());
  for (std::uint32_t c = 0; c < sizes.size(); ++c) {
    std::vector<Obj> members;
    for (Obj a = 0; a < comp.size(); ++a) {
      if (comp[a] == c) members.push_back(a);
    }
    roots[c] = members[below(rng, members.size())];
  }
  return FinGroupoid(std::move(comp), std::move(roots), std::move(groups));
}

struct SortEquivalence {
  FinGroupoid target;
  Functor forward, backward;
  NatTrans unit, counit;
};

SortEquivalence random_sort_equivalence(const FinGroupoid& g,
                                        std::size_t max_objects, Rng& rng) {
  SortEquivalence e;
  const std::size_t k = g.num_components();
  if (k == 0) return e;
  // σ : components of g → components of the target.
  std::vector<std::uint32_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0u);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::vector<std::size_t> sizes(k, 1);
  std::size_t total = k;
  while (total < max_objects && below(rng, 2) == 0) {
    ++sizes[below(rng, k)];
    ++total;
  }
  std::vector<FinGroup> groups(k);
  for (std::uint32_t c = 0; c < k; ++c) groups[sigma[c]] = g.group(c);
  e.target = layout(sizes, groups, rng);
  const FinGroupoid& h = e.target;

  std::vector<std::vector<Elem>> fwd(k), bwd(h.num_components());
  for (std::uint32_t c = 0; c < k; ++c) {
    const auto autos = automorphisms(g.group(c));
    fwd[c] = autos[below(rng, autos.size())];
    bwd[sigma[c]] = invert_table(fwd[c]);
  }
  const auto pick = [&](const FinGroupoid& x, std::uint32_t comp) {
    std::vector<Obj> members;
    for (Obj a = 0; a < x.num_objects(); ++a) {
      if (x.component(a) == comp) members.push_back(a);
    }
    return members[below(rng, members.size())];
  };
  std::vector<Obj> fobj(g.num_objects()), bobj(h.num_objects());
  std::vector<Elem> ftw(g.num_objects()), btw(h.num_objects());
  for (Obj a = 0; a < g.num_objects(); ++a) {
    const std::uint32_t d = sigma[g.component(a)];
    fobj[a] = pick(h, d);
    ftw[a] = static_cast<Elem>(below(rng, h.group(d).order()));
  }
  std::vector<std::uint32_t> sigma_inv(k);
  for (std::uint32_t c = 0; c < k; ++c) sigma_inv[sigma[c]] = c;
  for (Obj b = 0; b < h.num_objects(); ++b) {
    const std::uint32_t c = sigma_inv[h.component(b)];
    bobj[b] = pick(g, c);
    btw[b] = static_cast<Elem>(below(rng, g.group(c).order()));
  }
  e.forward = build_functor(g, h, fwd, fobj, ftw);
  e.backward = build_functor(h, g, bwd, bobj, btw);
  auto u = find_natural_iso(g, g, compose(g, h, g, e.backward, e.forward),
                            identity_functor(g));
  auto c = find_natural_iso(h, h, compose(h, g, h, e.forward, e.backward),
                            identity_functor(h));
  if (!u || !c) throw_usage("internal: generated functors are not inverse");
  e.unit = std::move(*u);
  e.counit = std::move(*c);
  return e;
}

}  // namespace

GroupoidStructure random_groupoid_structure(const Signature& sig,
                                            std::uint64_t seed,
                                            std::size_t max_objects,
                                            std::size_t max_group_order) {
  if (max_objects == 0 || max_group_order > 4) {
    throw_usage("random structures need 1..n objects and groups of order <= 4");
  }
  Rng rng(seed);
  GroupoidStructure m;
  m.sig = sig;
  for (const Sort& s : sig.sorts()) {
    const std::size_t n = 1 + below(rng, max_objects);
    const std::size_t k = 1 + below(rng, n);
    std::vector<std::size_t> sizes(k, 1);
    for (std::size_t i = k; i < n; ++i) ++sizes[below(rng, k)];
    std::vector<FinGroup> groups;
    for (std::size_t c = 0; c < k; ++c) groups.push_back(random_group(rng, max_group_order));
    m.carriers[s] = layout(sizes, std::move(groups), rng);
  }
  for (const auto& f : sig.functions()) {
    m.functions[f.name] =
        random_functor(context_groupoid(m, f.arity), m.carrier(f.codomain), rng);
  }
  m.validate();
  return m;
}

GeneratedEquivalence random_equivalence(const GroupoidStructure& m,
                                        std::uint64_t seed,
                                        std::size_t max_objects) {
  Rng rng(seed);
  GeneratedEquivalence out;
  GroupoidStructure& n = out.target;
  HomotopyEquivalence& h = out.equivalence;
  n.sig = m.sig;
  std::map<Sort, FinGroupoid> m_carriers;
  for (const Sort& s : m.sig.sorts()) {
    SortEquivalence e = random_sort_equivalence(
        m.carrier(s), std::max(max_objects, m.carrier(s).num_components()), rng);
    n.carriers[s] = e.target;
    h.forward.sorts[s] = std::move(e.forward);
    h.inverse[s] = std::move(e.backward);
    h.unit[s] = std::move(e.unit);
    h.counit[s] = std::move(e.counit);
    m_carriers[s] = m.carrier(s);
  }
  // N f = α_B ∘ M f ∘ β_A⃗, and α_f at x is α_B M f (u_x⁻¹).
  for (const auto& f : m.sig.functions()) {
    FinGroupoid nsrc, msrc;
    const Functor beta = product_functor(n, m, h.inverse, f.arity, nsrc, msrc);
    const FinGroupoid& mb = m.carrier(f.codomain);
    const FinGroupoid& nb = n.carrier(f.codomain);
    const Functor& mf = m.functions.at(f.name);
    const Functor& alpha_b = h.forward.sorts.at(f.codomain);
    const Functor af = compose(msrc, mb, nb, alpha_b, mf);
    n.functions[f.name] = compose(nsrc, msrc, nb, af, beta);
    const NatTrans u = product_nat(m, h.unit, m_carriers, f.arity);
    NatTrans theta(msrc.num_objects());
    for (Obj x = 0; x < msrc.num_objects(); ++x) {
      theta[x] = af.apply(msrc, nb, msrc.inverse(u[x]));
    }
    h.forward.symbols[f.name] = std::move(theta);
  }
  n.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Closed formula pool.

namespace {

struct PoolGen {
  const Signature& sig;
  Rng rng;

  std::optional<Term> term(const Sort& s, const std::vector<Variable>& scope,
                           std::size_t depth) {
    std::vector<Term> options;
    for (const auto& v : scope) {
      if (v.sort == s) options.push_back(Term::var(v));
    }
    std::vector<const FunctionSymbol*> fs;
    for (const auto& f : sig.functions()) {
      if (f.codomain == s) fs.push_back(&f);
    }
    if (depth > 0 && !fs.empty() && (options.empty() || below(rng, 2) == 0)) {
      const FunctionSymbol* f = fs[below(rng, fs.size())];
      std::vector<Term> args;
      for (const Sort& a : f->arity) {
        auto t = term(a, scope, depth - 1);
        if (!t) return std::nullopt;
        args.push_back(*t);
      }
      return Term::app(*f, std::move(args));
    }
    if (options.empty()) return std::nullopt;
    return options[below(rng, options.size())];
  }

  Formula atom(const std::vector<Variable>& scope) {
    const Sort& s = sig.sorts()[below(rng, sig.sorts().size())];
    if (below(rng, 5) > 0) {
      auto l = term(s, scope, 1);
      auto r = term(s, scope, 1);
      if (l && r) return Formula::eq(*l, *r);
    }
    return below(rng, 2) == 0 ? Formula::top() : Formula::bot();
  }

  Formula formula(std::size_t depth, std::vector<Variable>& scope) {
    if (depth == 0) return atom(scope);
    const std::size_t pick = below(rng, scope.empty() ? 2 : 6);
    if (pick < 2 || (scope.size() < 2 && pick == 2)) {
      const Sort& s = sig.sorts()[below(rng, sig.sorts().size())];
      const Variable v{s, "x" + std::to_string(scope.size() + 1)};
      scope.push_back(v);
      Formula body = formula(depth - 1, scope);
      scope.pop_back();
      return pick == 0 ? Formula::exists(v, std::move(body))
                       : Formula::forall(v, std::move(body));
    }
    if (pick == 5) return atom(scope);
    Formula a = formula(depth - 1, scope);
    Formula b = formula(depth - 1, scope);
    switch (pick) {
      case 2:
        return Formula::conj(std::move(a), std::move(b));
      case 3:
        return Formula::disj(std::move(a), std::move(b));
      default:
        return Formula::implies(std::move(a), std::move(b));
    }
  }
};

}  // namespace

std::vector<Formula> closed_formula_pool(const Signature& sig,
                                         std::uint64_t seed, std::size_t count,
                                         std::size_t max_depth) {
  if (sig.sorts().empty()) throw_usage("signature has no sorts");
  PoolGen gen{sig, Rng(seed)};
  std::vector<Formula> out;
  std::set<std::string> seen;
  for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count;
       ++attempt) {
    std::vector<Variable> scope;
    Formula phi = gen.formula(1 + below(gen.rng, max_depth), scope);
    if (phi.connective_depth() > max_depth) continue;
    if (seen.insert(to_string(phi)).second) out.push_back(std::move(phi));
  }
  return out;
}

SetStructure relabel(const SetStructure& m,
                     const std::map<Sort, std::vector<std::size_t>>& per_sort) {
  SetStructure out = m;
  for (const auto& [s, sigma] : per_sort) {
    const auto& names = m.carriers.at(s);
    if (sigma.size() != names.size()) throw_usage("bijection for " + s + " has the wrong size");
    auto& renamed = out.carriers[s];
    for (std::size_t i = 0; i < names.size(); ++i) renamed[sigma[i]] = names[i];
  }
  for (const auto& f : m.sig.functions()) {
    const auto& table = m.tables.at(f.name);
    auto& t = out.tables[f.name];
    for (std::size_t p = 0; p < table.size(); ++p) {
      auto coords = decode_point(m, f.arity, p);
      for (std::size_t i = 0; i < coords.size(); ++i) {
        auto it = per_sort.find(f.arity[i]);
        if (it != per_sort.end()) coords[i] = it->second[coords[i]];
      }
      std::size_t v = table[p];
      auto it = per_sort.find(f.codomain);
      if (it != per_sort.end()) v = it->second[v];
      t[encode_point(out, f.arity, coords)] = v;
    }
  }
  return out;
}

}  // namespace hfol
