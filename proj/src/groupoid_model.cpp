#include "hfol/groupoid_model.hpp"

#include "hfol/error.hpp"

namespace hfol {

using namespace gpd;

const FinGroupoid& GroupoidStructure::carrier(const Sort& s) const {
  auto it = carriers.find(s);
  if (it == carriers.end()) throw_usage("no carrier for sort " + s);
  return it->second;
}

FinGroupoid context_groupoid(const GroupoidStructure& m, const CtxObject& ctx) {
  std::vector<const FinGroupoid*> factors;
  for (const auto& s : ctx) factors.push_back(&m.carrier(s));
  return FinGroupoid::product(factors);
}

void GroupoidStructure::validate() const {
  for (const auto& s : sig.sorts()) {
    if (!carriers.count(s)) throw_usage("no carrier for sort " + s);
  }
  for (const auto& [s, g] : carriers) {
    if (!sig.has_sort(s)) throw_usage("carrier for undeclared sort " + s);
  }
  for (const auto& [s, names] : object_names) {
    if (names.size() != carrier(s).num_objects()) {
      throw_usage("carrier " + s + " has " +
                  std::to_string(carrier(s).num_objects()) +
                  " objects but " + std::to_string(names.size()) + " names");
    }
  }
  for (const auto& f : sig.functions()) {
    auto it = functions.find(f.name);
    if (it == functions.end()) throw_usage("no functor for symbol " + f.name);
    const FinGroupoid src = context_groupoid(*this, f.arity);
    const FinGroupoid& dst = carrier(f.codomain);
    if (auto why = functor_defect(src, dst, it->second)) {
      throw_usage("functor for " + f.name + ": " + *why);
    }
  }
  for (const auto& [name, F] : functions) {
    if (!sig.find_function(name)) throw_usage("functor for unknown symbol " + name);
  }
}

namespace {

// Functors between context products.
struct FunctorTarget {
  struct Morphism {
    BasePtr dom, cod;
    CtxObject cod_ctx;
    Functor f;
  };

  GroupoidModel& model;
  const GroupoidStructure& m;

  Morphism projection(const CtxObject& obj, std::size_t i) {
    const BasePtr& dom = model.base(obj);
    const BasePtr& cod = model.carrier(obj.at(i - 1));
    std::vector<BasePtr> prefix;
    for (std::size_t k = 0; k <= obj.size(); ++k) {
      prefix.push_back(model.base(CtxObject(obj.begin(), obj.begin() + k)));
    }
    auto part = [&](Mor x) {
      for (std::size_t j = obj.size(); j >= i; --j) {
        auto [rest, last] =
            FinGroupoid::split_mor(*prefix[j - 1], m.carrier(obj[j - 1]), x);
        if (j == i) return last;
        x = rest;
      }
      return x;
    };
    std::vector<Obj> objs(dom->num_objects());
    for (Obj a = 0; a < objs.size(); ++a) objs[a] = part(dom->id(a)).src;
    return {dom, cod, {obj[i - 1]}, make_functor(*dom, *cod, objs, part)};
  }

  Morphism tuple(const CtxObject& obj, const std::vector<Morphism>& ms) {
    const BasePtr& dom = model.base(obj);
    CtxObject cod_ctx;
    for (const auto& f : ms) {
      cod_ctx.insert(cod_ctx.end(), f.cod_ctx.begin(), f.cod_ctx.end());
    }
    const BasePtr& cod = model.base(cod_ctx);
    // Every part lands in a single carrier, so the fold follows cod_ctx.
    auto image = [&](const Mor& x) {
      Mor acc{0, 0, 0};
      CtxObject prefix;
      for (const auto& f : ms) {
        const Mor y = f.f.apply(*f.dom, *f.cod, x);
        acc = FinGroupoid::pair_mor(*model.base(prefix), *f.cod, acc, y);
        prefix.insert(prefix.end(), f.cod_ctx.begin(), f.cod_ctx.end());
      }
      return acc;
    };
    std::vector<Obj> objs(dom->num_objects());
    for (Obj a = 0; a < objs.size(); ++a) objs[a] = image(dom->id(a)).src;
    return {dom, cod, cod_ctx, make_functor(*dom, *cod, objs, image)};
  }

  Morphism compose(const Morphism& g, const Morphism& f) {
    return {f.dom, g.cod, g.cod_ctx,
            gpd::compose(*f.dom, *f.cod, *g.cod, g.f, f.f)};
  }

  Morphism symbol(const std::string& name) {
    const FunctionSymbol& f = m.sig.function(name);
    return {model.base(f.arity), model.carrier(f.codomain), {f.codomain},
            m.functions.at(name)};
  }
};

static_assert(FiniteProductTarget<FunctorTarget>);

}  // namespace

GroupoidModel::GroupoidModel(const GroupoidStructure& m, FamilyOptions opts)
    : m_(m), opts_(opts) {}

const BasePtr& GroupoidModel::base(const CtxObject& ctx) {
  auto it = bases_.find(ctx);
  if (it != bases_.end()) return it->second;
  BasePtr b = std::make_shared<const FinGroupoid>(context_groupoid(m_, ctx));
  if (b->num_objects() > opts_.max_fiber) {
    throw SizeGuardError("context " + to_string(ctx) + " has more than " +
                         std::to_string(opts_.max_fiber) + " objects");
  }
  return bases_.emplace(ctx, std::move(b)).first->second;
}

const BasePtr& GroupoidModel::carrier(const Sort& s) { return base({s}); }

const Functor& GroupoidModel::functor(const TermMorphism& t) {
  const std::string key = to_string(t);
  auto it = functors_.find(key);
  if (it != functors_.end()) return it->second;
  FunctorTarget target{*this, m_};
  auto r = interpret_morphism(t, target);
  return functors_.emplace(key, std::move(r.f)).first->second;
}

GroupoidModel::Pred GroupoidModel::top(const CtxObject& ctx) {
  return fam_top(base(ctx));
}
GroupoidModel::Pred GroupoidModel::bot(const CtxObject& ctx) {
  return fam_bot(base(ctx));
}
GroupoidModel::Pred GroupoidModel::conj(const Pred& p, const Pred& q) {
  return fam_and(p, q, opts_);
}
GroupoidModel::Pred GroupoidModel::disj(const Pred& p, const Pred& q) {
  return fam_or(p, q);
}
GroupoidModel::Pred GroupoidModel::implies(const Pred& p, const Pred& q) {
  return fam_implies(p, q, opts_);
}
GroupoidModel::Pred GroupoidModel::reindex(const TermMorphism& t,
                                           const Pred& p) {
  return fam_reindex(base(t.domain()), functor(t), p);
}
GroupoidModel::Pred GroupoidModel::exists_last(const CtxObject& ctx,
                                               const Pred& p) {
  return fam_exists(base(CtxObject(ctx.begin(), ctx.end() - 1)),
                    carrier(ctx.back()), p, opts_);
}
GroupoidModel::Pred GroupoidModel::forall_last(const CtxObject& ctx,
                                               const Pred& p) {
  return fam_forall(base(CtxObject(ctx.begin(), ctx.end() - 1)),
                    carrier(ctx.back()), p, opts_);
}
GroupoidModel::Pred GroupoidModel::eq(const Sort& b) {
  return fam_paths(base({b, b}), carrier(b));
}
bool GroupoidModel::inhabited(const Pred& p, std::size_t point) const {
  if (point >= p->base().num_objects()) throw_usage("point out of range");
  return !p->fiber(static_cast<Obj>(point)).empty();
}

GroupoidModel::Proof GroupoidModel::identity(const Pred& p) {
  return fm_identity(p);
}
GroupoidModel::Proof GroupoidModel::compose(const Proof& g, const Proof& f) {
  return fm_compose(g, f);
}
GroupoidModel::Proof GroupoidModel::reindex_proof(const TermMorphism& t,
                                                  const Proof& f,
                                                  const Pred& tp,
                                                  const Pred& tq) {
  return fm_reindex(tp, tq, functor(t), f);
}
GroupoidModel::Proof GroupoidModel::bang(const Pred& p, const Pred& top) {
  return fm_bang(p, top);
}
GroupoidModel::Proof GroupoidModel::absurd(const Pred& bot, const Pred& p) {
  return fm_absurd(bot, p);
}
GroupoidModel::Proof GroupoidModel::proj1(const Pred&, const Pred&,
                                          const Pred& pq) {
  return fm_proj1(pq);
}
GroupoidModel::Proof GroupoidModel::proj2(const Pred&, const Pred&,
                                          const Pred& pq) {
  return fm_proj2(pq);
}
GroupoidModel::Proof GroupoidModel::pair(const Proof& f, const Proof& g,
                                         const Pred& qr) {
  return fm_pair(f, g, qr);
}
GroupoidModel::Proof GroupoidModel::inj1(const Pred& p, const Pred&,
                                         const Pred& pq) {
  return fm_inj1(p, pq);
}
GroupoidModel::Proof GroupoidModel::inj2(const Pred&, const Pred& q,
                                         const Pred& pq) {
  return fm_inj2(q, pq);
}
GroupoidModel::Proof GroupoidModel::case_of(const Proof& f, const Proof& g,
                                            const Pred& pq) {
  return fm_case(f, g, pq);
}
GroupoidModel::Proof GroupoidModel::eval(const Pred&, const Pred&,
                                         const Pred& exp_and_p) {
  return fm_eval(exp_and_p);
}
GroupoidModel::Proof GroupoidModel::curry(const Proof& f, const Pred&,
                                          const Pred&, const Pred& exp) {
  return fm_curry(f, exp);
}
GroupoidModel::Proof GroupoidModel::forall_counit(const CtxObject&,
                                                  const Pred& p,
                                                  const Pred& all,
                                                  const Pred& pi_all) {
  return fm_forall_counit(all, pi_all, p);
}
GroupoidModel::Proof GroupoidModel::lambda(const CtxObject&, const Proof& f,
                                           const Pred& s, const Pred& all) {
  return fm_lambda(f, s, all);
}
GroupoidModel::Proof GroupoidModel::exists_unit(const CtxObject&,
                                                const Pred& p, const Pred& ex,
                                                const Pred& pi_ex) {
  return fm_exists_unit(p, ex, pi_ex);
}
GroupoidModel::Proof GroupoidModel::mu(const CtxObject&, const Proof& f,
                                       const Pred& ex, const Pred& s) {
  return fm_mu(f, ex, s);
}
GroupoidModel::Proof GroupoidModel::refl(const Sort&, const Pred& top,
                                         const Pred& diag_eq) {
  return fm_refl(top, diag_eq);
}
GroupoidModel::Proof GroupoidModel::xi(const Sort&, const Proof& f,
                                       const Pred& eq, const Pred& t) {
  return fm_xi(f, eq, t);
}

FamilyPtr groupoid_interpret(const Formula& phi, const Context& ctx,
                             const GroupoidStructure& m, FamilyOptions opts) {
  GroupoidModel model(m, opts);
  Interpreter<GroupoidModel> interp(model, m.sig);
  return interp.formula_in(phi, ctx);
}

bool groupoid_inhabited(const Formula& phi, const GroupoidStructure& m,
                        FamilyOptions opts) {
  return !groupoid_interpret(phi, {}, m, opts)->fiber(0).empty();
}

}  // namespace hfol
