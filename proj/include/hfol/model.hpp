#pragma once

// The contract a backend supplies and the generic interpreter of formulas
// and deductions shared by every backend.
//
// A backend fixes a structure for a signature. Predicates live over context
// objects; quantifiers act on the last context entry. The morphism layer
// receives the denotations of every formula the typing rule mentions, so a
// backend never has to re-derive the shape of a predicate.

#include <concepts>
#include <map>
#include <string>
#include <utility>

#include "hfol/error.hpp"
#include "hfol/proof.hpp"
#include "hfol/term_category.hpp"

namespace hfol {

template <class B>
concept Backend = requires(B& b, const CtxObject& ctx, const Sort& sort,
                           const TermMorphism& t, const typename B::Pred& p,
                           const typename B::Proof& f, std::size_t point) {
  // Predicates.
  { b.top(ctx) } -> std::same_as<typename B::Pred>;
  { b.bot(ctx) } -> std::same_as<typename B::Pred>;
  { b.conj(p, p) } -> std::same_as<typename B::Pred>;
  { b.disj(p, p) } -> std::same_as<typename B::Pred>;
  { b.implies(p, p) } -> std::same_as<typename B::Pred>;
  { b.reindex(t, p) } -> std::same_as<typename B::Pred>;
  { b.exists_last(ctx, p) } -> std::same_as<typename B::Pred>;
  { b.forall_last(ctx, p) } -> std::same_as<typename B::Pred>;
  { b.eq(sort) } -> std::same_as<typename B::Pred>;
  { b.num_points(ctx) } -> std::convertible_to<std::size_t>;
  { b.inhabited(p, point) } -> std::convertible_to<bool>;
  // Morphism layer.
  { b.identity(p) } -> std::same_as<typename B::Proof>;
  { b.compose(f, f) } -> std::same_as<typename B::Proof>;
  { b.reindex_proof(t, f, p, p) } -> std::same_as<typename B::Proof>;
  { b.bang(p, p) } -> std::same_as<typename B::Proof>;
  { b.absurd(p, p) } -> std::same_as<typename B::Proof>;
  { b.proj1(p, p, p) } -> std::same_as<typename B::Proof>;
  { b.proj2(p, p, p) } -> std::same_as<typename B::Proof>;
  { b.pair(f, f, p) } -> std::same_as<typename B::Proof>;
  { b.inj1(p, p, p) } -> std::same_as<typename B::Proof>;
  { b.inj2(p, p, p) } -> std::same_as<typename B::Proof>;
  { b.case_of(f, f, p) } -> std::same_as<typename B::Proof>;
  { b.eval(p, p, p) } -> std::same_as<typename B::Proof>;
  { b.curry(f, p, p, p) } -> std::same_as<typename B::Proof>;
  { b.forall_counit(ctx, p, p, p) } -> std::same_as<typename B::Proof>;
  { b.lambda(ctx, f, p, p) } -> std::same_as<typename B::Proof>;
  { b.exists_unit(ctx, p, p, p) } -> std::same_as<typename B::Proof>;
  { b.mu(ctx, f, p, p) } -> std::same_as<typename B::Proof>;
  { b.refl(sort, p, p) } -> std::same_as<typename B::Proof>;
  { b.xi(sort, f, p, p) } -> std::same_as<typename B::Proof>;
};

// Interprets canonical formulas and typechecked deductions in a backend.
// Denotations are cached per session, keyed by context and canonical text, so
// a formula reached along different routes has one denotation.
template <Backend B>
class Interpreter {
 public:
  using Pred = typename B::Pred;
  using Proof = typename B::Proof;

  Interpreter(B& backend, const Signature& sig)
      : backend_(backend), sig_(sig) {}

  B& backend() { return backend_; }
  const Signature& signature() const { return sig_; }

  // φ must be canonical over ctx.
  Pred formula(const Formula& phi, const CtxObject& ctx) {
    auto key = std::make_pair(ctx, to_string(phi));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Pred p = compute(phi, ctx);
    cache_.emplace(std::move(key), p);
    return p;
  }

  // Canonicalizes φ over an arbitrary context first.
  Pred formula_in(const Formula& phi, const Context& ctx) {
    const CtxObject obj = ctx.sorts();
    return formula(canonicalize(phi, ctx), obj);
  }

  bool inhabited(const Formula& phi, const CtxObject& ctx, std::size_t point) {
    return backend_.inhabited(formula(phi, ctx), point);
  }

  Proof deduction(const Deduction& d) {
    using K = Deduction::Kind;
    const Sequent s = typecheck(d, sig_);
    const CtxObject& ctx = s.context;
    auto f = [&](const Formula& phi) { return formula(phi, ctx); };
    switch (d.kind()) {
      case K::kId:
        return backend_.identity(f(s.premise));
      case K::kComp:
        return backend_.compose(deduction(d.children()[0]),
                                deduction(d.children()[1]));
      case K::kReindex:
        return backend_.reindex_proof(d.morphism(), deduction(d.children()[0]),
                                      f(s.premise), f(s.conclusion));
      case K::kBang:
        return backend_.bang(f(s.premise), f(s.conclusion));
      case K::kAbsurd:
        return backend_.absurd(f(s.premise), f(s.conclusion));
      case K::kProj1:
      case K::kProj2: {
        const Pred pq = f(s.premise);
        const Pred p = f(s.premise.left());
        const Pred q = f(s.premise.right());
        return d.kind() == K::kProj1 ? backend_.proj1(p, q, pq)
                                     : backend_.proj2(p, q, pq);
      }
      case K::kPair:
        return backend_.pair(deduction(d.children()[0]),
                             deduction(d.children()[1]), f(s.conclusion));
      case K::kInj1:
      case K::kInj2: {
        const Pred pq = f(s.conclusion);
        const Pred p = f(s.conclusion.left());
        const Pred q = f(s.conclusion.right());
        return d.kind() == K::kInj1 ? backend_.inj1(p, q, pq)
                                    : backend_.inj2(p, q, pq);
      }
      case K::kCase:
        return backend_.case_of(deduction(d.children()[0]),
                                deduction(d.children()[1]), f(s.premise));
      case K::kEval:
        return backend_.eval(f(s.premise.right()), f(s.conclusion),
                             f(s.premise));
      case K::kCurry:
        return backend_.curry(deduction(d.children()[0]), f(s.premise),
                              f(s.conclusion.left()), f(s.conclusion));
      case K::kForallCounit: {
        const Formula all = forall_last(ctx, s.conclusion);
        return backend_.forall_counit(ctx, f(s.conclusion),
                                      formula(all, drop(ctx)), f(s.premise));
      }
      case K::kLambda: {
        const Sequent inner = typecheck(d.children()[0], sig_);
        return backend_.lambda(inner.context, deduction(d.children()[0]),
                               f(s.premise), f(s.conclusion));
      }
      case K::kExistsUnit: {
        const Formula ex = exists_last(ctx, s.premise);
        return backend_.exists_unit(ctx, f(s.premise), formula(ex, drop(ctx)),
                                    f(s.conclusion));
      }
      case K::kMu: {
        const Sequent inner = typecheck(d.children()[0], sig_);
        return backend_.mu(inner.context, deduction(d.children()[0]),
                           f(s.premise), f(s.conclusion));
      }
      case K::kRefl:
        return backend_.refl(d.sort(), f(s.premise), f(s.conclusion));
      case K::kXi:
        return backend_.xi(ctx[0], deduction(d.children()[0]), f(s.premise),
                           f(s.conclusion));
    }
    throw_usage("unknown deduction constructor");
  }

  void clear() { cache_.clear(); }

 private:
  static CtxObject drop(const CtxObject& ctx) {
    return CtxObject(ctx.begin(), ctx.end() - 1);
  }

  Pred compute(const Formula& phi, const CtxObject& ctx) {
    using K = Formula::Kind;
    switch (phi.kind()) {
      case K::kTop:
        return backend_.top(ctx);
      case K::kBot:
        return backend_.bot(ctx);
      case K::kAnd:
        return backend_.conj(formula(phi.left(), ctx),
                             formula(phi.right(), ctx));
      case K::kOr:
        return backend_.disj(formula(phi.left(), ctx),
                             formula(phi.right(), ctx));
      case K::kImplies:
        return backend_.implies(formula(phi.left(), ctx),
                                formula(phi.right(), ctx));
      case K::kEq: {
        const TermMorphism st(ctx, {phi.eq_sort(), phi.eq_sort()},
                              {phi.lhs(), phi.rhs()});
        return backend_.reindex(st, backend_.eq(phi.eq_sort()));
      }
      case K::kForall:
      case K::kExists: {
        // The bound variable becomes the last context entry.
        CtxObject inner = ctx;
        inner.push_back(phi.bound().sort);
        const Pred body = formula(quantifier_body(ctx, phi), inner);
        return phi.kind() == K::kForall ? backend_.forall_last(inner, body)
                                        : backend_.exists_last(inner, body);
      }
    }
    throw_usage("unknown formula kind");
  }

  B& backend_;
  const Signature& sig_;
  std::map<std::pair<CtxObject, std::string>, Pred> cache_;
};

}  // namespace hfol
