#pragma once

// Finite-groupoid semantics. Sorts denote finite groupoids, function symbols
// denote functors out of the product of their argument carriers, and a
// formula denotes a family of groupoids over the product of its context.
//
// The base of a context is the left-folded product starting from the
// terminal groupoid, so base(A⃗B) is literally base(A⃗) × B.

#include <map>
#include <string>
#include <vector>

#include "hfol/groupoid_family.hpp"
#include "hfol/model.hpp"

namespace hfol {

struct GroupoidStructure {
  Signature sig;
  std::map<Sort, gpd::FinGroupoid> carriers;
  // Functor from the product of the arity carriers to the codomain carrier.
  std::map<std::string, gpd::Functor> functions;
  // Optional display names per carrier object.
  std::map<Sort, std::vector<std::string>> object_names;

  const gpd::FinGroupoid& carrier(const Sort& s) const;
  // Throws Error(kUsage) naming the first problem.
  void validate() const;
};

// The product of the carriers of ctx.
gpd::FinGroupoid context_groupoid(const GroupoidStructure& m,
                                  const CtxObject& ctx);

class GroupoidModel {
 public:
  using Pred = gpd::FamilyPtr;
  using Proof = gpd::FamMor;

  GroupoidModel(GroupoidStructure&&, gpd::FamilyOptions = {}) = delete;
  explicit GroupoidModel(const GroupoidStructure& m,
                         gpd::FamilyOptions opts = {});

  const GroupoidStructure& structure() const { return m_; }
  const gpd::FamilyOptions& options() const { return opts_; }

  const gpd::BasePtr& base(const CtxObject& ctx);
  const gpd::BasePtr& carrier(const Sort& s);
  // The functor base(dom t) → base(cod t) interpreting t.
  const gpd::Functor& functor(const TermMorphism& t);

  std::size_t num_points(const CtxObject& ctx) { return base(ctx)->num_objects(); }

  Pred top(const CtxObject& ctx);
  Pred bot(const CtxObject& ctx);
  Pred conj(const Pred& p, const Pred& q);
  Pred disj(const Pred& p, const Pred& q);
  Pred implies(const Pred& p, const Pred& q);
  Pred reindex(const TermMorphism& t, const Pred& p);
  Pred exists_last(const CtxObject& ctx, const Pred& p);
  Pred forall_last(const CtxObject& ctx, const Pred& p);
  Pred eq(const Sort& b);
  bool inhabited(const Pred& p, std::size_t point) const;

  Proof identity(const Pred& p);
  Proof compose(const Proof& g, const Proof& f);
  Proof reindex_proof(const TermMorphism& t, const Proof& f, const Pred& tp,
                      const Pred& tq);
  Proof bang(const Pred& p, const Pred& top);
  Proof absurd(const Pred& bot, const Pred& p);
  Proof proj1(const Pred& p, const Pred& q, const Pred& pq);
  Proof proj2(const Pred& p, const Pred& q, const Pred& pq);
  Proof pair(const Proof& f, const Proof& g, const Pred& qr);
  Proof inj1(const Pred& p, const Pred& q, const Pred& pq);
  Proof inj2(const Pred& p, const Pred& q, const Pred& pq);
  Proof case_of(const Proof& f, const Proof& g, const Pred& pq);
  Proof eval(const Pred& p, const Pred& q, const Pred& exp_and_p);
  Proof curry(const Proof& f, const Pred& r, const Pred& p, const Pred& exp);
  Proof forall_counit(const CtxObject& ctx, const Pred& p, const Pred& all,
                      const Pred& pi_all);
  Proof lambda(const CtxObject& ctx, const Proof& f, const Pred& s,
               const Pred& all);
  Proof exists_unit(const CtxObject& ctx, const Pred& p, const Pred& ex,
                    const Pred& pi_ex);
  Proof mu(const CtxObject& ctx, const Proof& f, const Pred& ex, const Pred& s);
  Proof refl(const Sort& b, const Pred& top, const Pred& diag_eq);
  Proof xi(const Sort& b, const Proof& f, const Pred& eq, const Pred& t);

 private:
  const GroupoidStructure& m_;
  gpd::FamilyOptions opts_;
  std::map<CtxObject, gpd::BasePtr> bases_;
  std::map<std::string, gpd::Functor> functors_;
};

static_assert(Backend<GroupoidModel>);

// The family of φ over ctx.
gpd::FamilyPtr groupoid_interpret(const Formula& phi, const Context& ctx,
                                  const GroupoidStructure& m,
                                  gpd::FamilyOptions opts = {});

// Whether the closed sentence φ has an object in its (single) fiber.
bool groupoid_inhabited(const Formula& phi, const GroupoidStructure& m,
                        gpd::FamilyOptions opts = {});

}  // namespace hfol
