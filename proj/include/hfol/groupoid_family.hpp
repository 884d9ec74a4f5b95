#pragma once

// Families of finite groupoids over a finite groupoid base (strict functors
// base → Gpd) and the vertical maps between them. These are the predicates
// and deductions of the groupoid backend.
//
// A vertical map f : P → Q is pseudo-natural: functors f_a : P(a) → Q(a) and,
// for every base morphism m : a → b and p ∈ P(a), an iso
//   f_m(p) : Q(m)(f_a p) → f_b(P(m) p)
// in Q(b), natural in p, with f_id = id and
//   f_{m2 m1}(p) = f_{m2}(P(m1) p) ∘ Q(m2)(f_{m1}(p)).
// Only the values at γ_a and at root automorphisms are stored.

#include <map>
#include <memory>
#include <variant>

#include "hfol/groupoid.hpp"

namespace hfol::gpd {

class Family;
using FamilyPtr = std::shared_ptr<const Family>;
using BasePtr = std::shared_ptr<const FinGroupoid>;

// Object data of a ∀-fiber: a pseudo-section over the last base factor.
struct Section {
  std::vector<Obj> obj;                 // s(b) per object b of the factor
  std::vector<Elem> gamma;              // s(γ_b) : P(γ_b) s(r) → s(b)
  std::vector<std::vector<Elem>> aut;   // per component, per x: P(x) s(r) → s(r)

  auto operator<=>(const Section&) const = default;
};

struct ExpFiber {
  std::vector<Functor> objects;
  std::map<Functor, Obj> index;
  std::shared_ptr<const Normalized> norm;
};

struct ExistsFiber {
  std::vector<std::pair<Obj, Obj>> objects;  // (b, p)
  std::map<std::pair<Obj, Obj>, Obj> index;
  std::shared_ptr<const Normalized> norm;
};

struct ForallFiber {
  std::vector<Section> objects;
  std::map<Section, Obj> index;
  std::shared_ptr<const Normalized> norm;
};

struct ProductData {
  FamilyPtr left, right;
};
struct SumData {
  FamilyPtr left, right;
};
struct ExpData {
  FamilyPtr dom, cod;
  std::vector<ExpFiber> fibers;
};
// Over base × factor, quantifying the factor.
struct QuantData {
  FamilyPtr body;
  BasePtr factor;
  std::vector<ExistsFiber> exists;
  std::vector<ForallFiber> forall;
};

using FamilyData =
    std::variant<std::monostate, ProductData, SumData, ExpData, QuantData>;

class Family {
 public:
  using TransportFn = std::function<Functor(const Family&, const Mor&)>;

  Family(BasePtr base, std::vector<FinGroupoid> fibers, TransportFn direct,
         FamilyData data = {});

  const FinGroupoid& base() const { return *base_; }
  const BasePtr& base_ptr() const { return base_; }
  const FinGroupoid& fiber(Obj a) const { return fibers_[a]; }
  const std::vector<FinGroupoid>& fibers() const { return fibers_; }
  const FamilyData& data() const { return data_; }

  // P(m) : P(a) → P(b). Memoized; not safe for concurrent use.
  const Functor& transport(const Mor& m) const;
  Obj transport_obj(const Mor& m, Obj p) const {
    return transport(m).obj[p];
  }
  Mor transport_mor(const Mor& m, const Mor& f) const;

 private:
  BasePtr base_;
  std::vector<FinGroupoid> fibers_;
  TransportFn direct_;
  FamilyData data_;
  mutable std::map<Mor, Functor> memo_;
};

// Exhaustive check of the split laws: transport(id) = id,
// transport(g∘f) = transport(g)∘transport(f), each transport an iso.
bool check_split(const Family& p);

struct FamMor {
  FamilyPtr dom, cod;
  std::vector<Functor> at;                      // per base object
  std::vector<std::vector<Mor>> coh_gamma;      // per a, per p ∈ P(root)
  std::vector<std::vector<std::vector<Mor>>> coh_root;  // per c, x, p

  // Literal equality of the stored data.
  bool operator==(const FamMor& other) const {
    return at == other.at && coh_gamma == other.coh_gamma &&
           coh_root == other.coh_root;
  }
};

using FunctorFn = std::function<Functor(Obj a)>;
using CoherenceFn = std::function<Mor(const Mor& m, Obj p)>;

// Samples a vertical map from its value on every object and its coherence on
// arbitrary base morphisms. An empty `coh` means identity coherences.
FamMor make_fammor(FamilyPtr dom, FamilyPtr cod, const FunctorFn& at,
                   const CoherenceFn& coh);

// f_m(p) for arbitrary m, reconstructed from the stored data.
Mor coherence(const FamMor& f, const Mor& m, Obj p);
// f_a applied to a fiber morphism.
Mor apply_at(const FamMor& f, Obj a, const Mor& m);

// Exhaustive check of naturality and the cocycle law.
bool check_fammor(const FamMor& f);

// A vertical natural iso f ⇒ g compatible with the coherences.
bool homotopic(const FamMor& f, const FamMor& g);

struct FamilyOptions {
  std::size_t max_fiber = 10000;
};

// Fiberwise logical structure.
FamilyPtr fam_top(const BasePtr& base);
FamilyPtr fam_bot(const BasePtr& base);
FamilyPtr fam_and(const FamilyPtr& p, const FamilyPtr& q,
                  const FamilyOptions& opts);
FamilyPtr fam_or(const FamilyPtr& p, const FamilyPtr& q);
FamilyPtr fam_implies(const FamilyPtr& p, const FamilyPtr& q,
                      const FamilyOptions& opts);
// `u` maps base objects and morphisms of `base` into p's base.
FamilyPtr fam_reindex(const BasePtr& base, const Functor& u,
                      const FamilyPtr& p);
// p lives over base × factor (product indexing, factor last).
FamilyPtr fam_exists(const BasePtr& base, const BasePtr& factor,
                     const FamilyPtr& p, const FamilyOptions& opts);
FamilyPtr fam_forall(const BasePtr& base, const BasePtr& factor,
                     const FamilyPtr& p, const FamilyOptions& opts);
// The path family over b × b: fiber (x, y) is the discrete groupoid on
// Hom(x, y); transport along (k, k') sends p to k' p k⁻¹.
FamilyPtr fam_paths(const BasePtr& bb, const BasePtr& b);

// Vertical maps mirroring the deduction constructors.
FamMor fm_identity(const FamilyPtr& p);
FamMor fm_compose(const FamMor& g, const FamMor& f);
FamMor fm_reindex(const FamilyPtr& dom, const FamilyPtr& cod, const Functor& u,
                  const FamMor& f);
FamMor fm_bang(const FamilyPtr& p, const FamilyPtr& top);
FamMor fm_absurd(const FamilyPtr& bot, const FamilyPtr& p);
FamMor fm_proj1(const FamilyPtr& pq);
FamMor fm_proj2(const FamilyPtr& pq);
FamMor fm_pair(const FamMor& f, const FamMor& g, const FamilyPtr& qr);
FamMor fm_inj1(const FamilyPtr& p, const FamilyPtr& pq);
FamMor fm_inj2(const FamilyPtr& q, const FamilyPtr& pq);
FamMor fm_case(const FamMor& f, const FamMor& g, const FamilyPtr& pq);
// (P ⇒ Q) ∧ P → Q
FamMor fm_eval(const FamilyPtr& exp_and_p);
// f : R ∧ P → Q gives R → (P ⇒ Q)
FamMor fm_curry(const FamMor& f, const FamilyPtr& exp);
// π*∀P → P over base × factor, with all = ∀P and pi_forall = π*(∀P).
FamMor fm_forall_counit(const FamilyPtr& all, const FamilyPtr& pi_forall,
                        const FamilyPtr& p);
// f : π*S → P gives S → ∀P
FamMor fm_lambda(const FamMor& f, const FamilyPtr& s, const FamilyPtr& all);
// P → π*∃P, with ex = ∃P and pi_exists = π*(∃P).
FamMor fm_exists_unit(const FamilyPtr& p, const FamilyPtr& ex,
                      const FamilyPtr& pi_exists);
// f : P → π*S gives ∃P → S
FamMor fm_mu(const FamMor& f, const FamilyPtr& ex, const FamilyPtr& s);
// ⊤ → Δ*Eq over b
FamMor fm_refl(const FamilyPtr& top, const FamilyPtr& diag_eq);
// f : ⊤ → Δ*T over b gives Eq → T over b × b
FamMor fm_xi(const FamMor& f, const FamilyPtr& eq, const FamilyPtr& t);

}  // namespace hfol::gpd
