#pragma once

// Finite-set semantics: classical truth and the proof-relevant reading in
// which a formula denotes a family of finite sets of proof tokens.
//
// Points of a context (A1, ..., An) are tuples numbered in mixed radix, first
// coordinate most significant. A fiber of size k has tokens 0..k-1:
//   P ∧ Q    p·|Q| + q
//   P ∨ Q    p, or |P| + q
//   P ⇒ Q    function table over P in base |Q|, first argument most significant
//   ∀ / ∃    tuple over the last coordinate (mixed radix) / offset(b) + p
//   s = t    the single token 0 when the values agree

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hfol/model.hpp"
#include "hfol/syntax.hpp"
#include "hfol/term_category.hpp"

namespace hfol {

struct SetStructure {
  Signature sig;
  std::map<Sort, std::vector<std::string>> carriers;
  // Per symbol, the value at each argument tuple in mixed radix.
  std::map<std::string, std::vector<std::size_t>> tables;

  std::size_t size(const Sort& s) const;
  // Throws Error(kUsage) naming the first problem.
  void validate() const;
};

struct SetOptions {
  std::size_t max_fiber = 10000;
  std::size_t max_points = 1000000;
};

// Point numbering helpers.
std::size_t num_points(const SetStructure& m, const CtxObject& ctx);
std::vector<std::size_t> decode_point(const SetStructure& m,
                                      const CtxObject& ctx, std::size_t point);
std::size_t encode_point(const SetStructure& m, const CtxObject& ctx,
                         const std::vector<std::size_t>& coords);

class SetModel {
 public:
  struct PredData {
    CtxObject ctx;
    std::vector<std::size_t> sizes;  // fiber size per point
  };
  using Pred = std::shared_ptr<const PredData>;

  struct Proof {
    Pred dom, cod;
    std::vector<std::vector<std::uint32_t>> map;  // per point, per token

    bool operator==(const Proof& o) const { return map == o.map; }
  };

  SetModel(SetStructure&&, SetOptions = {}) = delete;
  explicit SetModel(const SetStructure& m, SetOptions opts = {});

  const SetStructure& structure() const { return m_; }
  const SetOptions& options() const { return opts_; }

  std::size_t num_points(const CtxObject& ctx) const;
  // The point map of a term morphism, domain points to codomain points.
  const std::vector<std::size_t>& point_map(const TermMorphism& t);

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
  Pred make(CtxObject ctx, std::vector<std::size_t> sizes);
  std::size_t guard(std::uint64_t size, const char* what) const;

  const SetStructure& m_;
  SetOptions opts_;
  std::map<std::string, std::vector<std::size_t>> point_maps_;
};

static_assert(Backend<SetModel>);

// Classical satisfaction; env assigns a carrier element to each variable of
// ctx, in order.
bool tarski_truth(const Formula& phi, const Context& ctx, const SetStructure& m,
                  const std::vector<std::size_t>& env);

// The proof-set family of φ over ctx.
SetModel::Pred lauchli(const Formula& phi, const Context& ctx,
                       const SetStructure& m, SetOptions opts = {});

// Fiberwise cardinalities agree along a bijection of base points
// (bijection[a] is the point of q's base matched with a).
bool iso_check(const SetModel::Pred& p, const SetModel::Pred& q,
               const std::vector<std::size_t>& bijection);

// The base bijection induced by per-sort carrier bijections from m to n.
std::vector<std::size_t> point_bijection(
    const SetStructure& m, const SetStructure& n, const CtxObject& ctx,
    const std::map<Sort, std::vector<std::size_t>>& per_sort);

}  // namespace hfol
