#pragma once

// Finite groups and finite groupoids in normalized form.
//
// Every connected component of a FinGroupoid has a root object r and an
// automorphism group G = Aut(r) given by a multiplication table. Each object a
// carries an implicit chosen morphism γ_a : r → a (γ_r = id), and the
// morphism Mor{a, b, x} denotes γ_b ∘ x ∘ γ_a⁻¹ for x ∈ G. Composition is the
// group product and identities have element 0.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hfol::gpd {

using Obj = std::uint32_t;
using Elem = std::uint32_t;

// Upper bound on the order of any group materialized as a table.
inline constexpr std::size_t kMaxTableOrder = 4096;

class FinGroup {
 public:
  FinGroup();  // trivial group

  // Row-major table with mul[a * order + b] = a·b. Element 0 must be the
  // identity; validates the group axioms.
  static FinGroup from_table(std::size_t order, std::vector<Elem> mul);
  static FinGroup cyclic(std::size_t n);
  // Closure of permutations of {0..n-1} under composition.
  static FinGroup from_permutations(
      const std::vector<std::vector<std::uint32_t>>& gens);
  static FinGroup symmetric(std::size_t n);
  // G × H with (g, h) ↦ g·|H| + h.
  static FinGroup product(const FinGroup& g, const FinGroup& h);

  std::size_t order() const { return order_; }
  Elem mul(Elem a, Elem b) const { return mul_[a * order_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  const std::vector<Elem>& table() const { return mul_; }
  // A small generating set (greedy, deterministic).
  const std::vector<Elem>& generators() const { return gens_; }
  std::size_t element_order(Elem a) const;
  bool is_abelian() const;

  bool operator==(const FinGroup& other) const { return mul_ == other.mul_; }

 private:
  void finish();

  std::size_t order_ = 1;
  std::vector<Elem> mul_{0};
  std::vector<Elem> inv_{0};
  std::vector<Elem> gens_;
};

// A bijection G → H that is a homomorphism, or nullopt. Backtracks over
// generator images; more than `max_steps` trials raise SizeGuardError.
std::optional<std::vector<Elem>> group_isomorphism(const FinGroup& g,
                                                   const FinGroup& h,
                                                   std::size_t max_steps = 1 << 20);

struct Mor {
  Obj src = 0;
  Obj dst = 0;
  Elem elem = 0;

  auto operator<=>(const Mor&) const = default;
};

class FinGroupoid {
 public:
  FinGroupoid() = default;  // empty groupoid
  // component_of[a] indexes `roots` and `groups`; roots[c] must lie in
  // component c.
  FinGroupoid(std::vector<std::uint32_t> component_of, std::vector<Obj> roots,
              std::vector<FinGroup> groups);

  static FinGroupoid terminal();
  static FinGroupoid discrete(std::size_t n);
  static FinGroupoid indiscrete(std::size_t n);  // n ≥ 1, one component
  static FinGroupoid delooping(FinGroup g);      // one object
  // Lexicographic objects, last factor least significant.
  static FinGroupoid product(const FinGroupoid& a, const FinGroupoid& b);
  static FinGroupoid product(const std::vector<const FinGroupoid*>& factors);
  // Objects of a followed by objects of b.
  static FinGroupoid coproduct(const FinGroupoid& a, const FinGroupoid& b);

  std::size_t num_objects() const { return component_of_.size(); }
  std::size_t num_components() const { return roots_.size(); }
  bool empty() const { return component_of_.empty(); }
  std::uint32_t component(Obj a) const { return component_of_[a]; }
  Obj root(std::uint32_t c) const { return roots_[c]; }
  const FinGroup& group(std::uint32_t c) const { return groups_[c]; }
  const FinGroup& group_at(Obj a) const { return groups_[component_of_[a]]; }
  bool connected(Obj a, Obj b) const {
    return component_of_[a] == component_of_[b];
  }
  const std::vector<std::uint32_t>& component_map() const {
    return component_of_;
  }

  Mor id(Obj a) const { return Mor{a, a, 0}; }
  Mor gamma(Obj a) const { return Mor{roots_[component_of_[a]], a, 0}; }
  Mor compose(const Mor& g, const Mor& f) const;  // g ∘ f
  Mor inverse(const Mor& f) const;
  std::size_t hom_size(Obj a, Obj b) const;
  std::vector<Mor> hom(Obj a, Obj b) const;
  std::size_t num_morphisms() const;
  std::vector<Mor> all_morphisms() const;
  // γ_a for non-root a, then group generators at each root.
  std::vector<Mor> generators() const;

  // Components of a product object / morphism; inverse of product().
  static std::pair<Obj, Obj> split_object(const FinGroupoid& b, Obj ab);
  static Obj pair_object(const FinGroupoid& b, Obj a, Obj bo);
  static Mor pair_mor(const FinGroupoid& a, const FinGroupoid& b, const Mor& f,
                      const Mor& g);
  static std::pair<Mor, Mor> split_mor(const FinGroupoid& a,
                                       const FinGroupoid& b, const Mor& m);

  bool operator==(const FinGroupoid& other) const = default;

 private:
  std::vector<std::uint32_t> component_of_;
  std::vector<Obj> roots_;
  std::vector<FinGroup> groups_;
};

std::string describe(const FinGroupoid& g);

// A functor between normalized groupoids, stored by its action on the
// generators: objects, the chosen γ_a, and root automorphisms.
struct Functor {
  std::vector<Obj> obj;              // per source object
  std::vector<Elem> gamma;           // F(γ_a) = Mor{F r, F a, gamma[a]}
  std::vector<std::vector<Elem>> phi;  // per source component: F(x) at F r

  Mor apply(const FinGroupoid& src, const FinGroupoid& dst,
            const Mor& m) const;

  bool operator==(const Functor&) const = default;
  auto operator<=>(const Functor&) const = default;
};

using MorFn = std::function<Mor(const Mor&)>;

// Samples a (functorial) morphism action on the generators.
Functor make_functor(const FinGroupoid& src, const FinGroupoid& dst,
                     const std::vector<Obj>& obj_map, const MorFn& mor);
Functor identity_functor(const FinGroupoid& g);
// h ∘ f for f : a → b, h : b → c
Functor compose(const FinGroupoid& a, const FinGroupoid& b,
                const FinGroupoid& c, const Functor& h, const Functor& f);
// Inverse of an isomorphism of groupoids f : a → b.
Functor inverse_iso(const FinGroupoid& a, const FinGroupoid& b,
                    const Functor& f);
// Checks the functor laws exhaustively against a morphism action.
bool is_functor(const FinGroupoid& src, const FinGroupoid& dst,
                const std::vector<Obj>& obj_map, const MorFn& mor);

// A description of the first problem with F as stored data for a functor
// src → dst, or nothing if F is a functor.
std::optional<std::string> functor_defect(const FinGroupoid& src,
                                          const FinGroupoid& dst,
                                          const Functor& f);

// Components θ_a : F a → G a per source object.
using NatTrans = std::vector<Mor>;

bool is_natural(const FinGroupoid& src, const FinGroupoid& dst,
                const Functor& f, const Functor& g, const NatTrans& theta);
std::optional<NatTrans> find_natural_iso(const FinGroupoid& src,
                                         const FinGroupoid& dst,
                                         const Functor& f, const Functor& g);
// Per source component, the valid components θ_r at the root.
std::vector<std::vector<Mor>> natural_root_choices(const FinGroupoid& src,
                                                   const FinGroupoid& dst,
                                                   const Functor& f,
                                                   const Functor& g);
// The unique natural transformation with the given root components.
NatTrans extend_natural(const FinGroupoid& src, const FinGroupoid& dst,
                        const Functor& f, const Functor& g,
                        const std::vector<Mor>& at_root);
// All natural isomorphisms F ⇒ G.
std::vector<NatTrans> natural_isos(const FinGroupoid& src,
                                   const FinGroupoid& dst, const Functor& f,
                                   const Functor& g);

struct Equivalence {
  Functor forward;   // G → H
  Functor backward;  // H → G
};

// Matches components by automorphism groups up to isomorphism.
std::optional<Equivalence> groupoid_equivalent(const FinGroupoid& g,
                                               const FinGroupoid& h,
                                               std::size_t max_steps = 1 << 20);

// ---------------------------------------------------------------------------
// Normalization of groupoids presented by canonical morphism keys.

using Key = std::vector<std::uint32_t>;

struct RawGroupoid {
  std::size_t num_objects = 0;
  std::function<Key(Obj)> identity;
  // Some morphism a → b, if any.
  std::function<std::optional<Key>(Obj, Obj)> find;
  // Every automorphism of a, each once.
  std::function<std::vector<Key>(Obj)> automorphisms;
  // g ∘ f for f : a → b and g : b → c.
  std::function<Key(Obj a, Obj b, Obj c, const Key& g, const Key& f)> compose;
  std::function<Key(Obj a, Obj b, const Key& f)> inverse;
};

class Normalized {
 public:
  explicit Normalized(RawGroupoid raw);

  const FinGroupoid& groupoid() const { return groupoid_; }
  Mor to_normal(Obj a, Obj b, const Key& m) const;
  Key to_raw(const Mor& m) const;

 private:
  RawGroupoid raw_;
  FinGroupoid groupoid_;
  std::vector<Key> gamma_;
  std::vector<Key> gamma_inv_;
  std::vector<std::vector<Key>> root_aut_;
  std::vector<std::map<Key, Elem>> index_;
};

}  // namespace hfol::gpd
