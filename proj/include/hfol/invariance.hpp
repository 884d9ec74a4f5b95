#pragma once

// Homotopy homomorphisms between groupoid structures and the fiberwise
// invariance check.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hfol/groupoid_model.hpp"
#include "hfol/set_model.hpp"

namespace hfol {

// α_A : M(A) → N(A) per sort, and per symbol f : A⃗ → B a natural iso
// α_f : α_B ∘ Mf ⇒ Nf ∘ α_A⃗, one component per object of M(A⃗).
struct HomotopyHomomorphism {
  std::map<Sort, gpd::Functor> sorts;
  std::map<std::string, gpd::NatTrans> symbols;
};

// A homomorphism whose sort functors are equivalences, with quasi-inverses
// β_A and 2-cells unit : β_A α_A ⇒ 1 and counit : α_A β_A ⇒ 1.
struct HomotopyEquivalence {
  HomotopyHomomorphism forward;
  std::map<Sort, gpd::Functor> inverse;
  std::map<Sort, gpd::NatTrans> unit;
  std::map<Sort, gpd::NatTrans> counit;
};

struct Verification {
  bool ok = true;
  std::string where;   // e.g. "symbol f" or "sort A"
  std::string detail;  // first failing square or law
};

Verification verify_homotopy_homomorphism(const GroupoidStructure& m,
                                          const GroupoidStructure& n,
                                          const HomotopyHomomorphism& h);
Verification verify_homotopy_equivalence(const GroupoidStructure& m,
                                         const GroupoidStructure& n,
                                         const HomotopyEquivalence& h);

// α_A⃗ : M(A⃗) → N(A⃗) on the context bases, in GroupoidModel layout.
gpd::Functor context_functor(const GroupoidStructure& m,
                             const GroupoidStructure& n,
                             const std::map<Sort, gpd::Functor>& per_sort,
                             const CtxObject& ctx);

struct PointVerdict {
  std::size_t point = 0;        // object of M's context base
  std::size_t image = 0;        // its image in N's context base
  std::size_t m_objects = 0;    // size of the M fiber
  std::size_t n_objects = 0;    // size of the N fiber
  bool m_inhabited = false;
  bool n_inhabited = false;
  bool equivalent = false;
};

struct InvarianceReport {
  std::vector<PointVerdict> points;
  bool all_equivalent() const;
};

// Compares ⟦φ⟧_M at each a⃗ with ⟦φ⟧_N at α(a⃗). Throws Error(kVerification)
// if h does not verify.
InvarianceReport invariance_report(const Formula& phi, const Context& ctx,
                                   const GroupoidStructure& m,
                                   const GroupoidStructure& n,
                                   const HomotopyEquivalence& h,
                                   gpd::FamilyOptions opts = {});

// The identity equivalence M → M.
HomotopyEquivalence identity_equivalence(const GroupoidStructure& m);

// A random per-sort equivalence out of m (carriers of N stay within
// max_objects objects), with N's functors transported along it.
struct GeneratedEquivalence {
  GroupoidStructure target;
  HomotopyEquivalence equivalence;
};
GeneratedEquivalence random_equivalence(const GroupoidStructure& m,
                                        std::uint64_t seed,
                                        std::size_t max_objects = 3);

// A random structure on sig with carriers of at most max_objects objects
// and automorphism groups of order at most max_group_order (≤ 4).
GroupoidStructure random_groupoid_structure(const Signature& sig,
                                            std::uint64_t seed,
                                            std::size_t max_objects = 3,
                                            std::size_t max_group_order = 2);

// Distinct closed formulas over sig, formula depth at most max_depth.
std::vector<Formula> closed_formula_pool(const Signature& sig,
                                         std::uint64_t seed, std::size_t count,
                                         std::size_t max_depth);

// Set-level analog: relabel the carriers of m by per-sort permutations.
SetStructure relabel(const SetStructure& m,
                     const std::map<Sort, std::vector<std::size_t>>& per_sort);

}  // namespace hfol
