#pragma once

// Deduction terms: the proof language whose constructors mirror the
// operations of a first-order hyperdoctrine with equality. Contexts are sort
// sequences; every formula is canonical over the canonical context x1..xn.
// Quantifier rules act on the last context entry.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hfol/term_category.hpp"

namespace hfol {

struct Sequent {
  CtxObject context;
  Formula premise;
  Formula conclusion;

  bool operator==(const Sequent&) const = default;
};

std::string to_string(const Sequent& s);

class Deduction {
 public:
  enum class Kind {
    kId,
    kComp,
    kReindex,
    kBang,
    kAbsurd,
    kProj1,
    kProj2,
    kPair,
    kInj1,
    kInj2,
    kCase,
    kEval,
    kCurry,
    kForallCounit,
    kLambda,
    kExistsUnit,
    kMu,
    kRefl,
    kXi,
  };

  // 1_P
  static Deduction id(CtxObject ctx, Formula p);
  // g ∘ f
  static Deduction comp(Deduction g, Deduction f);
  // t*f
  static Deduction reindex(TermMorphism t, Deduction f);
  // !_P : P → ⊤
  static Deduction bang(CtxObject ctx, Formula p);
  // ⊥ → P
  static Deduction absurd(CtxObject ctx, Formula p);
  static Deduction proj1(CtxObject ctx, Formula p, Formula q);
  static Deduction proj2(CtxObject ctx, Formula p, Formula q);
  static Deduction pair(Deduction f, Deduction g);
  static Deduction inj1(CtxObject ctx, Formula p, Formula q);
  static Deduction inj2(CtxObject ctx, Formula p, Formula q);
  static Deduction case_of(Deduction f, Deduction g);
  // (P ⇒ Q) ∧ P → Q
  static Deduction eval(CtxObject ctx, Formula p, Formula q);
  // f : R ∧ P → Q gives R → (P ⇒ Q)
  static Deduction curry(Deduction f);
  // π*∀P → P, P over ctx = A⃗B
  static Deduction forall_counit(CtxObject ctx, Formula p);
  // f : π*S → P over A⃗B gives S → ∀P over A⃗
  static Deduction lambda(Deduction f);
  // P → π*∃P
  static Deduction exists_unit(CtxObject ctx, Formula p);
  // f : P → π*S over A⃗B gives ∃P → S over A⃗
  static Deduction mu(Deduction f);
  // ⊤ → (x1 = x1) over (B)
  static Deduction refl(Sort b);
  // f : ⊤ → Δ*T over (B) gives (x1 = x2) → T over (B, B)
  static Deduction xi(Deduction f, Formula t);

  Kind kind() const;
  const CtxObject& context() const;     // leaves
  const std::vector<Formula>& formulas() const;
  const std::vector<Deduction>& children() const;
  const TermMorphism& morphism() const;  // kReindex
  const Sort& sort() const;              // kRefl

  // Structural equality of trees.
  friend bool operator==(const Deduction& a, const Deduction& b);

  struct Node;

 private:
  explicit Deduction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

const char* kind_name(Deduction::Kind kind);
std::string to_string(const Deduction& d);

// The sequent assigned by the typing rules. Throws TypeError naming the
// offending node.
Sequent typecheck(const Deduction& d, const Signature& sig);

// Formula helpers shared by the typing rules and the interpreters.

// ∀x_{n+1}. P for P over A⃗B, canonical over A⃗.
Formula forall_last(const CtxObject& ctx, const Formula& p);
Formula exists_last(const CtxObject& ctx, const Formula& p);
// π*S for S over ctx minus its last entry.
Formula weaken_last(const CtxObject& ctx, const Formula& s);
// Body of a quantifier over ctx, canonical over ctx extended by the bound
// variable's sort.
Formula quantifier_body(const CtxObject& ctx, const Formula& q);
// x1 = x2 over (B, B)
Formula eq_formula(const Sort& b);
// The diagonal (B) → (B, B).
TermMorphism diagonal(const Sort& b);

// ---------------------------------------------------------------------------
// Textual proofs.
//
//   proof   := 'context' '(' sorts ')' expr
//   expr    := Name args? children?
//   args    := '[' item (';' item)* ']'
//   children:= '(' expr (',' expr)* ')'
//
// Formulas in `args` are written over the canonical names x1..xn of the
// node's context. Reindex takes the terms of t over its domain; Lambda and Mu
// take the sort of the quantified variable; Xi takes T.

struct ProofFile {
  CtxObject context;
  Deduction proof;
};

ProofFile parse_proof(std::string_view text, const Signature& sig);

// ---------------------------------------------------------------------------
// Derived rules, expanded into the core constructors.

// π*f for f over A⃗: the same deduction over A⃗B.
Deduction weaken(const Deduction& f, const Signature& sig, const Sort& b);
// P ∧ Q → Q ∧ P
Deduction and_swap(const CtxObject& ctx, const Formula& p, const Formula& q);
// f : P → Q and g : P → (Q ⇒ R) give P → R
Deduction modus_ponens(const Deduction& f, const Deduction& g,
                       const Signature& sig);
// Existential introduction: f : ⊤ → P over A⃗B and a witness term w of sort
// B over A⃗ give ⊤ → ∃P over A⃗.
Deduction exists_intro(const Deduction& f, const Term& witness,
                       const Signature& sig);
// ⊤ → (t = t) for a term t over ctx.
Deduction refl_at(const CtxObject& ctx, const Term& t);

// ---------------------------------------------------------------------------
// Basic relations.

enum class RelationFamily {
  kCategory,
  kFibration,
  kProducts,
  kExponentials,
  kAdjoints,
  kEquality,
  kStability,
};

inline constexpr RelationFamily kAllRelationFamilies[] = {
    RelationFamily::kCategory,     RelationFamily::kFibration,
    RelationFamily::kProducts,     RelationFamily::kExponentials,
    RelationFamily::kAdjoints,     RelationFamily::kEquality,
    RelationFamily::kStability,
};

const char* family_name(RelationFamily family);

struct RelationInstance {
  RelationFamily family;
  std::string relation;  // which equation of the family
  Deduction lhs;
  Deduction rhs;
};

struct RelationBounds {
  std::size_t per_family = 20;
  std::size_t formula_depth = 2;
  std::size_t max_context = 2;
};

// Randomized instances of every basic relation over `sig`, each pair
// typechecking to one sequent. Deterministic in the seed.
std::vector<RelationInstance> basic_relation_instances(
    const Signature& sig, std::uint64_t seed, const RelationBounds& bounds);

}  // namespace hfol
