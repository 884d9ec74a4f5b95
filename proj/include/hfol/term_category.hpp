#pragma once

// The free finite-product category on a signature. Objects are sort
// sequences; a morphism A⃗ → B⃗ is a tuple of terms of sorts B⃗ over the
// canonical context x1:A1, ..., xn:An. Composition is substitution and the
// chosen products are concatenation.

#include <concepts>
#include <string>
#include <vector>

#include "hfol/syntax.hpp"

namespace hfol {

using CtxObject = std::vector<Sort>;

std::string to_string(const CtxObject& obj);

class TermMorphism {
 public:
  // Validates |terms| = |codomain|, sorts, and that every free variable is a
  // canonical variable of the domain. Terms are stored as given (they are
  // already canonical when they validate).
  TermMorphism(CtxObject domain, CtxObject codomain, std::vector<Term> terms);

  const CtxObject& domain() const { return domain_; }
  const CtxObject& codomain() const { return codomain_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool operator==(const TermMorphism& other) const = default;

 private:
  CtxObject domain_;
  CtxObject codomain_;
  std::vector<Term> terms_;
};

std::string to_string(const TermMorphism& m);

TermMorphism identity(const CtxObject& obj);
// g ∘ f
TermMorphism compose(const TermMorphism& g, const TermMorphism& f);
// 1-based index.
TermMorphism projection(const CtxObject& obj, std::size_t i);
// ⟨f1, ..., fk⟩ : C → B1...Bk; an empty list gives C → ⟨⟩.
TermMorphism tuple(const CtxObject& domain, const std::vector<TermMorphism>& fs);
// The canonical projection A⃗B → A⃗ dropping the last entry.
TermMorphism drop_last(const CtxObject& obj);
// t × 1_B : (dom t, B) → (cod t, B)
TermMorphism extend(const TermMorphism& t, const Sort& b);
// A morphism built from terms written over the canonical domain context.
TermMorphism morphism_from_terms(const CtxObject& domain,
                                 std::vector<Term> terms);

// Context of canonical variables x1..xn.
Context canonical_context(const CtxObject& obj);

// t*φ for φ canonical over cod(t): φ[x⃗ := t⃗], canonical over dom(t).
Formula reindex_formula(const TermMorphism& t, const Formula& phi);

// A target category with chosen finite products into which TM_σ maps.
template <class T>
concept FiniteProductTarget = requires(T& t, const CtxObject& obj,
                                       std::size_t i,
                                       const typename T::Morphism& m,
                                       const std::vector<typename T::Morphism>& ms,
                                       const std::string& symbol) {
  { t.projection(obj, i) } -> std::same_as<typename T::Morphism>;
  { t.tuple(obj, ms) } -> std::same_as<typename T::Morphism>;
  { t.compose(m, m) } -> std::same_as<typename T::Morphism>;
  { t.symbol(symbol) } -> std::same_as<typename T::Morphism>;
};

template <FiniteProductTarget T>
typename T::Morphism interpret_term(const Term& term, const CtxObject& domain,
                                    T& target) {
  if (term.is_var()) {
    const std::string& name = term.variable().name;
    return target.projection(domain, std::stoul(name.substr(1)));
  }
  std::vector<typename T::Morphism> args;
  args.reserve(term.args().size());
  for (const auto& a : term.args()) {
    args.push_back(interpret_term(a, domain, target));
  }
  return target.compose(target.symbol(term.symbol()),
                        target.tuple(domain, args));
}

// The unique finite-product-preserving functor determined by the target's
// interpretation of the function symbols.
template <FiniteProductTarget T>
typename T::Morphism interpret_morphism(const TermMorphism& m, T& target) {
  std::vector<typename T::Morphism> parts;
  parts.reserve(m.terms().size());
  for (const auto& t : m.terms()) {
    parts.push_back(interpret_term(t, m.domain(), target));
  }
  return target.tuple(m.domain(), parts);
}

}  // namespace hfol
