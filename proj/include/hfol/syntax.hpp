#pragma once

// Multi-sorted first-order syntax: signatures, terms, formulas, free and bound
// variables, capture-avoiding substitution, alphabetic equivalence and
// canonical positional contexts.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hfol {

using Sort = std::string;

struct FunctionSymbol {
  std::string name;
  std::vector<Sort> arity;
  Sort codomain;

  bool operator==(const FunctionSymbol&) const = default;
};

class Signature {
 public:
  Signature() = default;

  // Both throw a usage error on duplicates or undeclared sorts.
  void add_sort(const Sort& sort);
  void add_function(FunctionSymbol symbol);

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }
  bool has_sort(std::string_view sort) const;
  const FunctionSymbol* find_function(std::string_view name) const;
  const FunctionSymbol& function(std::string_view name) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Sort> sorts_;
  std::vector<FunctionSymbol> functions_;
};

// Variables are typed: two variables with the same name but different sorts
// are distinct.
struct Variable {
  Sort sort;
  std::string name;

  auto operator<=>(const Variable&) const = default;
};

using VariableSet = std::set<Variable>;

class Term {
 public:
  enum class Kind { kVar, kApp };

  static Term var(Variable v);
  static Term var(Sort sort, std::string name);
  // Checks argument count and argument sorts against the symbol's arity.
  static Term app(const FunctionSymbol& symbol, std::vector<Term> args);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::kVar; }
  const Sort& sort() const;
  const Variable& variable() const;
  const std::string& symbol() const;
  const std::vector<Term>& args() const;
  // Variables have depth 0.
  std::size_t depth() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Formula {
 public:
  enum class Kind { kEq, kTop, kBot, kAnd, kOr, kImplies, kForall, kExists };

  // Throws a parse-class error when the operand sorts differ.
  static Formula eq(Term lhs, Term rhs);
  static Formula top();
  static Formula bot();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula negation(Formula a);  // a -> F
  static Formula forall(Variable v, Formula body);
  static Formula exists(Variable v, Formula body);
  static Formula binary(Kind kind, Formula a, Formula b);
  static Formula quantifier(Kind kind, Variable v, Formula body);

  Kind kind() const;
  bool is_binary() const;
  bool is_quantifier() const;

  // kEq
  const Sort& eq_sort() const;
  const Term& lhs() const;
  const Term& rhs() const;
  // binary connectives
  const Formula& left() const;
  const Formula& right() const;
  // quantifiers
  const Variable& bound() const;
  const Formula& body() const;

  // Nesting depth of connectives (quantifiers included); atoms have depth 0.
  std::size_t connective_depth() const;
  std::size_t quantifier_depth() const;
  // Identity of the underlying node; used for memoization only.
  const void* node_id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// An ordered list of pairwise distinct variables.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Variable> vars);

  // x1:A1, ..., xn:An
  static Context canonical(const std::vector<Sort>& sorts);

  const std::vector<Variable>& vars() const { return vars_; }
  std::vector<Sort> sorts() const;
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  std::optional<std::size_t> index_of(const Variable& v) const;
  bool contains(const Variable& v) const { return index_of(v).has_value(); }
  Context extended(Variable v) const;

  bool operator==(const Context&) const = default;

 private:
  std::vector<Variable> vars_;
};

// Name of the i-th canonical free variable (1-based), "x<i>".
std::string positional_name(std::size_t index);
// Name of the canonical bound variable at binder depth d (1-based), "b<d>".
std::string bound_name(std::size_t depth);

VariableSet free_vars(const Term& t);
VariableSet free_vars(const std::vector<Term>& ts);
VariableSet free_vars(const Formula& phi);
VariableSet bound_vars(const Formula& phi);
// FV ∪ BV
VariableSet all_vars(const Formula& phi);

// Lowest-index variable "_k" of the given sort that is not in `used`.
Variable fresh_variable(const Sort& sort, const VariableSet& used);

// Literal simultaneous substitution on terms. Throws on length or sort
// mismatch and on repeated variables in `xs`.
Term subst(const Term& t, const std::vector<Variable>& xs,
           const std::vector<Term>& us);
std::vector<Term> subst(const std::vector<Term>& ts,
                        const std::vector<Variable>& xs,
                        const std::vector<Term>& us);

// Substitution on alphabetic-equivalence classes: bound variables that would
// capture a free variable of `us` are renamed to fresh ones first.
Formula subst(const Formula& phi, const std::vector<Variable>& xs,
              const std::vector<Term>& us);

// Recursive substitution without renaming. Only meaningful when
// BV(phi) ∩ FV(us) is empty; otherwise capture may occur.
Formula raw_subst(const Formula& phi, const std::vector<Variable>& xs,
                  const std::vector<Term>& us);

bool alpha_eq(const Formula& a, const Formula& b);

// An alphabetic variant of phi whose bound variables avoid `avoid`.
Formula rename_apart(const Formula& phi, const VariableSet& avoid);

// Renames the context variables to x1..xn by position and bound variables to
// b<depth>. Equal outputs iff the inputs agree up to renaming of the context
// and alphabetic equivalence. Throws when FV(phi) is not inside ctx.
Formula canonicalize(const Formula& phi, const Context& ctx);
Term canonicalize(const Term& t, const Context& ctx);

std::string to_string(const Term& t);
std::string to_string(const Formula& phi);
std::string to_string(const Context& ctx);

}  // namespace hfol
