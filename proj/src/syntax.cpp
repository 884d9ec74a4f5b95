#include "hfol/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hfol/error.hpp"

namespace hfol {

// ---------------------------------------------------------------------------
// Signature

void Signature::add_sort(const Sort& sort) {
  if (sort.empty()) throw_usage("empty sort name");
  if (has_sort(sort)) throw_usage("duplicate sort '" + sort + "'");
  sorts_.push_back(sort);
}

void Signature::add_function(FunctionSymbol symbol) {
  if (find_function(symbol.name) != nullptr) {
    throw_usage("duplicate function symbol '" + symbol.name + "'");
  }
  for (const auto& s : symbol.arity) {
    if (!has_sort(s)) {
      throw_usage("function symbol '" + symbol.name +
                  "' uses undeclared sort '" + s + "'");
    }
  }
  if (!has_sort(symbol.codomain)) {
    throw_usage("function symbol '" + symbol.name +
                "' has undeclared codomain sort '" + symbol.codomain + "'");
  }
  functions_.push_back(std::move(symbol));
}

bool Signature::has_sort(std::string_view sort) const {
  return std::find(sorts_.begin(), sorts_.end(), sort) != sorts_.end();
}

const FunctionSymbol* Signature::find_function(std::string_view name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const FunctionSymbol& Signature::function(std::string_view name) const {
  const auto* f = find_function(name);
  if (f == nullptr) {
    throw_parse("unknown function symbol '" + std::string(name) + "'");
  }
  return *f;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  Sort sort;
  Variable var;        // kVar
  std::string symbol;  // kApp
  std::vector<Term> args;
  std::size_t depth = 0;
};

Term Term::var(Variable v) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kVar;
  node->sort = v.sort;
  node->var = std::move(v);
  return Term(std::move(node));
}

Term Term::var(Sort sort, std::string name) {
  return var(Variable{std::move(sort), std::move(name)});
}

Term Term::app(const FunctionSymbol& symbol, std::vector<Term> args) {
  if (args.size() != symbol.arity.size()) {
    throw_parse("function symbol '" + symbol.name + "' expects " +
                std::to_string(symbol.arity.size()) + " argument(s), got " +
                std::to_string(args.size()));
  }
  std::size_t depth = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort() != symbol.arity[i]) {
      throw_parse("sort mismatch: argument " + std::to_string(i + 1) +
                  " of '" + symbol.name + "' has sort " + args[i].sort() +
                  ", expected " + symbol.arity[i]);
    }
    depth = std::max(depth, args[i].depth());
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kApp;
  node->sort = symbol.codomain;
  node->symbol = symbol.name;
  node->args = std::move(args);
  node->depth = depth + 1;
  return Term(std::move(node));
}

Term::Kind Term::kind() const { return node_->kind; }
const Sort& Term::sort() const { return node_->sort; }
const Variable& Term::variable() const { return node_->var; }
const std::string& Term::symbol() const { return node_->symbol; }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::depth() const { return node_->depth; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  if (a.is_var()) return a.variable() == b.variable();
  return a.symbol() == b.symbol() && a.args() == b.args();
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  Sort sort;  // kEq
  std::vector<Term> terms;
  std::vector<Formula> subs;
  Variable bound;
  std::size_t depth = 0;
  std::size_t qdepth = 0;
};

Formula Formula::eq(Term lhs, Term rhs) {
  if (lhs.sort() != rhs.sort()) {
    throw_parse("sort mismatch in equation: " + to_string(lhs) + " : " +
                lhs.sort() + " vs " + to_string(rhs) + " : " + rhs.sort());
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kEq;
  node->sort = lhs.sort();
  node->terms = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(node));
}

Formula Formula::top() {
  static const Formula kTop = [] {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kTop;
    return Formula(std::move(node));
  }();
  return kTop;
}

Formula Formula::bot() {
  static const Formula kBot = [] {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kBot;
    return Formula(std::move(node));
  }();
  return kBot;
}

Formula Formula::binary(Kind kind, Formula a, Formula b) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->depth = 1 + std::max(a.connective_depth(), b.connective_depth());
  node->qdepth = std::max(a.quantifier_depth(), b.quantifier_depth());
  node->subs = {std::move(a), std::move(b)};
  return Formula(std::move(node));
}

Formula Formula::quantifier(Kind kind, Variable v, Formula body) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->depth = 1 + body.connective_depth();
  node->qdepth = 1 + body.quantifier_depth();
  node->bound = std::move(v);
  node->subs = {std::move(body)};
  return Formula(std::move(node));
}

Formula Formula::conj(Formula a, Formula b) {
  return binary(Kind::kAnd, std::move(a), std::move(b));
}
Formula Formula::disj(Formula a, Formula b) {
  return binary(Kind::kOr, std::move(a), std::move(b));
}
Formula Formula::implies(Formula a, Formula b) {
  return binary(Kind::kImplies, std::move(a), std::move(b));
}
Formula Formula::negation(Formula a) { return implies(std::move(a), bot()); }
Formula Formula::forall(Variable v, Formula body) {
  return quantifier(Kind::kForall, std::move(v), std::move(body));
}
Formula Formula::exists(Variable v, Formula body) {
  return quantifier(Kind::kExists, std::move(v), std::move(body));
}

Formula::Kind Formula::kind() const { return node_->kind; }
bool Formula::is_binary() const {
  auto k = kind();
  return k == Kind::kAnd || k == Kind::kOr || k == Kind::kImplies;
}
bool Formula::is_quantifier() const {
  return kind() == Kind::kForall || kind() == Kind::kExists;
}
const Sort& Formula::eq_sort() const { return node_->sort; }
const Term& Formula::lhs() const { return node_->terms[0]; }
const Term& Formula::rhs() const { return node_->terms[1]; }
const Formula& Formula::left() const { return node_->subs[0]; }
const Formula& Formula::right() const { return node_->subs[1]; }
const Variable& Formula::bound() const { return node_->bound; }
const Formula& Formula::body() const { return node_->subs[0]; }
std::size_t Formula::connective_depth() const { return node_->depth; }
std::size_t Formula::quantifier_depth() const { return node_->qdepth; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return true;
    case Formula::Kind::kEq:
      return a.eq_sort() == b.eq_sort() && a.lhs() == b.lhs() &&
             a.rhs() == b.rhs();
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return a.left() == b.left() && a.right() == b.right();
    case Formula::Kind::kForall:
    case Formula::Kind::kExists:
      return a.bound() == b.bound() && a.body() == b.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Context

Context::Context(std::vector<Variable> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (vars_[i] == vars_[j]) {
        throw_parse("context variable '" + vars_[i].name + "' repeated");
      }
    }
  }
}

Context Context::canonical(const std::vector<Sort>& sorts) {
  std::vector<Variable> vars;
  vars.reserve(sorts.size());
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    vars.push_back(Variable{sorts[i], positional_name(i + 1)});
  }
  return Context(std::move(vars));
}

std::vector<Sort> Context::sorts() const {
  std::vector<Sort> out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.sort);
  return out;
}

std::optional<std::size_t> Context::index_of(const Variable& v) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == v) return i;
  }
  return std::nullopt;
}

Context Context::extended(Variable v) const {
  auto vars = vars_;
  vars.push_back(std::move(v));
  return Context(std::move(vars));
}

std::string positional_name(std::size_t index) {
  return "x" + std::to_string(index);
}

std::string bound_name(std::size_t depth) { return "b" + std::to_string(depth); }

// ---------------------------------------------------------------------------
// Free and bound variables

namespace {

void collect_fv(const Term& t, VariableSet& out) {
  if (t.is_var()) {
    out.insert(t.variable());
    return;
  }
  for (const auto& a : t.args()) collect_fv(a, out);
}

void collect_fv(const Formula& phi, VariableSet& out) {
  switch (phi.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return;
    case Formula::Kind::kEq:
      collect_fv(phi.lhs(), out);
      collect_fv(phi.rhs(), out);
      return;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      collect_fv(phi.left(), out);
      collect_fv(phi.right(), out);
      return;
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      VariableSet inner;
      collect_fv(phi.body(), inner);
      inner.erase(phi.bound());
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

void collect_bv(const Formula& phi, VariableSet& out) {
  if (phi.is_binary()) {
    collect_bv(phi.left(), out);
    collect_bv(phi.right(), out);
  } else if (phi.is_quantifier()) {
    out.insert(phi.bound());
    collect_bv(phi.body(), out);
  }
}

}  // namespace

VariableSet free_vars(const Term& t) {
  VariableSet out;
  collect_fv(t, out);
  return out;
}

VariableSet free_vars(const std::vector<Term>& ts) {
  VariableSet out;
  for (const auto& t : ts) collect_fv(t, out);
  return out;
}

VariableSet free_vars(const Formula& phi) {
  VariableSet out;
  collect_fv(phi, out);
  return out;
}

VariableSet bound_vars(const Formula& phi) {
  VariableSet out;
  collect_bv(phi, out);
  return out;
}

VariableSet all_vars(const Formula& phi) {
  auto out = free_vars(phi);
  collect_bv(phi, out);
  return out;
}

Variable fresh_variable(const Sort& sort, const VariableSet& used) {
  for (std::size_t k = 1;; ++k) {
    Variable v{sort, "_" + std::to_string(k)};
    if (used.count(v) == 0) return v;
  }
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

// Same head symbol as `t`, new arguments of the same sorts.
Term rebuild(const Term& t, std::vector<Term> args) {
  std::vector<Sort> arity;
  arity.reserve(args.size());
  for (const auto& a : args) arity.push_back(a.sort());
  return Term::app(FunctionSymbol{t.symbol(), std::move(arity), t.sort()},
                   std::move(args));
}

void check_substitution(const std::vector<Variable>& xs,
                        const std::vector<Term>& us) {
  if (xs.size() != us.size()) {
    throw_usage("substitution length mismatch: " + std::to_string(xs.size()) +
                " variable(s), " + std::to_string(us.size()) + " term(s)");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].sort != us[i].sort()) {
      throw_usage("substitution sort mismatch for '" + xs[i].name + "': " +
                  xs[i].sort + " vs " + us[i].sort());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (xs[i] == xs[j]) {
        throw_usage("substitution variable '" + xs[i].name + "' repeated");
      }
    }
  }
}

Term subst_term(const Term& t, const std::vector<Variable>& xs,
                const std::vector<Term>& us) {
  if (t.is_var()) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == t.variable()) return us[i];
    }
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(subst_term(a, xs, us));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  return rebuild(t, std::move(args));
}

// Drops the entry for `v` from the substitution, if present.
void remove_binding(std::vector<Variable>& xs, std::vector<Term>& us,
                    const Variable& v) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == v) {
      xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i));
      us.erase(us.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
  }
}

Formula subst_formula(const Formula& phi, std::vector<Variable> xs,
                      std::vector<Term> us, bool rename) {
  switch (phi.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return phi;
    case Formula::Kind::kEq:
      return Formula::eq(subst_term(phi.lhs(), xs, us),
                         subst_term(phi.rhs(), xs, us));
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return Formula::binary(phi.kind(),
                             subst_formula(phi.left(), xs, us, rename),
                             subst_formula(phi.right(), xs, us, rename));
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      remove_binding(xs, us, phi.bound());
      if (xs.empty()) return phi;
      if (!rename) {
        return Formula::quantifier(phi.kind(), phi.bound(),
                                   subst_formula(phi.body(), xs, us, false));
      }
      // Only bindings for variables actually free in the body matter.
      const auto body_fv = free_vars(phi.body());
      std::vector<Variable> live_xs;
      std::vector<Term> live_us;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (body_fv.count(xs[i]) != 0) {
          live_xs.push_back(xs[i]);
          live_us.push_back(us[i]);
        }
      }
      if (live_xs.empty()) return phi;
      const auto us_fv = free_vars(live_us);
      if (us_fv.count(phi.bound()) == 0) {
        return Formula::quantifier(
            phi.kind(), phi.bound(),
            subst_formula(phi.body(), live_xs, live_us, true));
      }
      VariableSet used = all_vars(phi.body());
      used.insert(us_fv.begin(), us_fv.end());
      used.insert(live_xs.begin(), live_xs.end());
      used.insert(phi.bound());
      Variable w = fresh_variable(phi.bound().sort, used);
      Formula renamed =
          subst_formula(phi.body(), {phi.bound()}, {Term::var(w)}, true);
      return Formula::quantifier(
          phi.kind(), w, subst_formula(renamed, live_xs, live_us, true));
    }
  }
  return phi;
}

}  // namespace

Term subst(const Term& t, const std::vector<Variable>& xs,
           const std::vector<Term>& us) {
  check_substitution(xs, us);
  return subst_term(t, xs, us);
}

std::vector<Term> subst(const std::vector<Term>& ts,
                        const std::vector<Variable>& xs,
                        const std::vector<Term>& us) {
  check_substitution(xs, us);
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(subst_term(t, xs, us));
  return out;
}

Formula subst(const Formula& phi, const std::vector<Variable>& xs,
              const std::vector<Term>& us) {
  check_substitution(xs, us);
  return subst_formula(phi, xs, us, true);
}

Formula raw_subst(const Formula& phi, const std::vector<Variable>& xs,
                  const std::vector<Term>& us) {
  check_substitution(xs, us);
  return subst_formula(phi, xs, us, false);
}

// ---------------------------------------------------------------------------
// Alphabetic equivalence

namespace {

using Scope = std::vector<Variable>;  // innermost binder last

std::optional<std::size_t> lookup(const Scope& scope, const Variable& v) {
  for (std::size_t i = scope.size(); i-- > 0;) {
    if (scope[i] == v) return i;
  }
  return std::nullopt;
}

bool alpha_eq_term(const Term& a, const Scope& sa, const Term& b,
                   const Scope& sb) {
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  if (a.is_var()) {
    auto ia = lookup(sa, a.variable());
    auto ib = lookup(sb, b.variable());
    if (ia.has_value() != ib.has_value()) return false;
    if (ia.has_value()) return *ia == *ib;
    return a.variable() == b.variable();
  }
  if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!alpha_eq_term(a.args()[i], sa, b.args()[i], sb)) return false;
  }
  return true;
}

bool alpha_eq_rec(const Formula& a, Scope& sa, const Formula& b, Scope& sb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return true;
    case Formula::Kind::kEq:
      return alpha_eq_term(a.lhs(), sa, b.lhs(), sb) &&
             alpha_eq_term(a.rhs(), sa, b.rhs(), sb);
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return alpha_eq_rec(a.left(), sa, b.left(), sb) &&
             alpha_eq_rec(a.right(), sa, b.right(), sb);
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      if (a.bound().sort != b.bound().sort) return false;
      sa.push_back(a.bound());
      sb.push_back(b.bound());
      bool ok = alpha_eq_rec(a.body(), sa, b.body(), sb);
      sa.pop_back();
      sb.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const Formula& a, const Formula& b) {
  Scope sa, sb;
  return alpha_eq_rec(a, sa, b, sb);
}

Formula rename_apart(const Formula& phi, const VariableSet& avoid) {
  switch (phi.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
    case Formula::Kind::kEq:
      return phi;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return Formula::binary(phi.kind(), rename_apart(phi.left(), avoid),
                             rename_apart(phi.right(), avoid));
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      Formula body = rename_apart(phi.body(), avoid);
      if (avoid.count(phi.bound()) == 0) {
        return Formula::quantifier(phi.kind(), phi.bound(), body);
      }
      VariableSet used = avoid;
      auto vs = all_vars(body);
      used.insert(vs.begin(), vs.end());
      Variable w = fresh_variable(phi.bound().sort, used);
      return Formula::quantifier(
          phi.kind(), w, subst(body, {phi.bound()}, {Term::var(w)}));
    }
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

Term canon_term(const Term& t, const Context& ctx, const Scope& scope) {
  if (t.is_var()) {
    if (auto i = lookup(scope, t.variable())) {
      return Term::var(t.sort(), bound_name(*i + 1));
    }
    if (auto i = ctx.index_of(t.variable())) {
      return Term::var(t.sort(), positional_name(*i + 1));
    }
    throw_parse("free variable '" + t.variable().name + "' : " + t.sort() +
                " is not in context " + to_string(ctx));
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(canon_term(a, ctx, scope));
  return rebuild(t, std::move(args));
}

Formula canon_formula(const Formula& phi, const Context& ctx, Scope& scope) {
  switch (phi.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return phi;
    case Formula::Kind::kEq:
      return Formula::eq(canon_term(phi.lhs(), ctx, scope),
                         canon_term(phi.rhs(), ctx, scope));
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return Formula::binary(phi.kind(), canon_formula(phi.left(), ctx, scope),
                             canon_formula(phi.right(), ctx, scope));
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: {
      scope.push_back(phi.bound());
      Formula body = canon_formula(phi.body(), ctx, scope);
      scope.pop_back();
      return Formula::quantifier(
          phi.kind(), Variable{phi.bound().sort, bound_name(scope.size() + 1)},
          std::move(body));
    }
  }
  return phi;
}

}  // namespace

Formula canonicalize(const Formula& phi, const Context& ctx) {
  Scope scope;
  return canon_formula(phi, ctx, scope);
}

Term canonicalize(const Term& t, const Context& ctx) {
  return canon_term(t, ctx, {});
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t) {
  if (t.is_var()) return t.variable().name;
  std::string out = t.symbol();
  if (t.args().empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(t.args()[i]);
  }
  out += ')';
  return out;
}

namespace {

int precedence(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::kImplies:
      return phi.right().kind() == Formula::Kind::kBot ? 3 : 0;
    case Formula::Kind::kOr:
      return 1;
    case Formula::Kind::kAnd:
      return 2;
    default:
      return 3;
  }
}

// `tail` is true when nothing follows the printed text inside the enclosing
// scope, so a quantifier may extend to the right without parentheses.
void print(const Formula& phi, int min_level, bool tail, std::string& out) {
  if (phi.is_quantifier()) {
    if (!tail) out += '(';
    out += phi.kind() == Formula::Kind::kForall ? "forall " : "exists ";
    out += phi.bound().name + ":" + phi.bound().sort + ". ";
    print(phi.body(), 0, true, out);
    if (!tail) out += ')';
    return;
  }
  switch (phi.kind()) {
    case Formula::Kind::kTop:
      out += 'T';
      return;
    case Formula::Kind::kBot:
      out += 'F';
      return;
    case Formula::Kind::kEq:
      out += to_string(phi.lhs()) + " = " + to_string(phi.rhs());
      return;
    default:
      break;
  }
  const int level = precedence(phi);
  const bool parens = level < min_level;
  if (parens) {
    out += '(';
    tail = true;
  }
  if (phi.kind() == Formula::Kind::kImplies &&
      phi.right().kind() == Formula::Kind::kBot) {
    out += '~';
    print(phi.left(), 3, tail, out);
  } else {
    const char* op = phi.kind() == Formula::Kind::kAnd  ? " & "
                     : phi.kind() == Formula::Kind::kOr ? " | "
                                                        : " -> ";
    // & and | associate to the left, -> to the right.
    const bool right_assoc = phi.kind() == Formula::Kind::kImplies;
    print(phi.left(), right_assoc ? level + 1 : level, false, out);
    out += op;
    print(phi.right(), right_assoc ? level : level + 1, tail, out);
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Formula& phi) {
  std::string out;
  print(phi, 0, true, out);
  return out;
}

std::string to_string(const Context& ctx) {
  std::string out = "(";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i > 0) out += ", ";
    out += ctx[i].name + ":" + ctx[i].sort;
  }
  return out + ")";
}

}  // namespace hfol
