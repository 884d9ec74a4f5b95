#include "hfol/proof.hpp"

#include <cctype>

#include "hfol/error.hpp"
#include "hfol/parser.hpp"

namespace hfol {

struct Deduction::Node {
  Kind kind;
  CtxObject ctx;
  std::vector<Formula> formulas;
  std::vector<Deduction> children;
  std::optional<TermMorphism> morphism;
  Sort sort;
};

namespace {

using Kind = Deduction::Kind;

}  // namespace

std::string to_string(const Sequent& s) {
  return to_string(s.context) + " | " + to_string(s.premise) + " |- " +
         to_string(s.conclusion);
}

// ---------------------------------------------------------------------------
// Constructors

namespace {

template <class... Fs>
std::shared_ptr<Deduction::Node> leaf(Kind kind, CtxObject ctx, Fs... fs) {
  auto n = std::make_shared<Deduction::Node>();
  n->kind = kind;
  n->ctx = std::move(ctx);
  n->formulas = {std::move(fs)...};
  return n;
}

}  // namespace

Deduction Deduction::id(CtxObject ctx, Formula p) {
  return Deduction(leaf(Kind::kId, std::move(ctx), std::move(p)));
}

Deduction Deduction::comp(Deduction g, Deduction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kComp;
  n->children = {std::move(g), std::move(f)};
  return Deduction(n);
}

Deduction Deduction::reindex(TermMorphism t, Deduction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kReindex;
  n->morphism = std::move(t);
  n->children = {std::move(f)};
  return Deduction(n);
}

Deduction Deduction::bang(CtxObject ctx, Formula p) {
  return Deduction(leaf(Kind::kBang, std::move(ctx), std::move(p)));
}

Deduction Deduction::absurd(CtxObject ctx, Formula p) {
  return Deduction(leaf(Kind::kAbsurd, std::move(ctx), std::move(p)));
}

Deduction Deduction::proj1(CtxObject ctx, Formula p, Formula q) {
  return Deduction(leaf(Kind::kProj1, std::move(ctx), std::move(p), std::move(q)));
}

Deduction Deduction::proj2(CtxObject ctx, Formula p, Formula q) {
  return Deduction(leaf(Kind::kProj2, std::move(ctx), std::move(p), std::move(q)));
}

Deduction Deduction::pair(Deduction f, Deduction g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPair;
  n->children = {std::move(f), std::move(g)};
  return Deduction(n);
}

Deduction Deduction::inj1(CtxObject ctx, Formula p, Formula q) {
  return Deduction(leaf(Kind::kInj1, std::move(ctx), std::move(p), std::move(q)));
}

Deduction Deduction::inj2(CtxObject ctx, Formula p, Formula q) {
  return Deduction(leaf(Kind::kInj2, std::move(ctx), std::move(p), std::move(q)));
}

Deduction Deduction::case_of(Deduction f, Deduction g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCase;
  n->children = {std::move(f), std::move(g)};
  return Deduction(n);
}

Deduction Deduction::eval(CtxObject ctx, Formula p, Formula q) {
  return Deduction(leaf(Kind::kEval, std::move(ctx), std::move(p), std::move(q)));
}

Deduction Deduction::curry(Deduction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCurry;
  n->children = {std::move(f)};
  return Deduction(n);
}

Deduction Deduction::forall_counit(CtxObject ctx, Formula p) {
  return Deduction(leaf(Kind::kForallCounit, std::move(ctx), std::move(p)));
}

Deduction Deduction::lambda(Deduction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kLambda;
  n->children = {std::move(f)};
  return Deduction(n);
}

Deduction Deduction::exists_unit(CtxObject ctx, Formula p) {
  return Deduction(leaf(Kind::kExistsUnit, std::move(ctx), std::move(p)));
}

Deduction Deduction::mu(Deduction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMu;
  n->children = {std::move(f)};
  return Deduction(n);
}

Deduction Deduction::refl(Sort b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kRefl;
  n->ctx = {b};
  n->sort = std::move(b);
  return Deduction(n);
}

Deduction Deduction::xi(Deduction f, Formula t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kXi;
  n->formulas = {std::move(t)};
  n->children = {std::move(f)};
  return Deduction(n);
}

Deduction::Kind Deduction::kind() const { return node_->kind; }
const CtxObject& Deduction::context() const { return node_->ctx; }
const std::vector<Formula>& Deduction::formulas() const {
  return node_->formulas;
}
const std::vector<Deduction>& Deduction::children() const {
  return node_->children;
}
const TermMorphism& Deduction::morphism() const { return *node_->morphism; }
const Sort& Deduction::sort() const { return node_->sort; }

bool operator==(const Deduction& a, const Deduction& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.ctx == y.ctx && x.formulas == y.formulas &&
         x.sort == y.sort && x.morphism == y.morphism &&
         x.children == y.children;
}

const char* kind_name(Deduction::Kind kind) {
  switch (kind) {
    case Kind::kId: return "Id";
    case Kind::kComp: return "Comp";
    case Kind::kReindex: return "Reindex";
    case Kind::kBang: return "Bang";
    case Kind::kAbsurd: return "Absurd";
    case Kind::kProj1: return "Proj1";
    case Kind::kProj2: return "Proj2";
    case Kind::kPair: return "Pair";
    case Kind::kInj1: return "Inj1";
    case Kind::kInj2: return "Inj2";
    case Kind::kCase: return "Case";
    case Kind::kEval: return "Eval";
    case Kind::kCurry: return "Curry";
    case Kind::kForallCounit: return "ForallCounit";
    case Kind::kLambda: return "Lambda";
    case Kind::kExistsUnit: return "ExistsUnit";
    case Kind::kMu: return "Mu";
    case Kind::kRefl: return "Refl";
    case Kind::kXi: return "Xi";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// The context a deduction lives over, read off the tree alone.
CtxObject context_of(const Deduction& d) {
  switch (d.kind()) {
    case Kind::kComp:
    case Kind::kPair:
    case Kind::kCase:
    case Kind::kCurry:
      return context_of(d.children()[0]);
    case Kind::kReindex:
      return d.morphism().domain();
    case Kind::kLambda:
    case Kind::kMu: {
      CtxObject c = context_of(d.children()[0]);
      if (!c.empty()) c.pop_back();
      return c;
    }
    case Kind::kXi: {
      const CtxObject c = context_of(d.children()[0]);
      if (c.empty()) return {};
      return {c[0], c[0]};
    }
    default:
      return d.context();
  }
}

void print(const Deduction& d, std::string& out) {
  out += kind_name(d.kind());
  std::vector<std::string> args;
  switch (d.kind()) {
    case Kind::kReindex:
      for (const auto& t : d.morphism().terms()) args.push_back(to_string(t));
      if (args.empty()) args.emplace_back();
      break;
    case Kind::kRefl:
      args.push_back(d.sort());
      break;
    case Kind::kLambda:
    case Kind::kMu: {
      const CtxObject c = context_of(d.children()[0]);
      args.push_back(c.empty() ? "?" : c.back());
      break;
    }
    default:
      for (const auto& f : d.formulas()) args.push_back(to_string(f));
  }
  if (!args.empty()) {
    out += '[';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) out += "; ";
      out += args[i];
    }
    out += ']';
  }
  if (!d.children().empty()) {
    out += '(';
    for (std::size_t i = 0; i < d.children().size(); ++i) {
      if (i > 0) out += ", ";
      print(d.children()[i], out);
    }
    out += ')';
  }
}

}  // namespace

std::string to_string(const Deduction& d) {
  std::string out;
  print(d, out);
  return out;
}

// ---------------------------------------------------------------------------
// Formula helpers

Formula forall_last(const CtxObject& ctx, const Formula& p) {
  if (ctx.empty()) throw_usage("cannot quantify over the empty context");
  const Variable v{ctx.back(), positional_name(ctx.size())};
  const CtxObject outer(ctx.begin(), ctx.end() - 1);
  return canonicalize(Formula::forall(v, p), canonical_context(outer));
}

Formula exists_last(const CtxObject& ctx, const Formula& p) {
  if (ctx.empty()) throw_usage("cannot quantify over the empty context");
  const Variable v{ctx.back(), positional_name(ctx.size())};
  const CtxObject outer(ctx.begin(), ctx.end() - 1);
  return canonicalize(Formula::exists(v, p), canonical_context(outer));
}

Formula weaken_last(const CtxObject& ctx, const Formula& s) {
  return reindex_formula(drop_last(ctx), s);
}

Formula quantifier_body(const CtxObject& ctx, const Formula& q) {
  return canonicalize(q.body(), canonical_context(ctx).extended(q.bound()));
}

Formula eq_formula(const Sort& b) {
  return Formula::eq(Term::var(b, positional_name(1)),
                     Term::var(b, positional_name(2)));
}

TermMorphism diagonal(const Sort& b) {
  const Term x = Term::var(b, positional_name(1));
  return TermMorphism({b}, {b, b}, {x, x});
}

// ---------------------------------------------------------------------------
// Typing

namespace {

class Checker {
 public:
  explicit Checker(const Signature& sig) : sig_(sig) {}

  Sequent check(const Deduction& d) {
    switch (d.kind()) {
      case Kind::kId: {
        const Formula p = formula(d, 0);
        return {d.context(), p, p};
      }
      case Kind::kComp: {
        const Sequent g = check(d.children()[0]);
        const Sequent f = check(d.children()[1]);
        same_context(d, f.context, g.context);
        if (!(f.conclusion == g.premise)) {
          fail(d, "the conclusion of the first step " + to_string(f.conclusion) +
                      " does not match the premise of the second " +
                      to_string(g.premise));
        }
        return {f.context, f.premise, g.conclusion};
      }
      case Kind::kReindex: {
        const TermMorphism& t = d.morphism();
        const Sequent f = check(d.children()[0]);
        if (f.context != t.codomain()) {
          fail(d, "substitution has codomain " + to_string(t.codomain()) +
                      " but the deduction lives over " + to_string(f.context));
        }
        return {t.domain(), reindex_formula(t, f.premise),
                reindex_formula(t, f.conclusion)};
      }
      case Kind::kBang:
        return {d.context(), formula(d, 0), Formula::top()};
      case Kind::kAbsurd:
        return {d.context(), Formula::bot(), formula(d, 0)};
      case Kind::kProj1:
      case Kind::kProj2: {
        const Formula p = formula(d, 0), q = formula(d, 1);
        return {d.context(), Formula::conj(p, q),
                d.kind() == Kind::kProj1 ? p : q};
      }
      case Kind::kPair: {
        const Sequent f = check(d.children()[0]);
        const Sequent g = check(d.children()[1]);
        same_context(d, f.context, g.context);
        if (!(f.premise == g.premise)) {
          fail(d, "components have premises " + to_string(f.premise) +
                      " and " + to_string(g.premise));
        }
        return {f.context, f.premise, Formula::conj(f.conclusion, g.conclusion)};
      }
      case Kind::kInj1:
      case Kind::kInj2: {
        const Formula p = formula(d, 0), q = formula(d, 1);
        return {d.context(), d.kind() == Kind::kInj1 ? p : q,
                Formula::disj(p, q)};
      }
      case Kind::kCase: {
        const Sequent f = check(d.children()[0]);
        const Sequent g = check(d.children()[1]);
        same_context(d, f.context, g.context);
        if (!(f.conclusion == g.conclusion)) {
          fail(d, "branches conclude " + to_string(f.conclusion) + " and " +
                      to_string(g.conclusion));
        }
        return {f.context, Formula::disj(f.premise, g.premise), f.conclusion};
      }
      case Kind::kEval: {
        const Formula p = formula(d, 0), q = formula(d, 1);
        return {d.context(), Formula::conj(Formula::implies(p, q), p), q};
      }
      case Kind::kCurry: {
        const Sequent f = check(d.children()[0]);
        if (f.premise.kind() != Formula::Kind::kAnd) {
          fail(d, "premise " + to_string(f.premise) + " is not a conjunction");
        }
        return {f.context, f.premise.left(),
                Formula::implies(f.premise.right(), f.conclusion)};
      }
      case Kind::kForallCounit: {
        const Formula p = formula(d, 0);
        nonempty(d, d.context());
        return {d.context(),
                weaken_last(d.context(), forall_last(d.context(), p)), p};
      }
      case Kind::kExistsUnit: {
        const Formula p = formula(d, 0);
        nonempty(d, d.context());
        return {d.context(), p,
                weaken_last(d.context(), exists_last(d.context(), p))};
      }
      case Kind::kLambda: {
        const Sequent f = check(d.children()[0]);
        nonempty(d, f.context);
        const Formula s = strengthen(d, f.context, f.premise, "premise");
        const CtxObject outer(f.context.begin(), f.context.end() - 1);
        return {outer, s, forall_last(f.context, f.conclusion)};
      }
      case Kind::kMu: {
        const Sequent f = check(d.children()[0]);
        nonempty(d, f.context);
        const Formula s = strengthen(d, f.context, f.conclusion, "conclusion");
        const CtxObject outer(f.context.begin(), f.context.end() - 1);
        return {outer, exists_last(f.context, f.premise), s};
      }
      case Kind::kRefl: {
        if (!sig_.has_sort(d.sort())) fail(d, "unknown sort " + d.sort());
        return {{d.sort()}, Formula::top(), reindex_formula(diagonal(d.sort()), eq_formula(d.sort()))};
      }
      case Kind::kXi: {
        const Sequent f = check(d.children()[0]);
        if (f.context.size() != 1) {
          fail(d, "the deduction must live over a single sort, not " +
                      to_string(f.context));
        }
        const Sort& b = f.context[0];
        const CtxObject bb{b, b};
        const Formula t = canonical(d, d.formulas()[0], bb);
        if (f.premise.kind() != Formula::Kind::kTop) {
          fail(d, "premise must be T, got " + to_string(f.premise));
        }
        const Formula expected = reindex_formula(diagonal(b), t);
        if (!(f.conclusion == expected)) {
          fail(d, "conclusion " + to_string(f.conclusion) +
                      " is not the diagonal instance " + to_string(expected));
        }
        return {bb, eq_formula(b), t};
      }
    }
    fail(d, "unknown constructor");
  }

 private:
  [[noreturn]] static void fail(const Deduction& d, const std::string& msg) {
    throw TypeError(std::string(kind_name(d.kind())) + ": " + msg);
  }

  Formula canonical(const Deduction& d, const Formula& p, const CtxObject& ctx) {
    for (const auto& s : ctx) {
      if (!sig_.has_sort(s)) fail(d, "unknown sort " + s);
    }
    try {
      return canonicalize(p, canonical_context(ctx));
    } catch (const Error& e) {
      fail(d, std::string("formula ") + to_string(p) + " is not over " +
                  to_string(ctx) + " (" + e.what() + ")");
    }
  }

  Formula formula(const Deduction& d, std::size_t i) {
    return canonical(d, d.formulas()[i], d.context());
  }

  static void same_context(const Deduction& d, const CtxObject& a,
                           const CtxObject& b) {
    if (a != b) {
      fail(d, "sub-deductions live over " + to_string(a) + " and " +
                  to_string(b));
    }
  }

  static void nonempty(const Deduction& d, const CtxObject& ctx) {
    if (ctx.empty()) fail(d, "needs a non-empty context");
  }

  // S with π*S = p, when the last variable does not occur in p.
  static Formula strengthen(const Deduction& d, const CtxObject& ctx,
                            const Formula& p, const char* what) {
    const Variable last{ctx.back(), positional_name(ctx.size())};
    if (free_vars(p).count(last) > 0) {
      fail(d, std::string(what) + " " + to_string(p) + " mentions " +
                  last.name + ", so it is not weakened from the shorter context");
    }
    return p;
  }

  const Signature& sig_;
};

}  // namespace

Sequent typecheck(const Deduction& d, const Signature& sig) {
  return Checker(sig).check(d);
}

// ---------------------------------------------------------------------------
// Textual proofs

namespace {

class ProofReader {
 public:
  ProofReader(std::string_view text, const Signature& sig)
      : text_(text), sig_(sig) {}

  ProofFile read() {
    skip();
    const std::string kw = ident();
    if (kw != "context") fail("expected 'context'");
    expect('(');
    CtxObject ctx;
    skip();
    if (peek() != ')') {
      while (true) {
        const std::size_t at = pos_;
        Sort s = ident();
        if (!sig_.has_sort(s)) fail("unknown sort '" + s + "'", at);
        ctx.push_back(std::move(s));
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    Deduction d = expr(ctx);
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return {ctx, d};
  }

 private:
  struct Item {
    std::string_view text;
    std::size_t offset;
  };

  [[noreturn]] void fail(const std::string& msg,
                         std::size_t at = ParseError::npos) const {
    const std::size_t off = at == ParseError::npos ? pos_ : at;
    throw ParseError("at offset " + std::to_string(off) + ": " + msg, off);
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  // Items between '[' and the matching ']', split at top-level ';'.
  std::vector<Item> items() {
    std::vector<Item> out;
    ++pos_;  // '['
    std::size_t start = pos_;
    int depth = 0;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated '['");
      const char c = text_[pos_];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || (c == ']' && depth > 0)) --depth;
      if ((c == ';' || c == ']') && depth == 0) {
        out.push_back({text_.substr(start, pos_ - start), start});
        ++pos_;
        if (c == ']') return out;
        start = pos_;
        continue;
      }
      ++pos_;
    }
  }

  Formula formula(const Item& item, const CtxObject& ctx) {
    try {
      return parse_formula(item.text, sig_, canonical_context(ctx));
    } catch (const ParseError& e) {
      const std::size_t off = e.offset() == ParseError::npos
                                  ? item.offset
                                  : item.offset + e.offset();
      throw ParseError("at offset " + std::to_string(off) + ": in formula: " +
                           e.what(),
                       off);
    }
  }

  Sort sort_item(const Item& item) {
    std::string s(item.text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.pop_back();
    }
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    s = s.substr(i);
    if (!sig_.has_sort(s)) fail("unknown sort '" + s + "'", item.offset);
    return s;
  }

  std::vector<Deduction> children(const CtxObject& ctx, std::size_t n,
                                  const std::string& name, std::size_t at) {
    std::vector<Deduction> out;
    skip();
    if (peek() != '(') {
      fail(name + " expects " + std::to_string(n) + " sub-deduction(s)", at);
    }
    ++pos_;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) expect(',');
      out.push_back(expr(ctx));
    }
    expect(')');
    return out;
  }

  Deduction expr(const CtxObject& ctx) {
    skip();
    const std::size_t at = pos_;
    const std::string name = ident();
    skip();
    std::vector<Item> args;
    if (peek() == '[') args = items();
    auto want_args = [&](std::size_t n) {
      if (args.size() != n) {
        fail(name + " expects " + std::to_string(n) + " argument(s)", at);
      }
    };
    auto formulas = [&](std::size_t n) {
      want_args(n);
      std::vector<Formula> out;
      for (const auto& a : args) out.push_back(formula(a, ctx));
      return out;
    };
    if (name == "Id") return Deduction::id(ctx, formulas(1)[0]);
    if (name == "Bang") return Deduction::bang(ctx, formulas(1)[0]);
    if (name == "Absurd") return Deduction::absurd(ctx, formulas(1)[0]);
    if (name == "ForallCounit") {
      return Deduction::forall_counit(ctx, formulas(1)[0]);
    }
    if (name == "ExistsUnit") return Deduction::exists_unit(ctx, formulas(1)[0]);
    if (name == "Proj1" || name == "Proj2" || name == "Inj1" || name == "Inj2" ||
        name == "Eval") {
      const auto fs = formulas(2);
      if (name == "Proj1") return Deduction::proj1(ctx, fs[0], fs[1]);
      if (name == "Proj2") return Deduction::proj2(ctx, fs[0], fs[1]);
      if (name == "Inj1") return Deduction::inj1(ctx, fs[0], fs[1]);
      if (name == "Inj2") return Deduction::inj2(ctx, fs[0], fs[1]);
      return Deduction::eval(ctx, fs[0], fs[1]);
    }
    if (name == "Comp" || name == "Pair" || name == "Case") {
      want_args(0);
      auto cs = children(ctx, 2, name, at);
      if (name == "Comp") return Deduction::comp(cs[0], cs[1]);
      if (name == "Pair") return Deduction::pair(cs[0], cs[1]);
      return Deduction::case_of(cs[0], cs[1]);
    }
    if (name == "Curry") {
      want_args(0);
      return Deduction::curry(children(ctx, 1, name, at)[0]);
    }
    if (name == "Reindex") {
      std::vector<Term> terms;
      CtxObject cod;
      for (const auto& a : args) {
        bool blank = true;
        for (char c : a.text) {
          if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        }
        if (blank) continue;
        try {
          terms.push_back(parse_term(a.text, sig_, canonical_context(ctx)));
        } catch (const ParseError& e) {
          const std::size_t off = e.offset() == ParseError::npos
                                      ? a.offset
                                      : a.offset + e.offset();
          throw ParseError("at offset " + std::to_string(off) + ": in term: " +
                               e.what(),
                           off);
        }
        cod.push_back(terms.back().sort());
      }
      TermMorphism t(ctx, cod, terms);
      return Deduction::reindex(t, children(cod, 1, name, at)[0]);
    }
    if (name == "Lambda" || name == "Mu") {
      want_args(1);
      CtxObject inner = ctx;
      inner.push_back(sort_item(args[0]));
      auto c = children(inner, 1, name, at)[0];
      return name == "Lambda" ? Deduction::lambda(c) : Deduction::mu(c);
    }
    if (name == "Refl") {
      if (ctx.size() != 1) fail("Refl lives over a single sort", at);
      if (args.size() > 1) fail("Refl takes at most one argument", at);
      if (args.size() == 1 && sort_item(args[0]) != ctx[0]) {
        fail("Refl sort does not match the context", at);
      }
      return Deduction::refl(ctx[0]);
    }
    if (name == "Xi") {
      want_args(1);
      if (ctx.size() != 2 || ctx[0] != ctx[1]) {
        fail("Xi lives over a context (B, B)", at);
      }
      const Formula t = formula(args[0], ctx);
      return Deduction::xi(children({ctx[0]}, 1, name, at)[0], t);
    }
    fail("unknown deduction constructor '" + name + "'", at);
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

ProofFile parse_proof(std::string_view text, const Signature& sig) {
  return ProofReader(text, sig).read();
}

// ---------------------------------------------------------------------------
// Derived rules

Deduction weaken(const Deduction& f, const Signature& sig, const Sort& b) {
  CtxObject ctx = typecheck(f, sig).context;
  ctx.push_back(b);
  return Deduction::reindex(drop_last(ctx), f);
}

Deduction and_swap(const CtxObject& ctx, const Formula& p, const Formula& q) {
  return Deduction::pair(Deduction::proj2(ctx, p, q),
                         Deduction::proj1(ctx, p, q));
}

Deduction modus_ponens(const Deduction& f, const Deduction& g,
                       const Signature& sig) {
  const Sequent sf = typecheck(f, sig);
  const Sequent sg = typecheck(g, sig);
  if (sg.conclusion.kind() != Formula::Kind::kImplies) {
    throw TypeError("modus ponens: " + to_string(sg.conclusion) +
                    " is not an implication");
  }
  return Deduction::comp(
      Deduction::eval(sf.context, sf.conclusion, sg.conclusion.right()),
      Deduction::pair(g, f));
}

Deduction exists_intro(const Deduction& f, const Term& witness,
                       const Signature& sig) {
  const Sequent s = typecheck(f, sig);
  if (s.context.empty()) throw TypeError("exists_intro: empty context");
  const CtxObject outer(s.context.begin(), s.context.end() - 1);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    terms.push_back(Term::var(outer[i], positional_name(i + 1)));
  }
  terms.push_back(witness);
  const TermMorphism t(outer, s.context, terms);
  return Deduction::reindex(
      t, Deduction::comp(Deduction::exists_unit(s.context, s.conclusion), f));
}

Deduction refl_at(const CtxObject& ctx, const Term& t) {
  return Deduction::reindex(TermMorphism(ctx, {t.sort()}, {t}),
                            Deduction::refl(t.sort()));
}

}  // namespace hfol
