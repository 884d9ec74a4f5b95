#include "hfol/parser.hpp"

#include <cctype>
#include <optional>

#include "hfol/error.hpp"

namespace hfol {

namespace {

[[noreturn]] void fail(const std::string& message, std::size_t offset) {
  throw ParseError("at offset " + std::to_string(offset) + ": " + message,
                   offset);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::size_t len) {
    out.push_back(Token{k, std::string(text.substr(i, len)), i});
    i += len;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(Token::Kind::kIdent, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      fail("identifiers may not start with a digit", i);
    }
    switch (c) {
      case '(':
        push(Token::Kind::kLParen, 1);
        continue;
      case ')':
        push(Token::Kind::kRParen, 1);
        continue;
      case '[':
        push(Token::Kind::kLBracket, 1);
        continue;
      case ']':
        push(Token::Kind::kRBracket, 1);
        continue;
      case ',':
        push(Token::Kind::kComma, 1);
        continue;
      case '.':
        push(Token::Kind::kDot, 1);
        continue;
      case ':':
        push(Token::Kind::kColon, 1);
        continue;
      case ';':
        push(Token::Kind::kSemicolon, 1);
        continue;
      case '&':
        push(Token::Kind::kAnd, 1);
        continue;
      case '|':
        push(Token::Kind::kOr, 1);
        continue;
      case '=':
        push(Token::Kind::kEq, 1);
        continue;
      case '~':
      case '!':
        push(Token::Kind::kNot, 1);
        continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Token::Kind::kArrow, 2);
          continue;
        }
        break;
      case '"': {
        std::size_t j = i + 1;
        while (j < text.size() && text[j] != '"') ++j;
        if (j == text.size()) fail("unterminated string", i);
        out.push_back(Token{Token::Kind::kString,
                            std::string(text.substr(i + 1, j - i - 1)), i});
        i = j + 1;
        continue;
      }
      default:
        break;
    }
    fail(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back(Token{Token::Kind::kEnd, "", text.size()});
  return out;
}

namespace {

// Untyped syntax tree; sorts are resolved during elaboration.
struct RawTerm {
  std::string name;
  bool call = false;  // written with parentheses
  std::vector<RawTerm> args;
  std::size_t offset = 0;
};

struct RawBinder {
  std::string name;
  std::optional<Sort> sort;
  std::size_t offset = 0;
};

struct RawFormula {
  Formula::Kind kind = Formula::Kind::kTop;
  std::vector<RawTerm> terms;        // kEq
  std::vector<RawFormula> subs;      // connectives, quantifier body
  RawBinder binder;                  // quantifiers
  bool negation = false;             // kImplies written as ~P
  std::size_t offset = 0;
};

class Reader {
 public:
  Reader(std::string_view text, const Signature& sig)
      : tokens_(tokenize(text)), sig_(sig) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool at_keyword(std::string_view w) const {
    return at(Token::Kind::kIdent) && peek().text == w;
  }
  Token next() { return tokens_[pos_++]; }
  Token expect(Token::Kind k, const char* what) {
    if (!at(k)) {
      fail(std::string("expected ") + what + ", found " + describe(peek()),
           peek().offset);
    }
    return next();
  }
  void expect_end() {
    if (!at(Token::Kind::kEnd)) {
      fail("unexpected trailing input " + describe(peek()), peek().offset);
    }
  }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::kEnd) return "end of input";
    return "'" + t.text + "'";
  }

  static bool is_keyword(const std::string& s) {
    return s == "forall" || s == "exists" || s == "T" || s == "F";
  }

  RawTerm term() {
    if (!at(Token::Kind::kIdent) || is_keyword(peek().text)) {
      fail("expected a term, found " + describe(peek()), peek().offset);
    }
    Token id = next();
    RawTerm t{id.text, false, {}, id.offset};
    if (at(Token::Kind::kLParen)) {
      next();
      t.call = true;
      if (!at(Token::Kind::kRParen)) {
        t.args.push_back(term());
        while (at(Token::Kind::kComma)) {
          next();
          t.args.push_back(term());
        }
      }
      expect(Token::Kind::kRParen, "')'");
    }
    return t;
  }

  RawFormula formula() { return implication(); }

  RawFormula implication() {
    RawFormula lhs = disjunction();
    if (at(Token::Kind::kArrow)) {
      std::size_t off = next().offset;
      RawFormula rhs = implication();
      return binary(Formula::Kind::kImplies, std::move(lhs), std::move(rhs),
                    off);
    }
    return lhs;
  }

  RawFormula disjunction() {
    RawFormula lhs = conjunction();
    while (at(Token::Kind::kOr)) {
      std::size_t off = next().offset;
      lhs = binary(Formula::Kind::kOr, std::move(lhs), conjunction(), off);
    }
    return lhs;
  }

  RawFormula conjunction() {
    RawFormula lhs = unary();
    while (at(Token::Kind::kAnd)) {
      std::size_t off = next().offset;
      lhs = binary(Formula::Kind::kAnd, std::move(lhs), unary(), off);
    }
    return lhs;
  }

  RawFormula unary() {
    if (at(Token::Kind::kNot)) {
      std::size_t off = next().offset;
      RawFormula bot;
      bot.kind = Formula::Kind::kBot;
      bot.offset = off;
      RawFormula f =
          binary(Formula::Kind::kImplies, unary(), std::move(bot), off);
      f.negation = true;
      return f;
    }
    if (at_keyword("forall") || at_keyword("exists")) return quantified();
    return atom();
  }

  RawFormula quantified() {
    Token q = next();
    const auto kind = q.text == "forall" ? Formula::Kind::kForall
                                         : Formula::Kind::kExists;
    std::vector<RawBinder> binders;
    do {
      if (at(Token::Kind::kComma)) next();
      Token id = expect(Token::Kind::kIdent, "a bound variable");
      if (is_keyword(id.text)) fail("keyword used as variable", id.offset);
      RawBinder b{id.text, std::nullopt, id.offset};
      if (at(Token::Kind::kColon)) {
        next();
        Token s = expect(Token::Kind::kIdent, "a sort name");
        if (!sig_.has_sort(s.text)) {
          fail("unknown sort '" + s.text + "'", s.offset);
        }
        b.sort = s.text;
      }
      binders.push_back(std::move(b));
    } while (at(Token::Kind::kIdent) || at(Token::Kind::kComma));
    expect(Token::Kind::kDot, "'.' after quantifier binders");
    RawFormula body = formula();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      RawFormula f;
      f.kind = kind;
      f.binder = *it;
      f.offset = q.offset;
      f.subs.push_back(std::move(body));
      body = std::move(f);
    }
    return body;
  }

  RawFormula atom() {
    RawFormula f;
    f.offset = peek().offset;
    if (at_keyword("T")) {
      next();
      f.kind = Formula::Kind::kTop;
      return f;
    }
    if (at_keyword("F")) {
      next();
      f.kind = Formula::Kind::kBot;
      return f;
    }
    if (at(Token::Kind::kLParen)) {
      next();
      RawFormula inner = formula();
      expect(Token::Kind::kRParen, "')'");
      return inner;
    }
    RawTerm lhs = term();
    expect(Token::Kind::kEq, "'=' in atomic formula");
    RawTerm rhs = term();
    f.kind = Formula::Kind::kEq;
    f.terms = {std::move(lhs), std::move(rhs)};
    return f;
  }

 private:
  static RawFormula binary(Formula::Kind kind, RawFormula a, RawFormula b,
                           std::size_t off) {
    RawFormula f;
    f.kind = kind;
    f.offset = off;
    f.subs.push_back(std::move(a));
    f.subs.push_back(std::move(b));
    return f;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

// Elaboration: resolves identifiers against bound variables (innermost
// first), then the context, then nullary function symbols.
class Elaborator {
 public:
  Elaborator(const Signature& sig, const Context& ctx) : sig_(sig), ctx_(ctx) {
    for (const auto& v : ctx.vars()) {
      if (!sig.has_sort(v.sort)) {
        throw_parse("context variable '" + v.name + "' has unknown sort '" +
                    v.sort + "'");
      }
    }
  }

  Term term(const RawTerm& t) {
    if (!t.call) {
      if (auto v = lookup_variable(t.name, t.offset)) return Term::var(*v);
    }
    const FunctionSymbol* f = sig_.find_function(t.name);
    if (f == nullptr) {
      if (t.call) fail("unknown function symbol '" + t.name + "'", t.offset);
      fail("free variable '" + t.name + "' is not in context " +
               to_string(ctx_),
           t.offset);
    }
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(term(a));
    if (args.size() != f->arity.size()) {
      fail("function symbol '" + f->name + "' expects " +
               std::to_string(f->arity.size()) + " argument(s), got " +
               std::to_string(args.size()),
           t.offset);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].sort() != f->arity[i]) {
        fail("sort mismatch: argument " + std::to_string(i + 1) + " of '" +
                 f->name + "' has sort " + args[i].sort() + ", expected " +
                 f->arity[i],
             t.args[i].offset);
      }
    }
    return Term::app(*f, std::move(args));
  }

  Formula formula(const RawFormula& f) {
    switch (f.kind) {
      case Formula::Kind::kTop:
        return Formula::top();
      case Formula::Kind::kBot:
        return Formula::bot();
      case Formula::Kind::kEq: {
        Term l = term(f.terms[0]);
        Term r = term(f.terms[1]);
        if (l.sort() != r.sort()) {
          fail("sort mismatch in equation: left side has sort " + l.sort() +
                   ", right side has sort " + r.sort(),
               f.terms[1].offset);
        }
        return Formula::eq(std::move(l), std::move(r));
      }
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
      case Formula::Kind::kImplies:
        return Formula::binary(f.kind, formula(f.subs[0]),
                               formula(f.subs[1]));
      case Formula::Kind::kForall:
      case Formula::Kind::kExists: {
        Sort sort = f.binder.sort ? *f.binder.sort : infer(f);
        scope_.push_back(Variable{sort, f.binder.name});
        Formula body = formula(f.subs[0]);
        scope_.pop_back();
        return Formula::quantifier(f.kind, Variable{sort, f.binder.name},
                                   std::move(body));
      }
    }
    fail("unsupported formula", f.offset);
  }

 private:
  std::optional<Variable> lookup_variable(const std::string& name,
                                          std::size_t offset) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return *it;
    }
    std::optional<Variable> found;
    for (const auto& v : ctx_.vars()) {
      if (v.name != name) continue;
      if (found) {
        fail("variable '" + name + "' is ambiguous in context " +
                 to_string(ctx_),
             offset);
      }
      found = v;
    }
    return found;
  }

  // Sort of a raw term when it can be read off without inference.
  std::optional<Sort> known_sort(const RawTerm& t,
                                 const std::vector<std::string>& hidden) const {
    if (!t.call) {
      for (const auto& h : hidden) {
        if (h == t.name) return std::nullopt;
      }
      if (auto v = lookup_variable(t.name, t.offset)) return v->sort;
    }
    if (const auto* f = sig_.find_function(t.name)) return f->codomain;
    return std::nullopt;
  }

  // Searches `t` for uses of the bare identifier `name` in sorted positions.
  std::optional<Sort> scan_term(const RawTerm& t, const std::string& name,
                                const std::vector<std::string>& hidden) const {
    if (!t.call) return std::nullopt;
    const FunctionSymbol* f = sig_.find_function(t.name);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const auto& a = t.args[i];
      if (!a.call && a.name == name && f != nullptr && i < f->arity.size()) {
        return f->arity[i];
      }
      if (auto s = scan_term(a, name, hidden)) return s;
    }
    return std::nullopt;
  }

  // `hidden` lists inner binders (including `name` itself for the outermost
  // call), whose sorts are not known while inferring.
  std::optional<Sort> scan(const RawFormula& f, const std::string& name,
                           std::vector<std::string>& hidden) const {
    switch (f.kind) {
      case Formula::Kind::kEq: {
        const auto& l = f.terms[0];
        const auto& r = f.terms[1];
        if (!l.call && l.name == name) {
          if (auto s = known_sort(r, hidden)) return s;
        }
        if (!r.call && r.name == name) {
          if (auto s = known_sort(l, hidden)) return s;
        }
        if (auto s = scan_term(l, name, hidden)) return s;
        return scan_term(r, name, hidden);
      }
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
      case Formula::Kind::kImplies: {
        if (auto s = scan(f.subs[0], name, hidden)) return s;
        return scan(f.subs[1], name, hidden);
      }
      case Formula::Kind::kForall:
      case Formula::Kind::kExists: {
        if (f.binder.name == name) return std::nullopt;  // shadowed
        hidden.push_back(f.binder.name);
        auto s = scan(f.subs[0], name, hidden);
        hidden.pop_back();
        return s;
      }
      default:
        return std::nullopt;
    }
  }

  Sort infer(const RawFormula& q) const {
    std::vector<std::string> hidden{q.binder.name};
    if (auto s = scan(q.subs[0], q.binder.name, hidden)) return *s;
    if (sig_.sorts().size() == 1) return sig_.sorts().front();
    fail("cannot infer the sort of bound variable '" + q.binder.name +
             "'; annotate it as " + q.binder.name + ":Sort",
         q.binder.offset);
  }

  const Signature& sig_;
  const Context& ctx_;
  std::vector<Variable> scope_;
};

}  // namespace

Context parse_context(std::string_view text, const Signature& sig) {
  Reader r(text, sig);
  std::vector<Variable> vars;
  while (!r.at(Token::Kind::kEnd)) {
    if (!vars.empty()) r.expect(Token::Kind::kComma, "','");
    Token id = r.expect(Token::Kind::kIdent, "a variable name");
    r.expect(Token::Kind::kColon, "':'");
    Token s = r.expect(Token::Kind::kIdent, "a sort name");
    if (!sig.has_sort(s.text)) fail("unknown sort '" + s.text + "'", s.offset);
    for (const auto& v : vars) {
      if (v.name == id.text && v.sort == s.text) {
        fail("context variable '" + id.text + "' repeated", id.offset);
      }
    }
    vars.push_back(Variable{s.text, id.text});
  }
  return Context(std::move(vars));
}

Term parse_term(std::string_view text, const Signature& sig,
                const Context& ctx) {
  Reader r(text, sig);
  RawTerm raw = r.term();
  r.expect_end();
  return Elaborator(sig, ctx).term(raw);
}

Formula parse_formula(std::string_view text, const Signature& sig,
                      const Context& ctx) {
  Reader r(text, sig);
  RawFormula raw = r.formula();
  r.expect_end();
  return Elaborator(sig, ctx).formula(raw);
}

}  // namespace hfol
