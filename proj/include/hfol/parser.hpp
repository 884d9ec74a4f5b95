#pragma once

// Concrete syntax for terms, formulas and contexts. The grammar is documented
// in docs/grammar.md.

#include <string_view>

#include "hfol/syntax.hpp"

namespace hfol {

// "x:A, y:B" (possibly empty). Sorts must be declared.
Context parse_context(std::string_view text, const Signature& sig);

// Every free variable must occur in `ctx`; errors are ParseError with a byte
// offset when one is available.
Term parse_term(std::string_view text, const Signature& sig,
                const Context& ctx = {});
Formula parse_formula(std::string_view text, const Signature& sig,
                      const Context& ctx = {});

// Tokenizer shared with the proof-term reader.
struct Token {
  enum class Kind {
    kIdent,
    kLParen,
    kRParen,
    kLBracket,
    kRBracket,
    kComma,
    kDot,
    kColon,
    kSemicolon,
    kAnd,
    kOr,
    kArrow,
    kEq,
    kNot,
    kString,  // "..." without the quotes
    kEnd,
  };
  Kind kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text);

}  // namespace hfol
