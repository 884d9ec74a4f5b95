#pragma once

// JSON files for signatures, structures and homotopy equivalences. Schemas
// live in docs/schemas. Readers throw ParseError for malformed documents and
// for structures that fail validation.

#include <string>
#include <string_view>

#include "hfol/groupoid_model.hpp"
#include "hfol/invariance.hpp"
#include "hfol/set_model.hpp"

namespace hfol::io {

inline constexpr const char* kSetFormat = "hfol-set-structure/1";
inline constexpr const char* kGroupoidFormat = "hfol-groupoid-structure/1";
inline constexpr const char* kEquivalenceFormat = "hfol-homotopy-equivalence/1";

Signature read_signature(std::string_view json_text);
std::string write_signature(const Signature& sig);

SetStructure read_set_structure(std::string_view json_text);
std::string write_set_structure(const SetStructure& m);

GroupoidStructure read_groupoid_structure(std::string_view json_text);
std::string write_groupoid_structure(const GroupoidStructure& m);

// Shapes are checked against both structures; the laws are left to
// verify_homotopy_equivalence.
HomotopyEquivalence read_equivalence(std::string_view json_text,
                                     const GroupoidStructure& m,
                                     const GroupoidStructure& n);
std::string write_equivalence(const HomotopyEquivalence& h);

// Reads a whole file; Error(kIo) if it cannot be opened.
std::string slurp(const std::string& path);

// The "format" member of a structure document, or "" if absent.
std::string document_format(std::string_view json_text);

}  // namespace hfol::io
