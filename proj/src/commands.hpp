#pragma once

// Report-producing commands behind the C API. Every report is a JSON object
// with "schema": "hfol-report/1" and a "command" member; see
// docs/schemas/report.schema.json.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hfol/groupoid_model.hpp"
#include "hfol/set_model.hpp"
#include "json.hpp"

namespace hfol::cmd {

using nlohmann::json;

inline constexpr const char* kReportSchema = "hfol-report/1";

struct Options {
  std::string backend = "auto";  // auto | set | groupoid
  std::uint64_t seed = 1;
  std::size_t max_fiber = 10000;
};

struct Structure {
  std::optional<SetStructure> set;
  std::optional<GroupoidStructure> groupoid;

  const Signature& sig() const;
  const char* backend() const;
};

// Detects the backend from the document's "format".
Structure load_structure(std::string_view json_text);

json check(const Signature& sig, const std::string& formula,
           const std::string& context);
json eval(const Structure& s, const std::string& formula,
          const std::string& context, const Options& opts);
json prove_check(const Signature& sig, const std::string& proof_text,
                 const Structure* s, const Options& opts);
// With no structure, a built-in one for the selected backend.
json relations(const Structure* s, std::size_t per_family, const Options& opts);
json invariance(const GroupoidStructure& m, const GroupoidStructure& n,
                const std::string& equivalence_json,
                const std::vector<std::string>& formulas,
                const std::string& context, std::size_t pool_size,
                std::size_t pool_depth, const Options& opts);
json examples(const Options& opts);

// Whether a report records a verification failure.
bool report_failed(const json& report);

// Terminal rendering of a report.
std::string to_text(const json& report);

}  // namespace hfol::cmd
