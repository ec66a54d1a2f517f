#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nnrepr/anchors.hpp"
#include "nnrepr/boolfn.hpp"
#include "nnrepr/eq_matrix.hpp"
#include "nnrepr/separability.hpp"
#include "nnrepr/verifier.hpp"

// JSON and CSV forms of the library types. Every top-level document carries
// "schema_version": "1". Rationals are written as "num/den" strings.
namespace nnrepr::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Parses JSON text; syntax errors become FormatError with line and column.
Json parse_json(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Json to_json(const FunctionSpec& spec);
/// {"kind": "LT"|"ELT"|"EQ"|"COMP"|"OMB"|"TABLE", "n", "w", "b", "bits"}.
/// Fields not used by the kind may be omitted.
FunctionSpec function_spec_from_json(const Json& doc);

Json to_json(const AnchorSet& anchors);
/// Validates shape and labels; a ragged anchor row is a FormatError naming the row.
AnchorSet anchor_set_from_json(const Json& doc);
/// One anchor per line, coordinates then the label, with a header row.
std::string to_csv(const AnchorSet& anchors);

Json to_json(const VerificationReport& report, bool include_elapsed = true);
Json to_json(const EqValidation& result);
Json to_json(const EqMatrix& matrix);
Json to_json(const SeparabilityCertificate& certificate);
Json to_json(const TruthTable& table);

std::string ternary_to_string(const TernaryVector& x);  // "(1,-1,0)"

}  // namespace nnrepr::io
