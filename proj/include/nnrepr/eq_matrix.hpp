#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnrepr/rational.hpp"

namespace nnrepr {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using TernaryVector = std::vector<std::int8_t>;  // entries in {-1, 0, 1}

enum class EqStatus { unchecked, proven, refuted };
const char* to_string(EqStatus status) noexcept;

/// Integer matrix whose kernel is claimed to contain no nonzero {-1,0,1}
/// vector. `status` records what has been established about that claim.
struct EqMatrix {
    IntMatrix rows;
    EqStatus status = EqStatus::unchecked;
    std::optional<TernaryVector> witness;  // set iff status == refuted

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t column_count() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

inline constexpr std::size_t kMaxEqValidationColumns = 40;

struct EqValidationOptions {
    unsigned workers = 1;
    std::size_t max_columns = kMaxEqValidationColumns;
    // Upper bound on int64 entries stored for the half-assignment table.
    std::uint64_t max_table_entries = std::uint64_t{1} << 26;
};

struct EqValidation {
    EqStatus verdict = EqStatus::unchecked;
    std::optional<TernaryVector> witness;
    std::uint64_t assignments = 0;  // half-assignments enumerated, both sides
    double elapsed_ms = 0.0;
};

/// Proves or refutes the EQ-matrix property by meet-in-the-middle over the
/// column halves. Witnesses are normalized so their first nonzero entry is +1
/// and the search is deterministic, so the witness is independent of `workers`.
/// Throws invalid_input on an empty or ragged matrix and resource_limit when
/// the width or the table size exceeds the options.
EqValidation validate_eq_matrix(const IntMatrix& matrix, const EqValidationOptions& options = {});

/// Returns a copy of `matrix` with status and witness filled in.
EqMatrix validated(EqMatrix matrix, const EqValidationOptions& options = {});

enum class EqFamily { identity, pow2_row };
EqFamily parse_eq_family(const std::string& name);  // "identity", "pow2" or "pow2_row"

/// identity: the n x n identity. pow2_row: the single row [1, 2, 4, ..., 2^(n-1)].
/// Both are EQ matrices; they are re-validated when n <= 16.
EqMatrix builtin_matrix(EqFamily family, std::size_t n);

/// Parses whitespace-separated integers, one row per line (blank lines and
/// '#' comments skipped), or the JSON form {"rows": [[...], ...]}. The result
/// is unchecked. Throws FormatError with the offending row and column.
EqMatrix load_matrix(std::string_view text);

/// Squared Euclidean norm of every row, i.e. diag(A A^T).
std::vector<BigInt> row_norms(const IntMatrix& matrix);

/// A x for a {-1,0,1} vector x.
std::vector<BigInt> multiply(const IntMatrix& matrix, const TernaryVector& x);

}  // namespace nnrepr
