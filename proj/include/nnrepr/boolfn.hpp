#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nnrepr {

// One byte per input bit, each 0 or 1. Position 0 is X_1.
using BitVector = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultMaxArity = 24;

/// Arity cap for truth tables and exhaustive verification. NNREPR_MAX_ARITY
/// overrides the default of 24.
std::size_t max_arity();

enum class FunctionKind { lt, elt, eq, comp, omb, table };

const char* to_string(FunctionKind kind) noexcept;
FunctionKind parse_function_kind(const std::string& name);  // case-insensitive

/// Symbolic Boolean function.
///
/// Input conventions (positions are 1-based as in X_1 ... X_arity):
///  - LT   1{w.X >= b}
///  - ELT  1{w.X = b}
///  - EQ   1{X = Y}, COMP 1{X >= Y}: input is (X_1..X_n, Y_1..Y_n) and X_i
///         carries weight 2^(i-1), so X_1 is the least significant bit.
///  - OMB  1 iff the leftmost 1 sits at an odd position; X_1 is the most
///         significant bit. OMB(0) = 0.
///  - TABLE explicit outputs, one char per input index.
///
/// Use the factory functions; they enforce the field invariants.
struct FunctionSpec {
    FunctionKind kind = FunctionKind::table;
    std::size_t n = 0;                  // width for LT/ELT/OMB/TABLE, half-width for EQ/COMP
    std::vector<std::int64_t> weights;  // LT/ELT only
    std::int64_t bias = 0;              // LT/ELT only
    std::string bits;                   // TABLE only, length 2^n over {'0','1'}

    std::size_t arity() const noexcept { return kind == FunctionKind::eq || kind == FunctionKind::comp ? 2 * n : n; }

    static FunctionSpec linear_threshold(std::vector<std::int64_t> w, std::int64_t b);
    static FunctionSpec exact_threshold(std::vector<std::int64_t> w, std::int64_t b);
    static FunctionSpec equality(std::size_t half_width);
    static FunctionSpec comparison(std::size_t half_width);
    static FunctionSpec odd_max_bit(std::size_t width);
    static FunctionSpec table(std::string bits);

    friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

/// Exact value of the function on x. Throws invalid_input if x.size() != arity.
bool evaluate(const FunctionSpec& spec, std::span<const std::uint8_t> x);

/// Same as evaluate, with the input given as its truth-table index: X_1 is the
/// most significant bit of index.
bool evaluate_index(const FunctionSpec& spec, std::uint64_t index);

/// Input vector for a truth-table index (X_1 = most significant bit).
BitVector input_from_index(std::uint64_t index, std::size_t arity);
std::uint64_t index_from_input(std::span<const std::uint8_t> x);

/// Packed table of 2^arity outputs. Index k holds f(input_from_index(k)).
class TruthTable {
public:
    TruthTable() = default;
    explicit TruthTable(std::size_t arity);

    static TruthTable from_bit_string(const std::string& bits);

    std::size_t arity() const noexcept { return arity_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << arity_; }

    bool get(std::uint64_t index) const noexcept { return (words_[index >> 6] >> (index & 63)) & 1u; }
    void set(std::uint64_t index, bool value) noexcept {
        auto mask = std::uint64_t{1} << (index & 63);
        if (value) {
            words_[index >> 6] |= mask;
        } else {
            words_[index >> 6] &= ~mask;
        }
    }

    bool is_constant() const;
    std::uint64_t count_ones() const;

    /// '0'/'1' per index, index 0 first.
    std::string to_bit_string() const;
    /// Four indices per hex digit, lowest index in the digit's most significant
    /// bit, so the hex digits read like the bit string. Short tables are padded
    /// with zero bits.
    std::string to_hex() const;

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    std::size_t arity_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Name of the index order used by TruthTable, as written in exported files.
inline constexpr const char* kTruthTableOrder = "x1-msb";

/// Tabulates spec over all inputs. Ranges of indices are split across
/// `workers` threads; the result does not depend on the worker count.
/// Throws resource_limit when arity exceeds max_arity_cap.
TruthTable truth_table(const FunctionSpec& spec, unsigned workers = 1, std::size_t max_arity_cap = max_arity());

}  // namespace nnrepr
