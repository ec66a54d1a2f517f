#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnrepr/anchors.hpp"
#include "nnrepr/boolfn.hpp"
#include "nnrepr/rational.hpp"

namespace nnrepr {

/// Anchor matrix scaled to integers by the lcm D of its denominators.
///
/// For a binary input X the scaled squared distance to anchor i is
///   |D X - M_i|^2 = norms[i] + sum over set bits j of deltas[i][j],
/// with norms[i] = |M_i|^2 and deltas[i][j] = D^2 - 2 D M[i][j]. All values
/// are D^2 times the exact rational squared distance.
struct ScaledAnchorTable {
    std::size_t arity = 0;
    BigInt denominator;
    IntegerMatrix entries;
    std::vector<Label> labels;
    std::vector<BigInt> norms;
    IntegerMatrix deltas;

    static ScaledAnchorTable build(const AnchorSet& anchors);

    std::size_t size() const noexcept { return entries.size(); }
    /// Scaled squared distance computed directly from the entries.
    BigInt distance(std::size_t anchor, std::span<const std::uint8_t> x) const;
};

/// Visits all 2^arity truth-table indices in reflected Gray order. The
/// callback receives (index, coordinate): the coordinate (0-based position
/// in X) flipped to reach this index, or -1 for the first index 0.
template <class Visitor>
void enumerate_gray(std::size_t arity, Visitor&& visit) {
    visit(std::uint64_t{0}, -1);
    std::uint64_t index = 0;
    const std::uint64_t total = std::uint64_t{1} << arity;
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto bit = std::countr_zero(step);
        index ^= std::uint64_t{1} << bit;
        visit(index, static_cast<int>(arity) - 1 - bit);
    }
}

struct NearestResult {
    BigInt denominator;
    std::vector<BigInt> distances;  // scaled by denominator^2
    std::vector<std::size_t> argmin;  // every anchor attaining the minimum
};

/// Exact distances from x to every anchor; ties are kept, not broken.
NearestResult nearest(const AnchorSet& anchors, std::span<const std::uint8_t> x);

struct InputFinding {
    std::uint64_t input = 0;            // truth-table index
    std::string bits;                   // X_1 first
    bool expected = false;
    std::optional<BigInt> dpos;         // nearest POS distance, scaled; empty when no POS anchor
    std::optional<BigInt> dneg;

    friend bool operator==(const InputFinding&, const InputFinding&) = default;
};

struct VerificationReport {
    bool pass = false;
    std::uint64_t total_inputs = 0;
    std::vector<InputFinding> counterexamples;  // wrong side strictly closer; smallest inputs first
    std::vector<InputFinding> ties;             // nearest POS and NEG equidistant
    std::uint64_t counterexample_count = 0;
    std::uint64_t tie_count = 0;
    ResolutionBits resolution;
    std::size_t size = 0;
    BigInt denominator;
    bool wide_arithmetic = false;  // distances exceeded 120 bits; arbitrary precision used
    double elapsed_ms = 0.0;
};

/// Reports compare equal when everything except elapsed_ms matches.
bool same_outcome(const VerificationReport& a, const VerificationReport& b);

struct VerifyOptions {
    unsigned workers = 1;
    std::size_t max_findings = 32;  // per list
    std::size_t max_arity = nnrepr::max_arity();
};

/// Exhaustive check that every binary input has a strictly nearest anchor of
/// the label f(X). The input cube is split by fixing the top ceil(log2 workers)
/// coordinates; each slice is walked in Gray order with O(size) integer updates
/// per input. The report is identical for every worker count.
///
/// An anchor set with only one label class is evaluated like any other: every
/// input of the other value becomes a counterexample.
///
/// Throws invalid_input on arity mismatch, resource_limit above max_arity, and
/// structural for malformed anchor sets.
VerificationReport verify_parallel(const AnchorSet& anchors, const FunctionSpec& spec, const VerifyOptions& options = {});

/// Single-worker verify_parallel.
VerificationReport verify(const AnchorSet& anchors, const FunctionSpec& spec, const VerifyOptions& options = {});

/// Same as verify_parallel with the expected outputs given as a table.
VerificationReport verify_table(const AnchorSet& anchors, const TruthTable& table, const VerifyOptions& options = {});

/// Runs the production Gray-walk engine over the whole cube and returns the
/// incrementally maintained scaled distances seen at each requested input,
/// in request order. For cross-checking the engine against direct arithmetic.
std::vector<std::vector<BigInt>> incremental_distances_at(const ScaledAnchorTable& table,
                                                          std::span<const std::uint64_t> inputs);

}  // namespace nnrepr
