#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nnrepr/boolfn.hpp"
#include "nnrepr/rational.hpp"

namespace nnrepr {

inline constexpr std::size_t kMaxSeparabilityWidth = 12;

struct ThresholdWitness {
    RationalVector weights;
    Rational bias;
};

/// Outcome of the linear-separability decision. A separable table carries
/// (w, b) with w.X >= b on every 1-input and w.X <= b - 1 on every 0-input.
/// A non-separable table carries nonnegative multipliers y over the inputs
/// (indexed like the truth table) that certify infeasibility: the weighted
/// constraints sum to 0 >= 1.
struct SeparabilityCertificate {
    bool separable = false;
    std::optional<ThresholdWitness> witness;
    std::optional<RationalVector> infeasibility;
};

/// Decides whether the table is a linear threshold function, exactly.
/// Throws resource_limit above kMaxSeparabilityWidth inputs.
SeparabilityCertificate is_linear_threshold(const TruthTable& table);

/// True if the witness satisfies the margin inequalities on every input.
bool check_witness(const TruthTable& table, const ThresholdWitness& witness);

/// True if the multipliers are nonnegative and combine the margin constraints
/// into the contradiction 0 >= 1.
bool check_infeasibility(const TruthTable& table, const RationalVector& multipliers);

}  // namespace nnrepr
