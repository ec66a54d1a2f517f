#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnrepr/boolfn.hpp"
#include "nnrepr/rational.hpp"

namespace nnrepr {

// POS anchors claim inputs with f(X) = 1, NEG anchors inputs with f(X) = 0.
enum class Label : std::uint8_t { neg = 0, pos = 1 };

const char* to_string(Label label) noexcept;
Label parse_label(const std::string& text);

/// Parameters a construction used, kept with its output for inspection.
struct ConstructionParams {
    RationalVector scales;                         // c, or c_1..c_k
    RationalVector base_point;                     // X*
    std::vector<std::vector<std::int64_t>> directions;  // rows of W
};

struct ConstructionMeta {
    std::string construction;               // "lt", "elt", "eq", "comp", "omb", "constant", or empty
    std::optional<FunctionSpec> function;   // the function the anchors represent, if known
    std::optional<ConstructionParams> params;
};

/// Labeled anchor points, one row of the anchor matrix per anchor.
struct AnchorSet {
    std::size_t arity = 0;
    RationalMatrix anchors;
    std::vector<Label> labels;
    ConstructionMeta meta;

    std::size_t size() const noexcept { return anchors.size(); }
    std::size_t count(Label label) const;
    ResolutionBits resolution(ResolutionMode mode = ResolutionMode::symmetric) const { return res_matrix(anchors, mode); }
};

/// Throws structural unless the set is well formed: at least one anchor, every
/// row of length arity, one label per anchor, and no point carried by both a
/// POS and a NEG anchor (such a point could never be strictly closer to one side).
void check_anchor_set(const AnchorSet& anchors);

}  // namespace nnrepr
