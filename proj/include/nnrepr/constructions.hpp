#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nnrepr/anchors.hpp"
#include "nnrepr/boolfn.hpp"
#include "nnrepr/eq_matrix.hpp"

namespace nnrepr {

/// Two anchors for 1{w.X >= b}.
///
/// The anchors sit at X* +/- c w with X* = ((b - 1/2) / |w|^2) w on the
/// hyperplane w.x = b - 1/2, which contains no binary point, and
/// c = 1 / (2 |w|^2). The POS anchor is (b / |w|^2) w, the NEG anchor
/// ((b - 1) / |w|^2) w. Throws degenerate_function when w = 0; a constant
/// function is represented by construct_constant instead.
AnchorSet construct_lt(const std::vector<std::int64_t>& w, std::int64_t b);

/// Three collinear anchors for 1{w.X = b}: X* (POS), X* - c w and X* + c w
/// (NEG) with X* a binary solution of w.X = b and c = 1 / |w|^2. Throws
/// constant_function when no binary solution exists (the function is 0
/// everywhere) and degenerate_function when w = 0.
AnchorSet construct_elt(const std::vector<std::int64_t>& w, std::int64_t b);

/// Lexicographically smallest binary X with w.X = b, found by meet-in-the-middle
/// over subset sums of the two halves of w. Throws resource_limit above 48 inputs.
std::optional<BitVector> find_hyperplane_binary_point(const std::vector<std::int64_t>& w, std::int64_t b);

/// 2m + 1 anchors for EQ on 2n inputs from an m x n EQ matrix A. With
/// W = [A, -A], the anchors are 1/2 * 1 (POS) and 1/2 * 1 +/- c_i W_i (NEG)
/// with c_i = 1 / (2 |A_i|^2). The matrix must be proven unless
/// allow_unchecked is set; a refuted matrix is always rejected.
AnchorSet construct_eq(const EqMatrix& matrix, bool allow_unchecked = false);

/// 2n anchors for COMP on 2n inputs. The k-th anchor pair, with scales
/// c_{2k-1} < c_{2k} where c_i = 1/2 + (i-1)/(4n), acts on the k-th most
/// significant bit: POS at X* + c_{2k-1} (e_x - e_y), NEG at
/// X* - c_{2k} (e_x - e_y), X* = 1/2 * 1. Growing scales let the leading
/// differing bit win.
AnchorSet construct_comp(std::size_t n);

/// n + 1 anchors for OMB on n inputs: (1 - (i-1)/n) e_i labeled POS for odd
/// i and NEG for even i, plus the origin (NEG). For even n the origin may be
/// dropped, since the last diagonal anchor is already NEG; asking for that with
/// odd n throws invalid_flag.
AnchorSet construct_omb(std::size_t n, bool drop_zero_anchor = false);

/// The one-anchor representation of a constant function.
AnchorSet construct_constant(std::size_t arity, bool value);

}  // namespace nnrepr
