#include "nnrepr/constructions.hpp"

#include <bit>
#include <unordered_map>

#include "nnrepr/error.hpp"

namespace nnrepr {

namespace {

BigInt squared_norm(const std::vector<std::int64_t>& v) {
    BigInt sum = 0;
    for (auto x : v) sum += BigInt(x) * x;
    return sum;
}

RationalVector add_scaled(const RationalVector& base, const Rational& scale, const std::vector<std::int64_t>& direction) {
    RationalVector out = base;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (direction[j] != 0) out[j] += scale * Rational(direction[j]);
    }
    return out;
}

RationalVector halves(std::size_t arity) { return RationalVector(arity, Rational(1, 2)); }

void require_nonzero(const std::vector<std::int64_t>& w) {
    for (auto x : w) {
        if (x != 0) return;
    }
    throw Error(ErrorKind::degenerate_function,
                "weight vector is zero, so the function is constant; use the 1-anchor constant representation");
}

}  // namespace

AnchorSet construct_lt(const std::vector<std::int64_t>& w, std::int64_t b) {
    auto spec = FunctionSpec::linear_threshold(w, b);
    require_nonzero(w);
    const BigInt norm = squared_norm(w);
    const Rational c(1, 2 * norm);
    const Rational offset(2 * BigInt(b) - 1, 2 * norm);  // (b - 1/2) / |w|^2

    RationalVector xstar(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) xstar[j] = offset * Rational(w[j]);

    AnchorSet set;
    set.arity = w.size();
    set.anchors = {add_scaled(xstar, c, w), add_scaled(xstar, -c, w)};
    set.labels = {Label::pos, Label::neg};
    set.meta = {"lt", std::move(spec), ConstructionParams{{c}, std::move(xstar), {w}}};
    return set;
}

std::optional<BitVector> find_hyperplane_binary_point(const std::vector<std::int64_t>& w, std::int64_t b) {
    const std::size_t n = w.size();
    if (n > 48) throw Error(ErrorKind::resource_limit, "hyperplane point search supports at most 48 inputs");
    if (n == 0) return b == 0 ? std::optional<BitVector>(BitVector{}) : std::nullopt;
    FunctionSpec::linear_threshold(w, b);  // magnitude checks keep all sums in int64

    // Positions [0, left) form the high half; numeric order of an assignment
    // word equals lexicographic order of the bits it encodes.
    const std::size_t left = n / 2;
    const std::size_t right = n - left;

    // Smallest right-half word reaching each sum. Walk in Gray order so each
    // step adds or removes one weight.
    std::unordered_map<std::int64_t, std::uint64_t> right_sums;
    right_sums.reserve(std::size_t{1} << right);
    std::int64_t sum = 0;
    std::uint64_t word = 0;
    const std::uint64_t right_count = std::uint64_t{1} << right;
    for (std::uint64_t step = 0; step < right_count; ++step) {
        if (step > 0) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(step));
            word ^= std::uint64_t{1} << bit;
            const std::int64_t weight = w[left + (right - 1 - bit)];
            sum += (word >> bit) & 1u ? weight : -weight;
        }
        auto [it, inserted] = right_sums.try_emplace(sum, word);
        if (!inserted && word < it->second) it->second = word;
    }

    const std::uint64_t left_count = std::uint64_t{1} << left;
    for (std::uint64_t high = 0; high < left_count; ++high) {
        std::int64_t high_sum = 0;
        for (std::size_t t = 0; t < left; ++t) {
            if ((high >> (left - 1 - t)) & 1u) high_sum += w[t];
        }
        auto it = right_sums.find(b - high_sum);
        if (it == right_sums.end()) continue;
        BitVector x(n);
        for (std::size_t t = 0; t < left; ++t) x[t] = static_cast<std::uint8_t>((high >> (left - 1 - t)) & 1u);
        for (std::size_t t = 0; t < right; ++t) x[left + t] = static_cast<std::uint8_t>((it->second >> (right - 1 - t)) & 1u);
        return x;
    }
    return std::nullopt;
}

AnchorSet construct_elt(const std::vector<std::int64_t>& w, std::int64_t b) {
    auto spec = FunctionSpec::exact_threshold(w, b);
    require_nonzero(w);
    auto point = find_hyperplane_binary_point(w, b);
    if (!point) {
        throw Error(ErrorKind::constant_function,
                    "no binary X satisfies w.X = b, so the function is constant 0; use the 1-anchor constant representation");
    }
    const Rational c(1, squared_norm(w));
    RationalVector xstar(point->begin(), point->end());

    AnchorSet set;
    set.arity = w.size();
    set.anchors = {xstar, add_scaled(xstar, -c, w), add_scaled(xstar, c, w)};
    set.labels = {Label::pos, Label::neg, Label::neg};
    set.meta = {"elt", std::move(spec), ConstructionParams{{c}, std::move(xstar), {w}}};
    return set;
}

AnchorSet construct_eq(const EqMatrix& matrix, bool allow_unchecked) {
    const std::size_t m = matrix.row_count();
    const std::size_t n = matrix.column_count();
    if (m == 0 || n == 0) throw Error(ErrorKind::invalid_input, "EQ matrix must have at least one row and one column");
    for (std::size_t i = 0; i < m; ++i) {
        if (matrix.rows[i].size() != n) {
            throw Error(ErrorKind::invalid_matrix, "EQ matrix row " + std::to_string(i + 1) + " is ragged");
        }
    }
    if (matrix.status == EqStatus::refuted) {
        std::string witness;
        if (matrix.witness) {
            for (auto v : *matrix.witness) witness += (witness.empty() ? "" : ",") + std::to_string(v);
            witness = ": A x = 0 for x = (" + witness + ")";
        }
        throw Error(ErrorKind::invalid_matrix, "matrix is refuted as an EQ matrix" + witness);
    }
    if (matrix.status == EqStatus::unchecked && !allow_unchecked) {
        throw Error(ErrorKind::invalid_matrix, "EQ matrix has not been validated");
    }
    const auto norms = row_norms(matrix.rows);
    for (std::size_t i = 0; i < m; ++i) {
        if (norms[i].is_zero()) {
            throw Error(ErrorKind::invalid_matrix, "EQ matrix row " + std::to_string(i + 1) + " is all zero");
        }
    }

    const std::size_t arity = 2 * n;
    ConstructionParams params;
    params.base_point = halves(arity);

    AnchorSet set;
    set.arity = arity;
    set.anchors.push_back(params.base_point);
    set.labels.push_back(Label::pos);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::int64_t> direction(arity);
        for (std::size_t j = 0; j < n; ++j) {
            direction[j] = matrix.rows[i][j];
            direction[n + j] = -matrix.rows[i][j];
        }
        Rational c(1, 2 * norms[i]);
        set.anchors.push_back(add_scaled(params.base_point, c, direction));
        set.anchors.push_back(add_scaled(params.base_point, -c, direction));
        set.labels.push_back(Label::neg);
        set.labels.push_back(Label::neg);
        params.scales.push_back(std::move(c));
        params.directions.push_back(std::move(direction));
    }
    set.meta = {"eq", FunctionSpec::equality(n), std::move(params)};
    return set;
}

AnchorSet construct_comp(std::size_t n) {
    auto spec = FunctionSpec::comparison(n);  // rejects n = 0
    const std::size_t arity = 2 * n;
    ConstructionParams params;
    params.base_point = halves(arity);
    for (std::size_t i = 1; i <= 2 * n; ++i) params.scales.emplace_back(BigInt(2 * n + i - 1), BigInt(4 * n));

    AnchorSet set;
    set.arity = arity;
    for (std::size_t k = 1; k <= n; ++k) {
        // X_k-th most significant bit: X_{n-k+1} at 0-based n-k, its Y partner at 2n-k.
        std::vector<std::int64_t> direction(arity);
        direction[n - k] = 1;
        direction[2 * n - k] = -1;
        set.anchors.push_back(add_scaled(params.base_point, params.scales[2 * k - 2], direction));
        set.anchors.push_back(add_scaled(params.base_point, -params.scales[2 * k - 1], direction));
        set.labels.push_back(Label::pos);
        set.labels.push_back(Label::neg);
        params.directions.push_back(std::move(direction));
    }
    set.meta = {"comp", std::move(spec), std::move(params)};
    return set;
}

AnchorSet construct_omb(std::size_t n, bool drop_zero_anchor) {
    auto spec = FunctionSpec::odd_max_bit(n);  // rejects n = 0
    if (drop_zero_anchor && n % 2 == 1) {
        throw Error(ErrorKind::invalid_flag, "the zero anchor can only be dropped for even n (a_n is POS for odd n)");
    }
    ConstructionParams params;
    AnchorSet set;
    set.arity = n;
    for (std::size_t i = 1; i <= n; ++i) {
        Rational diagonal(BigInt(n - i + 1), BigInt(n));  // 1 - (i-1)/n
        RationalVector row(n);
        row[i - 1] = diagonal;
        set.anchors.push_back(std::move(row));
        set.labels.push_back(i % 2 == 1 ? Label::pos : Label::neg);
        params.scales.push_back(std::move(diagonal));
    }
    if (!drop_zero_anchor) {
        set.anchors.emplace_back(n);
        set.labels.push_back(Label::neg);
    }
    set.meta = {"omb", std::move(spec), std::move(params)};
    return set;
}

AnchorSet construct_constant(std::size_t arity, bool value) {
    if (arity == 0) throw Error(ErrorKind::invalid_input, "arity must be at least 1");
    AnchorSet set;
    set.arity = arity;
    set.anchors = {RationalVector(arity)};
    set.labels = {value ? Label::pos : Label::neg};
    set.meta.construction = "constant";
    if (arity <= 16) set.meta.function = FunctionSpec::table(std::string(std::size_t{1} << arity, value ? '1' : '0'));
    return set;
}

}  // namespace nnrepr
