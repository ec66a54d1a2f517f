#include "nnrepr/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <thread>

#include "nnrepr/error.hpp"

namespace nnrepr {

namespace {

constexpr std::int64_t kMagnitudeLimit = std::int64_t{1} << 62;

void check_threshold_params(const std::vector<std::int64_t>& w, std::int64_t b) {
    if (w.empty()) throw Error(ErrorKind::invalid_input, "threshold function needs at least one weight");
    // Keep every partial sum of w.X - b inside int64.
    std::int64_t total = 0;
    for (auto wi : w) {
        if (wi <= -kMagnitudeLimit || wi >= kMagnitudeLimit) {
            throw Error(ErrorKind::invalid_input, "weight magnitude exceeds 2^62");
        }
        total += wi < 0 ? -wi : wi;
        if (total >= kMagnitudeLimit) throw Error(ErrorKind::invalid_input, "sum of |weights| exceeds 2^62");
    }
    if (b <= -kMagnitudeLimit || b >= kMagnitudeLimit) throw Error(ErrorKind::invalid_input, "bias magnitude exceeds 2^62");
}

std::int64_t weighted_sum(const std::vector<std::int64_t>& w, std::uint64_t index, std::size_t arity) {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < arity; ++j) {
        if ((index >> (arity - 1 - j)) & 1u) sum += w[j];
    }
    return sum;
}

// Value of the half (X or Y) starting at position `offset`, X_i weighted 2^(i-1).
std::uint64_t little_endian_half(std::uint64_t index, std::size_t arity, std::size_t offset, std::size_t n) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((index >> (arity - 1 - (offset + i))) & 1u) value |= std::uint64_t{1} << i;
    }
    return value;
}

}  // namespace

std::size_t max_arity() {
    if (const char* env = std::getenv("NNREPR_MAX_ARITY")) {
        char* end = nullptr;
        unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && value > 0 && value < 64) return value;
    }
    return kDefaultMaxArity;
}

const char* to_string(FunctionKind kind) noexcept {
    switch (kind) {
        case FunctionKind::lt: return "LT";
        case FunctionKind::elt: return "ELT";
        case FunctionKind::eq: return "EQ";
        case FunctionKind::comp: return "COMP";
        case FunctionKind::omb: return "OMB";
        case FunctionKind::table: return "TABLE";
    }
    return "?";
}

FunctionKind parse_function_kind(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (auto kind : {FunctionKind::lt, FunctionKind::elt, FunctionKind::eq, FunctionKind::comp, FunctionKind::omb,
                      FunctionKind::table}) {
        if (upper == to_string(kind)) return kind;
    }
    throw Error(ErrorKind::invalid_input, "unknown function kind '" + name + "'");
}

FunctionSpec FunctionSpec::linear_threshold(std::vector<std::int64_t> w, std::int64_t b) {
    check_threshold_params(w, b);
    FunctionSpec spec;
    spec.kind = FunctionKind::lt;
    spec.n = w.size();
    spec.weights = std::move(w);
    spec.bias = b;
    return spec;
}

FunctionSpec FunctionSpec::exact_threshold(std::vector<std::int64_t> w, std::int64_t b) {
    FunctionSpec spec = linear_threshold(std::move(w), b);
    spec.kind = FunctionKind::elt;
    return spec;
}

FunctionSpec FunctionSpec::equality(std::size_t half_width) {
    if (half_width == 0) throw Error(ErrorKind::invalid_input, "EQ half-width must be at least 1");
    FunctionSpec spec;
    spec.kind = FunctionKind::eq;
    spec.n = half_width;
    return spec;
}

FunctionSpec FunctionSpec::comparison(std::size_t half_width) {
    if (half_width == 0) throw Error(ErrorKind::invalid_input, "COMP half-width must be at least 1");
    FunctionSpec spec;
    spec.kind = FunctionKind::comp;
    spec.n = half_width;
    return spec;
}

FunctionSpec FunctionSpec::odd_max_bit(std::size_t width) {
    if (width == 0) throw Error(ErrorKind::invalid_input, "OMB width must be at least 1");
    FunctionSpec spec;
    spec.kind = FunctionKind::omb;
    spec.n = width;
    return spec;
}

FunctionSpec FunctionSpec::table(std::string bits) {
    if (bits.empty() || !std::has_single_bit(bits.size())) {
        throw Error(ErrorKind::invalid_input, "truth table length " + std::to_string(bits.size()) + " is not a power of two");
    }
    if (bits.size() < 2) throw Error(ErrorKind::invalid_input, "truth table needs at least one input bit");
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw Error(ErrorKind::invalid_input, "truth table character " + std::to_string(i + 1) + " is not 0 or 1");
        }
    }
    FunctionSpec spec;
    spec.kind = FunctionKind::table;
    spec.n = static_cast<std::size_t>(std::countr_zero(bits.size()));
    spec.bits = std::move(bits);
    return spec;
}

BitVector input_from_index(std::uint64_t index, std::size_t arity) {
    BitVector x(arity);
    for (std::size_t j = 0; j < arity; ++j) x[j] = static_cast<std::uint8_t>((index >> (arity - 1 - j)) & 1u);
    return x;
}

std::uint64_t index_from_input(std::span<const std::uint8_t> x) {
    std::uint64_t index = 0;
    for (auto bit : x) index = (index << 1) | (bit & 1u);
    return index;
}

bool evaluate_index(const FunctionSpec& spec, std::uint64_t index) {
    const std::size_t arity = spec.arity();
    if (arity > 63) throw Error(ErrorKind::resource_limit, "input index supports at most 63 bits");
    switch (spec.kind) {
        case FunctionKind::lt: return weighted_sum(spec.weights, index, arity) >= spec.bias;
        case FunctionKind::elt: return weighted_sum(spec.weights, index, arity) == spec.bias;
        case FunctionKind::eq:
            return little_endian_half(index, arity, 0, spec.n) == little_endian_half(index, arity, spec.n, spec.n);
        case FunctionKind::comp:
            return little_endian_half(index, arity, 0, spec.n) >= little_endian_half(index, arity, spec.n, spec.n);
        case FunctionKind::omb: {
            // X_1 is the top bit of index; the leftmost 1 is the highest set bit.
            if (index == 0) return false;
            auto position = arity - static_cast<std::size_t>(std::bit_width(index)) + 1;
            return position % 2 == 1;
        }
        case FunctionKind::table: return spec.bits[index] == '1';
    }
    return false;
}

bool evaluate(const FunctionSpec& spec, std::span<const std::uint8_t> x) {
    if (x.size() != spec.arity()) {
        throw Error(ErrorKind::invalid_input, "input has " + std::to_string(x.size()) + " bits, function arity is " +
                                                  std::to_string(spec.arity()));
    }
    switch (spec.kind) {
        case FunctionKind::lt:
        case FunctionKind::elt: {
            std::int64_t sum = 0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (x[j]) sum += spec.weights[j];
            }
            return spec.kind == FunctionKind::lt ? sum >= spec.bias : sum == spec.bias;
        }
        case FunctionKind::eq:
            return std::equal(x.begin(), x.begin() + spec.n, x.begin() + spec.n);
        case FunctionKind::comp:
            // X_n and Y_n are the most significant bits
            for (std::size_t i = spec.n; i-- > 0;) {
                if (x[i] != x[spec.n + i]) return x[i] > x[spec.n + i];
            }
            return true;
        case FunctionKind::omb: {
            auto first = std::find(x.begin(), x.end(), std::uint8_t{1});
            return first != x.end() && (first - x.begin()) % 2 == 0;
        }
        case FunctionKind::table: return spec.bits[index_from_input(x)] == '1';
    }
    return false;
}

TruthTable::TruthTable(std::size_t arity) : arity_(arity), words_(((std::uint64_t{1} << arity) + 63) / 64, 0) {}

TruthTable TruthTable::from_bit_string(const std::string& bits) {
    auto spec = FunctionSpec::table(bits);
    TruthTable table(spec.n);
    for (std::size_t i = 0; i < bits.size(); ++i) table.set(i, bits[i] == '1');
    return table;
}

std::uint64_t TruthTable::count_ones() const {
    std::uint64_t ones = 0;
    for (auto word : words_) ones += static_cast<std::uint64_t>(std::popcount(word));
    return ones;
}

bool TruthTable::is_constant() const {
    auto ones = count_ones();
    return ones == 0 || ones == size();
}

std::string TruthTable::to_bit_string() const {
    std::string out(size(), '0');
    for (std::uint64_t i = 0; i < size(); ++i) {
        if (get(i)) out[i] = '1';
    }
    return out;
}

std::string TruthTable::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size() / 4 + 1);
    for (std::uint64_t base = 0; base < size(); base += 4) {
        unsigned nibble = 0;
        for (unsigned k = 0; k < 4; ++k) {
            nibble <<= 1;
            if (base + k < size() && get(base + k)) nibble |= 1u;
        }
        out += digits[nibble];
    }
    return out;
}

TruthTable truth_table(const FunctionSpec& spec, unsigned workers, std::size_t max_arity_cap) {
    const std::size_t arity = spec.arity();
    if (arity > max_arity_cap) {
        throw Error(ErrorKind::resource_limit, "arity " + std::to_string(arity) + " exceeds the cap of " +
                                                   std::to_string(max_arity_cap));
    }
    TruthTable table(arity);
    const std::uint64_t total = table.size();
    // Workers own whole 64-bit words so no two threads write the same word.
    const std::uint64_t words = (total + 63) / 64;
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, words));
    auto fill = [&](std::uint64_t first_word, std::uint64_t last_word) {
        const std::uint64_t end = std::min(total, last_word * 64);
        for (std::uint64_t k = first_word * 64; k < end; ++k) {
            if (evaluate_index(spec, k)) table.set(k, true);
        }
    };
    if (workers == 1) {
        fill(0, words);
        return table;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back(fill, words * t / workers, words * (t + 1) / workers);
    }
    pool.clear();
    return table;
}

}  // namespace nnrepr
