#include "nnrepr/eq_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <limits>
#include <thread>

#include <json.hpp>

#include "nnrepr/error.hpp"

namespace nnrepr {

namespace {

constexpr std::int64_t kSumLimit = std::int64_t{1} << 62;

// Digit d of a ternary code encodes the value {0, 1, -1}[d].
constexpr std::int8_t kDigitValue[3] = {0, 1, -1};

std::uint64_t power_of_three(std::size_t e) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < e; ++i) p *= 3;
    return p;
}

// Sum over columns [first, first + width) of value(code digit) * column, for every row.
class HalfEnumerator {
public:
    HalfEnumerator(const IntMatrix& matrix, std::size_t first, std::size_t width, std::uint64_t start_code)
        : matrix_(matrix), first_(first), width_(width), digits_(width), sums_(matrix.size(), 0) {
        std::uint64_t code = start_code;
        for (std::size_t t = 0; t < width_; ++t) {
            digits_[t] = static_cast<std::uint8_t>(code % 3);
            code /= 3;
            add_column(t, kDigitValue[digits_[t]]);
        }
    }

    const std::vector<std::int64_t>& sums() const noexcept { return sums_; }

    void advance() {
        for (std::size_t t = 0; t < width_; ++t) {
            const auto old = digits_[t];
            const auto next = static_cast<std::uint8_t>((old + 1) % 3);
            digits_[t] = next;
            add_column(t, kDigitValue[next] - kDigitValue[old]);
            if (next != 0) return;
        }
    }

private:
    void add_column(std::size_t t, int delta) {
        if (delta == 0) return;
        for (std::size_t i = 0; i < matrix_.size(); ++i) sums_[i] += delta * matrix_[i][first_ + t];
    }

    const IntMatrix& matrix_;
    std::size_t first_;
    std::size_t width_;
    std::vector<std::uint8_t> digits_;
    std::vector<std::int64_t> sums_;
};

std::uint64_t hash_sums(const std::int64_t* sums, std::size_t m, bool negate) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < m; ++i) {
        auto v = static_cast<std::uint64_t>(negate ? -sums[i] : sums[i]);
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void decode(std::uint64_t code, std::size_t width, TernaryVector& out, std::size_t offset) {
    for (std::size_t t = 0; t < width; ++t) {
        out[offset + t] = kDigitValue[code % 3];
        code /= 3;
    }
}

void normalize_sign(TernaryVector& x) {
    for (auto v : x) {
        if (v == 0) continue;
        if (v < 0) {
            for (auto& e : x) e = static_cast<std::int8_t>(-e);
        }
        return;
    }
}

void check_shape(const IntMatrix& matrix) {
    if (matrix.empty() || matrix.front().empty()) throw Error(ErrorKind::invalid_input, "matrix is empty");
    const auto n = matrix.front().size();
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != n) {
            throw Error(ErrorKind::invalid_input, "ragged matrix: row " + std::to_string(i + 1) + " has " +
                                                      std::to_string(matrix[i].size()) + " entries, expected " +
                                                      std::to_string(n));
        }
        std::int64_t total = 0;
        for (auto v : matrix[i]) {
            if (v <= -kSumLimit || v >= kSumLimit) throw Error(ErrorKind::invalid_input, "matrix entry magnitude exceeds 2^62");
            total += v < 0 ? -v : v;
            if (total >= kSumLimit) throw Error(ErrorKind::invalid_input, "row " + std::to_string(i + 1) + " |entries| sum exceeds 2^62");
        }
    }
}

}  // namespace

const char* to_string(EqStatus status) noexcept {
    switch (status) {
        case EqStatus::unchecked: return "unchecked";
        case EqStatus::proven: return "proven";
        case EqStatus::refuted: return "refuted";
    }
    return "?";
}

std::vector<BigInt> row_norms(const IntMatrix& matrix) {
    std::vector<BigInt> norms;
    norms.reserve(matrix.size());
    for (const auto& row : matrix) {
        BigInt sum = 0;
        for (auto v : row) sum += BigInt(v) * v;
        norms.push_back(std::move(sum));
    }
    return norms;
}

std::vector<BigInt> multiply(const IntMatrix& matrix, const TernaryVector& x) {
    std::vector<BigInt> out;
    out.reserve(matrix.size());
    for (const auto& row : matrix) {
        BigInt sum = 0;
        for (std::size_t j = 0; j < row.size() && j < x.size(); ++j) {
            if (x[j] != 0) sum += BigInt(row[j]) * x[j];
        }
        out.push_back(std::move(sum));
    }
    return out;
}

EqValidation validate_eq_matrix(const IntMatrix& matrix, const EqValidationOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    check_shape(matrix);
    const std::size_t m = matrix.size();
    const std::size_t n = matrix.front().size();
    if (n > options.max_columns) {
        throw Error(ErrorKind::resource_limit, "EQ-matrix validation supports at most " +
                                                   std::to_string(options.max_columns) + " columns, got " +
                                                   std::to_string(n));
    }
    // The trailing n/2 columns form the stored half ("left" below); the
    // leading columns are scanned against it.
    const std::size_t left = n / 2;
    const std::size_t right = n - left;
    const std::uint64_t left_count = power_of_three(left);
    const std::uint64_t right_count = power_of_three(right);
    if (left_count * m > options.max_table_entries) {
        throw Error(ErrorKind::resource_limit, "half-assignment table of " + std::to_string(left_count) + " x " +
                                                   std::to_string(m) + " entries exceeds the memory budget");
    }

    // Left table: partial sums by code, and (hash, code) pairs sorted for lookup.
    std::vector<std::int64_t> left_sums(left_count * m);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> index(left_count);
    {
        HalfEnumerator walk(matrix, right, left, 0);
        for (std::uint64_t code = 0; code < left_count; ++code) {
            std::copy(walk.sums().begin(), walk.sums().end(), left_sums.begin() + static_cast<std::ptrdiff_t>(code * m));
            index[code] = {hash_sums(&left_sums[code * m], m, false), code};
            walk.advance();
        }
    }
    std::sort(index.begin(), index.end());

    // Smallest left code whose sums are the negation of `sums`, skipping code 0
    // when the right side is also all zero.
    auto match = [&](const std::vector<std::int64_t>& sums, bool right_is_zero) -> std::uint64_t {
        const auto h = hash_sums(sums.data(), m, true);
        auto it = std::lower_bound(index.begin(), index.end(), std::pair<std::uint64_t, std::uint64_t>{h, 0});
        for (; it != index.end() && it->first == h; ++it) {
            if (right_is_zero && it->second == 0) continue;
            const std::int64_t* candidate = &left_sums[it->second * m];
            bool equal = true;
            for (std::size_t i = 0; i < m && equal; ++i) equal = candidate[i] == -sums[i];
            if (equal) return it->second;
        }
        return left_count;
    };

    // Scan right codes in increasing order; the first hit defines the witness.
    // Workers take contiguous slices and stop once a lower slice has a hit.
    constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best_right{kNone};
    std::atomic<std::uint64_t> scanned{0};
    std::vector<std::uint64_t> slice_left;
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(options.workers, 1, right_count));
    slice_left.assign(workers, left_count);

    auto scan = [&](unsigned slice) {
        const std::uint64_t begin = right_count * slice / workers;
        const std::uint64_t end = right_count * (slice + 1) / workers;
        HalfEnumerator walk(matrix, 0, right, begin);
        std::uint64_t local = 0;
        for (std::uint64_t code = begin; code < end; ++code, walk.advance()) {
            ++local;
            if ((local & 1023) == 0 && best_right.load(std::memory_order_relaxed) < begin) break;
            auto hit = match(walk.sums(), code == 0);
            if (hit == left_count) continue;
            slice_left[slice] = hit;
            auto current = best_right.load();
            while (code < current && !best_right.compare_exchange_weak(current, code)) {
            }
            break;
        }
        scanned += local;
    };
    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(scan, t);
    }

    EqValidation result;
    result.assignments = left_count + scanned.load();
    const auto right_code = best_right.load();
    if (right_code == kNone) {
        result.verdict = EqStatus::proven;
    } else {
        unsigned slice = 0;
        while (!(right_count * (slice + 1) / workers > right_code)) ++slice;
        TernaryVector witness(n);
        decode(right_code, right, witness, 0);
        decode(slice_left[slice], left, witness, right);
        normalize_sign(witness);
        for (const auto& v : multiply(matrix, witness)) {
            if (!v.is_zero()) throw Error(ErrorKind::structural, "internal error: EQ-matrix witness failed its re-check");
        }
        result.verdict = EqStatus::refuted;
        result.witness = std::move(witness);
    }
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return result;
}

EqMatrix validated(EqMatrix matrix, const EqValidationOptions& options) {
    auto result = validate_eq_matrix(matrix.rows, options);
    matrix.status = result.verdict;
    matrix.witness = std::move(result.witness);
    return matrix;
}

EqFamily parse_eq_family(const std::string& name) {
    if (name == "identity") return EqFamily::identity;
    if (name == "pow2" || name == "pow2_row") return EqFamily::pow2_row;
    throw Error(ErrorKind::invalid_input, "unknown EQ-matrix family '" + name + "' (expected identity or pow2)");
}

EqMatrix builtin_matrix(EqFamily family, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "EQ-matrix half-width must be at least 1");
    EqMatrix matrix;
    if (family == EqFamily::identity) {
        matrix.rows.assign(n, std::vector<std::int64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i) matrix.rows[i][i] = 1;
    } else {
        if (n > 61) throw Error(ErrorKind::invalid_input, "pow2 row supports n <= 61");
        matrix.rows.assign(1, std::vector<std::int64_t>(n));
        for (std::size_t j = 0; j < n; ++j) matrix.rows[0][j] = std::int64_t{1} << j;
    }
    if (n <= 16) return validated(std::move(matrix));
    matrix.status = EqStatus::proven;
    return matrix;
}

EqMatrix load_matrix(std::string_view text) {
    EqMatrix matrix;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("invalid matrix JSON: ") + e.what(), 1, e.byte);
        }
        if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
            throw FormatError("matrix JSON needs a \"rows\" array", 1, 1);
        }
        std::size_t r = 0;
        for (const auto& row : doc["rows"]) {
            ++r;
            if (!row.is_array()) throw FormatError("matrix row " + std::to_string(r) + " is not an array", r, 1);
            auto& out = matrix.rows.emplace_back();
            std::size_t c = 0;
            for (const auto& v : row) {
                ++c;
                if (!v.is_number_integer()) {
                    throw FormatError("matrix entry in row " + std::to_string(r) + " is not an integer", r, c);
                }
                out.push_back(v.get<std::int64_t>());
            }
            if (out.size() != matrix.rows.front().size()) {
                throw FormatError("ragged matrix: row " + std::to_string(r) + " has " + std::to_string(out.size()) +
                                      " entries, expected " + std::to_string(matrix.rows.front().size()),
                                  r, std::min(out.size(), matrix.rows.front().size()) + 1);
            }
        }
    } else {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto eol = text.find('\n', pos);
            if (eol == std::string_view::npos) eol = text.size();
            auto line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            std::vector<std::int64_t> row;
            std::size_t i = 0;
            std::size_t column = 0;
            while (i < line.size()) {
                while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                if (i >= line.size()) break;
                auto j = i;
                while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
                ++column;
                auto token = line.substr(i, j - i);
                std::int64_t value = 0;
                const char* begin = token.data();
                if (!token.empty() && token.front() == '+') ++begin;
                auto [ptr, ec] = std::from_chars(begin, token.data() + token.size(), value);
                if (ec != std::errc() || ptr != token.data() + token.size()) {
                    throw FormatError("'" + std::string(token) + "' is not an integer", line_no, column);
                }
                row.push_back(value);
                i = j;
            }
            if (row.empty()) continue;
            if (!matrix.rows.empty() && row.size() != matrix.rows.front().size()) {
                throw FormatError("ragged matrix: row has " + std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(matrix.rows.front().size()),
                                  line_no, std::min(row.size(), matrix.rows.front().size()) + 1);
            }
            matrix.rows.push_back(std::move(row));
        }
    }
    if (matrix.rows.empty() || matrix.rows.front().empty()) throw FormatError("matrix has no entries", 1, 1);
    return matrix;
}

}  // namespace nnrepr
