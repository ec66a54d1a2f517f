#include "nnrepr/rational.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "nnrepr/error.hpp"

namespace nnrepr {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) {
        throw Error(ErrorKind::invalid_input, "rational with zero denominator");
    }
    normalize();
}

void Rational::normalize() {
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational out = *this;
    out.num_ = -out.num_;
    return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (den_ == rhs.den_) {
        num_ += rhs.num_;
    } else {
        num_ = num_ * rhs.den_ + rhs.num_ * den_;
        den_ *= rhs.den_;
    }
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    num_ *= rhs.num_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    int c = lhs.den_ == rhs.den_ ? lhs.num_.compare(rhs.num_) : BigInt(lhs.num_ * rhs.den_).compare(BigInt(rhs.num_ * lhs.den_));
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
    std::string out = num_.str();
    if (den_ != 1) {
        out += '/';
        out += den_.str();
    }
    return out;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&](std::size_t pos) -> Rational {
        throw FormatError("malformed rational '" + std::string(text) + "'", 1, pos + 1);
    };
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    auto read_digits = [&](BigInt& out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) return false;
        out = BigInt(std::string(text.substr(start, pos - start)));
        return true;
    };
    BigInt num;
    BigInt den = 1;
    if (!read_digits(num)) return fail(pos);
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!read_digits(den)) return fail(pos);
        if (den.is_zero()) return fail(pos - 1);
    }
    if (pos != text.size()) return fail(pos);
    if (negative) num = -num;
    return Rational(std::move(num), std::move(den));
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

std::uint64_t bit_length(const BigInt& value) {
    if (value.is_zero()) return 0;
    return static_cast<std::uint64_t>(boost::multiprecision::msb(abs(value))) + 1;
}

ResolutionBits res_rational(const Rational& q, ResolutionMode mode) {
    if (mode == ResolutionMode::symmetric) {
        return {std::max(bit_length(abs(q.num())), bit_length(q.den()))};
    }
    // ceil(log2 v) = bit_length(v - 1) for v >= 1; v = 0 contributes nothing.
    auto ceil_log2 = [](const BigInt& v) -> std::uint64_t { return v.is_zero() ? 0 : bit_length(v - 1); };
    return {std::max(ceil_log2(abs(q.num() + 1)), ceil_log2(q.den() + 1))};
}

ResolutionBits res_matrix(const RationalMatrix& matrix, ResolutionMode mode) {
    if (matrix.empty() || matrix.front().empty()) {
        throw Error(ErrorKind::invalid_input, "resolution of an empty matrix");
    }
    ResolutionBits best;
    const std::size_t cols = matrix.front().size();
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != cols) {
            throw Error(ErrorKind::invalid_input, "ragged matrix: row " + std::to_string(i + 1) + " has " +
                                                      std::to_string(matrix[i].size()) + " entries, expected " +
                                                      std::to_string(cols));
        }
        for (const auto& q : matrix[i]) best = std::max(best, res_rational(q, mode));
    }
    return best;
}

ScaledMatrix common_denominator_scale(const RationalMatrix& matrix) {
    ScaledMatrix out{BigInt(1), {}};
    for (const auto& row : matrix) {
        for (const auto& q : row) {
            if (q.den() != 1) out.denominator = boost::multiprecision::lcm(out.denominator, q.den());
        }
    }
    out.entries.reserve(matrix.size());
    for (const auto& row : matrix) {
        auto& scaled = out.entries.emplace_back();
        scaled.reserve(row.size());
        for (const auto& q : row) scaled.push_back(q.num() * (out.denominator / q.den()));
    }
    return out;
}

}  // namespace nnrepr
