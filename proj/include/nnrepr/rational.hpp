#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nnrepr {

// Expression templates off: results of arithmetic are plain values, safe with auto.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Exact fraction kept in lowest terms with a positive denominator.
/// Zero is stored as 0/1. Every constructor normalizes, so two equal values
/// always have identical (num, den) pairs.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long value) : num_(value), den_(1) {}  // NOLINT: integers convert implicitly
    explicit Rational(BigInt value) : num_(std::move(value)), den_(1) {}
    Rational(BigInt num, BigInt den);

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }

    friend bool operator==(const Rational& lhs, const Rational& rhs) { return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_; }
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

    /// "num/den", with a leading minus for negatives and "/den" omitted when den is 1.
    std::string to_string() const;

    /// Inverse of to_string. Accepts "[-]digits[/digits]" with a nonzero denominator
    /// and normalizes, so "2/4" parses to 1/2. Throws FormatError on anything else.
    static Rational parse(std::string_view text);

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;
using IntegerMatrix = std::vector<std::vector<BigInt>>;

/// Bit count of a non-negative integer; 0 has length 0.
std::uint64_t bit_length(const BigInt& value);

struct ResolutionBits {
    std::uint64_t bits = 0;
    friend auto operator<=>(const ResolutionBits&, const ResolutionBits&) = default;
};

// symmetric: ceil(max(log2(|a|+1), log2(b+1))).
// literal:   ceil(max(log2|a+1|, log2|b+1|)); the numerator term vanishes when a = -1.
enum class ResolutionMode { symmetric, literal };

/// Bits needed to write q = a/b in lowest terms. Computed from integer bit
/// lengths only: ceil(log2(x+1)) equals bit_length(x) for x >= 0.
ResolutionBits res_rational(const Rational& q, ResolutionMode mode = ResolutionMode::symmetric);

/// Maximum entry resolution. Throws invalid_input on an empty or ragged matrix.
ResolutionBits res_matrix(const RationalMatrix& matrix, ResolutionMode mode = ResolutionMode::symmetric);

struct ScaledMatrix {
    BigInt denominator;  // lcm of all entry denominators
    IntegerMatrix entries;
};

/// Multiplies every entry by the lcm of all denominators; the result is integral.
ScaledMatrix common_denominator_scale(const RationalMatrix& matrix);

}  // namespace nnrepr
