#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "pev/errors.hpp"

namespace pev {

struct DivMod;

/// Arbitrary-magnitude nonnegative integer: the single numeric carrier for
/// candidates, witnesses, moduli, and exponents. Subtraction is checked and
/// throws domain_error instead of wrapping below zero.
class Natural {
public:
    Natural() = default;
    Natural(std::uint64_t value) : value_(value) {}

    /// Parses a nonempty string of decimal digits. Leading zeros are
    /// accepted here; the certificate codec applies its own canonical-form
    /// check before calling this.
    static Natural from_decimal(std::string_view text);

    /// Canonical decimal form: no sign, no leading zeros, "0" for zero.
    std::string to_decimal() const;

    /// 2^exponent.
    static Natural pow2(std::size_t exponent);

    /// Big-endian bit assembly: bits[0] is the most significant.
    static Natural from_bits_msb(std::span<const std::uint8_t> bits);

    bool is_zero() const { return value_.is_zero(); }
    bool is_odd() const { return boost::multiprecision::bit_test(value_, 0); }
    bool is_even() const { return !is_odd(); }

    /// Number of significant bits; 0 for zero.
    std::size_t bit_length() const;
    bool bit(std::size_t index) const { return boost::multiprecision::bit_test(value_, static_cast<unsigned>(index)); }

    bool fits_uint64() const;
    std::uint64_t to_uint64() const; // throws domain_error when out of range

    Natural& operator+=(const Natural& rhs) { value_ += rhs.value_; return *this; }
    Natural& operator-=(const Natural& rhs);
    Natural& operator*=(const Natural& rhs) { value_ *= rhs.value_; return *this; }
    Natural& operator/=(const Natural& rhs);
    Natural& operator%=(const Natural& rhs);
    Natural& operator<<=(std::size_t shift) { value_ <<= static_cast<unsigned>(shift); return *this; }
    Natural& operator>>=(std::size_t shift) { value_ >>= static_cast<unsigned>(shift); return *this; }

    friend Natural operator+(Natural lhs, const Natural& rhs) { return lhs += rhs; }
    friend Natural operator-(Natural lhs, const Natural& rhs) { return lhs -= rhs; }
    friend Natural operator*(Natural lhs, const Natural& rhs) { return lhs *= rhs; }
    friend Natural operator/(Natural lhs, const Natural& rhs) { return lhs /= rhs; }
    friend Natural operator%(Natural lhs, const Natural& rhs) { return lhs %= rhs; }
    friend Natural operator<<(Natural lhs, std::size_t shift) { return lhs <<= shift; }
    friend Natural operator>>(Natural lhs, std::size_t shift) { return lhs >>= shift; }

    friend bool operator==(const Natural&, const Natural&) = default;
    friend std::strong_ordering operator<=>(const Natural& lhs, const Natural& rhs) {
        const int c = lhs.value_.compare(rhs.value_);
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Natural& value);

    friend Natural gcd(const Natural& a, const Natural& b);
    friend DivMod div_mod(const Natural& numerator, const Natural& denominator);

private:
    boost::multiprecision::cpp_int value_;
};

struct DivMod {
    Natural quotient;
    Natural remainder;
};

/// Quotient and remainder in one division; divisor zero throws domain_error.
DivMod div_mod(const Natural& numerator, const Natural& denominator);

/// base^exponent mod modulus by left-to-right binary square-and-multiply.
/// modulus 0 throws domain_error; modulus 1 yields 0.
Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus);

/// Greatest common divisor; gcd(0, x) = x.
Natural gcd(const Natural& a, const Natural& b);

/// m = 2^s * d with d odd.
struct TwoAdicSplit {
    std::size_t s = 0;
    Natural d;
    friend bool operator==(const TwoAdicSplit&, const TwoAdicSplit&) = default;
};

/// Decomposes m >= 1 into its two-adic split; m = 0 throws domain_error.
TwoAdicSplit two_adic_split(const Natural& m);

} // namespace pev
