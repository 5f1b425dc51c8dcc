#include "pev/natural.hpp"

#include <ostream>

namespace mp = boost::multiprecision;

namespace pev {

Natural Natural::from_decimal(std::string_view text) {
    if (text.empty()) {
        throw domain_error("empty decimal numeral");
    }
    for (const char c : text) {
        if (c < '0' || c > '9') {
            throw domain_error("invalid decimal numeral: \"" + std::string(text) + "\"");
        }
    }
    // Strip leading zeros before handing to cpp_int; a leading 0 would
    // otherwise select octal parsing.
    const auto first = text.find_first_not_of('0');
    if (first == std::string_view::npos) {
        return Natural(0);
    }
    Natural out;
    out.value_ = mp::cpp_int(std::string(text.substr(first)));
    return out;
}

std::string Natural::to_decimal() const {
    return value_.str();
}

Natural Natural::pow2(std::size_t exponent) {
    Natural out(1);
    out.value_ <<= static_cast<unsigned>(exponent);
    return out;
}

Natural Natural::from_bits_msb(std::span<const std::uint8_t> bits) {
    Natural out;
    for (const std::uint8_t bit : bits) {
        out.value_ <<= 1;
        if (bit != 0) {
            mp::bit_set(out.value_, 0);
        }
    }
    return out;
}

std::size_t Natural::bit_length() const {
    if (value_.is_zero()) {
        return 0;
    }
    return static_cast<std::size_t>(mp::msb(value_)) + 1;
}

bool Natural::fits_uint64() const {
    return value_ <= mp::cpp_int(std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t Natural::to_uint64() const {
    if (!fits_uint64()) {
        throw domain_error("value does not fit in 64 bits: " + to_decimal());
    }
    return value_.convert_to<std::uint64_t>();
}

Natural& Natural::operator-=(const Natural& rhs) {
    if (rhs.value_ > value_) {
        throw domain_error("subtraction underflow: " + to_decimal() + " - " + rhs.to_decimal());
    }
    value_ -= rhs.value_;
    return *this;
}

Natural& Natural::operator/=(const Natural& rhs) {
    if (rhs.is_zero()) {
        throw domain_error("division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

Natural& Natural::operator%=(const Natural& rhs) {
    if (rhs.is_zero()) {
        throw domain_error("remainder by zero");
    }
    value_ %= rhs.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Natural& value) {
    return os << value.value_;
}

DivMod div_mod(const Natural& numerator, const Natural& denominator) {
    if (denominator.is_zero()) {
        throw domain_error("division by zero");
    }
    DivMod out;
    mp::divide_qr(numerator.value_, denominator.value_, out.quotient.value_, out.remainder.value_);
    return out;
}

Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus) {
    if (modulus.is_zero()) {
        throw domain_error("mod_pow with modulus 0");
    }
    if (modulus == Natural(1)) {
        return Natural(0);
    }
    Natural result(1);
    const Natural reduced_base = base % modulus;
    for (std::size_t i = exponent.bit_length(); i-- > 0;) {
        result = (result * result) % modulus;
        if (exponent.bit(i)) {
            result = (result * reduced_base) % modulus;
        }
    }
    return result;
}

Natural gcd(const Natural& a, const Natural& b) {
    Natural out;
    out.value_ = mp::gcd(a.value_, b.value_);
    return out;
}

TwoAdicSplit two_adic_split(const Natural& m) {
    if (m.is_zero()) {
        throw domain_error("two_adic_split of 0");
    }
    TwoAdicSplit split;
    // The lowest set bit index is the exact power of two dividing m.
    std::size_t s = 0;
    while (!m.bit(s)) {
        ++s;
    }
    split.s = s;
    split.d = m >> s;
    return split;
}

} // namespace pev
