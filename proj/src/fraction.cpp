#include "pev/fraction.hpp"

#include <algorithm>
#include <cstdint>

namespace pev {

Fraction::Fraction(Natural numerator, Natural denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) {
        throw domain_error("fraction with denominator 0");
    }
}

Fraction Fraction::reduced() const {
    if (num_.is_zero()) {
        return Fraction(Natural(0), Natural(1));
    }
    const Natural g = gcd(num_, den_);
    return Fraction(num_ / g, den_ / g);
}

std::string Fraction::to_string() const {
    return num_.to_decimal() + "/" + den_.to_decimal();
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Natural pow10(std::uint64_t e) {
    Natural out(1);
    const Natural ten(10);
    for (std::uint64_t i = 0; i < e; ++i) {
        out *= ten;
    }
    return out;
}

} // namespace

Fraction Fraction::parse(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw domain_error("invalid rational literal: \"" + std::string(text) + "\"");
        }
        return Fraction(Natural::from_decimal(num), Natural::from_decimal(den));
    }

    // Decimal or scientific literal: digits [. digits] [e[+|-]digits].
    std::string_view mantissa = text;
    std::int64_t exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        auto exp_text = text.substr(e + 1);
        bool negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 9) {
            throw domain_error("invalid exponent in literal: \"" + std::string(text) + "\"");
        }
        exponent = static_cast<std::int64_t>(Natural::from_decimal(exp_text).to_uint64());
        if (negative) {
            exponent = -exponent;
        }
    }

    std::string digits;
    std::uint64_t fractional_digits = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        const auto whole = mantissa.substr(0, dot);
        const auto frac = mantissa.substr(dot + 1);
        if (frac.empty() || (!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
            throw domain_error("invalid decimal literal: \"" + std::string(text) + "\"");
        }
        digits = std::string(whole) + std::string(frac);
        fractional_digits = frac.size();
    } else {
        if (!all_digits(mantissa)) {
            throw domain_error("invalid decimal literal: \"" + std::string(text) + "\"");
        }
        digits = std::string(mantissa);
    }
    if (digits.empty()) {
        throw domain_error("invalid decimal literal: \"" + std::string(text) + "\"");
    }

    const Natural value = Natural::from_decimal(digits);
    const std::int64_t scale = exponent - static_cast<std::int64_t>(fractional_digits);
    if (scale >= 0) {
        return Fraction(value * pow10(static_cast<std::uint64_t>(scale)), Natural(1));
    }
    return Fraction(value, pow10(static_cast<std::uint64_t>(-scale)));
}

} // namespace pev
