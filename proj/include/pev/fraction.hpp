#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "pev/natural.hpp"

namespace pev {

/// Exact nonnegative rational. Numerator and denominator are kept exactly as
/// constructed (no silent reduction) so enumeration counts like 6/8 survive
/// verbatim; comparisons are rational, by cross-multiplication.
class Fraction {
public:
    Fraction() : num_(0), den_(1) {}
    Fraction(Natural numerator, Natural denominator);

    /// Accepts "N/D", a decimal literal ("0.25"), or a scientific literal
    /// ("1e-9", "2.5e-3"). Signs are not part of the grammar.
    static Fraction parse(std::string_view text);

    const Natural& numerator() const { return num_; }
    const Natural& denominator() const { return den_; }

    Fraction reduced() const;

    std::string to_string() const; // "N/D" exactly as stored

    friend bool operator==(const Fraction& lhs, const Fraction& rhs) {
        return lhs.num_ * rhs.den_ == rhs.num_ * lhs.den_;
    }
    friend std::strong_ordering operator<=>(const Fraction& lhs, const Fraction& rhs) {
        return lhs.num_ * rhs.den_ <=> rhs.num_ * lhs.den_;
    }

private:
    Natural num_;
    Natural den_;
};

} // namespace pev
