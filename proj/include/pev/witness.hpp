#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "pev/fraction.hpp"
#include "pev/natural.hpp"

namespace pev {

enum class WitnessOutcome {
    Composite,
    Indeterminate,
};

const char* to_string(WitnessOutcome outcome);

/// Which disjunct of the witness function fired for a composite outcome:
/// the Fermat power residue, or a nontrivial gcd at exponent index i.
struct FailingCondition {
    enum class Kind { FermatFail, GcdSplit };
    Kind kind = Kind::FermatFail;
    std::size_t split_index = 0; // smallest i with a nontrivial gcd; GcdSplit only
    friend bool operator==(const FailingCondition&, const FailingCondition&) = default;
};

struct WitnessEvaluation {
    Natural n;
    Natural b;
    WitnessOutcome outcome = WitnessOutcome::Indeterminate;
    std::optional<FailingCondition> failing; // engaged iff outcome is Composite
    friend bool operator==(const WitnessEvaluation&, const WitnessEvaluation&) = default;
};

/// Witness-to-compositeness evaluation for 1 <= b < n, n >= 3. Composite when
/// b^(n-1) is not 1 mod n, or when gcd(b^((n-1)/2^i) - 1, n) is nontrivial
/// for some i in [1, s] where 2^s exactly divides n - 1; indeterminate
/// otherwise. The Fermat disjunct takes precedence in the failing condition;
/// the gcd disjunct reports the smallest firing i.
WitnessEvaluation eval_witness(const Natural& n, const Natural& b);

inline constexpr std::uint64_t kDefaultDensityCap = 1'000'000;

/// Fraction of b in [1, n) that witness n's compositeness, as the exact
/// unreduced count over n - 1. Requires 5 <= n <= cap.
Fraction witness_density(const Natural& n, const Natural& cap = Natural(kDefaultDensityCap));

} // namespace pev
