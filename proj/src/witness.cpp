#include "pev/witness.hpp"

#include <vector>

namespace pev {

const char* to_string(WitnessOutcome outcome) {
    return outcome == WitnessOutcome::Composite ? "composite" : "indeterminate";
}

WitnessEvaluation eval_witness(const Natural& n, const Natural& b) {
    if (n < Natural(3)) {
        throw domain_error("eval_witness requires n >= 3, got " + n.to_decimal());
    }
    if (b.is_zero() || b >= n) {
        throw domain_error("eval_witness requires 1 <= b < n, got b = " + b.to_decimal());
    }

    WitnessEvaluation eval;
    eval.n = n;
    eval.b = b;

    const Natural n_minus_1 = n - Natural(1);
    const auto [s, d] = two_adic_split(n_minus_1);

    // One exponentiation by the odd part, then s squarings: chain[j] holds
    // b^(2^j * d) mod n, so chain[s - i] is b^((n-1)/2^i) and chain[s] is
    // the Fermat power b^(n-1).
    std::vector<Natural> chain;
    chain.reserve(s + 1);
    chain.push_back(mod_pow(b, d, n));
    for (std::size_t j = 1; j <= s; ++j) {
        chain.push_back((chain.back() * chain.back()) % n);
    }

    if (chain[s] != Natural(1)) {
        eval.outcome = WitnessOutcome::Composite;
        eval.failing = FailingCondition{FailingCondition::Kind::FermatFail, 0};
        return eval;
    }

    for (std::size_t i = 1; i <= s; ++i) {
        // gcd(r - 1, n) with the decrement taken in residues: r = 1 maps to
        // gcd(0, n) = n, which never fires.
        const Natural& r = chain[s - i];
        const Natural g = gcd((r + n_minus_1) % n, n);
        if (g != Natural(1) && g != n) {
            eval.outcome = WitnessOutcome::Composite;
            eval.failing = FailingCondition{FailingCondition::Kind::GcdSplit, i};
            return eval;
        }
    }

    eval.outcome = WitnessOutcome::Indeterminate;
    return eval;
}

Fraction witness_density(const Natural& n, const Natural& cap) {
    if (n < Natural(5)) {
        throw domain_error("witness_density requires n >= 5, got " + n.to_decimal());
    }
    if (n > cap) {
        throw resource_limit_error("witness_density: n = " + n.to_decimal() +
                                   " exceeds enumeration cap " + cap.to_decimal());
    }

    Natural composite_count(0);
    const Natural one(1);
    for (Natural b(1); b < n; b += one) {
        if (eval_witness(n, b).outcome == WitnessOutcome::Composite) {
            composite_count += one;
        }
    }
    return Fraction(composite_count, n - one);
}

} // namespace pev
