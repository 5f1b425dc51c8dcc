#include "pev/testers.hpp"

namespace pev {

const char* to_string(PrimalityTag tag) {
    return tag == PrimalityTag::Prime ? "prime" : "composite";
}

const char* to_string(TestMethod method) {
    switch (method) {
        case TestMethod::MillerRabin: return "miller-rabin";
        case TestMethod::Exhaustive: return "exhaustive";
        case TestMethod::LucasLehmer: return "lucas-lehmer";
        case TestMethod::TrialDivision: return "trial-division";
    }
    return "unknown";
}

MillerRabinRun miller_rabin_test(const Natural& n, unsigned k, EntropySource& source) {
    if (k == 0) {
        throw domain_error("miller_rabin_test requires k >= 1");
    }

    MillerRabinRun run;
    run.n = n;
    run.k = k;
    run.verdict.method = TestMethod::MillerRabin;

    // Pre-screen: the witness density guarantee only covers odd n > 4, so
    // tiny and even inputs never reach the randomized core.
    if (n < Natural(2)) {
        run.verdict.tag = PrimalityTag::Composite;
        run.note = n.to_decimal() + " is neither prime nor composite; classified not-prime";
        return run;
    }
    if (n == Natural(2) || n == Natural(3)) {
        run.verdict.tag = PrimalityTag::Prime;
        return run;
    }
    if (n.is_even()) {
        run.verdict.tag = PrimalityTag::Composite;
        return run;
    }

    run.evaluations.reserve(k);
    for (unsigned round = 0; round < k; ++round) {
        const Natural b = source.sample_uniform(n);
        WitnessEvaluation eval = eval_witness(n, b);
        run.evaluations.push_back(std::move(eval));
        if (run.evaluations.back().outcome == WitnessOutcome::Composite) {
            run.verdict.tag = PrimalityTag::Composite;
            return run;
        }
    }
    run.verdict.tag = PrimalityTag::Prime;
    run.verdict.error_bound_exponent = k;
    return run;
}

ExhaustiveRun exhaustive_deterministic_test(const Natural& n, const Natural& cap) {
    if (n < Natural(5) || n.is_even()) {
        throw domain_error("exhaustive_deterministic_test requires odd n >= 5, got " + n.to_decimal());
    }
    if (n > cap) {
        throw resource_limit_error("exhaustive_deterministic_test: n = " + n.to_decimal() +
                                   " exceeds the exhaustion cap " + cap.to_decimal());
    }

    ExhaustiveRun run;
    run.n = n;
    run.verdict.method = TestMethod::Exhaustive;

    const Natural count = (n - Natural(1)) / Natural(4) + Natural(1);
    const Natural one(1);
    for (Natural b(1); b <= count; b += one) {
        WitnessEvaluation eval = eval_witness(n, b);
        run.evaluations.push_back(std::move(eval));
        if (run.evaluations.back().outcome == WitnessOutcome::Composite) {
            run.verdict.tag = PrimalityTag::Composite;
            return run;
        }
    }
    run.verdict.tag = PrimalityTag::Prime;
    return run;
}

LucasLehmerRun lucas_lehmer(std::uint64_t p, const LucasLehmerProgress& progress) {
    if (trial_division(Natural(p)).tag != PrimalityTag::Prime) {
        throw domain_error("lucas_lehmer requires a prime exponent, got " + std::to_string(p));
    }

    LucasLehmerRun run;
    run.trace.p = p;
    run.verdict.method = TestMethod::LucasLehmer;
    run.mersenne = Natural::pow2(p) - Natural(1);

    if (p == 2) {
        run.verdict.tag = PrimalityTag::Prime; // M_2 = 3
        return run;
    }

    const Natural two(2);
    Natural s(4);
    run.trace.residues.reserve(p - 1);
    run.trace.residues.push_back(s);
    const std::uint64_t iterations = p - 2;
    for (std::uint64_t i = 0; i < iterations; ++i) {
        s = (s * s - two) % run.mersenne;
        run.trace.residues.push_back(s);
        if (progress) {
            progress(i + 1, iterations);
        }
    }
    run.verdict.tag = run.trace.residues.back().is_zero() ? PrimalityTag::Prime
                                                          : PrimalityTag::Composite;
    return run;
}

Verdict trial_division(const Natural& n, const Natural& cap) {
    if (n > cap) {
        throw resource_limit_error("trial_division: n = " + n.to_decimal() +
                                   " exceeds the oracle cap " + cap.to_decimal());
    }

    Verdict verdict;
    verdict.method = TestMethod::TrialDivision;
    const std::uint64_t value = n.to_uint64();
    if (value < 2) {
        verdict.tag = PrimalityTag::Composite;
        return verdict;
    }
    if (value % 2 == 0) {
        verdict.tag = value == 2 ? PrimalityTag::Prime : PrimalityTag::Composite;
        return verdict;
    }
    for (std::uint64_t d = 3; d * d <= value; d += 2) {
        if (value % d == 0) {
            verdict.tag = PrimalityTag::Composite;
            return verdict;
        }
    }
    verdict.tag = PrimalityTag::Prime;
    return verdict;
}

} // namespace pev
