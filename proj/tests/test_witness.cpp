#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pev/testers.hpp"
#include "pev/witness.hpp"

using pev::Natural;
using pev::WitnessOutcome;

TEST_CASE("every base is indeterminate for a prime") {
    for (std::uint64_t b = 1; b < 7; ++b) {
        const auto eval = pev::eval_witness(Natural(7), Natural(b));
        CHECK(eval.outcome == WitnessOutcome::Indeterminate);
        CHECK_FALSE(eval.failing.has_value());
    }
}

TEST_CASE("fermat disjunct fires first") {
    const auto eval = pev::eval_witness(Natural(15), Natural(2));
    CHECK(eval.outcome == WitnessOutcome::Composite);
    REQUIRE(eval.failing.has_value());
    CHECK(eval.failing->kind == pev::FailingCondition::Kind::FermatFail);
}

TEST_CASE("gcd disjunct reports the smallest index") {
    // 4^14 = 1 mod 15, but gcd(4^7 - 1, 15) = 3 splits at i = 1.
    const auto eval = pev::eval_witness(Natural(15), Natural(4));
    CHECK(eval.outcome == WitnessOutcome::Composite);
    REQUIRE(eval.failing.has_value());
    CHECK(eval.failing->kind == pev::FailingCondition::Kind::GcdSplit);
    CHECK(eval.failing->split_index == 1);
}

TEST_CASE("base 1 is indeterminate for any n") {
    for (const std::uint64_t n : {3ULL, 4ULL, 5ULL, 9ULL, 15ULL, 100ULL, 561ULL, 1000001ULL}) {
        CHECK(pev::eval_witness(Natural(n), Natural(1)).outcome == WitnessOutcome::Indeterminate);
    }
}

TEST_CASE("2047 has the classic strong liar") {
    // 2047 = 23 * 89 but survives base 2.
    CHECK(pev::eval_witness(Natural(2047), Natural(2)).outcome == WitnessOutcome::Indeterminate);
    CHECK(pev::eval_witness(Natural(2047), Natural(3)).outcome == WitnessOutcome::Composite);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(pev::eval_witness(Natural(2), Natural(1)), pev::domain_error);
    CHECK_THROWS_AS(pev::eval_witness(Natural(9), Natural(0)), pev::domain_error);
    CHECK_THROWS_AS(pev::eval_witness(Natural(9), Natural(9)), pev::domain_error);
    CHECK_THROWS_AS(pev::eval_witness(Natural(9), Natural(10)), pev::domain_error);
}

TEST_CASE("chained evaluation matches the literal definition") {
    for (std::uint64_t n = 3; n <= 260; ++n) {
        for (std::uint64_t b = 1; b < n; ++b) {
            const auto fast = pev::eval_witness(Natural(n), Natural(b));
            const auto slow = oracles::literal_witness(Natural(n), Natural(b));
            CAPTURE(n, b);
            CHECK(fast == slow);
        }
    }
}

TEST_CASE("determinism") {
    for (const std::uint64_t b : {2ULL, 50ULL, 560ULL}) {
        CHECK(pev::eval_witness(Natural(561), Natural(b)) ==
              pev::eval_witness(Natural(561), Natural(b)));
    }
}

TEST_CASE("miller soundness on a reduced range") {
    for (const std::uint64_t n : oracles::primes_in(3, 600)) {
        for (std::uint64_t b = 1; b < n; ++b) {
            CAPTURE(n, b);
            REQUIRE(pev::eval_witness(Natural(n), Natural(b)).outcome ==
                    WitnessOutcome::Indeterminate);
        }
    }
}

TEST_CASE("rabin density on a reduced range") {
    const pev::Fraction three_quarters(Natural(3), Natural(4));
    for (std::uint64_t n = 5; n <= 400; ++n) {
        if (pev::trial_division(Natural(n)).tag == pev::PrimalityTag::Prime) {
            continue;
        }
        CAPTURE(n);
        REQUIRE(pev::witness_density(Natural(n)) >= three_quarters);
    }
}

TEST_CASE("strong-probable-prime equivalence on a reduced range") {
    for (std::uint64_t n = 5; n <= 800; n += 2) {
        for (std::uint64_t b = 1; b < n; ++b) {
            const bool indeterminate =
                pev::eval_witness(Natural(n), Natural(b)).outcome == WitnessOutcome::Indeterminate;
            CAPTURE(n, b);
            REQUIRE(indeterminate == oracles::is_strong_liar(Natural(n), Natural(b)));
        }
    }
}

TEST_CASE("witness density examples") {
    const auto d15 = pev::witness_density(Natural(15));
    CHECK(d15.numerator() == Natural(12));
    CHECK(d15.denominator() == Natural(14));

    const auto d9 = pev::witness_density(Natural(9));
    CHECK(d9.numerator() == Natural(6));
    CHECK(d9.denominator() == Natural(8));

    const auto d7 = pev::witness_density(Natural(7));
    CHECK(d7.numerator() == Natural(0));
    CHECK(d7.denominator() == Natural(6));
}

TEST_CASE("witness density guards") {
    CHECK_THROWS_AS(pev::witness_density(Natural(4)), pev::domain_error);
    CHECK_THROWS_AS(pev::witness_density(Natural(100), Natural(50)), pev::resource_limit_error);
    CHECK_THROWS_AS(pev::witness_density(Natural(1000001)), pev::resource_limit_error);
    CHECK_NOTHROW(pev::witness_density(Natural(50), Natural(50)));
}
