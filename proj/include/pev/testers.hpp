#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pev/entropy.hpp"
#include "pev/natural.hpp"
#include "pev/witness.hpp"

namespace pev {

enum class PrimalityTag { Prime, Composite };
enum class TestMethod { MillerRabin, Exhaustive, LucasLehmer, TrialDivision };

const char* to_string(PrimalityTag tag);
const char* to_string(TestMethod method);

struct Verdict {
    PrimalityTag tag = PrimalityTag::Composite;
    TestMethod method = TestMethod::TrialDivision;
    /// Present only for a Prime verdict from the randomized core: the error
    /// probability over the witness draws is at most 4^-k. Pre-screened
    /// verdicts are certain and carry no exponent.
    std::optional<unsigned> error_bound_exponent;
    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct MillerRabinRun {
    Natural n;
    unsigned k = 0;
    Verdict verdict;
    std::vector<WitnessEvaluation> evaluations; // empty for pre-screened n
    std::optional<std::string> note;            // classification note for n in {0, 1}
};

/// Randomized test: pre-screens n < 4 and even n, otherwise draws k
/// witnesses sequentially from the source and short-circuits on the first
/// composite outcome. Witnesses are drawn with replacement.
MillerRabinRun miller_rabin_test(const Natural& n, unsigned k, EntropySource& source);

struct ExhaustiveRun {
    Natural n;
    Verdict verdict;
    std::vector<WitnessEvaluation> evaluations;
};

inline constexpr std::uint64_t kDefaultExhaustionCap = 1'000'000;

/// Deterministic procedure: evaluates witnesses b = 1, 2, ..., floor((n-1)/4)+1
/// in order, short-circuiting on the first composite outcome. Any composite
/// n > 4 has a witness among that many values, so survival proves primality.
/// Requires odd n >= 5 and n <= cap.
ExhaustiveRun exhaustive_deterministic_test(const Natural& n,
                                            const Natural& cap = Natural(kDefaultExhaustionCap));

/// Iteration trail of a Lucas-Lehmer run: s_0 = 4 and s_{i+1} = s_i^2 - 2
/// modulo 2^p - 1, recorded for p - 1 terms (empty for p = 2).
struct LLTrace {
    std::uint64_t p = 0;
    std::vector<Natural> residues;
    friend bool operator==(const LLTrace&, const LLTrace&) = default;
};

struct LucasLehmerRun {
    Natural mersenne; // 2^p - 1
    Verdict verdict;
    LLTrace trace;
};

using LucasLehmerProgress = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Lucas-Lehmer test of 2^p - 1. The exponent p must itself be prime
/// (checked by trial division); composite or p < 2 throws domain_error.
LucasLehmerRun lucas_lehmer(std::uint64_t p, const LucasLehmerProgress& progress = nullptr);

inline constexpr std::uint64_t kDefaultTrialDivisionCap = 1ULL << 32;

/// Independent oracle: divisor scan up to the square root. 0 and 1 are
/// reported under the Composite tag.
Verdict trial_division(const Natural& n, const Natural& cap = Natural(kDefaultTrialDivisionCap));

} // namespace pev
