#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pev/entropy.hpp"
#include "pev/fraction.hpp"
#include "pev/natural.hpp"
#include "pev/testers.hpp"
#include "pev/witness.hpp"

namespace pev {

inline constexpr int kCertificateFormatVersion = 1;

/// Replayable transcript of one randomized run: evidence that a
/// deterministic proof exists, not itself a proof.
struct EvidenceRecord {
    int format_version = kCertificateFormatVersion;
    Natural n;
    unsigned k = 0;
    std::vector<Natural> witnesses;
    std::vector<WitnessOutcome> outcomes;
    PrimalityTag verdict = PrimalityTag::Composite;
    std::optional<unsigned> error_bound_exponent;
    EntropyDescriptor entropy;
    std::optional<std::string> created_at; // RFC 3339 UTC; informational only
    friend bool operator==(const EvidenceRecord&, const EvidenceRecord&) = default;
};

enum class ProofMethod { Exhaustive, LucasLehmer };

const char* to_string(ProofMethod method);

/// Deterministic certificate: the full exhaustive witness trail, or the
/// Lucas-Lehmer iteration trail. Replaying one is a complete verification.
struct ProofTranscript {
    int format_version = kCertificateFormatVersion;
    Natural n;
    ProofMethod method = ProofMethod::Exhaustive;
    std::vector<Natural> witnesses;         // Exhaustive only
    std::vector<WitnessOutcome> outcomes;   // Exhaustive only
    std::optional<LLTrace> ll_trace;        // LucasLehmer only
    PrimalityTag verdict = PrimalityTag::Composite;
    friend bool operator==(const ProofTranscript&, const ProofTranscript&) = default;
};

using Certificate = std::variant<EvidenceRecord, ProofTranscript>;

/// Maps a finished randomized run plus its entropy provenance onto a record,
/// enforcing the record invariants. Pre-screened runs (empty witness list)
/// have no evidence-record form and are rejected.
EvidenceRecord build_record(const MillerRabinRun& run, const EntropyDescriptor& entropy,
                            std::optional<std::string> created_at);

ProofTranscript build_transcript(const ExhaustiveRun& run);
ProofTranscript build_transcript(const LucasLehmerRun& run);

enum class ReplayStatus { Valid, Mismatch, Malformed };

const char* to_string(ReplayStatus status);

struct ReplayMismatch {
    std::size_t index = 0;
    std::string recorded;
    std::string recomputed;
    friend bool operator==(const ReplayMismatch&, const ReplayMismatch&) = default;
};

/// Every report carries the fidelity disclaimer in `note`: replay certifies
/// that the recorded experiment is faithfully reproducible, not that its
/// verdict is true.
struct ReplayReport {
    ReplayStatus status = ReplayStatus::Malformed;
    std::vector<ReplayMismatch> mismatches;
    std::string note;
    std::string detail; // diagnostic for Malformed reports
};

/// Recomputes every recorded evaluation (or the full Lucas-Lehmer
/// iteration) and compares against the recorded outcomes. Randomness is
/// never re-run; replay re-derives deterministic consequences of the
/// recorded witnesses.
ReplayReport replay_verify(const EvidenceRecord& record);
ReplayReport replay_verify(const ProofTranscript& transcript,
                           const Natural& exhaustion_cap = Natural(kDefaultExhaustionCap));
ReplayReport replay_verify(const Certificate& certificate,
                           const Natural& exhaustion_cap = Natural(kDefaultExhaustionCap));

/// Parses and replays in one step; parse failures become a Malformed report
/// rather than an exception.
ReplayReport replay_verify_bytes(std::string_view bytes,
                                 const Natural& exhaustion_cap = Natural(kDefaultExhaustionCap));

/// Least k with 4^-k <= epsilon, computed by exact integer comparison.
/// Requires 0 < epsilon < 1.
unsigned required_rounds(const Fraction& epsilon);

/// Canonical certificate bytes: one JSON document, lexicographically sorted
/// keys, no insignificant whitespace, every unbounded or 64-bit integer a
/// canonical decimal string, terminated by a single newline.
std::string serialize(const EvidenceRecord& record);
std::string serialize(const ProofTranscript& transcript);
std::string serialize(const Certificate& certificate);

/// Strict inverse of serialize; throws malformed_error on version, field,
/// type, or numeral violations.
Certificate deserialize(std::string_view bytes);

/// Current time as an RFC 3339 UTC timestamp.
std::string now_rfc3339();

} // namespace pev
