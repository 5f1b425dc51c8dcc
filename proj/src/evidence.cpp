#include "pev/evidence.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <set>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace pev {

namespace {

constexpr const char* kFidelityDisclaimer =
    "replay certifies the fidelity of the recorded experiment; "
    "it does not by itself establish the truth of the verdict";

ReplayReport make_malformed(std::string detail) {
    ReplayReport report;
    report.status = ReplayStatus::Malformed;
    report.detail = std::move(detail);
    report.note = kFidelityDisclaimer;
    return report;
}

} // namespace

const char* to_string(ProofMethod method) {
    return method == ProofMethod::Exhaustive ? "exhaustive" : "lucas-lehmer";
}

const char* to_string(ReplayStatus status) {
    switch (status) {
        case ReplayStatus::Valid: return "valid";
        case ReplayStatus::Mismatch: return "mismatch";
        case ReplayStatus::Malformed: return "malformed";
    }
    return "unknown";
}

EvidenceRecord build_record(const MillerRabinRun& run, const EntropyDescriptor& entropy,
                            std::optional<std::string> created_at) {
    if (run.verdict.method != TestMethod::MillerRabin) {
        throw domain_error("build_record: run method is not miller-rabin");
    }
    if (run.k == 0) {
        throw domain_error("build_record: k must be positive");
    }
    if (run.evaluations.empty()) {
        throw domain_error("build_record: pre-screened runs carry no witness evaluations and "
                           "have no evidence-record form");
    }
    if (run.evaluations.size() > run.k) {
        throw domain_error("build_record: more evaluations than rounds");
    }

    EvidenceRecord record;
    record.n = run.n;
    record.k = run.k;
    record.verdict = run.verdict.tag;
    record.error_bound_exponent = run.verdict.error_bound_exponent;
    record.entropy = entropy;
    record.created_at = std::move(created_at);
    for (const auto& eval : run.evaluations) {
        if (eval.b.is_zero() || eval.b >= run.n) {
            throw domain_error("build_record: witness out of range: " + eval.b.to_decimal());
        }
        record.witnesses.push_back(eval.b);
        record.outcomes.push_back(eval.outcome);
    }

    const bool all_indeterminate =
        std::all_of(record.outcomes.begin(), record.outcomes.end(),
                    [](WitnessOutcome o) { return o == WitnessOutcome::Indeterminate; });
    if (record.verdict == PrimalityTag::Prime) {
        if (record.outcomes.size() != record.k || !all_indeterminate ||
            record.error_bound_exponent != run.k) {
            throw domain_error("build_record: prime verdict requires k all-indeterminate "
                               "evaluations and error bound exponent k");
        }
    } else {
        if (record.outcomes.back() != WitnessOutcome::Composite) {
            throw domain_error("build_record: composite verdict requires a final composite outcome");
        }
        if (record.error_bound_exponent.has_value()) {
            throw domain_error("build_record: composite verdict carries no error bound exponent");
        }
    }
    return record;
}

ProofTranscript build_transcript(const ExhaustiveRun& run) {
    if (run.verdict.method != TestMethod::Exhaustive) {
        throw domain_error("build_transcript: run method is not exhaustive");
    }
    if (run.evaluations.empty()) {
        throw domain_error("build_transcript: empty evaluation list");
    }
    ProofTranscript transcript;
    transcript.n = run.n;
    transcript.method = ProofMethod::Exhaustive;
    transcript.verdict = run.verdict.tag;
    for (const auto& eval : run.evaluations) {
        transcript.witnesses.push_back(eval.b);
        transcript.outcomes.push_back(eval.outcome);
    }
    return transcript;
}

ProofTranscript build_transcript(const LucasLehmerRun& run) {
    if (run.verdict.method != TestMethod::LucasLehmer) {
        throw domain_error("build_transcript: run method is not lucas-lehmer");
    }
    ProofTranscript transcript;
    transcript.n = run.mersenne;
    transcript.method = ProofMethod::LucasLehmer;
    transcript.verdict = run.verdict.tag;
    transcript.ll_trace = run.trace;
    return transcript;
}

ReplayReport replay_verify(const EvidenceRecord& record) {
    if (record.format_version != kCertificateFormatVersion) {
        return make_malformed("unsupported format_version");
    }
    if (record.k == 0) {
        return make_malformed("k must be positive");
    }
    if (record.witnesses.size() != record.outcomes.size()) {
        return make_malformed("witness and outcome lists differ in length");
    }
    if (record.witnesses.empty()) {
        return make_malformed("record holds no evaluations");
    }
    if (record.witnesses.size() > record.k) {
        return make_malformed("record holds more evaluations than rounds");
    }
    if (record.n < Natural(3)) {
        return make_malformed("n is too small for witness evaluation");
    }
    for (const auto& witness : record.witnesses) {
        if (witness.is_zero() || witness >= record.n) {
            return make_malformed("witness out of range: " + witness.to_decimal());
        }
    }

    ReplayReport report;
    report.note = kFidelityDisclaimer;
    for (std::size_t i = 0; i < record.witnesses.size(); ++i) {
        const WitnessOutcome recomputed = eval_witness(record.n, record.witnesses[i]).outcome;
        if (recomputed != record.outcomes[i]) {
            report.mismatches.push_back({i, to_string(record.outcomes[i]), to_string(recomputed)});
        }
    }
    if (!report.mismatches.empty()) {
        report.status = ReplayStatus::Mismatch;
        return report;
    }

    const std::size_t composite_count =
        static_cast<std::size_t>(std::count(record.outcomes.begin(), record.outcomes.end(),
                                            WitnessOutcome::Composite));
    if (record.verdict == PrimalityTag::Prime) {
        if (record.outcomes.size() != record.k || composite_count != 0 ||
            record.error_bound_exponent != record.k) {
            return make_malformed("prime verdict is inconsistent with the recorded evaluations");
        }
    } else {
        if (record.outcomes.back() != WitnessOutcome::Composite || composite_count != 1 ||
            record.error_bound_exponent.has_value()) {
            return make_malformed("composite verdict is inconsistent with the recorded evaluations");
        }
    }
    report.status = ReplayStatus::Valid;
    return report;
}

namespace {

ReplayReport replay_exhaustive(const ProofTranscript& transcript, const Natural& exhaustion_cap) {
    const Natural& n = transcript.n;
    if (transcript.ll_trace.has_value()) {
        return make_malformed("exhaustive transcript carries a lucas-lehmer trace");
    }
    if (n < Natural(5) || n.is_even()) {
        return make_malformed("exhaustive transcripts require odd n >= 5");
    }
    if (n > exhaustion_cap) {
        throw resource_limit_error("replay: n = " + n.to_decimal() +
                                   " exceeds the exhaustion cap " + exhaustion_cap.to_decimal());
    }
    if (transcript.witnesses.size() != transcript.outcomes.size()) {
        return make_malformed("witness and outcome lists differ in length");
    }
    if (transcript.witnesses.empty()) {
        return make_malformed("transcript holds no evaluations");
    }

    const Natural required = (n - Natural(1)) / Natural(4) + Natural(1);
    if (Natural(transcript.witnesses.size()) > required) {
        return make_malformed("transcript holds more evaluations than the procedure performs");
    }
    for (std::size_t i = 0; i < transcript.witnesses.size(); ++i) {
        if (transcript.witnesses[i] != Natural(i + 1)) {
            return make_malformed("exhaustive witnesses must be the consecutive integers from 1");
        }
    }

    ReplayReport report;
    report.note = kFidelityDisclaimer;
    for (std::size_t i = 0; i < transcript.witnesses.size(); ++i) {
        const WitnessOutcome recomputed = eval_witness(n, transcript.witnesses[i]).outcome;
        if (recomputed != transcript.outcomes[i]) {
            report.mismatches.push_back(
                {i, to_string(transcript.outcomes[i]), to_string(recomputed)});
        }
    }
    if (!report.mismatches.empty()) {
        report.status = ReplayStatus::Mismatch;
        return report;
    }

    const std::size_t composite_count =
        static_cast<std::size_t>(std::count(transcript.outcomes.begin(), transcript.outcomes.end(),
                                            WitnessOutcome::Composite));
    if (transcript.verdict == PrimalityTag::Prime) {
        if (Natural(transcript.witnesses.size()) != required || composite_count != 0) {
            return make_malformed("prime verdict requires the full all-indeterminate witness trail");
        }
    } else {
        if (transcript.outcomes.back() != WitnessOutcome::Composite || composite_count != 1) {
            return make_malformed("composite verdict is inconsistent with the recorded trail");
        }
    }
    report.status = ReplayStatus::Valid;
    return report;
}

ReplayReport replay_lucas_lehmer(const ProofTranscript& transcript) {
    if (!transcript.ll_trace.has_value()) {
        return make_malformed("lucas-lehmer transcript is missing its trace");
    }
    if (!transcript.witnesses.empty() || !transcript.outcomes.empty()) {
        return make_malformed("lucas-lehmer transcript carries witness evaluations");
    }
    const LLTrace& trace = *transcript.ll_trace;
    if (trace.p < 2) {
        return make_malformed("lucas-lehmer exponent must be at least 2");
    }
    if (trial_division(Natural(trace.p)).tag != PrimalityTag::Prime) {
        return make_malformed("lucas-lehmer exponent is composite");
    }
    const Natural mersenne = Natural::pow2(trace.p) - Natural(1);
    if (transcript.n != mersenne) {
        return make_malformed("n does not equal 2^p - 1 for the recorded exponent");
    }
    const std::size_t expected_length = trace.p == 2 ? 0 : static_cast<std::size_t>(trace.p - 1);
    if (trace.residues.size() != expected_length) {
        return make_malformed("lucas-lehmer trace has the wrong length");
    }
    for (const auto& residue : trace.residues) {
        if (residue >= mersenne) {
            return make_malformed("lucas-lehmer residue out of range");
        }
    }

    ReplayReport report;
    report.note = kFidelityDisclaimer;
    if (trace.p >= 3) {
        const Natural two(2);
        Natural s(4);
        for (std::size_t i = 0; i < trace.residues.size(); ++i) {
            if (i > 0) {
                s = (s * s - two) % mersenne;
            }
            if (trace.residues[i] != s) {
                report.mismatches.push_back(
                    {i, trace.residues[i].to_decimal(), s.to_decimal()});
            }
        }
        if (!report.mismatches.empty()) {
            report.status = ReplayStatus::Mismatch;
            return report;
        }
    }

    const bool recorded_prime =
        trace.p == 2 || (!trace.residues.empty() && trace.residues.back().is_zero());
    if ((transcript.verdict == PrimalityTag::Prime) != recorded_prime) {
        return make_malformed("verdict is inconsistent with the recorded trace");
    }
    report.status = ReplayStatus::Valid;
    return report;
}

} // namespace

ReplayReport replay_verify(const ProofTranscript& transcript, const Natural& exhaustion_cap) {
    if (transcript.format_version != kCertificateFormatVersion) {
        return make_malformed("unsupported format_version");
    }
    return transcript.method == ProofMethod::Exhaustive
               ? replay_exhaustive(transcript, exhaustion_cap)
               : replay_lucas_lehmer(transcript);
}

ReplayReport replay_verify(const Certificate& certificate, const Natural& exhaustion_cap) {
    if (const auto* record = std::get_if<EvidenceRecord>(&certificate)) {
        return replay_verify(*record);
    }
    return replay_verify(std::get<ProofTranscript>(certificate), exhaustion_cap);
}

ReplayReport replay_verify_bytes(std::string_view bytes, const Natural& exhaustion_cap) {
    try {
        return replay_verify(deserialize(bytes), exhaustion_cap);
    } catch (const malformed_error& e) {
        return make_malformed(e.what());
    }
}

unsigned required_rounds(const Fraction& epsilon) {
    const Natural& num = epsilon.numerator();
    const Natural& den = epsilon.denominator();
    if (num.is_zero() || num >= den) {
        throw domain_error("required_rounds: epsilon must lie strictly between 0 and 1, got " +
                           epsilon.to_string());
    }
    // Least k with num * 4^k >= den, i.e. 4^-k <= epsilon.
    unsigned k = 1;
    Natural power(4);
    while (num * power < den) {
        power *= Natural(4);
        ++k;
    }
    return k;
}

namespace {

json entropy_to_json(const EntropyDescriptor& descriptor) {
    json j;
    j["bits_consumed"] = std::to_string(descriptor.bits_consumed);
    j["kind"] = to_string(descriptor.kind);
    if (descriptor.seed.has_value()) {
        j["seed"] = std::to_string(*descriptor.seed);
    }
    if (descriptor.endpoint.has_value()) {
        j["endpoint"] = *descriptor.endpoint;
    }
    return j;
}

json outcomes_to_json(const std::vector<WitnessOutcome>& outcomes) {
    json array = json::array();
    for (const auto outcome : outcomes) {
        array.push_back(to_string(outcome));
    }
    return array;
}

json naturals_to_json(const std::vector<Natural>& values) {
    json array = json::array();
    for (const auto& value : values) {
        array.push_back(value.to_decimal());
    }
    return array;
}

std::string finish(const json& document) {
    return document.dump() + "\n";
}

} // namespace

std::string serialize(const EvidenceRecord& record) {
    json j;
    j["format_version"] = record.format_version;
    j["kind"] = "evidence";
    j["method"] = "miller-rabin";
    j["n"] = record.n.to_decimal();
    j["k"] = record.k;
    j["witnesses"] = naturals_to_json(record.witnesses);
    j["outcomes"] = outcomes_to_json(record.outcomes);
    j["verdict"] = to_string(record.verdict);
    j["error_bound_exponent"] =
        record.error_bound_exponent.has_value() ? json(*record.error_bound_exponent) : json(nullptr);
    j["entropy"] = entropy_to_json(record.entropy);
    if (record.created_at.has_value()) {
        j["created_at"] = *record.created_at;
    }
    return finish(j);
}

std::string serialize(const ProofTranscript& transcript) {
    json j;
    j["format_version"] = transcript.format_version;
    j["kind"] = "proof";
    j["method"] = to_string(transcript.method);
    j["n"] = transcript.n.to_decimal();
    j["verdict"] = to_string(transcript.verdict);
    if (transcript.method == ProofMethod::Exhaustive) {
        j["witnesses"] = naturals_to_json(transcript.witnesses);
        j["outcomes"] = outcomes_to_json(transcript.outcomes);
    } else {
        json trace;
        trace["p"] = transcript.ll_trace ? transcript.ll_trace->p : 0;
        trace["residues"] = naturals_to_json(transcript.ll_trace ? transcript.ll_trace->residues
                                                                 : std::vector<Natural>{});
        j["ll_trace"] = trace;
    }
    return finish(j);
}

std::string serialize(const Certificate& certificate) {
    if (const auto* record = std::get_if<EvidenceRecord>(&certificate)) {
        return serialize(*record);
    }
    return serialize(std::get<ProofTranscript>(certificate));
}

namespace {

[[noreturn]] void malformed(const std::string& detail) {
    throw malformed_error(detail);
}

bool is_canonical_decimal(const std::string& text) {
    if (text.empty()) {
        return false;
    }
    for (const char c : text) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return text.size() == 1 || text.front() != '0';
}

/// Tracks which keys a reader consumed so unknown fields can be rejected.
class ObjectReader {
public:
    ObjectReader(const json& object, std::string context)
        : object_(object), context_(std::move(context)) {}

    const json& require(const char* key) {
        const auto it = object_.find(key);
        if (it == object_.end()) {
            malformed(context_ + ": missing field \"" + key + "\"");
        }
        seen_.insert(key);
        return *it;
    }

    const json* optional(const char* key) {
        seen_.insert(key);
        const auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    void reject_unknown() const {
        for (const auto& item : object_.items()) {
            if (!seen_.contains(item.key())) {
                malformed(context_ + ": unexpected field \"" + item.key() + "\"");
            }
        }
    }

private:
    const json& object_;
    std::string context_;
    std::set<std::string> seen_;
};

Natural read_natural(const json& value, const std::string& what) {
    if (!value.is_string()) {
        malformed(what + " must be a decimal string");
    }
    const auto text = value.get<std::string>();
    if (!is_canonical_decimal(text)) {
        malformed(what + " is not a canonical decimal numeral: \"" + text + "\"");
    }
    return Natural::from_decimal(text);
}

std::uint64_t read_uint64_string(const json& value, const std::string& what) {
    const Natural parsed = read_natural(value, what);
    if (!parsed.fits_uint64()) {
        malformed(what + " exceeds 64 bits");
    }
    return parsed.to_uint64();
}

std::uint64_t read_unsigned(const json& value, const std::string& what, std::uint64_t max) {
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() > max) {
        malformed(what + " must be an unsigned integer within range");
    }
    return value.get<std::uint64_t>();
}

std::vector<Natural> read_natural_array(const json& value, const std::string& what) {
    if (!value.is_array()) {
        malformed(what + " must be an array");
    }
    std::vector<Natural> out;
    out.reserve(value.size());
    for (const auto& element : value) {
        out.push_back(read_natural(element, what + " element"));
    }
    return out;
}

std::vector<WitnessOutcome> read_outcome_array(const json& value) {
    if (!value.is_array()) {
        malformed("outcomes must be an array");
    }
    std::vector<WitnessOutcome> out;
    out.reserve(value.size());
    for (const auto& element : value) {
        if (element == "composite") {
            out.push_back(WitnessOutcome::Composite);
        } else if (element == "indeterminate") {
            out.push_back(WitnessOutcome::Indeterminate);
        } else {
            malformed("outcome must be \"composite\" or \"indeterminate\", got " + element.dump());
        }
    }
    return out;
}

PrimalityTag read_verdict(const json& value) {
    if (value == "prime") {
        return PrimalityTag::Prime;
    }
    if (value == "composite") {
        return PrimalityTag::Composite;
    }
    malformed("verdict must be \"prime\" or \"composite\", got " + value.dump());
}

bool looks_like_rfc3339(const std::string& text) {
    if (text.size() != 20) {
        return false;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        switch (i) {
            case 4:
            case 7:
                if (c != '-') return false;
                break;
            case 10:
                if (c != 'T') return false;
                break;
            case 13:
            case 16:
                if (c != ':') return false;
                break;
            case 19:
                if (c != 'Z') return false;
                break;
            default:
                if (c < '0' || c > '9') return false;
        }
    }
    return true;
}

EntropyDescriptor read_entropy(const json& value) {
    if (!value.is_object()) {
        malformed("entropy must be an object");
    }
    ObjectReader reader(value, "entropy");
    EntropyDescriptor descriptor;

    const json& kind = reader.require("kind");
    if (kind == "seeded") {
        descriptor.kind = EntropyKind::Seeded;
        descriptor.seed = read_uint64_string(reader.require("seed"), "entropy.seed");
    } else if (kind == "os") {
        descriptor.kind = EntropyKind::OsEntropy;
    } else if (kind == "qrng") {
        descriptor.kind = EntropyKind::RemoteQrng;
        const json& endpoint = reader.require("endpoint");
        if (!endpoint.is_string() || endpoint.get<std::string>().empty()) {
            malformed("entropy.endpoint must be a nonempty string");
        }
        descriptor.endpoint = endpoint.get<std::string>();
    } else {
        malformed("entropy.kind must be \"seeded\", \"os\", or \"qrng\", got " + kind.dump());
    }
    descriptor.bits_consumed = read_uint64_string(reader.require("bits_consumed"), "entropy.bits_consumed");
    reader.reject_unknown();
    return descriptor;
}

EvidenceRecord read_evidence(ObjectReader& reader) {
    EvidenceRecord record;
    const json& method = reader.require("method");
    if (method != "miller-rabin") {
        malformed("evidence records require method \"miller-rabin\", got " + method.dump());
    }
    record.n = read_natural(reader.require("n"), "n");
    record.k = static_cast<unsigned>(read_unsigned(reader.require("k"), "k", 0xFFFFFFFFULL));
    if (record.k == 0) {
        malformed("k must be positive");
    }
    record.witnesses = read_natural_array(reader.require("witnesses"), "witnesses");
    record.outcomes = read_outcome_array(reader.require("outcomes"));
    record.verdict = read_verdict(reader.require("verdict"));
    const json& exponent = reader.require("error_bound_exponent");
    if (exponent.is_null()) {
        record.error_bound_exponent = std::nullopt;
    } else {
        record.error_bound_exponent = static_cast<unsigned>(
            read_unsigned(exponent, "error_bound_exponent", 0xFFFFFFFFULL));
    }
    record.entropy = read_entropy(reader.require("entropy"));
    if (const json* created = reader.optional("created_at")) {
        if (!created->is_string() || !looks_like_rfc3339(created->get<std::string>())) {
            malformed("created_at must be an RFC 3339 UTC timestamp");
        }
        record.created_at = created->get<std::string>();
    }
    return record;
}

ProofTranscript read_proof(ObjectReader& reader) {
    ProofTranscript transcript;
    const json& method = reader.require("method");
    transcript.n = read_natural(reader.require("n"), "n");
    transcript.verdict = read_verdict(reader.require("verdict"));
    if (method == "exhaustive") {
        transcript.method = ProofMethod::Exhaustive;
        transcript.witnesses = read_natural_array(reader.require("witnesses"), "witnesses");
        transcript.outcomes = read_outcome_array(reader.require("outcomes"));
    } else if (method == "lucas-lehmer") {
        transcript.method = ProofMethod::LucasLehmer;
        const json& trace_json = reader.require("ll_trace");
        if (!trace_json.is_object()) {
            malformed("ll_trace must be an object");
        }
        ObjectReader trace_reader(trace_json, "ll_trace");
        LLTrace trace;
        trace.p = read_unsigned(trace_reader.require("p"), "ll_trace.p",
                                std::numeric_limits<std::uint64_t>::max());
        trace.residues = read_natural_array(trace_reader.require("residues"), "ll_trace.residues");
        trace_reader.reject_unknown();
        transcript.ll_trace = std::move(trace);
    } else {
        malformed("proof transcripts require method \"exhaustive\" or \"lucas-lehmer\", got " +
                  method.dump());
    }
    return transcript;
}

} // namespace

Certificate deserialize(std::string_view bytes) {
    const json document = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
    if (document.is_discarded() || !document.is_object()) {
        malformed("certificate is not a JSON object");
    }

    ObjectReader reader(document, "certificate");
    const json& version = reader.require("format_version");
    if (!version.is_number_unsigned() || version.get<std::uint64_t>() != kCertificateFormatVersion) {
        malformed("unsupported format_version: " + version.dump());
    }

    const json& kind = reader.require("kind");
    Certificate certificate;
    if (kind == "evidence") {
        certificate = read_evidence(reader);
    } else if (kind == "proof") {
        certificate = read_proof(reader);
    } else {
        malformed("kind must be \"evidence\" or \"proof\", got " + kind.dump());
    }
    reader.reject_unknown();
    return certificate;
}

std::string now_rfc3339() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

} // namespace pev
