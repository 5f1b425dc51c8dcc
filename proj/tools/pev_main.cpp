#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pev/evidence.hpp"

using nlohmann::json;
using pev::Natural;

namespace {

/// Accepts a decimal literal or the Mersenne form 2^p-1.
Natural parse_number(const std::string& text) {
    if (text.rfind("2^", 0) == 0 && text.size() > 4 && text.compare(text.size() - 2, 2, "-1") == 0) {
        const std::string exponent = text.substr(2, text.size() - 4);
        return Natural::pow2(Natural::from_decimal(exponent).to_uint64()) - Natural(1);
    }
    return Natural::from_decimal(text);
}

/// For the mersenne subcommand: a bare exponent, or 2^p-1 to mean its exponent.
std::uint64_t parse_mersenne_exponent(const std::string& text) {
    if (text.rfind("2^", 0) == 0 && text.size() > 4 && text.compare(text.size() - 2, 2, "-1") == 0) {
        return Natural::from_decimal(text.substr(2, text.size() - 4)).to_uint64();
    }
    return Natural::from_decimal(text).to_uint64();
}

pev::EntropySource make_source(const std::string& spec, const pev::QrngOptions& options) {
    if (spec == "os") {
        return pev::EntropySource::os_entropy();
    }
    if (spec.rfind("seeded:", 0) == 0) {
        const std::string seed_text = spec.substr(7);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (ec != std::errc{} || ptr != seed_text.data() + seed_text.size() || seed_text.empty()) {
            throw pev::domain_error("invalid seed in entropy spec \"" + spec + "\"");
        }
        return pev::EntropySource::seeded(seed);
    }
    if (spec == "qrng" || spec.rfind("qrng:", 0) == 0) {
        std::string url;
        if (spec == "qrng") {
            const char* env = std::getenv(pev::kQrngUrlEnvVar);
            if (env == nullptr || *env == '\0') {
                throw pev::domain_error(std::string("entropy spec \"qrng\" needs an endpoint: set ") +
                                        pev::kQrngUrlEnvVar + " or use qrng:<url>");
            }
            url = env;
        } else {
            url = spec.substr(5);
            if (url.empty()) {
                throw pev::domain_error("empty endpoint in entropy spec \"" + spec + "\"");
            }
        }
        return pev::EntropySource::remote_qrng(std::move(url), options);
    }
    throw pev::domain_error("unrecognized entropy spec \"" + spec +
                            "\" (expected seeded:<u64>, os, or qrng[:<url>])");
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    out.flush();
    if (!out) {
        throw pev::domain_error("cannot write certificate to " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw pev::domain_error("cannot read " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json entropy_summary(const pev::EntropyDescriptor& descriptor) {
    json j;
    j["kind"] = pev::to_string(descriptor.kind);
    j["bits_consumed"] = std::to_string(descriptor.bits_consumed);
    if (descriptor.seed) {
        j["seed"] = std::to_string(*descriptor.seed);
    }
    if (descriptor.endpoint) {
        j["endpoint"] = *descriptor.endpoint;
    }
    return j;
}

void print_json(const json& j) {
    std::cout << j.dump() << "\n";
}

struct CommonFlags {
    bool json = false;
    std::string emit;
};

int run_test(const std::string& n_text, unsigned k, const std::string& entropy_spec,
             const CommonFlags& flags, bool no_timestamp, const pev::QrngOptions& qrng_options) {
    const Natural n = parse_number(n_text);
    pev::EntropySource source = make_source(entropy_spec, qrng_options);
    const pev::MillerRabinRun run = pev::miller_rabin_test(n, k, source);

    if (!flags.emit.empty()) {
        if (run.evaluations.empty()) {
            throw pev::domain_error("n = " + n.to_decimal() +
                                    " is settled by pre-screening; no randomized evidence record "
                                    "applies (use `prove` for a deterministic certificate)");
        }
        const pev::EvidenceRecord record =
            pev::build_record(run, source.descriptor(),
                              no_timestamp ? std::nullopt : std::optional(pev::now_rfc3339()));
        write_file(flags.emit, pev::serialize(record));
    }

    if (flags.json) {
        json j;
        j["command"] = "test";
        j["n"] = n.to_decimal();
        j["k"] = run.k;
        j["method"] = "miller-rabin";
        j["verdict"] = pev::to_string(run.verdict.tag);
        j["error_bound_exponent"] = run.verdict.error_bound_exponent
                                        ? json(*run.verdict.error_bound_exponent)
                                        : json(nullptr);
        j["witnesses_evaluated"] = run.evaluations.size();
        j["entropy"] = entropy_summary(source.descriptor());
        j["certificate"] = flags.emit.empty() ? json(nullptr) : json(flags.emit);
        if (run.note) {
            j["note"] = *run.note;
        }
        print_json(j);
    } else {
        std::cout << n.to_decimal() << " is " << pev::to_string(run.verdict.tag)
                  << " (miller-rabin";
        if (run.verdict.error_bound_exponent) {
            std::cout << ", k = " << run.k << ", error bound <= 4^-"
                      << *run.verdict.error_bound_exponent;
        } else if (!run.evaluations.empty()) {
            std::cout << ", witness " << run.evaluations.back().b.to_decimal() << " after "
                      << run.evaluations.size() << " of " << run.k << " rounds";
        } else {
            std::cout << ", pre-screened";
        }
        std::cout << ")\n";
        if (run.note) {
            std::cout << "note: " << *run.note << "\n";
        }
        if (!flags.emit.empty()) {
            std::cout << "certificate written to " << flags.emit << "\n";
        }
    }
    return run.verdict.tag == pev::PrimalityTag::Prime ? 0 : 1;
}

int run_prove(const std::string& n_text, std::uint64_t cap, const CommonFlags& flags) {
    const Natural n = parse_number(n_text);
    const pev::ExhaustiveRun run = pev::exhaustive_deterministic_test(n, Natural(cap));

    if (!flags.emit.empty()) {
        write_file(flags.emit, pev::serialize(pev::build_transcript(run)));
    }

    if (flags.json) {
        json j;
        j["command"] = "prove";
        j["n"] = n.to_decimal();
        j["method"] = "exhaustive";
        j["verdict"] = pev::to_string(run.verdict.tag);
        j["witnesses_evaluated"] = run.evaluations.size();
        j["certificate"] = flags.emit.empty() ? json(nullptr) : json(flags.emit);
        print_json(j);
    } else {
        std::cout << n.to_decimal() << " is " << pev::to_string(run.verdict.tag) << " (exhaustive, ";
        if (run.verdict.tag == pev::PrimalityTag::Prime) {
            std::cout << run.evaluations.size() << " witnesses all indeterminate)\n";
        } else {
            std::cout << "witness " << run.evaluations.back().b.to_decimal() << ")\n";
        }
        if (!flags.emit.empty()) {
            std::cout << "certificate written to " << flags.emit << "\n";
        }
    }
    return run.verdict.tag == pev::PrimalityTag::Prime ? 0 : 1;
}

int run_mersenne(const std::string& p_text, bool progress, const CommonFlags& flags) {
    const std::uint64_t p = parse_mersenne_exponent(p_text);
    pev::LucasLehmerProgress callback;
    if (progress) {
        callback = [](std::uint64_t done, std::uint64_t total) {
            if (done % 1024 == 0 || done == total) {
                std::cerr << "\rlucas-lehmer iteration " << done << "/" << total;
                if (done == total) {
                    std::cerr << "\n";
                }
            }
        };
    }
    const pev::LucasLehmerRun run = pev::lucas_lehmer(p, callback);

    if (!flags.emit.empty()) {
        write_file(flags.emit, pev::serialize(pev::build_transcript(run)));
    }

    if (flags.json) {
        json j;
        j["command"] = "mersenne";
        j["p"] = p;
        j["n"] = run.mersenne.to_decimal();
        j["method"] = "lucas-lehmer";
        j["verdict"] = pev::to_string(run.verdict.tag);
        j["certificate"] = flags.emit.empty() ? json(nullptr) : json(flags.emit);
        print_json(j);
    } else {
        std::cout << "2^" << p << "-1 is " << pev::to_string(run.verdict.tag) << " (lucas-lehmer)\n";
        if (!flags.emit.empty()) {
            std::cout << "certificate written to " << flags.emit << "\n";
        }
    }
    return run.verdict.tag == pev::PrimalityTag::Prime ? 0 : 1;
}

int run_verify(const std::string& path, std::uint64_t cap, bool json_output) {
    const std::string bytes = read_file(path);
    const pev::ReplayReport report = pev::replay_verify_bytes(bytes, Natural(cap));

    if (json_output) {
        json j;
        j["command"] = "verify";
        j["file"] = path;
        j["status"] = pev::to_string(report.status);
        json mismatches = json::array();
        for (const auto& m : report.mismatches) {
            json entry;
            entry["index"] = m.index;
            entry["recorded"] = m.recorded;
            entry["recomputed"] = m.recomputed;
            mismatches.push_back(entry);
        }
        j["mismatches"] = mismatches;
        j["note"] = report.note;
        j["detail"] = report.detail.empty() ? json(nullptr) : json(report.detail);
        print_json(j);
    } else {
        switch (report.status) {
            case pev::ReplayStatus::Valid:
                std::cout << "valid: recorded outcomes match recomputation\n";
                break;
            case pev::ReplayStatus::Mismatch:
                for (const auto& m : report.mismatches) {
                    std::cout << "mismatch at index " << m.index << ": recorded " << m.recorded
                              << ", recomputed " << m.recomputed << "\n";
                }
                break;
            case pev::ReplayStatus::Malformed:
                std::cout << "malformed: " << report.detail << "\n";
                break;
        }
        std::cout << "note: " << report.note << "\n";
    }
    switch (report.status) {
        case pev::ReplayStatus::Valid: return 0;
        case pev::ReplayStatus::Mismatch: return 1;
        case pev::ReplayStatus::Malformed: return 2;
    }
    return 2;
}

int run_threshold(const std::string& epsilon_text, bool json_output) {
    const pev::Fraction epsilon = pev::Fraction::parse(epsilon_text);
    const unsigned rounds = pev::required_rounds(epsilon);
    if (json_output) {
        json j;
        j["command"] = "threshold";
        j["epsilon"] = epsilon.to_string();
        j["rounds"] = rounds;
        print_json(j);
    } else {
        std::cout << rounds << "\n";
    }
    return 0;
}

int run_density(const std::string& n_text, std::uint64_t cap, bool json_output) {
    const Natural n = parse_number(n_text);
    const pev::Fraction density = pev::witness_density(n, Natural(cap));
    if (json_output) {
        json j;
        j["command"] = "density";
        j["n"] = n.to_decimal();
        j["witnesses"] = density.numerator().to_decimal();
        j["candidates"] = density.denominator().to_decimal();
        j["density"] = density.to_string();
        print_json(j);
    } else {
        std::cout << density.to_string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"primality evidence engine: witness tests, deterministic proofs, "
                 "and replayable certificates"};
    app.require_subcommand(1);

    std::string test_n;
    unsigned test_k = 20;
    std::string test_entropy = "seeded:0";
    bool test_no_timestamp = false;
    double qrng_timeout_seconds = 10.0;
    unsigned qrng_retries = 0;
    CommonFlags test_flags;
    auto* test = app.add_subcommand("test", "randomized miller-rabin evidence");
    test->add_option("n", test_n, "number to test (decimal or 2^p-1)")->required();
    test->add_option("--k", test_k, "witness rounds (error bound 4^-k)")
        ->default_val(20)
        ->check(CLI::PositiveNumber);
    test->add_option("--entropy", test_entropy, "seeded:<u64> | os | qrng[:<url>]")
        ->default_val("seeded:0");
    test->add_option("--emit", test_flags.emit, "write the evidence certificate to FILE");
    test->add_flag("--json", test_flags.json, "machine-readable summary on stdout");
    test->add_flag("--no-timestamp", test_no_timestamp, "omit created_at for reproducible bytes");
    test->add_option("--qrng-timeout", qrng_timeout_seconds, "qrng request timeout in seconds");
    test->add_option("--qrng-retries", qrng_retries, "extra attempts after a qrng transport failure");

    std::string prove_n;
    std::uint64_t prove_cap = pev::kDefaultExhaustionCap;
    CommonFlags prove_flags;
    auto* prove = app.add_subcommand("prove", "deterministic exhaustive-witness proof");
    prove->add_option("n", prove_n, "odd number >= 5 (decimal or 2^p-1)")->required();
    prove->add_option("--cap", prove_cap, "exhaustion cap on n");
    prove->add_option("--emit", prove_flags.emit, "write the proof transcript to FILE");
    prove->add_flag("--json", prove_flags.json, "machine-readable summary on stdout");

    std::string verify_path;
    std::uint64_t verify_cap = pev::kDefaultExhaustionCap;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "replay a certificate file");
    verify->add_option("file", verify_path, "certificate (.pev) to verify")->required();
    verify->add_option("--cap", verify_cap, "exhaustion cap for exhaustive replays");
    verify->add_flag("--json", verify_json, "machine-readable report on stdout");

    std::string mersenne_p;
    bool mersenne_progress = false;
    CommonFlags mersenne_flags;
    auto* mersenne = app.add_subcommand("mersenne", "lucas-lehmer test of 2^p-1");
    mersenne->add_option("p", mersenne_p, "prime exponent (decimal or 2^p-1)")->required();
    mersenne->add_flag("--progress", mersenne_progress, "iteration counter on stderr");
    mersenne->add_option("--emit", mersenne_flags.emit, "write the proof transcript to FILE");
    mersenne->add_flag("--json", mersenne_flags.json, "machine-readable summary on stdout");

    std::string threshold_epsilon;
    bool threshold_json = false;
    auto* threshold = app.add_subcommand("threshold", "rounds needed for an error threshold");
    threshold->add_option("--epsilon", threshold_epsilon, "threshold in (0,1): N/D, decimal, or scientific")
        ->required();
    threshold->add_flag("--json", threshold_json, "machine-readable summary on stdout");

    std::string density_n;
    std::uint64_t density_cap = pev::kDefaultDensityCap;
    bool density_json = false;
    auto* density = app.add_subcommand("density", "exact witness density of n");
    density->add_option("n", density_n, "number >= 5 (decimal or 2^p-1)")->required();
    density->add_option("--cap", density_cap, "enumeration cap on n");
    density->add_flag("--json", density_json, "machine-readable summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        pev::QrngOptions qrng_options;
        qrng_options.timeout =
            std::chrono::milliseconds(static_cast<long long>(qrng_timeout_seconds * 1000.0));
        qrng_options.retries = qrng_retries;

        if (app.got_subcommand(test)) {
            return run_test(test_n, test_k, test_entropy, test_flags, test_no_timestamp, qrng_options);
        }
        if (app.got_subcommand(prove)) {
            return run_prove(prove_n, prove_cap, prove_flags);
        }
        if (app.got_subcommand(verify)) {
            return run_verify(verify_path, verify_cap, verify_json);
        }
        if (app.got_subcommand(mersenne)) {
            return run_mersenne(mersenne_p, mersenne_progress, mersenne_flags);
        }
        if (app.got_subcommand(threshold)) {
            return run_threshold(threshold_epsilon, threshold_json);
        }
        if (app.got_subcommand(density)) {
            return run_density(density_n, density_cap, density_json);
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const pev::resource_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pev::transport_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pev::malformed_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pev::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
