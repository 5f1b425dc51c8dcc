#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pev/natural.hpp"

namespace pev {

enum class EntropyKind {
    Seeded,     // reproducible SplitMix64 stream
    OsEntropy,  // operating-system entropy
    RemoteQrng, // remote quantum-RNG web service
};

const char* to_string(EntropyKind kind);

/// Provenance of a bit stream. Certificates carry this verbatim; there is no
/// fallback between kinds, so the recorded provenance is always honest.
struct EntropyDescriptor {
    EntropyKind kind = EntropyKind::Seeded;
    std::optional<std::uint64_t> seed;    // Seeded only
    std::optional<std::string> endpoint;  // RemoteQrng only
    std::uint64_t bits_consumed = 0;
    friend bool operator==(const EntropyDescriptor&, const EntropyDescriptor&) = default;
};

struct BitBlock {
    std::vector<std::uint8_t> bits;  // each element 0 or 1, in emission order
    EntropyDescriptor origin;        // descriptor snapshot after the draw
};

struct QrngOptions {
    std::chrono::milliseconds timeout{10'000};
    unsigned retries = 0; // extra attempts after a transport failure
    std::size_t max_bytes_per_request = 1024;
};

/// One GET {endpoint}?length={byte_count}&type=uint8 request. The response
/// must be a JSON object {"type":"uint8","length":N,"data":[0..255 x N],
/// "success":true}; each data byte is expanded most-significant-bit first.
/// Anything else is a transport_error.
BitBlock fetch_remote_bits(const std::string& endpoint, std::size_t byte_count,
                           const QrngOptions& options = {});

inline constexpr const char* kQrngUrlEnvVar = "PRIME_EVIDENCE_QRNG_URL";

/// A stateful bit stream owned by one consumer at a time. Seeded sources
/// emit the SplitMix64 word sequence, each word most-significant-bit first,
/// so equal seeds give bit-identical streams at any call granularity.
class EntropySource {
public:
    static EntropySource seeded(std::uint64_t seed);
    static EntropySource os_entropy();
    static EntropySource remote_qrng(std::string endpoint, QrngOptions options = {});

    EntropySource(EntropySource&&) = default;
    EntropySource& operator=(EntropySource&&) = default;
    EntropySource(const EntropySource&) = delete;
    EntropySource& operator=(const EntropySource&) = delete;

    /// Exactly count >= 1 bits; advances bits_consumed by count.
    BitBlock next_bits(std::size_t count);

    /// Uniform draw from [1, n) for n >= 2 by rejection sampling over
    /// bit-length(n - 2) bit blocks; n = 2 returns 1 consuming no bits.
    Natural sample_uniform(const Natural& n);

    const EntropyDescriptor& descriptor() const { return descriptor_; }
    std::uint64_t bits_consumed() const { return descriptor_.bits_consumed; }

private:
    EntropySource() = default;
    void buffer_at_least(std::size_t count);

    EntropyDescriptor descriptor_;
    QrngOptions qrng_options_;
    std::uint64_t splitmix_state_ = 0;
    std::unique_ptr<std::random_device> os_device_;
    std::deque<std::uint8_t> pending_;
};

} // namespace pev
