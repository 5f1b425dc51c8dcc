#include "pev/entropy.hpp"

namespace pev {

const char* to_string(EntropyKind kind) {
    switch (kind) {
        case EntropyKind::Seeded: return "seeded";
        case EntropyKind::OsEntropy: return "os";
        case EntropyKind::RemoteQrng: return "qrng";
    }
    return "unknown";
}

namespace {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

EntropySource EntropySource::seeded(std::uint64_t seed) {
    EntropySource source;
    source.descriptor_.kind = EntropyKind::Seeded;
    source.descriptor_.seed = seed;
    source.splitmix_state_ = seed;
    return source;
}

EntropySource EntropySource::os_entropy() {
    EntropySource source;
    source.descriptor_.kind = EntropyKind::OsEntropy;
    source.os_device_ = std::make_unique<std::random_device>();
    return source;
}

EntropySource EntropySource::remote_qrng(std::string endpoint, QrngOptions options) {
    EntropySource source;
    source.descriptor_.kind = EntropyKind::RemoteQrng;
    source.descriptor_.endpoint = std::move(endpoint);
    source.qrng_options_ = options;
    return source;
}

void EntropySource::buffer_at_least(std::size_t count) {
    switch (descriptor_.kind) {
        case EntropyKind::Seeded:
            while (pending_.size() < count) {
                const std::uint64_t word = splitmix64_next(splitmix_state_);
                for (int i = 63; i >= 0; --i) {
                    pending_.push_back(static_cast<std::uint8_t>((word >> i) & 1U));
                }
            }
            break;
        case EntropyKind::OsEntropy:
            while (pending_.size() < count) {
                const auto word = static_cast<std::uint32_t>((*os_device_)());
                for (int i = 31; i >= 0; --i) {
                    pending_.push_back(static_cast<std::uint8_t>((word >> i) & 1U));
                }
            }
            break;
        case EntropyKind::RemoteQrng:
            while (pending_.size() < count) {
                const std::size_t missing = count - pending_.size();
                const std::size_t bytes =
                    std::min((missing + 7) / 8, qrng_options_.max_bytes_per_request);
                const BitBlock block = fetch_remote_bits(*descriptor_.endpoint, bytes, qrng_options_);
                pending_.insert(pending_.end(), block.bits.begin(), block.bits.end());
            }
            break;
    }
}

BitBlock EntropySource::next_bits(std::size_t count) {
    if (count == 0) {
        throw domain_error("next_bits requires count >= 1");
    }
    buffer_at_least(count);

    BitBlock block;
    block.bits.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        block.bits.push_back(pending_.front());
        pending_.pop_front();
    }
    descriptor_.bits_consumed += count;
    block.origin = descriptor_;
    return block;
}

Natural EntropySource::sample_uniform(const Natural& n) {
    if (n < Natural(2)) {
        throw domain_error("sample_uniform requires n >= 2, got " + n.to_decimal());
    }
    if (n == Natural(2)) {
        return Natural(1);
    }
    const Natural limit = n - Natural(2);
    const std::size_t width = limit.bit_length();
    while (true) {
        const BitBlock block = next_bits(width);
        const Natural value = Natural::from_bits_msb(block.bits);
        if (value <= limit) {
            return value + Natural(1);
        }
    }
}

} // namespace pev
