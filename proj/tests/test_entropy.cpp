#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "mock_qrng.hpp"
#include "pev/entropy.hpp"

using pev::EntropySource;
using pev::Natural;

namespace {

std::vector<std::uint8_t> word_bits(std::uint64_t word) {
    std::vector<std::uint8_t> bits;
    for (int i = 63; i >= 0; --i) {
        bits.push_back(static_cast<std::uint8_t>((word >> i) & 1U));
    }
    return bits;
}

} // namespace

TEST_CASE("splitmix64 reference stream for seed 0") {
    auto source = EntropySource::seeded(0);
    // First four outputs of the reference generator.
    for (const std::uint64_t word :
         {0xE220A8397B1DCDAFULL, 0x6E789E6AA1B965F4ULL, 0x06C45D188009454FULL,
          0xF88BB8A8724C81ECULL}) {
        CHECK(source.next_bits(64).bits == word_bits(word));
    }
    CHECK(source.bits_consumed() == 256);
}

TEST_CASE("splitmix64 reference words for other seeds") {
    auto one = EntropySource::seeded(1);
    CHECK(one.next_bits(64).bits == word_bits(0x910A2DEC89025CC1ULL));
    auto forty_two = EntropySource::seeded(42);
    CHECK(forty_two.next_bits(64).bits == word_bits(0xBDD732262FEB6E95ULL));
}

TEST_CASE("stream splitting identity") {
    auto whole = EntropySource::seeded(7);
    auto split = EntropySource::seeded(7);
    const auto expected = whole.next_bits(256).bits;

    std::vector<std::uint8_t> gathered;
    for (const std::size_t chunk : {32UL, 32UL, 17UL, 47UL, 1UL, 127UL}) {
        const auto block = split.next_bits(chunk);
        gathered.insert(gathered.end(), block.bits.begin(), block.bits.end());
    }
    CHECK(gathered == expected);
    CHECK(split.bits_consumed() == 256);
}

TEST_CASE("equal seeds give identical streams") {
    auto a = EntropySource::seeded(99);
    auto b = EntropySource::seeded(99);
    CHECK(a.next_bits(1000).bits == b.next_bits(1000).bits);
}

TEST_CASE("descriptor snapshots") {
    auto source = EntropySource::seeded(5);
    CHECK(source.descriptor().kind == pev::EntropyKind::Seeded);
    CHECK(source.descriptor().seed == 5);
    const auto block = source.next_bits(10);
    CHECK(block.origin.bits_consumed == 10);
    CHECK(block.origin.seed == 5);
    CHECK_THROWS_AS(source.next_bits(0), pev::domain_error);
}

TEST_CASE("os entropy produces bits") {
    auto source = EntropySource::os_entropy();
    const auto block = source.next_bits(128);
    CHECK(block.bits.size() == 128);
    for (const auto bit : block.bits) {
        CHECK(bit <= 1);
    }
    CHECK(source.bits_consumed() == 128);
    CHECK(source.descriptor().kind == pev::EntropyKind::OsEntropy);
    CHECK_FALSE(source.descriptor().seed.has_value());

    auto other = EntropySource::os_entropy();
    CHECK(other.next_bits(128).bits != block.bits); // 2^-128 flake odds
}

TEST_CASE("sample_uniform edge cases") {
    auto source = EntropySource::seeded(0);
    CHECK(source.sample_uniform(Natural(2)) == Natural(1));
    CHECK(source.bits_consumed() == 0);
    CHECK_THROWS_AS(source.sample_uniform(Natural(1)), pev::domain_error);
    CHECK_THROWS_AS(source.sample_uniform(Natural(0)), pev::domain_error);
}

TEST_CASE("sample_uniform follows the rejection trace for seed 0") {
    // Seed 0's first word begins 111 000 100 010 000 010: for n = 7 the
    // width is 3 bits, so draw 7 is rejected and the samples are 1,5,3,1,3.
    auto source = EntropySource::seeded(0);
    const std::uint64_t expected[] = {1, 5, 3, 1, 3};
    for (const std::uint64_t value : expected) {
        CHECK(source.sample_uniform(Natural(7)) == Natural(value));
    }
    CHECK(source.bits_consumed() == 18);
}

TEST_CASE("n = 3 maps single bits") {
    auto source = EntropySource::seeded(0);
    // Seed 0's first bits are 1,1,1,0...
    CHECK(source.sample_uniform(Natural(3)) == Natural(2));
    CHECK(source.sample_uniform(Natural(3)) == Natural(2));
    CHECK(source.sample_uniform(Natural(3)) == Natural(2));
    CHECK(source.sample_uniform(Natural(3)) == Natural(1));
    CHECK(source.bits_consumed() == 4);
}

TEST_CASE("rejection-free widths for n = 2^t + 1") {
    for (const std::uint64_t n : {3ULL, 17ULL, 257ULL, 65537ULL}) {
        auto source = EntropySource::seeded(123);
        const std::size_t width = Natural(n - 2).bit_length();
        for (int i = 1; i <= 50; ++i) {
            const Natural sample = source.sample_uniform(Natural(n));
            CHECK(Natural(1) <= sample);
            CHECK(sample < Natural(n));
            CHECK(source.bits_consumed() == width * static_cast<std::uint64_t>(i));
        }
    }
}

TEST_CASE("samples stay in range across n") {
    auto source = EntropySource::seeded(2024);
    for (std::uint64_t n = 2; n <= 66; ++n) {
        for (int i = 0; i < 200; ++i) {
            const Natural sample = source.sample_uniform(Natural(n));
            CAPTURE(n);
            REQUIRE(Natural(1) <= sample);
            REQUIRE(sample < Natural(n));
        }
    }
    // A few larger magnitudes.
    for (const std::uint64_t n : {1009ULL, 65537ULL, 9999991ULL}) {
        for (int i = 0; i < 500; ++i) {
            const Natural sample = source.sample_uniform(Natural(n));
            REQUIRE(Natural(1) <= sample);
            REQUIRE(sample < Natural(n));
        }
    }
}

TEST_CASE("chi-square uniformity for n = 17") {
    auto source = EntropySource::seeded(1);
    std::array<std::uint64_t, 16> counts{};
    constexpr int kSamples = 100000;
    for (int i = 0; i < kSamples; ++i) {
        counts[source.sample_uniform(Natural(17)).to_uint64() - 1]++;
    }
    const double expected = kSamples / 16.0;
    double chi_square = 0.0;
    for (const auto count : counts) {
        const double delta = static_cast<double>(count) - expected;
        chi_square += delta * delta / expected;
    }
    // 99.9% critical value for 15 degrees of freedom.
    CHECK(chi_square < 39.25);
}

TEST_CASE("fetch_remote_bits expands bytes most-significant-bit first") {
    mock::QrngServer server(mock::pattern_handler({5, 170}));
    const auto block = pev::fetch_remote_bits(server.endpoint(), 2);
    CHECK(block.bits == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 1, 0, 1,
                                                  1, 0, 1, 0, 1, 0, 1, 0});
    CHECK(block.origin.kind == pev::EntropyKind::RemoteQrng);
    CHECK(block.origin.endpoint == server.endpoint());

    mock::QrngServer extremes(mock::pattern_handler({0, 255}));
    const auto edges = pev::fetch_remote_bits(extremes.endpoint(), 2);
    std::vector<std::uint8_t> expected(8, 0);
    expected.insert(expected.end(), 8, 1);
    CHECK(edges.bits == expected);
}

TEST_CASE("fetch_remote_bits validates the request size") {
    mock::QrngServer server(mock::pattern_handler({1}));
    CHECK_THROWS_AS(pev::fetch_remote_bits(server.endpoint(), 0), pev::domain_error);
    CHECK_THROWS_AS(pev::fetch_remote_bits(server.endpoint(), 1025), pev::domain_error);
    CHECK(server.requests() == 0);
}

TEST_CASE("fetch_remote_bits rejects bad responses") {
    using httplib::Request;
    using httplib::Response;

    mock::QrngServer declared_failure([](const Request&, Response& res) {
        res.set_content("{\"success\":false}", "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(declared_failure.endpoint(), 2), pev::transport_error);

    mock::QrngServer wrong_length([](const Request&, Response& res) {
        res.set_content("{\"type\":\"uint8\",\"length\":2,\"data\":[1],\"success\":true}",
                        "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(wrong_length.endpoint(), 2), pev::transport_error);

    mock::QrngServer out_of_range([](const Request&, Response& res) {
        res.set_content("{\"type\":\"uint8\",\"length\":1,\"data\":[300],\"success\":true}",
                        "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(out_of_range.endpoint(), 1), pev::transport_error);

    mock::QrngServer not_integers([](const Request&, Response& res) {
        res.set_content("{\"type\":\"uint8\",\"length\":1,\"data\":[\"5\"],\"success\":true}",
                        "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(not_integers.endpoint(), 1), pev::transport_error);

    mock::QrngServer not_json([](const Request&, Response& res) {
        res.set_content("entropy!", "text/plain");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(not_json.endpoint(), 1), pev::transport_error);

    mock::QrngServer server_error([](const Request&, Response& res) {
        res.status = 500;
        res.set_content("{}", "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(server_error.endpoint(), 1), pev::transport_error);

    mock::QrngServer wrong_type([](const Request&, Response& res) {
        res.set_content("{\"type\":\"uint16\",\"length\":1,\"data\":[5],\"success\":true}",
                        "application/json");
    });
    CHECK_THROWS_AS(pev::fetch_remote_bits(wrong_type.endpoint(), 1), pev::transport_error);

    // No server listening at all.
    CHECK_THROWS_AS(pev::fetch_remote_bits("http://127.0.0.1:9/api", 1, {std::chrono::milliseconds(300), 0, 1024}),
                    pev::transport_error);
    CHECK_THROWS_AS(pev::fetch_remote_bits("no-scheme", 1), pev::transport_error);
}

TEST_CASE("retries are opt-in") {
    int failures_left = 1;
    mock::QrngServer flaky([&failures_left](const httplib::Request& req, httplib::Response& res) {
        if (failures_left > 0) {
            --failures_left;
            res.status = 503;
            return;
        }
        mock::pattern_handler({9})(req, res);
    });

    pev::QrngOptions no_retries;
    CHECK_THROWS_AS(pev::fetch_remote_bits(flaky.endpoint(), 1, no_retries), pev::transport_error);

    failures_left = 1;
    pev::QrngOptions one_retry;
    one_retry.retries = 1;
    const auto block = pev::fetch_remote_bits(flaky.endpoint(), 1, one_retry);
    CHECK(block.bits.size() == 8);
}

TEST_CASE("remote source buffers across requests") {
    mock::QrngServer server(mock::pattern_handler({232}));
    pev::QrngOptions options;
    options.max_bytes_per_request = 1;
    auto source = EntropySource::remote_qrng(server.endpoint(), options);

    // 11101000: sample_uniform(6) rejects 111 and accepts 010.
    CHECK(source.sample_uniform(Natural(6)) == Natural(3));
    CHECK(source.bits_consumed() == 6);
    CHECK(server.requests() == 1);

    // Two bits are still buffered; drawing 10 more needs one more request.
    const auto block = source.next_bits(10);
    CHECK(block.bits.size() == 10);
    CHECK(source.bits_consumed() == 16);
    CHECK(server.requests() == 2);
    CHECK(source.descriptor().endpoint == server.endpoint());
}
