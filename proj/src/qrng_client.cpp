#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pev/entropy.hpp"

namespace pev {

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;  // leading '/', possibly with a query
};

SplitUrl split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw transport_error("endpoint must include a scheme: \"" + endpoint + "\"");
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

BitBlock fetch_once(const std::string& endpoint, std::size_t byte_count, const QrngOptions& options) {
    const SplitUrl url = split_endpoint(endpoint);
    httplib::Client client(url.base);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_follow_location(true);

    const std::string target = url.path + (url.path.find('?') == std::string::npos ? "?" : "&") +
                               "length=" + std::to_string(byte_count) + "&type=uint8";
    const httplib::Result result = client.Get(target);
    if (!result) {
        throw transport_error("request to " + endpoint + " failed: " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw transport_error("request to " + endpoint + " returned status " + std::to_string(result->status));
    }

    const nlohmann::json body = nlohmann::json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded() || !body.is_object()) {
        throw transport_error("response from " + endpoint + " is not a JSON object");
    }
    if (!body.contains("success") || !body["success"].is_boolean() || !body["success"].get<bool>()) {
        throw transport_error("service at " + endpoint + " reported failure");
    }
    if (body.contains("type") && body["type"] != "uint8") {
        throw transport_error("unexpected data type in response: " + body["type"].dump());
    }
    if (!body.contains("data") || !body["data"].is_array()) {
        throw transport_error("response is missing the data array");
    }
    const auto& data = body["data"];
    if (data.size() != byte_count) {
        throw transport_error("expected " + std::to_string(byte_count) + " bytes, got " +
                              std::to_string(data.size()));
    }
    if (body.contains("length") && (!body["length"].is_number_integer() ||
                                    body["length"].get<std::int64_t>() != static_cast<std::int64_t>(byte_count))) {
        throw transport_error("length field disagrees with the data array");
    }

    BitBlock block;
    block.bits.reserve(byte_count * 8);
    for (const auto& element : data) {
        if (!element.is_number_integer() || element.is_number_float()) {
            throw transport_error("data element is not an integer: " + element.dump());
        }
        const auto value = element.get<std::int64_t>();
        if (value < 0 || value > 255) {
            throw transport_error("data element out of uint8 range: " + element.dump());
        }
        for (int i = 7; i >= 0; --i) {
            block.bits.push_back(static_cast<std::uint8_t>((value >> i) & 1));
        }
    }
    block.origin.kind = EntropyKind::RemoteQrng;
    block.origin.endpoint = endpoint;
    block.origin.bits_consumed = byte_count * 8;
    return block;
}

} // namespace

BitBlock fetch_remote_bits(const std::string& endpoint, std::size_t byte_count, const QrngOptions& options) {
    if (byte_count == 0) {
        throw domain_error("fetch_remote_bits requires byte_count >= 1");
    }
    if (byte_count > options.max_bytes_per_request) {
        throw domain_error("fetch_remote_bits: byte_count " + std::to_string(byte_count) +
                           " exceeds the per-request cap " + std::to_string(options.max_bytes_per_request));
    }

    unsigned attempts_left = options.retries;
    while (true) {
        try {
            return fetch_once(endpoint, byte_count, options);
        } catch (const transport_error&) {
            if (attempts_left == 0) {
                throw;
            }
            --attempts_left;
        }
    }
}

} // namespace pev
