#pragma once

#include <stdexcept>

namespace pev {

/// Argument outside an operation's stated domain.
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input exceeds a configured enumeration or exhaustion cap.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote entropy failure: network, status, or bad response body.
class transport_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Certificate bytes that do not parse as a canonical document.
class malformed_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pev
