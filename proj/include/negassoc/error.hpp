#pragma once

#include <stdexcept>
#include <string>

namespace negassoc {

// Error categories map onto CLI exit codes in the harness: guard violations
// exit 3, parse/usage errors exit 2, everything else is a domain failure.
enum class ErrorKind {
    domain,
    degenerate_support,
    empty_event,
    dimension_mismatch,
    index_out_of_range,
    precondition,
    marginal_mismatch,
    guard_exceeded,
    parse,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::degenerate_support: return "degenerate-support";
        case ErrorKind::empty_event: return "empty-event";
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::index_out_of_range: return "index-out-of-range";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::marginal_mismatch: return "marginal-mismatch";
        case ErrorKind::guard_exceeded: return "guard-exceeded";
        case ErrorKind::parse: return "parse";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace negassoc
