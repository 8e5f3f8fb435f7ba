#pragma once

#include <stdexcept>
#include <string>

namespace ocpst {

enum class ErrorKind {
    InvalidParameter,
    SizeLimit,
    NumericalFailure,
    CorruptTable,
    Schema,
    Inconsistency,
    InvariantBreach,
    Validation,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::CorruptTable: return "corrupt-table";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::InvariantBreach: return "invariant-breach";
    case ErrorKind::Validation: return "validation";
    }
    return "error";
}

} // namespace ocpst
