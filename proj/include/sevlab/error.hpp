#pragma once

#include <stdexcept>
#include <string>

namespace sevlab {

enum class ErrorKind {
    IntermediateMissingness,
    UnknownCategory,
    EmptyClass,
    KTooLarge,
    Malformed,
    InconsistentTotals,
    FractionalInput,
    TooFewMinority,
    LengthMismatch,
    EmptyMatrix,
    SingleClass,
    NonFinite,
    ColumnMismatch,
    WrongKind,
    IoError,
    Internal,
};

const char* error_kind_name(ErrorKind k);

class SevError : public std::runtime_error {
  public:
    SevError(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw SevError(kind, message);
}

} // namespace sevlab
