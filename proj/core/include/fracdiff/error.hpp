#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

enum class ErrorCode {
    AlphaOutOfRange,
    GammaOutOfRange,
    GammaBelowSeriesBound,
    SigmaNonPositive,
    InvalidInput,
    Pole,
    NonConvergence,
    Divergence,
    NonPositivePartialSum,
    NotAtmForward,
    OutOfBand,
    ParityViolation,
    InsufficientData,
    AllSeedsFailed,
    Io,
    Parse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // validation-type failures map to CLI exit 2, I/O to 3
    bool is_io() const noexcept { return code_ == ErrorCode::Io || code_ == ErrorCode::Parse; }

private:
    ErrorCode code_;
};

}  // namespace fracdiff
