#include "fracdiff/error.hpp"

namespace fracdiff {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::AlphaOutOfRange: return "alpha_out_of_range";
        case ErrorCode::GammaOutOfRange: return "gamma_out_of_range";
        case ErrorCode::GammaBelowSeriesBound: return "gamma_below_series_bound";
        case ErrorCode::SigmaNonPositive: return "sigma_non_positive";
        case ErrorCode::InvalidInput: return "invalid_input";
        case ErrorCode::Pole: return "pole";
        case ErrorCode::NonConvergence: return "non_convergence";
        case ErrorCode::Divergence: return "divergence";
        case ErrorCode::NonPositivePartialSum: return "non_positive_partial_sum";
        case ErrorCode::NotAtmForward: return "not_atm_forward";
        case ErrorCode::OutOfBand: return "out_of_band";
        case ErrorCode::ParityViolation: return "parity_violation";
        case ErrorCode::InsufficientData: return "insufficient_data";
        case ErrorCode::AllSeedsFailed: return "all_seeds_failed";
        case ErrorCode::Io: return "io";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

}  // namespace fracdiff
