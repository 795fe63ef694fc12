#include "fracdiff/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fracdiff/error.hpp"

namespace fracdiff {

const char* to_string(OptionKind kind) noexcept { return kind == OptionKind::Call ? "call" : "put"; }

OptionKind parse_option_kind(const std::string& text) {
    if (text == "call" || text == "C" || text == "c") return OptionKind::Call;
    if (text == "put" || text == "P" || text == "p") return OptionKind::Put;
    throw Error(ErrorCode::Parse, fmt::format("unknown option kind '{}'", text));
}

PricingInputs::PricingInputs(double spot, double strike, double rate, double tau, OptionKind kind)
    : spot_(spot), strike_(strike), rate_(rate), tau_(tau), kind_(kind) {
    if (!(spot > 0.0) || !std::isfinite(spot))
        throw Error(ErrorCode::InvalidInput, fmt::format("spot must be > 0: spot = {}", spot));
    if (!(strike >= 0.0) || !std::isfinite(strike))
        throw Error(ErrorCode::InvalidInput, fmt::format("strike must be >= 0: strike = {}", strike));
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::InvalidInput, fmt::format("tau must be > 0: tau = {}", tau));
    if (!std::isfinite(rate)) throw Error(ErrorCode::InvalidInput, "rate must be finite");
    log_fwd_ = strike > 0.0 ? std::log(spot / strike) + rate * tau : std::numeric_limits<double>::infinity();
}

double PricingInputs::discount() const { return std::exp(-rate_ * tau_); }

double PricingInputs::forward_intrinsic() const { return std::max(spot_ - strike_ * discount(), 0.0); }

}  // namespace fracdiff
