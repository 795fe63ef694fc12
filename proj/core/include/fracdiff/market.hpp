#pragma once

#include <string>

namespace fracdiff {

enum class OptionKind { Call, Put };

const char* to_string(OptionKind kind) noexcept;
OptionKind parse_option_kind(const std::string& text);

// S, K, r, τ and the forward log-moneyness log(S/K) + rτ, which is derived
// on construction. A zero strike is accepted (log_fwd = +inf); the series
// engine rejects it, the closed forms handle it.
class PricingInputs {
public:
    PricingInputs(double spot, double strike, double rate, double tau, OptionKind kind = OptionKind::Call);

    double spot() const { return spot_; }
    double strike() const { return strike_; }
    double rate() const { return rate_; }
    double tau() const { return tau_; }
    OptionKind kind() const { return kind_; }
    double log_fwd() const { return log_fwd_; }
    double discount() const;
    double forward_intrinsic() const;  // [S - K e^{-rτ}]^+

    PricingInputs with_spot(double spot) const { return {spot, strike_, rate_, tau_, kind_}; }
    PricingInputs with_strike(double strike) const { return {spot_, strike, rate_, tau_, kind_}; }
    PricingInputs with_kind(OptionKind kind) const { return {spot_, strike_, rate_, tau_, kind}; }

private:
    double spot_;
    double strike_;
    double rate_;
    double tau_;
    OptionKind kind_;
    double log_fwd_;
};

}  // namespace fracdiff
