#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracdiff/market.hpp"
#include "fracdiff/model.hpp"
#include "fracdiff/policy.hpp"

namespace fracdiff {

struct ImpliedVolResult {
    double sigma = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |pricer(sigma) - market_price|
};

struct ImpliedVolOptions {
    double price_tolerance = 1e-8;  // absolute; the model-aware overload uses 1e-8 * S
    int max_iterations = 100;
    double initial_guess = 0.2;
};

using VolPricer = std::function<double(double sigma)>;

// Bracketed Newton (central-difference slope) with bisection fallback.
// Throws OutOfBand when the bracket holds no root, NonConvergence otherwise.
ImpliedVolResult implied_vol(const VolPricer& pricer, double market_price,
                             std::pair<double, double> bracket = {1e-4, 5.0}, const ImpliedVolOptions& options = {});

// Checks the no-arbitrage band first and seeds Newton from the ATM formula.
ImpliedVolResult implied_vol(const ModelParams& params, const PricingInputs& inputs, double market_price,
                             const TruncationPolicy& policy = TruncationPolicy::adaptive());

// ATM formula applied to the time value of the quote, clipped to [0.05, 2].
double initial_vol_guess(const PricingInputs& inputs, double market_price);

double atm_bs_implied(double call_price, double spot, double tau);
double atm_bs_implied(double call_price, const PricingInputs& inputs);
double atm_fbs_implied(double call_price, double spot, double tau, double gamma);
double atm_fbs_implied(double call_price, const PricingInputs& inputs, double gamma);

struct Quote {
    OptionKind kind = OptionKind::Call;
    double strike = 0.0;
    double price = 0.0;
};

struct QuoteChain {
    double spot = 0.0;
    double rate = 0.0;
    double tau = 0.0;
    std::vector<Quote> quotes;

    void check(std::size_t min_quotes = 1) const;
    PricingInputs inputs(const Quote& q) const { return {spot, q.strike, rate, tau, q.kind}; }
};

enum class VolStatus { Ok, OutOfBand, NotInvertible };
const char* to_string(VolStatus status) noexcept;

struct VolEstimate {
    double sigma = 0.0;  // meaningful only when status == Ok
    VolStatus status = VolStatus::Ok;
    std::string reason;

    bool ok() const { return status == VolStatus::Ok; }
};

struct SmilePoint {
    double strike = 0.0;
    double market_price = 0.0;
    VolEstimate sigma_bs;
    std::vector<std::pair<double, VolEstimate>> sigma_fbs;  // (γ, vol)
};

// α = 2 smile: the Black-Scholes column and one fractional column per γ, every
// price from the truncated series with μ = -σ²/Γ(1+2γ) (γ = 1 gives the BS column).
std::vector<SmilePoint> build_smile(const QuoteChain& chain, const std::vector<double>& gammas,
                                    const TruncationPolicy& policy = TruncationPolicy::smile());

VolEstimate smile_vol(const QuoteChain& chain, const Quote& quote, double gamma, const TruncationPolicy& policy);

struct RateTauFit {
    double rate = 0.0;
    double tau = 0.0;
    double max_abs_residual = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
};

// Least-squares fit of (r, τ) so that the smile's Black-Scholes column
// reproduces target_vols; chain.rate / chain.tau are ignored.
RateTauFit fit_rate_tau(const QuoteChain& chain, const std::vector<double>& target_vols,
                        std::pair<double, double> start = {0.02, 0.25},
                        const TruncationPolicy& policy = TruncationPolicy::smile());

}  // namespace fracdiff
