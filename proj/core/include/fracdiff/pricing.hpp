#pragma once

#include <vector>

#include "fracdiff/market.hpp"
#include "fracdiff/model.hpp"
#include "fracdiff/policy.hpp"

namespace fracdiff {

struct SeriesDiagnostics {
    std::vector<double> partial_sums_m;  // price after each m-slice
    std::vector<double> partial_sums_n;  // price after each n-column
    int terms_used = 0;
    bool converged = false;
    int precision_bits = 53;  // > 53 when the sum was redone in multiprecision
    int n_extent = 0;         // largest n reached
    int m_extent = 0;
};

struct SeriesResult {
    double price = 0.0;
    SeriesDiagnostics diagnostics;
};

double bs_call(const PricingInputs& inputs, double sigma);
// honours inputs.kind()
double bs_price(const PricingInputs& inputs, double sigma);

// Always prices the call, whatever inputs.kind() says.
SeriesResult dfrac_call_series(const ModelParams& params, const PricingInputs& inputs, const RiskNeutralParam& mu,
                               const TruncationPolicy& policy = TruncationPolicy::adaptive());

SeriesDiagnostics partial_sum_table(const ModelParams& params, const PricingInputs& inputs,
                                    const RiskNeutralParam& mu,
                                    const TruncationPolicy& policy = TruncationPolicy::adaptive());

double put_from_parity(double call, const PricingInputs& inputs);

enum class PriceMethod { ClosedForm, Series, Quadrature };
const char* to_string(PriceMethod method) noexcept;

struct PriceResult {
    double price = 0.0;
    PriceMethod method = PriceMethod::Series;
    double mu = 0.0;
};

// Falls back to the Green-function quadrature when the series reports
// divergence (moneyness far outside its practical domain).
PriceResult price_detailed(const ModelParams& params, const PricingInputs& inputs,
                           const TruncationPolicy& policy = TruncationPolicy::adaptive());

double price(const ModelParams& params, const PricingInputs& inputs,
             const TruncationPolicy& policy = TruncationPolicy::adaptive());

// Same as price() with μ supplied by the caller (smiles use the first-order μ).
double price_with_mu(const ModelParams& params, const PricingInputs& inputs, const RiskNeutralParam& mu,
                     const TruncationPolicy& policy);

}  // namespace fracdiff
