#pragma once

#include <vector>

#include "fracdiff/model.hpp"
#include "fracdiff/policy.hpp"
#include "fracdiff/volatility.hpp"

namespace fracdiff {

// Σ|model - market|; a quote the model cannot price adds 10 * Σ market prices.
double aggregated_error(const ModelParams& params, const QuoteChain& chain,
                        const TruncationPolicy& policy = TruncationPolicy::adaptive());

// signed model - market per quote, penalty value for failures
std::vector<double> quote_errors(const ModelParams& params, const QuoteChain& chain,
                                 const TruncationPolicy& policy = TruncationPolicy::adaptive());

double failure_penalty(const QuoteChain& chain);

struct CalibrationResult {
    ModelParams params;
    double aggregated_error = 0.0;
    int evaluations = 0;
    bool converged = false;
    std::vector<double> per_quote_errors;
    int best_seed = -1;
};

struct CalibrationOptions {
    int max_iterations = 600;  // per seed
    double size_tolerance = 1e-9;
    TruncationPolicy policy = TruncationPolicy::adaptive();
};

std::vector<ModelParams> default_seeds(ModelKind kind);

// Nelder-Mead from every seed over the free parameters of `kind`, kept inside
// the admissible region by reflection plus a distance penalty.
CalibrationResult calibrate(const QuoteChain& chain, ModelKind kind, std::vector<ModelParams> seeds = {},
                            const CalibrationOptions& options = {});

}  // namespace fracdiff
