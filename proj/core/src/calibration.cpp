#include "fracdiff/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <gsl/gsl_multimin.h>

#include "fracdiff/error.hpp"
#include "fracdiff/pricing.hpp"

namespace fracdiff {

namespace {

// Series-only pricing: a diverging series counts as a failed quote instead of
// triggering the quadrature fallback inside the optimiser loop.
double model_price(const ModelParams& params, const RiskNeutralParam& mu, const PricingInputs& in,
                   const TruncationPolicy& policy) {
    if (params.kind == ModelKind::BlackScholes) return bs_price(in, params.sigma);
    return price_with_mu(params, in, mu, policy);
}

}  // namespace

double failure_penalty(const QuoteChain& chain) {
    double total = 0.0;
    for (const auto& q : chain.quotes) total += q.price;
    return 10.0 * std::max(total, 1.0);
}

std::vector<double> quote_errors(const ModelParams& params, const QuoteChain& chain, const TruncationPolicy& policy) {
    if (chain.quotes.empty()) throw Error(ErrorCode::InsufficientData, "aggregated error of an empty chain");
    chain.check();
    const double penalty = failure_penalty(chain);
    std::vector<double> errors(chain.quotes.size(), penalty);
    RiskNeutralParam mu;
    try {
        validate(params);
        mu = mu_gamma_series(params);
    } catch (const Error&) {
        return errors;
    }
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        const Quote& q = chain.quotes[i];
        try {
            const double p = model_price(params, mu, chain.inputs(q), policy);
            if (std::isfinite(p)) errors[i] = p - q.price;
        } catch (const Error&) {
        }
    }
    return errors;
}

double aggregated_error(const ModelParams& params, const QuoteChain& chain, const TruncationPolicy& policy) {
    const auto e = quote_errors(params, chain, policy);
    return std::accumulate(e.begin(), e.end(), 0.0, [](double acc, double v) { return acc + std::abs(v); });
}

std::vector<ModelParams> default_seeds(ModelKind kind) {
    switch (kind) {
        case ModelKind::BlackScholes:
            return {ModelParams::black_scholes(0.2), ModelParams::black_scholes(0.1), ModelParams::black_scholes(0.3),
                    ModelParams::black_scholes(0.5), ModelParams::black_scholes(0.8)};
        case ModelKind::FMLS:
            return {ModelParams::fmls(2.0, 0.2), ModelParams::fmls(1.8, 0.2), ModelParams::fmls(1.6, 0.15),
                    ModelParams::fmls(1.4, 0.1), ModelParams::fmls(1.9, 0.35)};
        case ModelKind::DoubleFractional:
            return {ModelParams::double_fractional(2.0, 1.0, 0.2), ModelParams::double_fractional(1.8, 0.9, 0.2),
                    ModelParams::double_fractional(1.6, 1.0, 0.15), ModelParams::double_fractional(1.9, 1.2, 0.25),
                    ModelParams::double_fractional(1.5, 0.8, 0.1)};
    }
    return {};
}

namespace {

constexpr double kAlphaLo = 1.0 + 1e-3;
constexpr double kAlphaHi = 2.0;
constexpr double kSigmaLo = 1e-4;
constexpr double kSigmaHi = 5.0;

// mirror x into [lo, hi]; *dist receives how far outside it was
double reflect(double x, double lo, double hi, double* dist) {
    if (x >= lo && x <= hi) return x;
    *dist += x < lo ? lo - x : x - hi;
    const double w = hi - lo;
    double y = std::fmod(x - lo, 2.0 * w);
    if (y < 0.0) y += 2.0 * w;
    return y <= w ? lo + y : hi - (y - w);
}

struct Problem {
    const QuoteChain* chain;
    ModelKind kind;
    TruncationPolicy policy;
    double boundary_weight;
    int evaluations = 0;

    std::size_t dim() const {
        switch (kind) {
            case ModelKind::BlackScholes: return 1;
            case ModelKind::FMLS: return 2;
            case ModelKind::DoubleFractional: return 3;
        }
        return 0;
    }

    ModelParams to_params(const gsl_vector* x, double* dist) const {
        double d = 0.0;
        ModelParams p;
        if (kind == ModelKind::BlackScholes) {
            p = ModelParams::black_scholes(reflect(gsl_vector_get(x, 0), kSigmaLo, kSigmaHi, &d));
        } else if (kind == ModelKind::FMLS) {
            const double a = reflect(gsl_vector_get(x, 0), kAlphaLo, kAlphaHi, &d);
            p = ModelParams::fmls(a, reflect(gsl_vector_get(x, 1), kSigmaLo, kSigmaHi, &d));
        } else {
            const double a = reflect(gsl_vector_get(x, 0), kAlphaLo, kAlphaHi, &d);
            const double g_lo = std::max(1.0 - 1.0 / a + 1e-3, 1e-6);
            const double g = reflect(gsl_vector_get(x, 1), g_lo, a, &d);
            p = ModelParams::double_fractional(a, g, reflect(gsl_vector_get(x, 2), kSigmaLo, kSigmaHi, &d));
        }
        if (dist) *dist = d;
        return p;
    }

    void from_params(const ModelParams& p, gsl_vector* x) const {
        if (kind == ModelKind::BlackScholes) {
            gsl_vector_set(x, 0, p.sigma);
        } else if (kind == ModelKind::FMLS) {
            gsl_vector_set(x, 0, p.alpha);
            gsl_vector_set(x, 1, p.sigma);
        } else {
            gsl_vector_set(x, 0, p.alpha);
            gsl_vector_set(x, 1, p.gamma);
            gsl_vector_set(x, 2, p.sigma);
        }
    }
};

double objective(const gsl_vector* x, void* data) {
    auto* pb = static_cast<Problem*>(data);
    ++pb->evaluations;
    double dist = 0.0;
    const ModelParams p = pb->to_params(x, &dist);
    return aggregated_error(p, *pb->chain, pb->policy) + pb->boundary_weight * dist;
}

ModelParams as_kind(const ModelParams& seed, ModelKind kind) {
    switch (kind) {
        case ModelKind::BlackScholes: return ModelParams::black_scholes(seed.sigma);
        case ModelKind::FMLS: return ModelParams::fmls(seed.alpha, seed.sigma);
        case ModelKind::DoubleFractional: return ModelParams::double_fractional(seed.alpha, seed.gamma, seed.sigma);
    }
    return seed;
}

}  // namespace

CalibrationResult calibrate(const QuoteChain& chain, ModelKind kind, std::vector<ModelParams> seeds,
                            const CalibrationOptions& options) {
    chain.check(3);
    if (seeds.empty()) seeds = default_seeds(kind);
    const double penalty = failure_penalty(chain);

    Problem pb{&chain, kind, options.policy, penalty / 10.0};
    const std::size_t n = pb.dim();
    gsl_multimin_function fn{objective, n, &pb};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);

    CalibrationResult best;
    double best_value = INFINITY;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const ModelParams seed = as_kind(seeds[s], kind);
        validate(seed);
        pb.from_params(seed, x);
        if (kind == ModelKind::BlackScholes) {
            gsl_vector_set(step, 0, 0.25 * seed.sigma);
        } else {
            gsl_vector_set(step, 0, 0.1);
            gsl_vector_set(step, n - 1, 0.25 * seed.sigma);
            if (n == 3) gsl_vector_set(step, 1, 0.1);
        }
        gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_multimin_fminimizer_set(m, &fn, x, step);
        bool converged = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), options.size_tolerance) == GSL_SUCCESS) {
                converged = true;
                break;
            }
        }
        const double value = gsl_multimin_fminimizer_minimum(m);
        if (value < best_value) {
            best_value = value;
            best.params = pb.to_params(gsl_multimin_fminimizer_x(m), nullptr);
            best.converged = converged;
            best.best_seed = static_cast<int>(s);
        }
        gsl_multimin_fminimizer_free(m);
    }
    gsl_vector_free(x);
    gsl_vector_free(step);

    best.evaluations = pb.evaluations;
    best.per_quote_errors = quote_errors(best.params, chain, options.policy);
    best.aggregated_error = aggregated_error(best.params, chain, options.policy);
    const bool penalized = std::any_of(best.per_quote_errors.begin(), best.per_quote_errors.end(),
                                       [&](double e) { return e == penalty; });
    if (penalized)
        throw Error(ErrorCode::AllSeedsFailed,
                    fmt::format("every calibration run ended with unpriceable quotes (best AE {})", best.aggregated_error));
    return best;
}

}  // namespace fracdiff
