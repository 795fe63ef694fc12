#include "fracdiff/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_blas.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_vector.h>

#include "fracdiff/error.hpp"
#include "fracdiff/pricing.hpp"
#include "fracdiff/special_functions.hpp"

namespace fracdiff {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

struct Bracket {
    double lo, hi, flo, fhi;
};

// Geometric scan for sign changes; returns the crossing nearest the guess.
Bracket scan_for_root(const std::function<double(double)>& f, double lo, double hi, double guess) {
    constexpr int kPoints = 64;
    const double ratio = std::pow(hi / lo, 1.0 / (kPoints - 1));
    double x_prev = lo;
    double f_prev = f(lo);
    bool found = false;
    Bracket best{};
    double best_dist = INFINITY;
    for (int i = 1; i < kPoints; ++i) {
        const double x = i == kPoints - 1 ? hi : lo * std::pow(ratio, i);
        const double fx = f(x);
        if ((f_prev <= 0.0 && fx >= 0.0) || (f_prev >= 0.0 && fx <= 0.0)) {
            const double dist = std::abs(std::log(std::sqrt(x * x_prev) / guess));
            if (dist < best_dist) {
                best = {x_prev, x, f_prev, fx};
                best_dist = dist;
                found = true;
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    if (!found) throw Error(ErrorCode::OutOfBand, "no implied volatility inside the search bracket");
    return best;
}

}  // namespace

ImpliedVolResult implied_vol(const VolPricer& pricer, double market_price, std::pair<double, double> bracket,
                             const ImpliedVolOptions& options) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0 && hi > lo)) throw Error(ErrorCode::InvalidInput, "implied vol bracket must satisfy 0 < lo < hi");
    if (!std::isfinite(market_price)) throw Error(ErrorCode::InvalidInput, "market price must be finite");
    auto f = [&](double s) { return pricer(s) - market_price; };

    double flo = f(lo);
    double fhi = f(hi);
    const double guess = std::clamp(options.initial_guess, lo, hi);
    if (flo == 0.0) return {lo, 0, 0.0};
    if (fhi == 0.0) return {hi, 0, 0.0};
    if ((flo > 0.0) == (fhi > 0.0)) {
        const Bracket b = scan_for_root(f, lo, hi, guess);
        lo = b.lo;
        hi = b.hi;
        flo = b.flo;
        fhi = b.fhi;
    }

    double x = guess > lo && guess < hi ? guess : std::sqrt(lo * hi);
    double fx = NAN;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        fx = f(x);
        if (fx == 0.0 || std::abs(fx) < 1e-4 * options.price_tolerance) break;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        const double h = 1e-4 * x;
        const double slope = (f(x + h) - f(x - h)) / (2.0 * h);
        double next = x - fx / slope;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 4e-16 * x || hi - lo <= 4e-16 * x) {
            fx = f(x);
            break;
        }
    }
    if (!std::isfinite(fx)) fx = f(x);
    const double residual = std::abs(fx);
    if (!(residual <= options.price_tolerance))
        throw Error(ErrorCode::NonConvergence,
                    fmt::format("implied vol did not converge: residual {:.3e} after {} iterations", residual, it));
    return {x, it, residual};
}

double initial_vol_guess(const PricingInputs& in, double market_price) {
    const double fwd_gap = in.spot() - in.strike() * in.discount();
    const double call = in.kind() == OptionKind::Call ? market_price : market_price + fwd_gap;
    const double time_value = call - 0.5 * fwd_gap;
    if (!(time_value > 0.0)) return 0.05;
    return std::clamp(time_value / in.spot() * kSqrt2Pi / std::sqrt(in.tau()), 0.05, 2.0);
}

namespace {

void check_band(const PricingInputs& in, double market_price) {
    const double Kd = in.strike() * in.discount();
    double lower, upper;
    if (in.kind() == OptionKind::Call) {
        lower = std::max(in.spot() - Kd, 0.0);
        upper = in.spot();
    } else {
        lower = std::max(Kd - in.spot(), 0.0);
        upper = Kd;
    }
    if (!(market_price > lower && market_price < upper))
        throw Error(ErrorCode::OutOfBand, fmt::format("price {} outside the no-arbitrage band ({}, {})", market_price,
                                                      lower, upper));
}

}  // namespace

ImpliedVolResult implied_vol(const ModelParams& params, const PricingInputs& inputs, double market_price,
                             const TruncationPolicy& policy) {
    validate(params);
    check_band(inputs, market_price);
    ImpliedVolOptions opt;
    opt.price_tolerance = 1e-8 * inputs.spot();
    opt.initial_guess = initial_vol_guess(inputs, market_price);
    auto pricer = [&](double s) { return price(params.with_sigma(s), inputs, policy); };
    // large σ can push the risk-neutral series past convergence; pull the
    // upper end in until the model prices
    double hi = 5.0;
    for (int k = 0; k < 40; ++k) {
        try {
            pricer(hi);
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonConvergence && e.code() != ErrorCode::Divergence &&
                e.code() != ErrorCode::NonPositivePartialSum)
                throw;
            hi *= 0.8;
        }
    }
    return implied_vol(pricer, market_price, {1e-4, std::max(hi, 2e-4)}, opt);
}

double atm_bs_implied(double call_price, double spot, double tau) {
    if (!(spot > 0.0) || !(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "spot and tau must be > 0");
    if (!(call_price >= 0.0 && call_price < spot))
        throw Error(ErrorCode::OutOfBand, fmt::format("ATM call price {} outside [0, S)", call_price));
    return call_price / spot * std::sqrt(2.0 * std::numbers::pi / tau);
}

namespace {

void check_atm_forward(const PricingInputs& in) {
    if (std::abs(in.log_fwd()) > 1e-6)
        throw Error(ErrorCode::NotAtmForward,
                    fmt::format("quote is not at-the-money forward: log(S/K) + r tau = {}", in.log_fwd()));
}

}  // namespace

double atm_bs_implied(double call_price, const PricingInputs& inputs) {
    check_atm_forward(inputs);
    return atm_bs_implied(call_price, inputs.spot(), inputs.tau());
}

double atm_fbs_implied(double call_price, double spot, double tau, double gamma) {
    if (!(gamma > 0.5 && gamma <= 2.0))
        throw Error(ErrorCode::GammaOutOfRange, fmt::format("gamma must lie in (1/2, 2]: gamma = {}", gamma));
    if (!(spot > 0.0) || !(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "spot and tau must be > 0");
    if (!(call_price >= 0.0 && call_price < spot))
        throw Error(ErrorCode::OutOfBand, fmt::format("ATM call price {} outside [0, S)", call_price));
    return 2.0 * call_price / spot * std::tgamma(1.0 + 0.5 * gamma) *
           std::sqrt(std::tgamma(1.0 + 2.0 * gamma) / std::pow(tau, gamma));
}

double atm_fbs_implied(double call_price, const PricingInputs& inputs, double gamma) {
    check_atm_forward(inputs);
    return atm_fbs_implied(call_price, inputs.spot(), inputs.tau(), gamma);
}

void QuoteChain::check(std::size_t min_quotes) const {
    if (!(spot > 0.0)) throw Error(ErrorCode::InvalidInput, "chain spot must be > 0");
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "chain tau must be > 0");
    if (!std::isfinite(rate)) throw Error(ErrorCode::InvalidInput, "chain rate must be finite");
    if (quotes.size() < min_quotes)
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("chain has {} quotes, at least {} required", quotes.size(), min_quotes));
    for (const auto& q : quotes) {
        if (!(q.strike > 0.0)) throw Error(ErrorCode::InvalidInput, fmt::format("strike must be > 0: {}", q.strike));
        if (!(q.price >= 0.0)) throw Error(ErrorCode::InvalidInput, fmt::format("price must be >= 0: {}", q.price));
    }
}

const char* to_string(VolStatus status) noexcept {
    switch (status) {
        case VolStatus::Ok: return "ok";
        case VolStatus::OutOfBand: return "out_of_band";
        case VolStatus::NotInvertible: return "not_invertible";
    }
    return "unknown";
}

VolEstimate smile_vol(const QuoteChain& chain, const Quote& quote, double gamma, const TruncationPolicy& policy) {
    const PricingInputs in = chain.inputs(quote);
    try {
        check_band(in, quote.price);
    } catch (const Error& e) {
        return {0.0, VolStatus::OutOfBand, e.what()};
    }
    ImpliedVolOptions opt;
    opt.price_tolerance = 1e-8 * in.spot();
    opt.initial_guess = initial_vol_guess(in, quote.price);
    const double fbs_norm = std::tgamma(1.0 + 2.0 * gamma);
    auto pricer = [&](double s) {
        const ModelParams p = ModelParams::double_fractional(2.0, gamma, s);
        return price_with_mu(p, in, {-s * s / fbs_norm, 0, true}, policy);
    };
    try {
        validate(ModelParams::double_fractional(2.0, gamma, 0.2));
        return {implied_vol(pricer, quote.price, {1e-4, 5.0}, opt).sigma, VolStatus::Ok, {}};
    } catch (const Error& e) {
        const VolStatus st = e.code() == ErrorCode::OutOfBand ? VolStatus::OutOfBand : VolStatus::NotInvertible;
        return {0.0, st, e.what()};
    }
}

std::vector<SmilePoint> build_smile(const QuoteChain& chain, const std::vector<double>& gammas,
                                    const TruncationPolicy& policy) {
    chain.check();
    policy.check();
    std::vector<SmilePoint> out;
    out.reserve(chain.quotes.size());
    for (const auto& q : chain.quotes) {
        SmilePoint pt;
        pt.strike = q.strike;
        pt.market_price = q.price;
        pt.sigma_bs = smile_vol(chain, q, 1.0, policy);
        for (double g : gammas) pt.sigma_fbs.emplace_back(g, smile_vol(chain, q, g, policy));
        out.push_back(std::move(pt));
    }
    return out;
}

namespace {

struct FitData {
    const QuoteChain* chain;
    const std::vector<double>* target;
    const TruncationPolicy* policy;
};

// parameters (r, log τ)
int fit_residuals(const gsl_vector* x, void* data, gsl_vector* f) {
    const auto* d = static_cast<const FitData*>(data);
    QuoteChain c = *d->chain;
    c.rate = gsl_vector_get(x, 0);
    c.tau = std::exp(gsl_vector_get(x, 1));
    for (std::size_t i = 0; i < c.quotes.size(); ++i) {
        const VolEstimate v = smile_vol(c, c.quotes[i], 1.0, *d->policy);
        gsl_vector_set(f, i, v.ok() ? v.sigma - (*d->target)[i] : 1.0);
    }
    return GSL_SUCCESS;
}

}  // namespace

RateTauFit fit_rate_tau(const QuoteChain& chain, const std::vector<double>& target_vols,
                        std::pair<double, double> start, const TruncationPolicy& policy) {
    if (target_vols.size() != chain.quotes.size())
        throw Error(ErrorCode::InvalidInput, "fit_rate_tau needs one target vol per quote");
    if (chain.quotes.size() < 2) throw Error(ErrorCode::InsufficientData, "fit_rate_tau needs at least 2 quotes");
    if (!(start.second > 0.0)) throw Error(ErrorCode::InvalidInput, "starting tau must be > 0");
    FitData data{&chain, &target_vols, &policy};
    const std::size_t n = chain.quotes.size();

    gsl_multifit_nlinear_fdf fdf{};
    fdf.f = fit_residuals;
    fdf.df = nullptr;  // finite-difference Jacobian
    fdf.fvv = nullptr;
    fdf.n = n;
    fdf.p = 2;
    fdf.params = &data;
    gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
    gsl_multifit_nlinear_workspace* w =
        gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, n, 2);
    gsl_vector* x0 = gsl_vector_alloc(2);
    gsl_vector_set(x0, 0, start.first);
    gsl_vector_set(x0, 1, std::log(start.second));
    gsl_multifit_nlinear_init(x0, &fdf, w);
    int info = 0;
    gsl_multifit_nlinear_driver(200, 1e-12, 1e-12, 1e-14, nullptr, nullptr, &info, w);

    RateTauFit fit;
    const gsl_vector* x = gsl_multifit_nlinear_position(w);
    fit.rate = gsl_vector_get(x, 0);
    fit.tau = std::exp(gsl_vector_get(x, 1));
    fit.iterations = static_cast<int>(gsl_multifit_nlinear_niter(w));
    const gsl_vector* r = gsl_multifit_nlinear_residual(w);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = gsl_vector_get(r, i);
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(ri));
        ss += ri * ri;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    gsl_vector_free(x0);
    gsl_multifit_nlinear_free(w);
    return fit;
}

}  // namespace fracdiff
