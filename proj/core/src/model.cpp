#include "fracdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

#include "fracdiff/error.hpp"
#include "fracdiff/special_functions.hpp"

namespace fracdiff {

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::BlackScholes: return "bs";
        case ModelKind::FMLS: return "fmls";
        case ModelKind::DoubleFractional: return "dfrac";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
    if (text == "bs" || text == "black-scholes") return ModelKind::BlackScholes;
    if (text == "fmls") return ModelKind::FMLS;
    if (text == "dfrac" || text == "double-fractional") return ModelKind::DoubleFractional;
    throw Error(ErrorCode::InvalidInput, fmt::format("unknown model kind '{}'", text));
}

void TruncationPolicy::check() const {
    if (n_max < 0) throw Error(ErrorCode::InvalidInput, "truncation n_max must be >= 0");
    if (m_max < 1) throw Error(ErrorCode::InvalidInput, "truncation m_max must be >= 1");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidInput, "truncation tolerance must be > 0");
}

const ModelParams& validate(const ModelParams& p) {
    if (!(p.alpha > 1.0 && p.alpha <= 2.0))
        throw Error(ErrorCode::AlphaOutOfRange, fmt::format("alpha out of range (1, 2]: alpha = {}", p.alpha));
    if (!(p.gamma > 0.0 && p.gamma <= p.alpha))
        throw Error(ErrorCode::GammaOutOfRange,
                    fmt::format("gamma out of range (0, alpha]: gamma = {}, alpha = {}", p.gamma, p.alpha));
    const double bound = 1.0 - 1.0 / p.alpha;
    if (!(p.gamma > bound))
        throw Error(ErrorCode::GammaBelowSeriesBound,
                    fmt::format("gamma <= 1 - 1/alpha: gamma = {}, 1 - 1/alpha = {}", p.gamma, bound));
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw Error(ErrorCode::SigmaNonPositive, fmt::format("sigma <= 0: sigma = {}", p.sigma));
    if (p.kind == ModelKind::BlackScholes && (p.alpha != 2.0 || p.gamma != 1.0))
        throw Error(ErrorCode::InvalidInput, "Black-Scholes kind requires alpha = 2 and gamma = 1");
    if (p.kind == ModelKind::FMLS && p.gamma != 1.0)
        throw Error(ErrorCode::InvalidInput, "FMLS kind requires gamma = 1");
    return p;
}

double mu_levy(double alpha, double sigma) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw Error(ErrorCode::AlphaOutOfRange, fmt::format("alpha out of range (1, 2]: alpha = {}", alpha));
    if (!(sigma > 0.0)) throw Error(ErrorCode::SigmaNonPositive, fmt::format("sigma <= 0: sigma = {}", sigma));
    if (alpha == 2.0) return -0.5 * sigma * sigma;
    return std::pow(sigma / std::numbers::sqrt2, alpha) / std::cos(0.5 * std::numbers::pi * alpha);
}

RiskNeutralParam mu_gamma_series(const ModelParams& params, const TruncationPolicy& policy) {
    validate(params);
    policy.check();
    if (params.kind == ModelKind::BlackScholes) return {-0.5 * params.sigma * params.sigma, 0, true};
    const double mu1 = mu_levy(params.alpha, params.sigma);
    if (params.kind == ModelKind::FMLS) return {mu1, 0, true};

    const double a = params.alpha;
    const double g = params.gamma;
    const double log_m = std::log(-mu1);
    // (-1)^n μ1^n = |μ1|^n, so every term is positive; sum the tail beyond n = 0
    double tail = 0.0;
    double prev = INFINITY;
    int small = 0;
    int n = 1;
    bool converged = false;
    for (; n <= policy.n_max; ++n) {
        const double lt = std::lgamma(1.0 + a * n) - std::lgamma(1.0 + n) - std::lgamma(1.0 + g * a * n) + n * log_m;
        const double term = std::exp(lt);
        tail += term;
        small = term < policy.tolerance * (1.0 + tail) ? small + 1 : 0;
        if (small >= 3) {
            converged = true;
            break;
        }
        if (n > 8 && term > prev)
            throw Error(ErrorCode::NonConvergence,
                        fmt::format("risk-neutral series terms grow at n = {} (alpha = {}, gamma = {}, sigma = {})", n,
                                    a, g, params.sigma));
        prev = term;
    }
    if (!(1.0 + tail > 0.0)) throw Error(ErrorCode::NonPositivePartialSum, "risk-neutral partial sum is not positive");
    return {-std::log1p(tail), std::min(n, policy.n_max) + 1, converged};
}

ContourSpec mu_contour() {
    ContourSpec c;
    c.shape = ContourShape::RightLoop;
    c.abscissa = 0.5;
    c.half_length = 60.0;
    c.nodes = 2048;
    c.loop_height = 2.0;
    return c;
}

double mu_gamma_mb(const ModelParams& params, const ContourSpec& contour) {
    validate(params);
    if (!(contour.abscissa > 0.0 && contour.abscissa < 1.0))
        throw Error(ErrorCode::InvalidInput, "contour abscissa must lie in (0, 1)");
    const double a = params.alpha;
    const double g = params.gamma;
    const std::complex<double> log_mu1(std::log(-mu_levy(a, params.sigma)), std::numbers::pi);
    auto integrand = [&](std::complex<double> s) {
        return std::exp(log_gamma(s) + log_gamma((1.0 - s) / a) - log_gamma(g * s + 1.0 - g) +
                        (s - 1.0) / a * log_mu1);
    };
    const std::complex<double> bracket = mb_line_integral(integrand, contour, 1e-10) / a;
    if (std::abs(bracket.imag()) > 1e-10)
        throw Error(ErrorCode::NonConvergence,
                    fmt::format("risk-neutral integral has imaginary residue {:.3e}", bracket.imag()));
    if (!(bracket.real() > 0.0))
        throw Error(ErrorCode::NonPositivePartialSum, "risk-neutral integral is not positive");
    return -std::log(bracket.real());
}

double mu_gamma_approx(const ModelParams& params) {
    validate(params);
    const double a = params.alpha;
    const double ratio = std::exp(std::lgamma(1.0 + a) - std::lgamma(1.0 + params.gamma * a));
    return ratio * mu_levy(a, params.sigma);
}

}  // namespace fracdiff
