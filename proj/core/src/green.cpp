#include "fracdiff/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "fracdiff/error.hpp"
#include "fracdiff/special_functions.hpp"

namespace fracdiff {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cplx log_ratio_positive(cplx t, double a, double g) { return log_gamma(1.0 - t) - log_gamma(1.0 - g * t / a); }

// reflected asymmetry 2 - α, positivity parameter 1 - 1/α
cplx log_ratio_reflected(cplx t, double a, double g) {
    const double rho = 1.0 - 1.0 / a;
    return log_gamma(t / a) + log_gamma(1.0 - t / a) + log_gamma(1.0 - t) - log_gamma(1.0 - g * t / a) -
           log_gamma(rho * t) - log_gamma(1.0 - rho * t);
}

void check_density_args(double alpha, double gamma, double mu, double tau) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw Error(ErrorCode::AlphaOutOfRange, fmt::format("alpha out of range (1, 2]: alpha = {}", alpha));
    if (!(gamma > 0.0 && gamma <= alpha))
        throw Error(ErrorCode::GammaOutOfRange, fmt::format("gamma out of range (0, alpha]: gamma = {}", gamma));
    if (!(mu < 0.0)) throw Error(ErrorCode::InvalidInput, fmt::format("mu must be < 0: mu = {}", mu));
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidInput, fmt::format("tau must be > 0: tau = {}", tau));
}

void check_strip(const ContourSpec& contour) {
    if (!(contour.abscissa > 0.0 && contour.abscissa < 1.0))
        throw Error(ErrorCode::InvalidInput, "contour abscissa must lie in (0, 1)");
}

// |Γ(1-t)/Γ(1-γt/α)| falls off like exp(-(π/2)(1 - γ/α)|Im t|); as γ approaches α the
// line has to be longer before the truncation error drops below round-off
ContourSpec widen_for_decay(ContourSpec c, double a, double g) {
    const double rate = 0.5 * kPi * (1.0 - g / a);
    const double wanted = std::min(rate > 0.0 ? 40.0 / rate : INFINITY, 1500.0);
    if (wanted > c.half_length) {
        c.nodes = static_cast<int>(std::ceil(c.nodes * wanted / c.half_length));
        c.half_length = wanted;
    }
    return c;
}

}  // namespace

GreenKernel::GreenKernel(double alpha, double gamma, double mu, double tau, const ContourSpec& contour,
                         NegativeBranch branch)
    : alpha_(alpha),
      lambda_(std::pow(-mu * std::pow(tau, gamma), 1.0 / alpha)),
      abscissa_(contour.abscissa),
      branch_(branch) {
    check_density_args(alpha, gamma, mu, tau);
    check_strip(contour);
    ContourSpec line = widen_for_decay(contour, alpha, gamma);
    line.shape = ContourShape::Vertical;
    const ContourRule rule = make_contour_rule(line);
    for (std::size_t j = 0; j < rule.point.size(); ++j) {
        const cplx t = rule.point[j];
        positive_.point.push_back(t);
        positive_.weighted.push_back(std::exp(log_ratio_positive(t, alpha, gamma)) * rule.weight[j]);
        positive_.abs_sum += std::abs(positive_.weighted.back());
    }
    // far out on the right the true density is far below round-off, so what the
    // sum returns there measures the achieved cancellation error
    constexpr double kFar = 200.0;
    const double far = std::abs(evaluate(positive_, cplx(std::log(kFar), 0.0)));
    noise_scale_ = std::max(64.0 * 0x1p-52, 8.0 * far / (positive_.abs_sum * std::pow(kFar, abscissa_)));
    if (branch == NegativeBranch::Reflection) {
        for (std::size_t j = 0; j < rule.point.size(); ++j) {
            const cplx t = rule.point[j];
            negative_.point.push_back(t);
            negative_.weighted.push_back(std::exp(log_ratio_reflected(t, alpha, gamma)) * rule.weight[j]);
        }
    } else {
        ContourSpec loop = contour;
        loop.shape = ContourShape::RightLoop;
        const ContourRule bent = make_contour_rule(loop);
        for (std::size_t j = 0; j < bent.point.size(); ++j) {
            const cplx t = bent.point[j];
            negative_.point.push_back(t);
            negative_.weighted.push_back(std::exp(log_ratio_positive(t, alpha, gamma)) * bent.weight[j]);
        }
    }
}

double GreenKernel::evaluate(const Side& side, cplx log_base) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < side.point.size(); ++j) sum += side.weighted[j] * std::exp(side.point[j] * log_base);
    return sum.real();
}

double GreenKernel::noise_floor(double x) const {
    return noise_scale_ * positive_.abs_sum * std::pow(std::abs(x) / lambda_, abscissa_) / (alpha_ * std::abs(x));
}

double GreenKernel::operator()(double x) const {
    if (x == 0.0) throw Error(ErrorCode::InvalidInput, "Green density is evaluated at x != 0 only");
    const double lu = std::log(std::abs(x) / lambda_);
    if (x > 0.0) return evaluate(positive_, cplx(lu, 0.0)) / (alpha_ * x);
    if (branch_ == NegativeBranch::Reflection) return evaluate(negative_, cplx(lu, 0.0)) / (alpha_ * -x);
    return evaluate(negative_, cplx(lu, kPi)) / (alpha_ * x);
}

double green_density(const GreenDensityQuery& q, const ContourSpec& contour, NegativeBranch branch) {
    check_density_args(q.alpha, q.gamma, q.mu, q.tau);
    check_strip(contour);
    if (q.x == 0.0 || !std::isfinite(q.x))
        throw Error(ErrorCode::InvalidInput, "Green density is evaluated at finite x != 0 only");
    const double a = q.alpha;
    const double g = q.gamma;
    const double lambda = std::pow(-q.mu * std::pow(q.tau, g), 1.0 / a);
    const double lu = std::log(std::abs(q.x) / lambda);

    ContourSpec spec = widen_for_decay(contour, a, g);
    ComplexFunction f;
    if (q.x > 0.0) {
        spec.shape = ContourShape::Vertical;
        f = [=](cplx t) { return std::exp(log_ratio_positive(t, a, g) + t * lu); };
    } else if (branch == NegativeBranch::Reflection) {
        spec.shape = ContourShape::Vertical;
        f = [=](cplx t) { return std::exp(log_ratio_reflected(t, a, g) + t * lu); };
    } else {
        spec.shape = ContourShape::RightLoop;
        const cplx lb(lu, kPi);
        f = [=](cplx t) { return std::exp(log_ratio_positive(t, a, g) + t * lb); };
    }
    const cplx integral = mb_line_integral(f, spec, 1e-10);
    if (q.x < 0.0 && branch == NegativeBranch::AnalyticContinuation) return integral.real() / (a * q.x);
    return integral.real() / (a * std::abs(q.x));
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double integrate(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return GK::integrate(f, a, b, 10, 1e-10);
}

}  // namespace

double reference_price(const ModelParams& params, const PricingInputs& inputs, const ContourSpec& contour,
                       NegativeBranch branch) {
    validate(params);
    const double mu = mu_gamma_series(params).mu;
    const double tau = inputs.tau();
    const GreenKernel g(params.alpha, params.gamma, mu, tau, contour, branch);
    const double lambda = g.scale();
    const double chunk = 12.0 * lambda;
    const double K = inputs.strike();
    // S e^{(r + μ)τ}; the payoff is [fwd e^y - K]^+ or [K - fwd e^y]^+
    const double fwd = inputs.spot() * std::exp((inputs.rate() + mu) * tau);
    const double y0 = K > 0.0 ? std::log(K / fwd) : -INFINITY;
    const double tail_tol = 1e-10;
    constexpr int kMaxChunks = 400;

    if (inputs.kind() == OptionKind::Call) {
        auto f = [&](double y) { return (fwd * std::exp(y) - K) * g(y); };
        double total = 0.0;
        if (std::isfinite(y0) && y0 < 0.0) {
            total += integrate(f, y0, 0.0);
        } else if (!std::isfinite(y0)) {
            // zero strike: the whole negative half-line contributes, damped by e^y
            double b = 0.0;
            double width = chunk;
            for (int k = 0; k < kMaxChunks; ++k) {
                if (b < 0.0 && std::abs(g(b)) < g.noise_floor(-b)) break;
                const double piece = integrate(f, b - width, b);
                total += piece;
                b -= width;
                width *= 1.5;
                if (std::abs(piece) < tail_tol * std::abs(total) && b < -40.0) break;
            }
        }
        double a = std::isfinite(y0) ? std::max(y0, 0.0) : 0.0;
        for (int k = 0; k < kMaxChunks; ++k) {
            // the right tail is lighter than exponential; once the density sinks
            // into round-off the remaining integrand is noise times e^y
            if (a > 0.0 && std::abs(g(a)) < g.noise_floor(a)) break;
            const double piece = integrate(f, a, a + chunk);
            total += piece;
            a += chunk;
            if (k > 0 && std::abs(piece) < tail_tol * std::abs(total)) break;
        }
        return inputs.discount() * total;
    }

    if (!(K > 0.0)) return 0.0;
    if (branch != NegativeBranch::Reflection)
        throw Error(ErrorCode::InvalidInput, "put reference price needs the normalised (reflection) density");
    auto f = [&](double y) { return (K - fwd * std::exp(y)) * g(y); };
    double total = 0.0;
    if (y0 > 0.0) total += integrate(f, 0.0, y0);
    double b = std::min(y0, 0.0);
    // heavy left tail: step geometrically and close with the power-law tail estimate K g(-Y) Y / α
    double width = chunk;
    for (int k = 0; k < kMaxChunks; ++k) {
        const double piece = integrate(f, b - width, b);
        total += piece;
        b -= width;
        width *= 1.5;
        const double tail = K * g(b) * (-b) / params.alpha;
        // the power-law estimate is itself accurate to O(Y^{-α}), so a loose cut suffices
        if (k > 0 && tail < 1e-6 * std::abs(total)) {
            total += tail;
            break;
        }
    }
    return inputs.discount() * total;
}

}  // namespace fracdiff
