#include "fracdiff/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fracdiff/error.hpp"

namespace fracdiff {

namespace {

constexpr double kPi = std::numbers::pi;

bool exact_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// Lanczos, g = 7, n = 9
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

using cplx = std::complex<double>;

// log sin(pi z) without overflow for large |Im z|
cplx log_sin_pi(cplx z) {
    const cplx i(0.0, 1.0);
    if (z.imag() >= 0.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
        return std::log(cplx(0.0, 0.5)) - i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z));
    }
    return std::log(cplx(0.0, -0.5)) + i * kPi * z + std::log(1.0 - std::exp(-2.0 * i * kPi * z));
}

cplx lanczos_log_gamma(cplx z) {
    z -= 1.0;
    cplx acc = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (z + static_cast<double>(k));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

bool is_gamma_pole(double x, double tol) {
    if (x > tol) return false;
    const double nearest = std::round(x);
    return nearest <= 0.0 && std::abs(x - nearest) <= tol * std::max(1.0, std::abs(x));
}

SignedLogGamma log_gamma(double x) {
    if (exact_pole(x)) throw Error(ErrorCode::Pole, fmt::format("log_gamma: pole at x = {}", x));
    int sign = 1;
    const double v = ::lgamma_r(x, &sign);
    return {v, sign < 0 ? -1 : 1};
}

double reciprocal_gamma(double x) {
    if (exact_pole(x)) return 0.0;
    if (x > 0.0 && x < 170.0) return 1.0 / std::tgamma(x);
    const auto lg = log_gamma(x);
    return lg.sign * std::exp(-lg.value);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && exact_pole(z.real()))
        throw Error(ErrorCode::Pole, fmt::format("log_gamma: pole at z = {}", z.real()));
    if (z.real() < 0.5) {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

}  // namespace fracdiff
