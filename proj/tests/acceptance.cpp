// Acceptance run: one PASS/FAIL line per criterion, with the numbers behind it.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "fracdiff/calibration.hpp"
#include "fracdiff/error.hpp"
#include "fracdiff/fixture.hpp"
#include "fracdiff/green.hpp"
#include "fracdiff/model.hpp"
#include "fracdiff/pricing.hpp"
#include "fracdiff/special_functions.hpp"
#include "fracdiff/volatility.hpp"

using namespace fracdiff;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// total mass of the density: geometric panels outward, the power-law left tail
// closed with g(-Y) Y / α (relative error O(Y^-α)), the right tail cut where it
// sinks into round-off
double density_mass(const GreenKernel& k) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double lam = k.scale();
    double total = 0, a = 0, w = lam;
    for (int i = 0; i < 200; ++i) {
        const double piece = GK::integrate(k, a, a + w, 8, 1e-10);
        total += piece;
        a += w;
        w *= 1.5;
        if (k(a) < k.noise_floor(a) || piece < 1e-14 * total) break;
    }
    double b = 0;
    w = lam;
    for (int i = 0; i < 200; ++i) {
        total += GK::integrate(k, b - w, b, 8, 1e-10);
        b -= w;
        w *= 1.5;
        const double tail = std::abs(k(b)) * -b / k.alpha();
        if (tail < 1e-6) {
            if (k.alpha() < 2.0) total += tail;
            break;
        }
    }
    return total;
}

bool admissible(double a, double g) { return g > 1.0 - 1.0 / a && g <= a; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

Outcome black_scholes_degeneracy() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams base = ModelParams::double_fractional(2, 1, 0.2);
    const RiskNeutralParam unused{};
    (void)unused;
    double worst = 0;
    int points = 0;
    for (double m : grid(0.7, 1.3, 5))
        for (double s : grid(0.1, 0.4, 5))
            for (double t : grid(0.1, 2.0, 5)) {
                const ModelParams p = base.with_sigma(s);
                const PricingInputs in(100 * m, 100, 0.01, t);
                const double series = dfrac_call_series(p, in, mu_gamma_series(p)).price;
                worst = std::max(worst, rel(series, bs_call(in, s)));
                ++points;
            }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-7 && secs < 5.0,
            fmt::format("{} points, worst relative error {:.2e} (< 1e-7), {:.2f} s (< 5 s)", points, worst, secs)};
}

Outcome mu_cross_oracle() {
    double worst_mb = 0, worst_levy = 0;
    bool negative = true;
    int pairs = 0;
    for (double a : {1.2, 1.5, 1.7, 2.0})
        for (double g : {0.6, 0.8, 1.0, 1.2})
            for (double s : {0.1, 0.2, 0.4}) {
                if (!admissible(a, g)) continue;
                const ModelParams p = ModelParams::double_fractional(a, g, s);
                const double series = mu_gamma_series(p).mu;
                worst_mb = std::max(worst_mb, std::abs(series - mu_gamma_mb(p)));
                negative = negative && series < 0;
                ++pairs;
            }
    for (double a : grid(1.05, 2.0, 20))
        for (double s : grid(0.05, 0.6, 12))
            worst_levy = std::max(worst_levy, rel(mu_gamma_series(ModelParams::double_fractional(a, 1, s)).mu, mu_levy(a, s)));
    const double bs = mu_gamma_series(ModelParams::double_fractional(2, 1, 0.2)).mu;
    const bool ok = worst_mb < 1e-8 && worst_levy <= 1e-14 && std::abs(bs + 0.02) < 1e-15 && negative;
    return {ok, fmt::format("series vs contour max |diff| {:.2e} over {} points (< 1e-8); gamma=1 vs Levy max rel "
                            "{:.2e} (<= 1e-14); mu(2,1,0.2) = {:.17g}",
                            worst_mb, pairs, worst_levy, bs)};
}

Outcome price_cross_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::string diagnostic;
    for (auto [a, g] : {std::pair{1.7, 0.9}, std::pair{1.5, 1.0}, std::pair{1.9, 1.1}}) {
        const ModelParams p = ModelParams::double_fractional(a, g, 0.2);
        double worst_reflection = 0;
        for (double lf : {-0.3, -0.15, 0.0, 0.15, 0.3}) {
            const double r = 0.01, tau = 1.0, spot = 100;
            const PricingInputs in(spot, spot * std::exp(r * tau - lf), r, tau);
            const double series = price(p, in);
            const double quad = reference_price(p, in, {}, NegativeBranch::AnalyticContinuation);
            worst = std::max(worst, rel(series, quad));
            worst_reflection = std::max(worst_reflection, rel(series, reference_price(p, in)));
        }
        diagnostic += fmt::format(" ({},{}) reflected-density gap {:.1e};", a, g, worst_reflection);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-4 && secs < 60,
            fmt::format("worst relative gap {:.2e} (< 1e-4), {:.1f} s (< 60 s); diagnostic:{}", worst, secs, diagnostic)};
}

Outcome figure_three() {
    const ModelParams p = ModelParams::double_fractional(1.7, 0.9, 0.2);
    const PricingInputs in(3800, 4000, 0.01, 1);
    const auto d = partial_sum_table(p, in, mu_gamma_series(p));
    bool monotone = true;
    for (std::size_t i = 1; i < d.partial_sums_m.size(); ++i) monotone = monotone && d.partial_sums_m[i] >= d.partial_sums_m[i - 1];
    int changes = 0;
    for (std::size_t i = 2; i < d.partial_sums_n.size(); ++i)
        if ((d.partial_sums_n[i] - d.partial_sums_n[i - 1]) * (d.partial_sums_n[i - 1] - d.partial_sums_n[i - 2]) < 0) ++changes;
    return {monotone && changes >= 1,
            fmt::format("m-sums monotone: {} ({} sums); n-sum difference sign changes: {}; price {:.6f}",
                        monotone ? "yes" : "no", d.partial_sums_m.size(), changes, d.partial_sums_m.back())};
}

Outcome figure_four() {
    const PricingInputs base(3800, 4000, 0.01, 1);
    int checks = 0, failures = 0;
    for (double a : {1.5, 1.7, 2.0})
        for (double g : {0.7, 0.9, 1.0, 1.2}) {
            const ModelParams p = ModelParams::double_fractional(a, g, 0.2);
            double prev = -1;
            for (double s = 3000; s <= 4600; s += 100) {
                const double c = price(p, base.with_spot(s));
                failures += !(c > prev);
                prev = c;
                ++checks;
            }
            prev = -1;
            for (double sg = 0.05; sg <= 0.6 + 1e-9; sg += 0.05) {
                const double c = price(p.with_sigma(sg), base);
                failures += !(c > prev);
                prev = c;
                ++checks;
            }
        }
    int gamma_checks = 0, gamma_failures = 0;
    for (double a : grid(1.5, 2.0, 6)) {
        double prev = INFINITY;
        for (double g : grid(0.4, 1.0, 61)) {
            if (!admissible(a, g)) continue;
            const double c = price(ModelParams::double_fractional(a, g, 0.2), base);
            gamma_failures += !(c < prev);
            prev = c;
            ++gamma_checks;
        }
    }
    return {failures == 0 && gamma_failures == 0,
            fmt::format("spot/sigma increases {}/{}; gamma decreases {}/{} (admissible gamma in [0.4, 1], alpha in [1.5, 2])",
                        checks - failures, checks, gamma_checks - gamma_failures, gamma_checks)};
}

Outcome implied_vol_round_trip() {
    std::mt19937_64 rng(20081103);
    std::uniform_real_distribution<double> sigma(0.05, 0.6), money(0.8, 1.2), tau(0.25, 2.0), rate(0.0, 0.05),
        alpha(1.5, 1.95), gamma(0.85, 1.1);
    double worst = 0;
    int done = 0;
    for (int i = 0; i < 20; ++i) {
        const double s = sigma(rng);
        const PricingInputs in(100, 100 / money(rng), rate(rng), tau(rng));
        const double a = alpha(rng), g = gamma(rng);
        for (const ModelParams& p : {ModelParams::black_scholes(s), ModelParams::fmls(a, s), ModelParams::double_fractional(a, g, s)}) {
            const double c = price(p, in);
            worst = std::max(worst, std::abs(implied_vol(p, in, c).sigma - s));
            ++done;
        }
    }
    double worst_atm = 0;
    for (double c : {0.5, 5.0, 12.0, 30.0})
        for (double t : {0.1, 1.0, 3.0})
            worst_atm = std::max(worst_atm, rel(atm_fbs_implied(c, 100, t, 1.0), atm_bs_implied(c, 100, t)));
    return {worst < 1e-7 && worst_atm <= 1e-14,
            fmt::format("{} inversions, worst |sigma_I - sigma| {:.2e} (< 1e-7); ATM gamma=1 identity rel {:.1e}", done,
                        worst, worst_atm)};
}

Outcome table_two() {
    const std::vector<double> target(fixture::kVolBS.begin(), fixture::kVolBS.end());
    const RateTauFit fit = fit_rate_tau(fixture::chain(), target);
    QuoteChain chain = fixture::chain();
    chain.rate = fit.rate;
    chain.tau = fit.tau;
    const auto smile = build_smile(chain, {0.8, 0.9, 1.1});
    double bs_gap = 0, fbs_gap = 0;
    std::size_t arg_bs = 0, arg_08 = 0, arg_09 = 0;
    for (std::size_t i = 0; i < smile.size(); ++i) {
        const auto& row = smile[i];
        if (!row.sigma_bs.ok()) return {false, fmt::format("strike {} not invertible", row.strike)};
        bs_gap = std::max(bs_gap, std::abs(row.sigma_bs.sigma - fixture::kVolBS[i]));
        const double pub[3] = {fixture::kVolG08[i], fixture::kVolG09[i], fixture::kVolG11[i]};
        for (int k = 0; k < 3; ++k) {
            if (!row.sigma_fbs[k].second.ok()) return {false, fmt::format("strike {} not invertible", row.strike)};
            fbs_gap = std::max(fbs_gap, std::abs(row.sigma_fbs[k].second.sigma - pub[k]));
        }
        if (row.sigma_bs.sigma < smile[arg_bs].sigma_bs.sigma) arg_bs = i;
        if (row.sigma_fbs[0].second.sigma < smile[arg_08].sigma_fbs[0].second.sigma) arg_08 = i;
        if (row.sigma_fbs[1].second.sigma < smile[arg_09].sigma_fbs[1].second.sigma) arg_09 = i;
    }
    const double k_bs = smile[arg_bs].strike;
    const bool minima = k_bs == 1150 && smile[arg_08].strike == 1150 && smile[arg_09].strike == 1150;
    return {bs_gap < 2e-2 && fbs_gap < 3e-2 && minima && fit.max_abs_residual < 2e-2,
            fmt::format("fitted r = {:.6f}, tau = {:.6f} (fit max residual {:.1e}); BS max gap {:.2e} (< 2e-2); f-BS "
                        "max gap {:.2e} (< 3e-2); minima at {}/{}/{} (BS, 0.8, 0.9)",
                        fit.rate, fit.tau, fit.max_abs_residual, bs_gap, fbs_gap, k_bs, smile[arg_08].strike,
                        smile[arg_09].strike)};
}

QuoteChain synthetic_chain(const ModelParams& p, double lo, double hi, int n) {
    QuoteChain c{100, 0.01, 0.5, {}};
    for (int i = 0; i < n; ++i) {
        const double k = lo + (hi - lo) * i / (n - 1);
        c.quotes.push_back({OptionKind::Call, k, price(p, c.inputs({OptionKind::Call, k, 0}))});
    }
    return c;
}

Outcome calibration_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    const QuoteChain bs_chain = synthetic_chain(ModelParams::black_scholes(0.2), 80, 120, 10);
    const CalibrationResult bs = calibrate(bs_chain, ModelKind::BlackScholes);

    const ModelParams truth = ModelParams::double_fractional(1.7, 0.95, 0.2);
    const QuoteChain chain = synthetic_chain(truth, 80, 122, 15);
    const CalibrationResult r_bs = calibrate(chain, ModelKind::BlackScholes);
    std::vector<ModelParams> fmls_seeds = default_seeds(ModelKind::FMLS);
    fmls_seeds.push_back(ModelParams::fmls(2.0, r_bs.params.sigma));
    const CalibrationResult r_fmls = calibrate(chain, ModelKind::FMLS, fmls_seeds);
    std::vector<ModelParams> df_seeds = default_seeds(ModelKind::DoubleFractional);
    df_seeds.push_back(ModelParams::double_fractional(r_fmls.params.alpha, 1.0, r_fmls.params.sigma));
    const CalibrationResult r_df = calibrate(chain, ModelKind::DoubleFractional, df_seeds);

    const bool bs_ok = std::abs(bs.params.sigma - 0.2) < 1e-4;
    const bool df_ok = std::abs(r_df.params.alpha - 1.7) < 0.05 && std::abs(r_df.params.gamma - 0.95) < 0.05 &&
                       std::abs(r_df.params.sigma - 0.2) < 0.01;
    const bool order = r_df.aggregated_error <= r_fmls.aggregated_error && r_fmls.aggregated_error <= r_bs.aggregated_error;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {bs_ok && df_ok && order,
            fmt::format("BS sigma {:.6f}; dfrac (alpha, gamma, sigma) = ({:.4f}, {:.4f}, {:.4f}); AE dfrac {:.2e} <= "
                        "FMLS {:.3f} <= BS {:.3f}; {:.1f} s",
                        bs.params.sigma, r_df.params.alpha, r_df.params.gamma, r_df.params.sigma, r_df.aggregated_error,
                        r_fmls.aggregated_error, r_bs.aggregated_error, secs)};
}

Outcome property_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ua(1.3, 2.0), us(0.05, 0.5), um(0.7, 1.4), ut(0.1, 2.0), ur(0.0, 0.05);
    // [S - K e^{-rτ}]^+ <= C <= S, tallied separately for γ <= 1 and γ > 1
    int checks[2] = {0, 0}, failures[2] = {0, 0};
    for (int i = 0; i < 150; ++i) {
        const double a = ua(rng);
        const double g = std::uniform_real_distribution<double>(std::max(1.0 - 1.0 / a + 0.05, 0.6), 1.3)(rng);
        const ModelParams p = ModelParams::double_fractional(a, g, us(rng));
        const PricingInputs in(100 * um(rng), 100, ur(rng), ut(rng));
        SeriesResult r;
        try {
            r = dfrac_call_series(p, in, mu_gamma_series(p));
        } catch (const Error&) {
            continue;
        }
        if (!r.diagnostics.converged) continue;
        const int side = g > 1.0;
        ++checks[side];
        const double tol = 1e-9 * in.spot();
        if (r.price < in.forward_intrinsic() - tol || r.price > in.spot() + tol) ++failures[side];
    }

    double parity = 0;
    for (double a : {1.5, 1.8, 2.0})
        for (double k : {90.0, 100.0, 115.0}) {
            const ModelParams p = ModelParams::fmls(a, 0.25);
            const PricingInputs call(100, k, 0.02, 0.75);
            const double c = reference_price(p, call);
            const double put = reference_price(p, call.with_kind(OptionKind::Put));
            const double fwd = 100 - k * call.discount();
            parity = std::max(parity, std::abs(c - put - fwd) / 100);
        }

    double norm = 0;
    for (auto [a, g] : {std::pair{2.0, 1.0}, std::pair{1.7, 0.9}, std::pair{1.5, 1.0}, std::pair{1.9, 1.1},
                        std::pair{1.8, 0.7}, std::pair{1.6, 1.3}, std::pair{1.3, 0.5}}) {
        const double mu = mu_gamma_series(ModelParams::double_fractional(a, g, 0.2)).mu;
        norm = std::max(norm, std::abs(density_mass(GreenKernel(a, g, mu, 1.0)) - 1));
    }

    bool poles = true;
    for (int j = 0; j <= 100; ++j) poles = poles && reciprocal_gamma(-static_cast<double>(j)) == 0.0;

    int rejected = 0;
    const ModelParams bad[] = {ModelParams::double_fractional(2.5, 1, 0.2), ModelParams::double_fractional(1.0, 1, 0.2),
                               ModelParams::double_fractional(1.6, 0.3, 0.2), ModelParams::double_fractional(1.5, 1.6, 0.2),
                               ModelParams::double_fractional(1.5, -0.1, 0.2), ModelParams::double_fractional(1.7, 0.9, 0.0),
                               ModelParams::double_fractional(1.7, 0.9, -1.0), ModelParams::fmls(1.7, 0.2).with_sigma(NAN)};
    for (const auto& p : bad) {
        try {
            validate(p);
        } catch (const Error&) {
            ++rejected;
        }
    }
    int bad_inputs = 0;
    for (auto f : std::vector<std::function<void()>>{[] { PricingInputs(-1, 100, 0, 1); }, [] { PricingInputs(100, -1, 0, 1); },
                                                     [] { PricingInputs(100, 100, 0, -1); }, [] { PricingInputs(100, 100, NAN, 1); }}) {
        try {
            f();
        } catch (const Error&) {
            ++bad_inputs;
        }
    }
    const bool validation = rejected == static_cast<int>(std::size(bad)) && bad_inputs == 4;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {failures[0] + failures[1] == 0 && checks[0] + checks[1] > 100 && parity < 1e-7 && norm < 1e-6 && poles && validation && secs < 120,
            fmt::format("no-arbitrage band: gamma <= 1 {}/{}, gamma > 1 {}/{}; quadrature parity max rel {:.1e} (< 1e-7); density mass max |1 - "
                        "total| {:.1e} (< 1e-6); exact pole zeros: {}; validation rejections {}/{}; {:.1f} s (< 120 s)",
                        checks[0] - failures[0], checks[0], checks[1] - failures[1], checks[1], parity, norm, poles ? "yes" : "no",
                        rejected + bad_inputs, std::size(bad) + 4, secs)};
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    // --known-red N: criterion N is expected to fail for a documented reason and
    // does not affect the exit status; it still prints FAIL
    std::vector<std::size_t> known_red;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--known-red") known_red.push_back(std::stoul(argv[i + 1]));
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Black-Scholes degeneracy", black_scholes_degeneracy},
        {"risk-neutral parameter cross-oracle", mu_cross_oracle},
        {"series vs Green-function quadrature", price_cross_oracle},
        {"partial-sum convergence pattern", figure_three},
        {"price monotonicity", figure_four},
        {"implied-vol round trip", implied_vol_round_trip},
        {"S&P 500 smile table", table_two},
        {"calibration recovery", calibration_recovery},
        {"property suite", property_suite},
    };
    int failed = 0, unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const bool known = std::find(known_red.begin(), known_red.end(), i + 1) != known_red.end();
        failed += !o.pass;
        unexpected += !o.pass && !known;
        std::printf("%s %zu %s: %s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                    !o.pass && known ? " [known deviation]" : "");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return unexpected == 0 ? 0 : 1;
}
