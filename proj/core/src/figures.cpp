#include "fracdiff/figures.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fracdiff/error.hpp"
#include "fracdiff/fixture.hpp"
#include "fracdiff/pricing.hpp"

namespace fracdiff {

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig1", "fig3", "fig4", "fig5", "fig6"};
    return ids;
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> v;
    v.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
        v.push_back(std::round(x * 1e12) / 1e12);
    }
    return v;
}

namespace {

bool admissible(double alpha, double gamma) { return gamma > 1.0 - 1.0 / alpha && gamma <= alpha; }

const std::vector<double> kCurveGammas = {0.6, 0.8, 1.0, 1.2};

// fig3 / fig4 market: S = 3800, K = 4000, r = 1 %, σ = 20 %, τ = 1
constexpr double kS = 3800, kK = 4000, kR = 0.01, kSigma = 0.2, kTau = 1.0;

double dfrac_price(double alpha, double gamma, double sigma, double spot) {
    return price(ModelParams::double_fractional(alpha, gamma, sigma), PricingInputs(spot, kK, kR, kTau));
}

std::vector<FigureSeries> fig1() {
    std::vector<FigureSeries> out;
    {
        FigureSeries s{"fig1", "fig1_mu_vs_gamma", {"alpha", "gamma", "mu"}, {{}, {}, {}}};
        for (double a : {1.6, 1.7, 1.8, 1.9, 2.0})
            for (double g : linspace(0.39, 1.5, 112)) {
                if (!admissible(a, g)) continue;
                s.columns[0].push_back(a);
                s.columns[1].push_back(g);
                s.columns[2].push_back(mu_gamma_series(ModelParams::double_fractional(a, g, 0.2)).mu);
            }
        out.push_back(std::move(s));
    }
    {
        FigureSeries s{"fig1", "fig1_mu_vs_sigma", {"sigma"}, {}};
        const auto sigmas = linspace(0.05, 0.6, 56);
        s.columns.push_back(sigmas);
        for (double g : kCurveGammas) {
            s.headers.push_back("mu_" + gamma_label(g));
            std::vector<double> col;
            for (double sg : sigmas) col.push_back(mu_gamma_series(ModelParams::double_fractional(1.7, g, sg)).mu);
            s.columns.push_back(std::move(col));
        }
        out.push_back(std::move(s));
    }
    {
        FigureSeries s{"fig1", "fig1_mu_vs_alpha", {"alpha", "gamma", "mu"}, {{}, {}, {}}};
        for (double g : kCurveGammas)
            for (double a : linspace(1.1, 2.0, 91)) {
                if (!admissible(a, g)) continue;
                s.columns[0].push_back(a);
                s.columns[1].push_back(g);
                s.columns[2].push_back(mu_gamma_series(ModelParams::double_fractional(a, g, 0.2)).mu);
            }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FigureSeries> fig3() {
    const auto p = ModelParams::double_fractional(1.7, 0.9, kSigma);
    const auto d = partial_sum_table(p, PricingInputs(kS, kK, kR, kTau), mu_gamma_series(p));
    FigureSeries m{"fig3", "fig3_m_partial_sums", {"m", "price"}, {{}, {}}};
    for (std::size_t i = 0; i < d.partial_sums_m.size(); ++i) {
        m.columns[0].push_back(static_cast<double>(i + 1));
        m.columns[1].push_back(d.partial_sums_m[i]);
    }
    FigureSeries n{"fig3", "fig3_n_partial_sums", {"n", "price"}, {{}, {}}};
    for (std::size_t i = 0; i < d.partial_sums_n.size(); ++i) {
        n.columns[0].push_back(static_cast<double>(i));
        n.columns[1].push_back(d.partial_sums_n[i]);
    }
    return {m, n};
}

std::vector<FigureSeries> fig4() {
    std::vector<FigureSeries> out;
    {
        FigureSeries s{"fig4", "fig4_price_vs_gamma", {"alpha", "gamma", "price"}, {{}, {}, {}}};
        for (double a : {1.5, 1.6, 1.7, 1.8, 1.9, 2.0})
            for (double g : linspace(0.34, 1.0, 67)) {
                if (!admissible(a, g)) continue;
                s.columns[0].push_back(a);
                s.columns[1].push_back(g);
                s.columns[2].push_back(dfrac_price(a, g, kSigma, kS));
            }
        out.push_back(std::move(s));
    }
    {
        FigureSeries s{"fig4", "fig4_price_vs_alpha", {"gamma", "alpha", "price"}, {{}, {}, {}}};
        for (double g : kCurveGammas)
            for (double a : linspace(1.1, 2.0, 91)) {
                if (!admissible(a, g)) continue;
                s.columns[0].push_back(g);
                s.columns[1].push_back(a);
                s.columns[2].push_back(dfrac_price(a, g, kSigma, kS));
            }
        out.push_back(std::move(s));
    }
    {
        FigureSeries s{"fig4", "fig4_price_vs_spot", {"spot"}, {}};
        const auto spots = linspace(3000, 5000, 81);
        s.columns.push_back(spots);
        for (double g : kCurveGammas) {
            s.headers.push_back("price_" + gamma_label(g));
            std::vector<double> col;
            for (double S : spots) col.push_back(dfrac_price(1.7, g, kSigma, S));
            s.columns.push_back(std::move(col));
        }
        out.push_back(std::move(s));
    }
    {
        FigureSeries s{"fig4", "fig4_price_vs_sigma", {"sigma"}, {}};
        const auto sigmas = linspace(0.05, 0.6, 56);
        s.columns.push_back(sigmas);
        for (double g : kCurveGammas) {
            s.headers.push_back("price_" + gamma_label(g));
            std::vector<double> col;
            for (double sg : sigmas) col.push_back(dfrac_price(1.7, g, sg, kS));
            s.columns.push_back(std::move(col));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FigureSeries> fig5() {
    FigureSeries s{"fig5", "fig5_atm_fbs_vol", {"gamma"}, {}};
    const auto gammas = linspace(0.55, 1.5, 96);
    s.columns.push_back(gammas);
    constexpr double kTauFig5 = 1.027;
    for (std::size_t i = 0; i < fixture::kStrikes.size(); ++i) {
        s.headers.push_back("vol_K" + format_shortest(fixture::kStrikes[i]));
        std::vector<double> col;
        for (double g : gammas) col.push_back(atm_fbs_implied(fixture::kCallPrices[i], fixture::kSpot, kTauFig5, g));
        s.columns.push_back(std::move(col));
    }
    return {s};
}

std::vector<FigureSeries> fig6() {
    const std::vector<double> gammas = {0.8, 0.9, 1.0, 1.1};
    const auto smile = build_smile(fixture::chain(), gammas);
    FigureSeries s{"fig6", "fig6_smile", {"strike", "bs_vol"}, {{}, {}}};
    for (double g : gammas) {
        s.headers.push_back("fbs_vol_" + gamma_label(g));
        s.columns.emplace_back();
    }
    for (const auto& p : smile) {
        // a non-invertible quote would leave a hole; skip the row to keep the file finite
        bool ok = p.sigma_bs.ok();
        for (const auto& [g, v] : p.sigma_fbs) ok = ok && v.ok();
        if (!ok) continue;
        s.columns[0].push_back(p.strike);
        s.columns[1].push_back(p.sigma_bs.sigma);
        for (std::size_t j = 0; j < p.sigma_fbs.size(); ++j) s.columns[2 + j].push_back(p.sigma_fbs[j].second.sigma);
    }
    return {s};
}

}  // namespace

std::vector<FigureSeries> make_figure(const std::string& id) {
    if (id == "fig1") return fig1();
    if (id == "fig3") return fig3();
    if (id == "fig4") return fig4();
    if (id == "fig5") return fig5();
    if (id == "fig6") return fig6();
    throw Error(ErrorCode::InvalidInput, fmt::format("unknown figure id '{}' (expected fig1, fig3, fig4, fig5, fig6)", id));
}

}  // namespace fracdiff
