#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracdiff/error.hpp"
#include "fracdiff/fixture.hpp"
#include "fracdiff/pricing.hpp"
#include "fracdiff/volatility.hpp"

using namespace fracdiff;

TEST(ImpliedVol, BlackScholesRoundTrip) {
    const PricingInputs in(100, 105, 0.01, 0.5);
    const double c = bs_call(in, 0.2);
    EXPECT_NEAR(implied_vol(ModelParams::black_scholes(0.5), in, c).sigma, 0.2, 1e-8);
    const auto r = implied_vol([&](double s) { return bs_call(in, s); }, c);
    EXPECT_NEAR(r.sigma, 0.2, 1e-8);
    EXPECT_LE(r.residual, 1e-8);
}

TEST(ImpliedVol, DoubleFractionalRoundTrip) {
    const ModelParams p = ModelParams::double_fractional(1.7, 0.9, 0.25);
    const PricingInputs in(3800, 4000, 0.01, 1);
    const double c = price(p, in);
    EXPECT_NEAR(implied_vol(p.with_sigma(0.1), in, c).sigma, 0.25, 1e-7);
}

TEST(ImpliedVol, PutRoundTrip) {
    const PricingInputs in(100, 110, 0.02, 1, OptionKind::Put);
    const double v = bs_price(in, 0.3);
    EXPECT_NEAR(implied_vol(ModelParams::black_scholes(0.2), in, v).sigma, 0.3, 1e-8);
}

TEST(ImpliedVol, OutOfBandQuotes) {
    const PricingInputs in(100, 100, 0, 1);
    for (double bad : {-1.0, 0.0, 100.0, 150.0}) {
        try {
            implied_vol(ModelParams::black_scholes(0.2), in, bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::OutOfBand);
        }
    }
}

TEST(AtmFormulas, KnownValues) {
    EXPECT_NEAR(atm_bs_implied(10, 100, 1), 0.25066282746310005, 1e-15);
    EXPECT_NEAR(atm_bs_implied(10, 100, 4), 0.5 * atm_bs_implied(10, 100, 1), 1e-15);
    EXPECT_NEAR(atm_fbs_implied(10, 100, 1, 0.8), 0.21217478321972818, 1e-15);
    EXPECT_NEAR(atm_bs_implied(1e-9, 100, 1), 0.0, 1e-10);
    const double r = atm_fbs_implied(10, 100, 2.0, 0.8) / atm_fbs_implied(10, 100, 1.0, 0.8);
    EXPECT_NEAR(r, std::pow(2.0, -0.4), 1e-14);
}

TEST(AtmFormulas, UnitGammaIdentity) {
    for (double c : {0.5, 3.0, 10.0, 25.0})
        for (double t : {0.1, 1.0, 3.0}) {
            const double a = atm_bs_implied(c, 100, t);
            EXPECT_NEAR(atm_fbs_implied(c, 100, t, 1.0), a, 1e-14 * a);
        }
}

TEST(AtmFormulas, RequireAtmForward) {
    const PricingInputs fwd(100, 100 * std::exp(0.05), 0.05, 1);
    EXPECT_NO_THROW(atm_bs_implied(8.0, fwd));
    try {
        atm_bs_implied(8.0, PricingInputs(100, 100, 0.05, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAtmForward);
    }
    EXPECT_THROW(atm_fbs_implied(8.0, 100, 1, 0.4), Error);
}

TEST(AtmFormulas, CloseToFullInversion) {
    // relative error of the first-order formula is about σ²τ/24
    for (double s : {0.1, 0.2, 0.3, 0.45}) {
        const PricingInputs in(100, 100 * std::exp(0.02), 0.02, 1);
        const double c = bs_call(in, s);
        EXPECT_LT(std::abs(atm_bs_implied(c, in) - implied_vol(ModelParams::black_scholes(0.2), in, c).sigma), 0.01 * s);
    }
}

TEST(Smile, FixtureShape) {
    const auto smile = build_smile(fixture::chain(), {0.8, 0.9, 1.0, 1.1});
    ASSERT_EQ(smile.size(), 10u);
    auto argmin = [&](int col) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < smile.size(); ++i) {
            const auto& v = col < 0 ? smile[i].sigma_bs : smile[i].sigma_fbs[col].second;
            const auto& b = col < 0 ? smile[best].sigma_bs : smile[best].sigma_fbs[col].second;
            EXPECT_TRUE(v.ok()) << i;
            if (v.sigma < b.sigma) best = i;
        }
        return smile[best].strike;
    };
    EXPECT_EQ(argmin(-1), 1150);
    EXPECT_EQ(argmin(0), 1150);
    EXPECT_EQ(argmin(1), 1150);
    for (std::size_t i = 0; i < smile.size(); ++i) {
        EXPECT_NEAR(smile[i].sigma_fbs[2].second.sigma, smile[i].sigma_bs.sigma, 1e-7);
        EXPECT_NEAR(smile[i].sigma_bs.sigma, fixture::kVolBS[i], 2e-2);
        EXPECT_NEAR(smile[i].sigma_fbs[0].second.sigma, fixture::kVolG08[i], 3e-2);
        EXPECT_NEAR(smile[i].sigma_fbs[1].second.sigma, fixture::kVolG09[i], 3e-2);
        EXPECT_NEAR(smile[i].sigma_fbs[3].second.sigma, fixture::kVolG11[i], 3e-2);
    }
}

TEST(Smile, SingleAtmQuoteUnitGamma) {
    QuoteChain c{100, 0.0, 0.5, {{OptionKind::Call, 100, 5.5}}};
    const auto smile = build_smile(c, {1.0});
    ASSERT_TRUE(smile[0].sigma_bs.ok());
    EXPECT_NEAR(smile[0].sigma_fbs[0].second.sigma, smile[0].sigma_bs.sigma, 1e-9);
}

TEST(Smile, OutOfBandRowIsReported) {
    QuoteChain c{100, 0.0, 0.5, {{OptionKind::Call, 100, 150.0}, {OptionKind::Call, 100, 5.5}}};
    const auto smile = build_smile(c, {0.9});
    EXPECT_EQ(smile[0].sigma_bs.status, VolStatus::OutOfBand);
    EXPECT_FALSE(smile[0].sigma_fbs[0].second.ok());
    EXPECT_TRUE(smile[1].sigma_bs.ok());
}

TEST(Fixture, MatchesPublishedRows) {
    const QuoteChain c = fixture::chain();
    ASSERT_EQ(c.quotes.size(), 10u);
    EXPECT_EQ(c.spot, 966.3);
    EXPECT_EQ(c.quotes.front().strike, 900);
    EXPECT_EQ(c.quotes.front().price, 118.9);
    EXPECT_EQ(c.quotes.back().strike, 1280);
    EXPECT_EQ(c.quotes.back().price, 0.25);
}

TEST(Fixture, RateTauFitIsReproducible) {
    const std::vector<double> target(fixture::kVolBS.begin(), fixture::kVolBS.end());
    const RateTauFit f = fit_rate_tau(fixture::chain(), target);
    EXPECT_NEAR(f.rate, fixture::kFittedRate, 1e-6);
    EXPECT_NEAR(f.tau, fixture::kFittedTau, 1e-6);
    EXPECT_LT(f.max_abs_residual, 2e-2);
}
