#pragma once

#include <array>

#include "fracdiff/volatility.hpp"

namespace fracdiff::fixture {

// S&P 500 index calls, quoted 3 Nov 2008 for the 17 Jan 2009 expiry.
constexpr double kSpot = 966.3;
constexpr std::array<double, 10> kStrikes = {900, 940, 980, 1020, 1060, 1100, 1150, 1180, 1220, 1280};
constexpr std::array<double, 10> kCallPrices = {118.9, 92.7, 69.5, 49.2, 32.3, 19.5, 8.9, 5.1, 2.0, 0.25};

// Published implied volatilities for the same rows.
constexpr std::array<double, 10> kVolBS = {.4708, .4462, .4232, .3976, .3711, .3475, .3279, .3301, .3514, .4110};
constexpr std::array<double, 10> kVolG08 = {.3163, .3066, .2929, .2754, .2557, .2380, .2269, .2324, .2514, .2949};
constexpr std::array<double, 10> kVolG09 = {.3827, .3670, .3493, .3284, .3058, .2857, .2727, .2789, .3015, .3544};
constexpr std::array<double, 10> kVolG11 = {.5900, .5330, .5210, .4891, .4574, .4186, .3938, .3764, .3692, .4166};

// (r, τ) are not published consistently; these come from a least-squares fit of
// the smile's Black-Scholes column (n, m <= 4 series) to kVolBS.
constexpr double kFittedRate = 0.014873717;
constexpr double kFittedTau = 0.20827830;

QuoteChain chain();

}  // namespace fracdiff::fixture
