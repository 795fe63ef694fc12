#include "fracdiff/fixture.hpp"

namespace fracdiff::fixture {

QuoteChain chain() {
    QuoteChain c;
    c.spot = kSpot;
    c.rate = kFittedRate;
    c.tau = kFittedTau;
    for (std::size_t i = 0; i < kStrikes.size(); ++i) c.quotes.push_back({OptionKind::Call, kStrikes[i], kCallPrices[i]});
    return c;
}

}  // namespace fracdiff::fixture
