#include "fracdiff/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>

#include <fmt/format.h>
#include <mpfr.h>

#include "fracdiff/error.hpp"
#include "fracdiff/green.hpp"
#include "fracdiff/special_functions.hpp"

namespace fracdiff {

double bs_call(const PricingInputs& in, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorCode::SigmaNonPositive, fmt::format("sigma <= 0: sigma = {}", sigma));
    const double S = in.spot();
    const double Kd = in.strike() * in.discount();
    if (in.strike() == 0.0) return S;
    const double sd = sigma * std::sqrt(in.tau());
    const double d1 = in.log_fwd() / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    return S * normal_cdf(d1) - Kd * normal_cdf(d2);
}

double bs_price(const PricingInputs& in, double sigma) {
    const double call = bs_call(in, sigma);
    return in.kind() == OptionKind::Call ? call : put_from_parity(call, in);
}

double put_from_parity(double call, const PricingInputs& in) {
    const double put = call - in.spot() + in.strike() * in.discount();
    if (put < -1e-8 * in.spot())
        throw Error(ErrorCode::ParityViolation,
                    fmt::format("call {} is below the forward intrinsic value; parity gives put {}", call, put));
    return std::max(put, 0.0);
}

const char* to_string(PriceMethod method) noexcept {
    switch (method) {
        case PriceMethod::ClosedForm: return "closed-form";
        case PriceMethod::Series: return "series";
        case PriceMethod::Quadrature: return "quadrature";
    }
    return "unknown";
}

namespace {

// Beyond this peak index the cancellation needs thousands of bits.
constexpr double kMaxPeak = 1000.0;
constexpr long kMaxBits = 8192;
constexpr double kEps = 0x1p-53;

// T(n, m) = (-u)^n / n! · 1/Γ(1 - γ(n - m)/α) · v^m, with v = (-μτ^γ)^{1/α} and
// u = (-[log] - μτ) / v; the price is K e^{-rτ}/α · Σ_{n≥0, m≥1} T(n, m).
struct Plan {
    double alpha, gamma, tau, mu, log_fwd;
    double lambda;  // -μ τ^γ
    double lu;      // log|u|
    int su;         // sign of -u, 0 at the forward-adjusted money point
    double lv;      // log v
    double n_peak, m_peak;
    int n_cap, m_cap;
    bool adaptive;
    double tol;
    double prefactor;
    std::vector<double> lf;
    std::vector<double> lrg;
    std::vector<signed char> srg;

    int index(int n, int m) const { return n - m + m_cap; }
};

Plan make_plan(const ModelParams& params, const PricingInputs& in, double mu, const TruncationPolicy& policy) {
    Plan P{};
    P.alpha = params.alpha;
    P.gamma = params.gamma;
    P.tau = in.tau();
    P.mu = mu;
    P.log_fwd = in.log_fwd();
    P.lambda = -mu * std::pow(P.tau, P.gamma);
    if (!(P.lambda > 0.0) || !std::isfinite(P.lambda))
        throw Error(ErrorCode::InvalidInput, fmt::format("series needs -mu tau^gamma > 0 (mu = {})", mu));
    const double a = P.alpha, g = P.gamma;
    P.lv = std::log(P.lambda) / a;
    const double x = -P.log_fwd - mu * P.tau;
    const double u = x * std::exp(-P.lv);
    P.lu = u == 0.0 ? -INFINITY : std::log(std::abs(u));
    P.su = u == 0.0 ? 0 : (u < 0.0 ? 1 : -1);
    P.n_peak = g >= a ? 0.0 : std::pow(std::abs(u) * std::pow(g / a, g / a), a / (a - g));
    P.m_peak = (a / g) * std::pow(P.lambda, 1.0 / g);
    P.adaptive = policy.mode == TruncationMode::Adaptive;
    P.tol = policy.tolerance;
    P.prefactor = in.strike() * in.discount() / a;
    if (P.adaptive) {
        if (P.n_peak > kMaxPeak || P.m_peak > kMaxPeak)
            throw Error(ErrorCode::Divergence,
                        fmt::format("series terms peak near n = {:.0f}, m = {:.0f}; moneyness/scale outside the "
                                    "practical domain of the series",
                                    P.n_peak, P.m_peak));
        P.n_cap = std::max(policy.n_max, static_cast<int>(std::ceil(6.0 * P.n_peak)) + 100);
        P.m_cap = std::max(policy.m_max, static_cast<int>(std::ceil(6.0 * P.m_peak)) + 100);
    } else {
        P.n_cap = policy.n_max;
        P.m_cap = policy.m_max;
    }
    P.lf.resize(P.n_cap + 1);
    for (int n = 0; n <= P.n_cap; ++n) P.lf[n] = std::lgamma(n + 1.0);
    const int width = P.n_cap + P.m_cap + 1;
    P.lrg.assign(width, 0.0);
    P.srg.assign(width, 0);
    for (int i = 0; i < width; ++i) {
        const int k = i - P.m_cap;
        const double arg = 1.0 - g * k / a;
        if (is_gamma_pole(arg)) continue;
        const auto lg = log_gamma(arg);
        P.lrg[i] = -lg.value;
        P.srg[i] = static_cast<signed char>(lg.sign);
    }
    return P;
}

class DoubleAcc {
public:
    explicit DoubleAcc(const Plan& P) : col_(P.n_cap + 1, 0.0) {}
    void start_slice(int) { slice_ = 0.0; }
    void add(int n, int, int sign, double lt) {
        const double t = sign * std::exp(lt);
        slice_ += t;
        col_[n] += t;
    }
    void end_slice() { total_ += slice_; }
    double total() const { return total_; }
    double slice() const { return slice_; }
    double col(int n) const { return col_[n]; }

private:
    double total_ = 0.0;
    double slice_ = 0.0;
    std::vector<double> col_;
};

struct Mp {
    explicit Mp(mpfr_prec_t prec) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_t v;
};

class MpfrAcc {
public:
    MpfrAcc(const Plan& P, mpfr_prec_t prec)
        : P_(P), prec_(prec), total_(prec), slice_(prec), tmp_(prec), neg_u_(prec), v_(prec), vm_(prec),
          a_(prec), g_(prec), rg_(P.n_cap + P.m_cap + 1) {
        for (int n = 0; n <= P.n_cap; ++n) col_.emplace_back(prec);
        mpfr_set_d(a_.v, P.alpha, MPFR_RNDN);
        mpfr_set_d(g_.v, P.gamma, MPFR_RNDN);
        // v = (-μ τ^γ)^{1/α},  -u = ([log] + μτ) / v
        Mp t(prec);
        mpfr_set_d(t.v, P.tau, MPFR_RNDN);
        mpfr_pow(t.v, t.v, g_.v, MPFR_RNDN);
        mpfr_mul_d(t.v, t.v, -P.mu, MPFR_RNDN);
        mpfr_log(t.v, t.v, MPFR_RNDN);
        mpfr_div(t.v, t.v, a_.v, MPFR_RNDN);
        mpfr_exp(v_.v, t.v, MPFR_RNDN);
        mpfr_set_d(neg_u_.v, P.mu, MPFR_RNDN);
        mpfr_mul_d(neg_u_.v, neg_u_.v, P.tau, MPFR_RNDN);
        mpfr_add_d(neg_u_.v, neg_u_.v, P.log_fwd, MPFR_RNDN);
        mpfr_div(neg_u_.v, neg_u_.v, v_.v, MPFR_RNDN);
        pw_.emplace_back(prec);
        mpfr_set_ui(pw_.back().v, 1, MPFR_RNDN);
    }

    void start_slice(int m) {
        mpfr_set_zero(slice_.v, 1);
        mpfr_pow_ui(vm_.v, v_.v, static_cast<unsigned long>(m), MPFR_RNDN);
    }
    void add(int n, int m, int, double) {
        while (static_cast<int>(pw_.size()) <= n) {
            const int k = static_cast<int>(pw_.size());
            pw_.emplace_back(prec_);
            mpfr_mul(pw_.back().v, pw_[k - 1].v, neg_u_.v, MPFR_RNDN);
            mpfr_div_ui(pw_.back().v, pw_.back().v, static_cast<unsigned long>(k), MPFR_RNDN);
        }
        mpfr_mul(tmp_.v, pw_[n].v, rg(n, m), MPFR_RNDN);
        mpfr_mul(tmp_.v, tmp_.v, vm_.v, MPFR_RNDN);
        mpfr_add(slice_.v, slice_.v, tmp_.v, MPFR_RNDN);
        mpfr_add(col_[n].v, col_[n].v, tmp_.v, MPFR_RNDN);
    }
    void end_slice() { mpfr_add(total_.v, total_.v, slice_.v, MPFR_RNDN); }
    double total() const { return mpfr_get_d(total_.v, MPFR_RNDN); }
    double slice() const { return mpfr_get_d(slice_.v, MPFR_RNDN); }
    double col(int n) const { return mpfr_get_d(col_[n].v, MPFR_RNDN); }

private:
    // 1/Γ(1 - γ(n - m)/α); poles never reach here
    mpfr_srcptr rg(int n, int m) {
        const int i = P_.index(n, m);
        if (!rg_[i]) {
            rg_[i] = std::make_unique<Mp>(prec_);
            mpfr_ptr r = rg_[i]->v;
            mpfr_mul_si(r, g_.v, n - m, MPFR_RNDN);
            mpfr_div(r, r, a_.v, MPFR_RNDN);
            mpfr_si_sub(r, 1, r, MPFR_RNDN);
            mpfr_gamma(r, r, MPFR_RNDN);
            mpfr_ui_div(r, 1, r, MPFR_RNDN);
        }
        return rg_[i]->v;
    }

    const Plan& P_;
    mpfr_prec_t prec_;
    Mp total_, slice_, tmp_, neg_u_, v_, vm_, a_, g_;
    std::deque<Mp> col_;
    std::deque<Mp> pw_;  // (-u)^n / n!
    std::vector<std::unique_ptr<Mp>> rg_;
};

// log-sum-exp accumulator for Σ|T|
struct LogSum {
    double top = -INFINITY;
    double scaled = 0.0;
    void add(double lt) {
        if (lt > top) {
            scaled = scaled * std::exp(top - lt) + 1.0;
            top = lt;
        } else {
            scaled += std::exp(lt - top);
        }
    }
    double log() const { return top + std::log(scaled); }
};

struct RunStats {
    LogSum abs_sum;
    double log_magnitude = 0.0;  // largest |log| component entering a term
    double max_lt = -INFINITY;
};

template <class Acc>
SeriesDiagnostics run_series(const Plan& P, Acc& acc, RunStats& st) {
    SeriesDiagnostics d;
    const double log_tol = std::log(P.tol);
    int small_m = 0;
    int growing = 0;
    double prev_slice = INFINITY;
    bool m_converged = false;
    bool n_capped = false;

    for (int m = 1; m <= P.m_cap; ++m) {
        acc.start_slice(m);
        int small_n = 0;
        bool n_stopped = false;
        for (int n = 0; n <= P.n_cap; ++n) {
            if (n > 0 && P.su == 0) {
                n_stopped = true;
                break;
            }
            const int i = P.index(n, m);
            if (P.srg[i] == 0) continue;
            const double ln = n > 0 ? n * P.lu - P.lf[n] : 0.0;
            const double lt = P.lrg[i] + m * P.lv + ln;
            const int sign = P.srg[i] * ((n % 2 == 1 && P.su < 0) ? -1 : 1);
            acc.add(n, m, sign, lt);
            st.abs_sum.add(lt);
            st.max_lt = std::max(st.max_lt, lt);
            st.log_magnitude = std::max(
                st.log_magnitude, std::abs(n > 0 ? n * P.lu : 0.0) + P.lf[n] + std::abs(P.lrg[i]) + std::abs(m * P.lv));
            ++d.terms_used;
            d.n_extent = std::max(d.n_extent, n);
            if (P.adaptive && n > P.n_peak && n > m) {
                const double scale = std::abs(acc.total() + acc.slice());
                if (lt < log_tol + std::log(scale)) {
                    if (++small_n >= 3) {
                        n_stopped = true;
                        break;
                    }
                } else {
                    small_n = 0;
                }
            }
        }
        if (!n_stopped && P.su != 0) n_capped = true;
        const double s = std::abs(acc.slice());
        acc.end_slice();
        d.m_extent = m;
        d.partial_sums_m.push_back(P.prefactor * acc.total());
        if (!P.adaptive) continue;
        if (m > P.m_peak) {
            if (s < P.tol * std::abs(acc.total())) {
                if (++small_m >= 3) {
                    m_converged = true;
                    break;
                }
            } else {
                small_m = 0;
            }
            growing = s > prev_slice ? growing + 1 : 0;
            if (growing >= 5)
                throw Error(ErrorCode::Divergence, fmt::format("series m-slices grow for 5 consecutive m (m = {})", m));
        }
        prev_slice = s;
    }

    double cumulative = 0.0;
    for (int n = 0; n <= d.n_extent; ++n) {
        cumulative += acc.col(n);
        d.partial_sums_n.push_back(P.prefactor * cumulative);
    }
    if (P.adaptive) {
        d.converged = m_converged && !n_capped;
    } else {
        const std::size_t k = d.partial_sums_m.size();
        const double last = k > 1 ? d.partial_sums_m[k - 1] - d.partial_sums_m[k - 2] : d.partial_sums_m.back();
        d.converged = std::abs(last) <= P.tol * std::abs(d.partial_sums_m.back());
    }
    return d;
}

SeriesResult sum_series(const Plan& P) {
    RunStats st;
    SeriesDiagnostics d;
    double total = NAN;
    {
        DoubleAcc acc(P);
        d = run_series(P, acc, st);
        total = acc.total();
    }
    const double log_abs = st.abs_sum.log();
    const double err = kEps * (8.0 + st.log_magnitude) * std::exp(log_abs);
    if (st.max_lt < 700.0 && std::isfinite(total) && err <= P.tol * std::abs(total)) {
        return {P.prefactor * total, std::move(d)};
    }

    // Cancellation: redo the sum with enough bits to cover log2(Σ|T| / |Σ T|) plus the target.
    const double log2_tol = -std::log2(P.tol);
    const double log2_abs = log_abs / std::log(2.0);
    double log2_ratio = std::isfinite(total) && total != 0.0 && st.max_lt < 700.0
                            ? log2_abs - std::log2(std::abs(total))
                            : log2_abs + 64.0;
    long bits = static_cast<long>(std::ceil(log2_ratio + log2_tol + 24.0));
    bits = std::max(bits, 96L);
    while (bits <= kMaxBits) {
        MpfrAcc acc(P, static_cast<mpfr_prec_t>(bits));
        RunStats mst;
        d = run_series(P, acc, mst);
        total = acc.total();
        const double log2_err = -static_cast<double>(bits) + 6.0 + mst.abs_sum.log() / std::log(2.0);
        if (total != 0.0 && log2_err <= std::log2(P.tol * std::abs(total))) {
            d.precision_bits = static_cast<int>(bits);
            return {P.prefactor * total, std::move(d)};
        }
        log2_ratio = total != 0.0 ? mst.abs_sum.log() / std::log(2.0) - std::log2(std::abs(total)) : 2.0 * bits;
        bits = std::max(2 * bits, static_cast<long>(std::ceil(log2_ratio + log2_tol + 24.0)));
    }
    throw Error(ErrorCode::NonConvergence, "series cancellation exceeds the multiprecision budget");
}

}  // namespace

SeriesResult dfrac_call_series(const ModelParams& params, const PricingInputs& inputs, const RiskNeutralParam& mu,
                               const TruncationPolicy& policy) {
    validate(params);
    policy.check();
    if (!(inputs.strike() > 0.0)) throw Error(ErrorCode::InvalidInput, "series pricing needs strike > 0");
    if (!(mu.mu < 0.0)) throw Error(ErrorCode::InvalidInput, fmt::format("mu must be < 0: mu = {}", mu.mu));
    return sum_series(make_plan(params, inputs, mu.mu, policy));
}

SeriesDiagnostics partial_sum_table(const ModelParams& params, const PricingInputs& inputs,
                                    const RiskNeutralParam& mu, const TruncationPolicy& policy) {
    return dfrac_call_series(params, inputs, mu, policy).diagnostics;
}

namespace {

// γ = 1 double-fractional is the FMLS series; route it there so the two agree bit for bit
ModelParams canonical(const ModelParams& p) {
    if (p.kind == ModelKind::DoubleFractional && p.gamma == 1.0) return ModelParams::fmls(p.alpha, p.sigma);
    return p;
}

}  // namespace

double price_with_mu(const ModelParams& params, const PricingInputs& inputs, const RiskNeutralParam& mu,
                     const TruncationPolicy& policy) {
    const double call = dfrac_call_series(params, inputs, mu, policy).price;
    return inputs.kind() == OptionKind::Call ? call : put_from_parity(call, inputs);
}

PriceResult price_detailed(const ModelParams& raw, const PricingInputs& inputs, const TruncationPolicy& policy) {
    validate(raw);
    const ModelParams params = canonical(raw);
    if (params.kind == ModelKind::BlackScholes)
        return {bs_price(inputs, params.sigma), PriceMethod::ClosedForm, -0.5 * params.sigma * params.sigma};
    const RiskNeutralParam mu = mu_gamma_series(params);
    if (inputs.strike() == 0.0) {
        const double call = reference_price(params, inputs.with_kind(OptionKind::Call));
        return {inputs.kind() == OptionKind::Call ? call : 0.0, PriceMethod::Quadrature, mu.mu};
    }
    double call;
    PriceMethod method = PriceMethod::Series;
    try {
        call = dfrac_call_series(params, inputs, mu, policy).price;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Divergence) throw;
        call = reference_price(params, inputs.with_kind(OptionKind::Call));
        method = PriceMethod::Quadrature;
    }
    return {inputs.kind() == OptionKind::Call ? call : put_from_parity(call, inputs), method, mu.mu};
}

double price(const ModelParams& params, const PricingInputs& inputs, const TruncationPolicy& policy) {
    return price_detailed(params, inputs, policy).price;
}

}  // namespace fracdiff
