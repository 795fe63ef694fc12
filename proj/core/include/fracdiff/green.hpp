#pragma once

#include <complex>
#include <vector>

#include "fracdiff/market.hpp"
#include "fracdiff/mellin_barnes.hpp"
#include "fracdiff/model.hpp"

namespace fracdiff {

// How the density is continued to x < 0, where the contour representation
// is stated only for x > 0.
enum class NegativeBranch {
    // g^θ(-x) = g^{-θ}(x): the normalised density (default)
    Reflection,
    // the x > 0 Mellin-Barnes function continued through x -> x e^{iπ};
    // this is the function whose residues the call-price series sums.
    // Cancellation limits it to |x| of a few scale() units.
    AnalyticContinuation,
};

struct GreenDensityQuery {
    double alpha;
    double gamma;
    double mu;
    double x;
    double tau;
};

// Γ-ratios sampled once on the contour so repeated density evaluations for one
// (α, γ, μ, τ) cost one pass over the nodes.
class GreenKernel {
public:
    GreenKernel(double alpha, double gamma, double mu, double tau, const ContourSpec& contour = {},
                NegativeBranch branch = NegativeBranch::Reflection);

    double operator()(double x) const;
    // round-off level of operator()(x) for x > 0; below it the value carries no information
    double noise_floor(double x) const;
    double scale() const { return lambda_; }  // (-μ τ^γ)^{1/α}
    double alpha() const { return alpha_; }
    NegativeBranch branch() const { return branch_; }

private:
    struct Side {
        std::vector<std::complex<double>> point;
        std::vector<std::complex<double>> weighted;  // F(t_j) w_j
        double abs_sum = 0.0;
    };
    static double evaluate(const Side& side, std::complex<double> log_base);

    double alpha_;
    double lambda_;
    double abscissa_;
    double noise_scale_ = 0.0;  // relative round-off of the node sum
    NegativeBranch branch_;
    Side positive_;
    Side negative_;
};

double green_density(const GreenDensityQuery& q, const ContourSpec& contour = {},
                     NegativeBranch branch = NegativeBranch::Reflection);

// Discounted payoff integrated against the Green function; μ comes from the
// model module. Calls and puts use their own payoff, no parity.
double reference_price(const ModelParams& params, const PricingInputs& inputs, const ContourSpec& contour = {},
                       NegativeBranch branch = NegativeBranch::Reflection);

}  // namespace fracdiff
