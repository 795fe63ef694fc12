#pragma once

#include <string>

#include "fracdiff/mellin_barnes.hpp"
#include "fracdiff/policy.hpp"

namespace fracdiff {

enum class ModelKind { BlackScholes, FMLS, DoubleFractional };

const char* to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(const std::string& text);

struct ModelParams {
    ModelKind kind = ModelKind::BlackScholes;
    double alpha = 2.0;
    double gamma = 1.0;
    double sigma = 0.2;

    double theta() const { return alpha - 2.0; }

    static ModelParams black_scholes(double sigma) { return {ModelKind::BlackScholes, 2.0, 1.0, sigma}; }
    static ModelParams fmls(double alpha, double sigma) { return {ModelKind::FMLS, alpha, 1.0, sigma}; }
    static ModelParams double_fractional(double alpha, double gamma, double sigma) {
        return {ModelKind::DoubleFractional, alpha, gamma, sigma};
    }

    ModelParams with_sigma(double s) const {
        ModelParams p = *this;
        p.sigma = s;
        return p;
    }
};

// Returns params unchanged or throws Error with a code naming the violated constraint.
const ModelParams& validate(const ModelParams& params);

struct RiskNeutralParam {
    double mu = 0.0;
    int n_terms_used = 0;
    bool converged = true;
};

double mu_levy(double alpha, double sigma);

RiskNeutralParam mu_gamma_series(const ModelParams& params,
                                 const TruncationPolicy& policy = TruncationPolicy::mu_default());

// The default contour for the risk-neutral integral bends into the right half-plane.
ContourSpec mu_contour();

double mu_gamma_mb(const ModelParams& params, const ContourSpec& contour = mu_contour());

double mu_gamma_approx(const ModelParams& params);

}  // namespace fracdiff
