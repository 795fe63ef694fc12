#pragma once

#include <complex>

namespace fracdiff {

struct SignedLogGamma {
    double value;  // log|Γ(x)|
    int sign;      // +1 or -1
};

// Throws Error(Pole) at nonpositive integers.
SignedLogGamma log_gamma(double x);

// 1/Γ(x), exactly zero at the poles of Γ.
double reciprocal_gamma(double x);

double normal_cdf(double x);

bool is_gamma_pole(double x, double tol = 1e-12);

// Principal branch of log Γ(z) for complex z away from the poles.
std::complex<double> log_gamma(std::complex<double> z);

}  // namespace fracdiff
