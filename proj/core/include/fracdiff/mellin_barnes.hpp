#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fracdiff {

enum class ContourShape {
    Vertical,   // c - iL .. c + iL
    RightLoop,  // from c + L - ih along Im = -h, up to c + ih, back out to c + L + ih
};

struct ContourSpec {
    double abscissa = 0.5;
    double half_length = 60.0;
    int nodes = 2048;
    ContourShape shape = ContourShape::Vertical;
    double loop_height = 2.0;

    void check() const;
    ContourSpec doubled() const;
};

// Discretised contour: (1/2πi)∫ f(s) ds ≈ Σ weight[j]·f(point[j]).
struct ContourRule {
    std::vector<std::complex<double>> point;
    std::vector<std::complex<double>> weight;
};

ContourRule make_contour_rule(const ContourSpec& contour);

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

std::complex<double> apply_rule(const ContourRule& rule, const ComplexFunction& f);

// Throws NonConvergence when the doubled contour moves the result by more
// than tol * max(1, |result|).
std::complex<double> mb_line_integral(const ComplexFunction& integrand, const ContourSpec& contour,
                                      double tol = 1e-9);

}  // namespace fracdiff
