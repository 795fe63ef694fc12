#include "fracdiff/mellin_barnes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "fracdiff/error.hpp"

namespace fracdiff {

namespace {

using cplx = std::complex<double>;
using GL16 = boost::math::quadrature::gauss<double, 16>;

// Composite 16-point Gauss-Legendre on [a, b] with `panels` equal panels.
void gauss_panels(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
    const auto& abs = GL16::abscissa();
    const auto& wts = GL16::weights();
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t k = 0; k < abs.size(); ++k) {
            x.push_back(mid - half * abs[k]);
            w.push_back(half * wts[k]);
            x.push_back(mid + half * abs[k]);
            w.push_back(half * wts[k]);
        }
    }
}

}  // namespace

void ContourSpec::check() const {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw Error(ErrorCode::InvalidInput, "contour half_length must be positive");
    if (nodes < 16) throw Error(ErrorCode::InvalidInput, "contour needs at least 16 nodes");
    if (!std::isfinite(abscissa)) throw Error(ErrorCode::InvalidInput, "contour abscissa must be finite");
    if (shape == ContourShape::RightLoop && !(loop_height > 0.0))
        throw Error(ErrorCode::InvalidInput, "contour loop_height must be positive");
}

ContourSpec ContourSpec::doubled() const {
    ContourSpec d = *this;
    d.half_length *= 2.0;
    d.nodes *= 2;
    return d;
}

ContourRule make_contour_rule(const ContourSpec& contour) {
    contour.check();
    const double c = contour.abscissa;
    const double two_pi = 2.0 * std::numbers::pi;
    const int panels = std::max(1, contour.nodes / 16);
    ContourRule rule;
    std::vector<double> x, w;

    if (contour.shape == ContourShape::Vertical) {
        gauss_panels(-contour.half_length, contour.half_length, panels, x, w);
        for (std::size_t j = 0; j < x.size(); ++j) {
            rule.point.emplace_back(c, x[j]);
            rule.weight.emplace_back(w[j] / two_pi, 0.0);  // ds = i dy
        }
        return rule;
    }

    const double h = contour.loop_height;
    const int vertical_panels = std::max(1, panels / 16);
    gauss_panels(-h, h, vertical_panels, x, w);
    for (std::size_t j = 0; j < x.size(); ++j) {
        rule.point.emplace_back(c, x[j]);
        rule.weight.emplace_back(w[j] / two_pi, 0.0);
    }
    x.clear();
    w.clear();
    const int ray_panels = std::max(1, (panels - vertical_panels) / 2);
    gauss_panels(0.0, contour.half_length, ray_panels, x, w);
    const cplx to_loop = cplx(0.0, -1.0 / two_pi);  // 1/(2πi)
    for (std::size_t j = 0; j < x.size(); ++j) {
        rule.point.emplace_back(c + x[j], h);
        rule.weight.push_back(w[j] * to_loop);
        rule.point.emplace_back(c + x[j], -h);
        rule.weight.push_back(-w[j] * to_loop);
    }
    return rule;
}

std::complex<double> apply_rule(const ContourRule& rule, const ComplexFunction& f) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < rule.point.size(); ++j) {
        sum += rule.weight[j] * f(rule.point[j]);
    }
    return sum;
}

std::complex<double> mb_line_integral(const ComplexFunction& integrand, const ContourSpec& contour,
                                      double tol) {
    const cplx coarse = apply_rule(make_contour_rule(contour), integrand);
    const cplx fine = apply_rule(make_contour_rule(contour.doubled()), integrand);
    const double change = std::abs(fine - coarse);
    if (!(change <= tol * std::max(1.0, std::abs(fine))))
        throw Error(ErrorCode::NonConvergence,
                    fmt::format("Mellin-Barnes integral unstable under contour doubling (change {:.3e})", change));
    return fine;
}

}  // namespace fracdiff
