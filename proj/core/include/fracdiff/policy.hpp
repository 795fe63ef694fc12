#pragma once

namespace fracdiff {

enum class TruncationMode { Fixed, Adaptive };

struct TruncationPolicy {
    int n_max = 60;
    int m_max = 60;
    double tolerance = 1e-12;
    TruncationMode mode = TruncationMode::Adaptive;

    // In adaptive mode the caps grow with the series' peak index when the
    // moneyness or the scale push it beyond n_max / m_max.
    static TruncationPolicy adaptive(double tolerance = 1e-12) {
        return {60, 60, tolerance, TruncationMode::Adaptive};
    }
    static TruncationPolicy fixed(int n_max, int m_max) {
        return {n_max, m_max, 1e-12, TruncationMode::Fixed};
    }
    static TruncationPolicy smile() { return fixed(4, 4); }
    // n_max doubles as max_terms for the single series of the risk-neutral parameter
    static TruncationPolicy mu_default() { return {64, 1, 1e-12, TruncationMode::Adaptive}; }

    void check() const;
};

}  // namespace fracdiff
