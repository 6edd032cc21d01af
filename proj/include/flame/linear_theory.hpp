#pragma once

#include "flame/common.hpp"

#include <vector>

namespace flame {

// Roots of a A s^2 + B s + C = 0 quadratic dispersion relation.
struct DispersionResult {
    double sigma = 0.0;       // principal (larger) root
    double sigma_other = 0.0; // second root
    double k = 0.0;
    double theta = 1.0;
    double lambda_c = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;  // quadratic coefficients
    double residual = 0.0;             // max relative residual of the two roots
};

// (theta + 1) s^2 + 2 theta k s - theta (theta - 1) k^2 = 0
DispersionResult dl_growth_rate(double theta, double k);

// Same relation with the stretch correction; neutral at k = 2 pi / lambda_c.
DispersionResult stabilized_growth_rate(double theta, double k, double lambda_c);

// (theta - 1) k / 2
double small_expansion_rate(double theta, double k);

struct GrowthFit {
    double sigma = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
    int samples = 0;
};

// Least-squares slope of ln(amplitude) against tau over samples with tau in [lo, hi].
GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& amplitude,
                          double lo = -1e300, double hi = 1e300);

struct ModeAmplitudes {
    double mean_radius = 0.0;
    Vec2 centroid = Vec2::Zero();
    std::vector<double> amplitude;  // index m = 0..max_mode; entry 0 unused
    std::vector<double> cosine;
    std::vector<double> sine;
};

// Projects r(theta) about the area centroid onto cos(m theta), sin(m theta).
ModeAmplitudes mode_amplitudes(const Points& markers, int max_mode);

}  // namespace flame
