#include "flame/linear_theory.hpp"
#include "flame/geometry.hpp"
#include "flame/spectral.hpp"

#include <cmath>
#include <complex>

namespace flame {

namespace {

void check_inputs(double theta, double k) {
    if (!std::isfinite(theta) || theta < 1.0) throw FlameError("theta must be >= 1");
    if (!std::isfinite(k) || k <= 0.0) throw FlameError("wavenumber must be positive");
}

double relative_residual(double a, double b, double c, std::complex<double> z) {
    const std::complex<double> v = a * z * z + b * z + c;
    const double scale = std::abs(a) * std::norm(z) + std::abs(b) * std::abs(z) + std::abs(c);
    return scale > 0.0 ? std::abs(v) / scale : std::abs(v);
}

DispersionResult solve_quadratic(double a, double b, double c) {
    DispersionResult r;
    r.a = a;
    r.b = b;
    r.c = c;
    const double disc = b * b - 4.0 * a * c;
    std::complex<double> z1, z2;
    if (disc >= 0.0) {
        // Cancellation-free pair: q / a and c / q.
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (q == 0.0) {
            z1 = z2 = 0.0;
        } else {
            z1 = q / a;
            z2 = c / q;
        }
    } else {
        const double re = -b / (2.0 * a), im = std::sqrt(-disc) / (2.0 * a);
        z1 = {re, im};
        z2 = {re, -im};
    }
    r.sigma = std::max(z1.real(), z2.real());
    r.sigma_other = std::min(z1.real(), z2.real());
    r.residual = std::max(relative_residual(a, b, c, z1), relative_residual(a, b, c, z2));
    return r;
}

}  // namespace

DispersionResult dl_growth_rate(double theta, double k) {
    check_inputs(theta, k);
    DispersionResult r =
        solve_quadratic(theta + 1.0, 2.0 * theta * k, -theta * (theta - 1.0) * k * k);
    r.k = k;
    r.theta = theta;
    return r;
}

DispersionResult stabilized_growth_rate(double theta, double k, double lambda_c) {
    check_inputs(theta, k);
    if (!std::isfinite(lambda_c) || lambda_c < 0.0) throw FlameError("lambda_c must be >= 0");
    const double lam = (theta - 1.0) * lambda_c / (2.0 * pi * (theta + 1.0));
    const double a = theta + 1.0;
    const double b = 2.0 * theta * k + lam * (theta + 1.0) * k * k;
    const double c = -theta * (theta - 1.0) * k * k + theta * lam * (theta + 1.0) * k * k * k;
    DispersionResult r = solve_quadratic(a, b, c);
    r.k = k;
    r.theta = theta;
    r.lambda_c = lambda_c;
    return r;
}

double small_expansion_rate(double theta, double k) {
    if (!std::isfinite(theta) || theta < 1.0) throw FlameError("theta must be >= 1");
    return 0.5 * (theta - 1.0) * k;
}

GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& amplitude,
                          double lo, double hi) {
    if (tau.size() != amplitude.size()) throw FlameError("fit: tau and amplitude lengths differ");
    std::vector<double> x, y;
    for (size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] < lo || tau[i] > hi) continue;
        if (!(amplitude[i] > 0.0)) throw FlameError("fit: amplitudes must be positive");
        x.push_back(tau[i]);
        y.push_back(std::log(amplitude[i]));
    }
    const int n = static_cast<int>(x.size());
    if (n < 10) throw FlameError("fit: window holds " + std::to_string(n) + " samples, need >= 10");

    // Center on the first sample so a constant series gives an exact zero slope.
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i] - x[0];
        my += y[i] - y[0];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - x[0] - mx, dy = y[i] - y[0] - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0)) throw FlameError("fit: window has no spread in tau");
    GrowthFit f;
    f.samples = n;
    f.sigma = sxy / sxx;
    f.intercept = y[0] + my - f.sigma * (x[0] + mx);
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.sigma * x[i]);
        sse += e * e;
    }
    f.std_error = std::sqrt(sse / (n - 2) / sxx);
    return f;
}

ModeAmplitudes mode_amplitudes(const Points& markers, int max_mode) {
    const int n = static_cast<int>(markers.rows());
    ModeAmplitudes out;
    out.centroid = area_centroid(markers);
    Field r(n), th(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 d = markers.row(j).transpose() - out.centroid;
        r[j] = d.norm();
        th[j] = std::atan2(d.y(), d.x());
        if (j > 0) {
            while (th[j] - th[j - 1] > pi) th[j] -= 2.0 * pi;
            while (th[j] - th[j - 1] < -pi) th[j] += 2.0 * pi;
        }
    }
    const double h = 2.0 * pi / n;
    Field lin(n);
    for (int j = 0; j < n; ++j) lin[j] = th[0] + h * j;
    const Field dth = (spectral::derivative(th - lin).array() + 1.0).matrix();

    out.amplitude.assign(max_mode + 1, 0.0);
    out.cosine.assign(max_mode + 1, 0.0);
    out.sine.assign(max_mode + 1, 0.0);
    out.mean_radius = h * r.dot(dth) / (2.0 * pi);
    for (int m = 1; m <= max_mode; ++m) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < n; ++j) {
            a += r[j] * std::cos(m * th[j]) * dth[j];
            b += r[j] * std::sin(m * th[j]) * dth[j];
        }
        out.cosine[m] = a * h / pi;
        out.sine[m] = b * h / pi;
        out.amplitude[m] = std::hypot(out.cosine[m], out.sine[m]);
    }
    return out;
}

}  // namespace flame
