#include "flame/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace flame::spectral {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_size(int n) {
    if (n < 2 || n % 2 != 0)
        throw FlameError("spectral: sample count must be even and >= 2, got " + std::to_string(n));
}

}  // namespace

Coeffs forward(const Field& f) {
    const int n = static_cast<int>(f.size());
    check_size(n);
    std::vector<double> in(f.data(), f.data() + n);
    Coeffs out(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

Field inverse(const Coeffs& c, int n) {
    check_size(n);
    Coeffs in = c;
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    Field f(n);
    for (int i = 0; i < n; ++i) f[i] = out[i] / n;
    return f;
}

Field derivative(const Field& f) {
    const int n = static_cast<int>(f.size());
    Coeffs c = forward(f);
    const int half = n / 2;
    for (int k = 0; k < half; ++k) c[k] *= std::complex<double>(0.0, k);
    c[half] = 0.0;
    return inverse(c, n);
}

Field integrate_zero_mean(const Field& f) {
    const int n = static_cast<int>(f.size());
    Coeffs c = forward(f);
    const int half = n / 2;
    c[0] = 0.0;
    c[half] = 0.0;
    for (int k = 1; k < half; ++k) c[k] /= std::complex<double>(0.0, k);
    Field g = inverse(c, n);
    return g.array() - g[0];
}

Field lowpass(const Field& f, double keep) {
    const int n = static_cast<int>(f.size());
    Coeffs c = forward(f);
    const double cut = keep * (n / 2);
    for (int k = 0; k <= n / 2; ++k)
        if (k > cut || (k == n / 2 && keep < 1.0)) c[k] = 0.0;
    return inverse(c, n);
}

Interpolant::Interpolant(const Field& f) : n_(static_cast<int>(f.size())), c_(forward(f)) {
    for (auto& z : c_) z /= n_;
}

double Interpolant::operator()(double t) const {
    const int half = n_ / 2;
    const std::complex<double> step(std::cos(t), std::sin(t));
    std::complex<double> e = step;
    double sum = c_[0].real();
    for (int k = 1; k < half; ++k) {
        sum += 2.0 * (c_[k] * e).real();
        e *= step;
    }
    sum += c_[half].real() * std::cos(half * t);
    return sum;
}

double Interpolant::derivative(double t) const {
    const int half = n_ / 2;
    const std::complex<double> step(std::cos(t), std::sin(t));
    std::complex<double> e = step;
    double sum = 0.0;
    for (int k = 1; k < half; ++k) {
        sum += 2.0 * (std::complex<double>(0.0, k) * c_[k] * e).real();
        e *= step;
    }
    return sum;
}

Eigen::MatrixXd derivative_matrix(int n) {
    check_size(n);
    const double h = 2.0 * pi / n;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int k = i - j;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = 0.5 * sign / std::tan(0.5 * k * h);
        }
    return d;
}

Field log_weights(int n) {
    check_size(n);
    const int half = n / 2;
    Field r(n);
    for (int k = 0; k < n; ++k) {
        const double d = 2.0 * pi * k / n;
        double s = 0.0;
        for (int m = 1; m < half; ++m) s += std::cos(m * d) / m;
        r[k] = -(2.0 * pi / half) * s - (pi / (double(half) * half)) * std::cos(half * d);
    }
    return r;
}

}  // namespace flame::spectral
