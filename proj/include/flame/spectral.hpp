#pragma once

#include "flame/common.hpp"

#include <complex>
#include <vector>

// Fourier tools for periodic samples f_j = f(2 pi j / N), N even.
namespace flame::spectral {

using Coeffs = std::vector<std::complex<double>>;

// Unnormalized r2c transform, N/2 + 1 coefficients.
Coeffs forward(const Field& f);
Field inverse(const Coeffs& c, int n);

// d/dt in the parameter t in [0, 2 pi). Nyquist mode dropped.
Field derivative(const Field& f);

// Antiderivative of f - mean(f), fixed so the result is zero at t = 0.
Field integrate_zero_mean(const Field& f);

// Zeroes every mode with wavenumber above keep * N / 2.
Field lowpass(const Field& f, double keep);

// Trigonometric interpolant evaluated at arbitrary t, and its derivative.
class Interpolant {
public:
    explicit Interpolant(const Field& f);
    double operator()(double t) const;
    double derivative(double t) const;
    int size() const { return n_; }

private:
    int n_;
    Coeffs c_;
};

// Dense first-derivative matrix in t.
Eigen::MatrixXd derivative_matrix(int n);

// Weights R_j(t_i) of the product rule for integrals with a ln(4 sin^2((t-s)/2)) factor,
// indexed by (i - j) mod N.
Field log_weights(int n);

}  // namespace flame::spectral
