#include "flame/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace flame {

namespace {

// Uniform in [0, 1) from the raw engine bits, identical on every platform.
double unit(std::mt19937_64& g) { return (g() >> 11) * 0x1.0p-53; }

Vec2 transverse(const Vec2& k, const Vec2& a) {
    const double kk = k.squaredNorm();
    if (kk == 0.0) return a;
    return a - k * (k.dot(a) / kk);
}

}  // namespace

TurbulenceField::TurbulenceField(std::vector<TurbulenceMode> m) : modes(std::move(m)) {
    for (auto& mode : modes) mode.a = transverse(mode.k, mode.a);
    u_rms = analytic_rms();
}

Vec2 TurbulenceField::eval(const Vec2& x) const {
    Vec2 u = Vec2::Zero();
    for (const auto& m : modes) u += m.a * std::cos(m.k.dot(x) + m.phase);
    return u;
}

Points TurbulenceField::eval(const Points& x) const {
    Points u(x.rows(), 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) u.row(i) = eval(Vec2(x.row(i).transpose())).transpose();
    return u;
}

double TurbulenceField::analytic_rms() const {
    double s = 0.0;
    for (const auto& m : modes) s += m.a.squaredNorm();
    return std::sqrt(0.25 * s);
}

TurbulenceField synthesize(double u_rms, double integral_scale, int n_modes,
                           double spectrum_exponent, std::uint64_t seed) {
    if (!std::isfinite(u_rms) || u_rms < 0.0) throw ConfigError("turbulence u_rms must be >= 0");
    if (!(integral_scale > 0.0)) throw ConfigError("turbulence integral_scale must be positive");
    if (n_modes < 1) throw ConfigError("turbulence n_modes must be >= 1");
    if (!std::isfinite(spectrum_exponent)) throw ConfigError("spectrum exponent must be finite");

    TurbulenceField f;
    f.integral_scale = integral_scale;
    f.spectrum_exponent = spectrum_exponent;
    f.seed = seed;
    if (u_rms == 0.0) return f;

    std::mt19937_64 gen(seed);
    const double k_lo = 2.0 * pi / (8.0 * integral_scale);
    const double k_hi = 2.0 * pi * 8.0 / integral_scale;
    // Modes come in orthogonal pairs per shell so the two velocity components carry equal
    // energy; an odd count leaves the last shell with a single mode.
    const int shells = (n_modes + 1) / 2;
    const double ratio = shells > 1 ? std::pow(k_hi / k_lo, 1.0 / (shells - 1)) : 1.0;
    for (int sh = 0; sh < shells; ++sh) {
        const double k = shells > 1 ? k_lo * std::pow(ratio, sh) : k_lo;
        // Shell width of a log-spaced grid is proportional to k.
        const double dk = shells > 1 ? k * std::log(ratio) : k;
        const int members = std::min(2, n_modes - 2 * sh);
        const double amp = std::sqrt(std::pow(k, spectrum_exponent) * dk / members);
        const double alpha = 2.0 * pi * unit(gen);
        for (int q = 0; q < members; ++q) {
            const double a = alpha + 0.5 * pi * q;
            TurbulenceMode m;
            m.k = k * Vec2(std::cos(a), std::sin(a));
            m.a = amp * Vec2(-std::sin(a), std::cos(a));
            m.phase = 2.0 * pi * unit(gen);
            f.modes.push_back(m);
        }
    }
    const double scale = u_rms / f.analytic_rms();
    for (auto& m : f.modes) m.a *= scale;
    f.u_rms = u_rms;
    return f;
}

}  // namespace flame
