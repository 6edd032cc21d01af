#pragma once

#include "flame/common.hpp"

#include <cstdint>
#include <vector>

namespace flame {

struct TurbulenceMode {
    Vec2 k;   // wavevector
    Vec2 a;   // amplitude, perpendicular to k
    double phase = 0.0;
};

// Frozen solenoidal field u(x) = sum_j a_j cos(k_j . x + phase_j).
class TurbulenceField {
public:
    std::vector<TurbulenceMode> modes;
    double u_rms = 0.0;          // per-component rms target
    double integral_scale = 1.0;
    double spectrum_exponent = -5.0 / 3.0;
    std::uint64_t seed = 0;

    TurbulenceField() = default;
    // Modes given explicitly; amplitudes are projected onto the direction normal to k.
    explicit TurbulenceField(std::vector<TurbulenceMode> m);

    Vec2 eval(const Vec2& x) const;
    Points eval(const Points& x) const;
    // Analytic per-component rms, sqrt(sum |a_j|^2 / 4).
    double analytic_rms() const;
};

TurbulenceField synthesize(double u_rms, double integral_scale, int n_modes,
                           double spectrum_exponent, std::uint64_t seed);

}  // namespace flame
