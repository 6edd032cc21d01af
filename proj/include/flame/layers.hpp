#pragma once

#include "flame/geometry.hpp"

#include <functional>
#include <vector>

namespace flame {

// Discrete layer potentials on the marker curve. With the inward normal n, the kernels are
//   single layer  ln|y - x|
//   double layer  n(y).(y - x) / |y - x|^2
// so for a function h harmonic inside the front, pi h + D h - S dh/dn = 0 on the curve.
struct LayerOperators {
    Eigen::MatrixXd single_layer;
    Eigen::MatrixXd double_layer;
    Points position;
    Points normal;
    Field weights;
    Field chord;
    // Point inside the burnt region used to subtract the far-field logarithm.
    Vec2 center;
    Field log_trace;   // ln|x - center|
    Field log_normal;  // n . (x - center) / |x - center|^2

    int size() const { return static_cast<int>(position.rows()); }
};

LayerOperators assemble_layers(const GeometryFrame& frame);

// Interior reference point: area centroid when it lies inside, otherwise a point pushed
// inward from the marker with the largest curvature radius.
Vec2 interior_point(const GeometryFrame& frame);

// Off-curve layer potentials and their gradients. The point must stay at least two local
// marker spacings away from the curve.
double single_layer_at(const LayerOperators& ops, const Field& density, const Vec2& p);
double double_layer_at(const LayerOperators& ops, const Field& density, const Vec2& p);
Vec2 single_layer_gradient(const LayerOperators& ops, const Field& density, const Vec2& p);
Vec2 double_layer_gradient(const LayerOperators& ops, const Field& density, const Vec2& p);

enum class Region { burnt, on_front, fuel };

// Throws GeometryError if p is closer to the front than twice the local spacing.
void check_clearance(const LayerOperators& ops, const Vec2& p);

// Boundary data of one harmonic side. For the fuel side the potential is
// mu ln|r - center| + regular part, with the regular part decaying at infinity.
struct SideDensities {
    Field trace;     // boundary value
    Field flux;      // derivative along the inward normal
    double mu = 0.0; // logarithmic source strength (fuel side only)
};

// Gradient of the harmonic potential represented by the given boundary data, at an
// off-curve point. Returns zero on the side the data do not describe.
Vec2 eval_velocity_offfront(const LayerOperators& ops, const SideDensities& fuel,
                            const SideDensities& burnt, const Vec2& p);

double eval_potential_offfront(const LayerOperators& ops, const SideDensities& fuel,
                               const SideDensities& burnt, const Vec2& p);

// Worst absolute mismatch of the Green reconstruction of a harmonic test function.
struct HarmonicTest {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;
    bool interior = true;  // harmonic inside the front; otherwise harmonic in the exterior
    // Exterior only: limit of value - mu ln|r| at infinity, where mu is the source strength.
    double at_infinity = 0.0;
};

struct IdentityReport {
    double inside = 0.0;
    double on_curve = 0.0;
    double outside = 0.0;
    double worst() const { return std::max({inside, on_curve, outside}); }
};

IdentityReport greens_identity_check(const GeometryFrame& frame, const LayerOperators& ops,
                                     const HarmonicTest& test, const std::vector<Vec2>& inside,
                                     const std::vector<Vec2>& outside);

}  // namespace flame
