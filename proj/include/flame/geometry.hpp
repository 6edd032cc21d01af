#pragma once

#include "flame/common.hpp"

#include <memory>
#include <vector>

namespace flame {

struct TraceSolution;

// Closed marker curve traversed counter-clockwise with burnt gas inside, plus the
// two boundary fields the evolution carries.
struct FrontState {
    Points markers;
    Field psi;    // potential jump across the front
    Field omega;  // normal-derivative jump of the vortical stream function
    double tau = 0.0;
    std::shared_ptr<const TraceSolution> solved;

    int size() const { return static_cast<int>(markers.rows()); }
};

struct GeometryFrame {
    Points position;
    Points tangent;  // unit tangent
    Points normal;   // unit normal pointing into the burnt region
    Field kappa;     // positive on a circle
    Field speed;     // |dx/dt| in the marker parameter
    Field weights;   // trapezoid weights for dS
    Field arclength; // arc length from marker 0
    Field chord;     // |x_{i+1} - x_i|
    double perimeter = 0.0;

    int size() const { return static_cast<int>(position.rows()); }
    double min_spacing() const { return chord.minCoeff(); }
    double spacing_ratio() const { return chord.maxCoeff() / chord.minCoeff(); }
};

inline constexpr int min_markers = 16;

GeometryFrame build_frame(const Points& markers);
inline GeometryFrame build_frame(const FrontState& s) { return build_frame(s.markers); }

// d/ds and d2/ds2 along the front.
Field surface_derivative(const Field& f, const GeometryFrame& frame);
Field surface_laplacian(const Field& f, const GeometryFrame& frame);

// Front stretch Y = d(u_t)/ds + kappa V_s.
Field stretch(const GeometryFrame& frame, const Field& u_t, const Field& v_s);

double enclosed_area(const Points& markers);
Vec2 area_centroid(const Points& markers);
double winding_number(const Points& markers, const Vec2& p);
bool is_simple(const Points& markers);

// Redistributes markers uniformly in arc length. Positions use the trigonometric
// interpolant of the old curve; psi and omega use cubic interpolation in arc length.
FrontState resample_to_count(const FrontState& front, int count);
FrontState resample(const FrontState& front, double target_spacing);

// Applies the sharp Fourier filter to positions, psi and omega.
FrontState filter(const FrontState& front, double keep);

struct Perturbation {
    int mode = 0;
    double amplitude = 0.0;
    double phase = 0.0;
};

// r(theta) = R + sum a_m cos(m theta + phase_m), sampled at uniform theta.
Points make_perturbed_circle(int n, double radius, const Vec2& center,
                             const std::vector<Perturbation>& modes = {});

}  // namespace flame
