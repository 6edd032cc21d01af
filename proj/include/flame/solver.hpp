#pragma once

#include "flame/layers.hpp"

namespace flame {

struct PhysicalParams {
    double theta = 6.0;     // density ratio
    double lambda_c = 0.0;  // cutoff wavelength, zero for no stretch correction

    // Coefficient of the front stretch in the local burning rate.
    double stretch_coeff() const { return (theta - 1.0) * lambda_c / (2.0 * pi * (theta + 1.0)); }
    void validate() const;
};

// Front traces for one geometry, all indexed by marker.
struct TraceSolution {
    Field phi_minus;  // fuel-side potential
    Field v_s;        // normal front speed, positive when burning outward
    Field u_t;        // fuel-side tangential velocity
    Field u_n;        // fuel-side normal velocity along the inward normal
    Field u_sq;       // |u|^2 on the fuel side
    Field y;          // front stretch
    Field flux_minus; // d(phi_minus)/dn
    Field flux_plus;  // d(phi_plus)/dn
    Field phi_plus;
    Field u_en;       // external flow, normal component
    Field u_et;       // external flow, tangential component
    double mu = 0.0;          // fuel-side logarithmic source strength
    double multiplier = 0.0;  // burnt-side compatibility multiplier
    double residual = 0.0;    // relative residual of the linear system
    double y_mismatch = 0.0;  // max difference between solved and recomputed stretch
    double rcond = 0.0;       // reciprocal condition estimate
    bool mean_pinned = false; // the rank-deficiency fallback was used
    // The stretch coupling is solved exactly, so no fixed-point sweeps are needed.
    int y_iterations = 0;
};

// Solves the coupled trace system for phi_minus and V_s, with the stretch coupling
// eliminated exactly. u_e holds the external flow at the markers (zero for laminar runs).
TraceSolution solve_traces(const FrontState& front, const GeometryFrame& frame,
                           const LayerOperators& ops, const PhysicalParams& params,
                           const Points& u_e);

// Interior Dirichlet-to-Neumann map: normal derivative (inward normal) of the function
// harmonic inside the front with trace h, up to the constant in h.
Field interior_dtn(const LayerOperators& ops, const Field& h);

inline constexpr double rcond_limit = 1e-12;

}  // namespace flame
