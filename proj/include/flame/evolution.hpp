#pragma once

#include "flame/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace flame {

class TurbulenceField;

struct StepConfig {
    double cfl = 0.25;
    double filter_keep = 2.0 / 3.0;  // fraction of resolved modes kept each step
    int resample_every = 10;        // 0 resamples only when the spacing ratio exceeds four
    double target_spacing = 0.0;     // zero keeps the marker count when resampling
    int max_markers = 1024;
    double t_end = 1.0;
    std::optional<double> fixed_dt;
    // Keep psi uniform along the front by moving its non-uniform part into omega through
    // the interior Dirichlet-to-Neumann map. The trace solution does not change under this
    // transfer; see the README for why it is the default.
    bool gauge_fixed = true;
    int max_steps = 10000000;

    void validate() const;
};

struct Rates {
    Field dpsi;
    Field domega_tilde;
    Points velocity;  // marker velocity, -n V_s
};

// Right-hand sides of the two boundary-field equations for a solved front.
Rates rhs(const FrontState& front, const GeometryFrame& frame, const TraceSolution& trace,
          const PhysicalParams& params);

// Everything computed from one geometry during a stage.
struct StageEval {
    GeometryFrame frame;
    LayerOperators ops;
    TraceSolution trace;
    Rates rates;
};

StageEval evaluate_stage(const FrontState& front, const PhysicalParams& params,
                         const TurbulenceField* turbulence, bool gauge_fixed);

// Moves the non-uniform part of psi into omega, leaving the trace solution unchanged.
FrontState fix_gauge(const FrontState& front, const LayerOperators& ops, double theta);

struct StepInfo {
    double dt = 0.0;
    bool resampled = false;
    TraceSolution trace;   // solution at the start of the step
    GeometryFrame frame;   // geometry at the start of the step
};

// One RK4 step; the stage-1 solve also sets the CFL time step. Positions and fields are
// filtered after the step, and resampled every resample_every steps or when the spacing
// ratio exceeds four. Throws GeometryError on self-intersection.
FrontState step(const FrontState& front, const PhysicalParams& params, const StepConfig& cfg,
                const TurbulenceField* turbulence, long step_index, StepInfo* info = nullptr);

struct StepRecord {
    long step = 0;
    double tau = 0.0;
    double perimeter = 0.0;
    double area = 0.0;
    double mean_vs = 0.0;
    double residual = 0.0;
    std::vector<double> amplitudes;  // modes 1..8
};

// Receives run output. All hooks are optional.
struct RunObserver {
    std::function<void(const StepRecord&, const FrontState&, const GeometryFrame&,
                       const TraceSolution&)> on_step;
    std::function<void(const FrontState&, long step)> on_checkpoint;
};

struct RunSummary {
    FrontState final_state;
    long steps = 0;
    double perimeter = 0.0;
    double area = 0.0;
    double mean_vs = 0.0;
    std::vector<double> amplitudes;
    double wall_seconds = 0.0;
};

RunSummary run(const FrontState& initial, const PhysicalParams& params, const StepConfig& cfg,
               const TurbulenceField* turbulence, const RunObserver& observer = {},
               long first_step = 0);

// Ensures psi and omega exist with the marker count, zero-filled if empty.
FrontState make_front(const Points& markers, double tau = 0.0);

}  // namespace flame
