#pragma once

#include "flame/evolution.hpp"

namespace flame {

// Small-expansion front speed
//   V_s(x) = 1 + (theta - 1)/2 [1 + (1/pi) int n(x).(y - x)/|y - x|^2 dS(y)],
// equal to theta on a circle.
Field frankel_front_speed(const GeometryFrame& frame, double theta);

// Same RK4, filter and resample machinery as the full solver, with V_s from above.
// Psi and omega are carried along unchanged.
FrontState frankel_step(const FrontState& front, double theta, const StepConfig& cfg,
                        long step_index, double* dt_used = nullptr);

RunSummary frankel_run(const FrontState& initial, double theta, const StepConfig& cfg,
                       const std::function<void(const StepRecord&, const FrontState&)>& on_step = {});

}  // namespace flame
