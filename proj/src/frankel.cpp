#include "flame/frankel.hpp"
#include "flame/linear_theory.hpp"

#include <chrono>
#include <cmath>

namespace flame {

Field frankel_front_speed(const GeometryFrame& frame, double theta) {
    if (!std::isfinite(theta) || theta < 1.0) throw ConfigError("theta must be >= 1");
    if (!is_simple(frame.position)) throw GeometryError("front is not simple");
    const int n = frame.size();
    Field v(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 x = frame.position.row(i).transpose();
        const Vec2 nx = frame.normal.row(i).transpose();
        double sum = 0.5 * frame.kappa[i] * frame.weights[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec2 d = frame.position.row(j).transpose() - x;
            sum += nx.dot(d) / d.squaredNorm() * frame.weights[j];
        }
        v[i] = 1.0 + 0.5 * (theta - 1.0) * (1.0 + sum / pi);
    }
    return v;
}

namespace {

Points velocity(const Points& x, double theta, Field* vs_out = nullptr) {
    const GeometryFrame f = build_frame(x);
    const Field vs = frankel_front_speed(f, theta);
    if (vs_out) *vs_out = vs;
    return -(f.normal.array().colwise() * vs.array()).matrix();
}

}  // namespace

FrontState frankel_step(const FrontState& front, double theta, const StepConfig& cfg,
                        long step_index, double* dt_used) {
    FrontState cur = front;
    cur.solved.reset();
    if (cur.psi.size() != cur.size()) cur.psi = Field::Zero(cur.size());
    if (cur.omega.size() != cur.size()) cur.omega = Field::Zero(cur.size());
    const GeometryFrame f0 = build_frame(cur.markers);
    if (f0.spacing_ratio() > 4.0) cur = resample_to_count(cur, cur.size());

    Field vs;
    const Points k1 = velocity(cur.markers, theta, &vs);
    double dt = cfg.fixed_dt ? *cfg.fixed_dt
                             : cfg.cfl * build_frame(cur.markers).min_spacing() /
                                   std::max(vs.cwiseAbs().maxCoeff(), 1.0);
    if (cur.tau + dt > cfg.t_end) dt = cfg.t_end - cur.tau;
    if (!(dt > 0.0)) throw FlameError("non-positive time step");

    const Points& x0 = cur.markers;
    const Points k2 = velocity(x0 + 0.5 * dt * k1, theta);
    const Points k3 = velocity(x0 + 0.5 * dt * k2, theta);
    const Points k4 = velocity(x0 + dt * k3, theta);

    FrontState next = cur;
    next.tau = cur.tau + dt;
    next.markers = x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (cfg.filter_keep < 1.0) next = filter(next, cfg.filter_keep);
    if (cfg.resample_every > 0 && (step_index + 1) % cfg.resample_every == 0) {
        int count = cur.size();
        if (cfg.target_spacing > 0.0) {
            const double per = build_frame(next.markers).perimeter;
            count = 2 * static_cast<int>(std::lround(0.5 * per / cfg.target_spacing));
            count = std::clamp(count, min_markers, cfg.max_markers);
        }
        next = resample_to_count(next, count);
    }
    if (!is_simple(next.markers))
        throw GeometryError("front self-intersected at tau = " + std::to_string(next.tau));
    if (dt_used) *dt_used = dt;
    return next;
}

RunSummary frankel_run(const FrontState& initial, double theta, const StepConfig& cfg,
                       const std::function<void(const StepRecord&, const FrontState&)>& on_step) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    FrontState state = initial;
    auto record = [&](long index) {
        const GeometryFrame f = build_frame(state.markers);
        const Field vs = frankel_front_speed(f, theta);
        StepRecord r;
        r.step = index;
        r.tau = state.tau;
        r.perimeter = f.perimeter;
        r.area = enclosed_area(state.markers);
        r.mean_vs = f.weights.dot(vs) / f.perimeter;
        const auto modes = mode_amplitudes(state.markers, 8).amplitude;
        r.amplitudes.assign(modes.begin() + 1, modes.end());
        return r;
    };

    long index = 0;
    const double eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
    while (cfg.t_end - state.tau > eps && index < cfg.max_steps) {
        if (on_step) on_step(record(index), state);
        state = frankel_step(state, theta, cfg, index);
        ++index;
    }
    const StepRecord last = record(index);
    if (on_step) on_step(last, state);

    RunSummary out;
    out.final_state = state;
    out.steps = index;
    out.perimeter = last.perimeter;
    out.area = last.area;
    out.mean_vs = last.mean_vs;
    out.amplitudes = last.amplitudes;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace flame
