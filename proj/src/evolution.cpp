#include "flame/evolution.hpp"
#include "flame/linear_theory.hpp"
#include "flame/turbulence.hpp"

#include <chrono>
#include <cmath>

namespace flame {

void StepConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
    if (!(filter_keep >= 0.5 && filter_keep <= 1.0))
        throw ConfigError("filter_keep must lie in [0.5, 1]");
    if (resample_every < 0) throw ConfigError("resample_every must be >= 0");
    if (max_markers < min_markers || max_markers % 2 != 0)
        throw ConfigError("max_markers must be even and >= " + std::to_string(min_markers));
    if (!(t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
    if (target_spacing < 0.0) throw ConfigError("target_spacing must be >= 0");
    if (fixed_dt && !(*fixed_dt > 0.0)) throw ConfigError("fixed_dt must be positive");
}

FrontState make_front(const Points& markers, double tau) {
    FrontState f;
    f.markers = markers;
    f.psi = Field::Zero(markers.rows());
    f.omega = Field::Zero(markers.rows());
    f.tau = tau;
    return f;
}

Rates rhs(const FrontState& front, const GeometryFrame& frame, const TraceSolution& trace,
          const PhysicalParams& params) {
    const double th = params.theta;
    const double lam = params.stretch_coeff();
    const Field& vs = trace.v_s;
    const Field ly = lam * trace.y;

    // Normal-flow coupling of the external field; absent at theta = 1 where it is disallowed.
    Field drive = Field::Ones(vs.size()) + front.omega;
    if (th > 1.0) drive -= th / (th - 1.0) * trace.u_en;

    Rates r;
    r.dpsi = 0.5 * trace.u_sq.array() - vs.array().square() + drive.array() * vs.array() -
             ly.array() * (vs.array() + (th - 1.0)) +
             0.5 * (th - 1.0) * (1.0 + ly.array().square());
    r.domega_tilde =
        -vs.cwiseProduct(surface_laplacian(trace.phi_minus + front.psi, frame));
    r.velocity = -(frame.normal.array().colwise() * vs.array()).matrix();
    return r;
}

namespace {

// omega_tilde = omega - u_en / (theta - 1)
Field external_shift(const TraceSolution& trace, double theta) {
    if (theta > 1.0) return trace.u_en / (theta - 1.0);
    return Field::Zero(trace.u_en.size());
}

Points external_at(const TurbulenceField* turbulence, const Points& x) {
    if (!turbulence) return Points();
    return turbulence->eval(x);
}

// Evaluates a stage whose vortical field is given as omega_tilde.
StageEval evaluate_tilde(const Points& x, const Field& psi, const Field& omega_tilde,
                         double tau, const PhysicalParams& params,
                         const TurbulenceField* turbulence, bool gauge_fixed) {
    StageEval ev;
    ev.frame = build_frame(x);
    ev.ops = assemble_layers(ev.frame);
    const Points ue = external_at(turbulence, x);
    FrontState f;
    f.markers = x;
    f.psi = psi;
    f.tau = tau;
    f.omega = omega_tilde;
    if (ue.rows() > 0 && params.theta > 1.0) {
        const Field un = (ue.array() * ev.frame.normal.array()).rowwise().sum();
        f.omega += un / (params.theta - 1.0);
    }
    ev.trace = solve_traces(f, ev.frame, ev.ops, params, ue);
    ev.rates = rhs(f, ev.frame, ev.trace, params);
    if (gauge_fixed) {
        const double mean = ev.rates.dpsi.mean();
        ev.rates.domega_tilde +=
            interior_dtn(ev.ops, ev.rates.dpsi - Field::Constant(ev.rates.dpsi.size(), mean));
        ev.rates.dpsi.setConstant(mean);
    }
    return ev;
}

void check_turbulence(const PhysicalParams& params, const TurbulenceField* turbulence) {
    if (turbulence && params.theta <= 1.0 && !turbulence->modes.empty())
        throw ConfigError("an external flow field requires theta > 1");
}

}  // namespace

StageEval evaluate_stage(const FrontState& front, const PhysicalParams& params,
                         const TurbulenceField* turbulence, bool gauge_fixed) {
    check_turbulence(params, turbulence);
    StageEval ev;
    ev.frame = build_frame(front.markers);
    ev.ops = assemble_layers(ev.frame);
    const Points ue = external_at(turbulence, front.markers);
    ev.trace = solve_traces(front, ev.frame, ev.ops, params, ue);
    ev.rates = rhs(front, ev.frame, ev.trace, params);
    if (gauge_fixed) {
        const double mean = ev.rates.dpsi.mean();
        ev.rates.domega_tilde +=
            interior_dtn(ev.ops, ev.rates.dpsi - Field::Constant(ev.rates.dpsi.size(), mean));
        ev.rates.dpsi.setConstant(mean);
    }
    return ev;
}

FrontState fix_gauge(const FrontState& front, const LayerOperators& ops, double theta) {
    (void)theta;
    FrontState out = front;
    const double mean = front.psi.mean();
    const Field h = front.psi - Field::Constant(front.psi.size(), mean);
    if (h.cwiseAbs().maxCoeff() == 0.0) return out;
    out.omega += interior_dtn(ops, h);
    out.psi.setConstant(mean);
    out.solved.reset();
    return out;
}

FrontState step(const FrontState& front, const PhysicalParams& params, const StepConfig& cfg,
                const TurbulenceField* turbulence, long step_index, StepInfo* info) {
    check_turbulence(params, turbulence);
    FrontState cur = front;
    cur.solved.reset();
    bool resampled = false;
    if (build_frame(cur.markers).spacing_ratio() > 4.0) {
        cur = resample_to_count(cur, cur.size());
        resampled = true;
    }
    const int n = cur.size();
    const double th = params.theta;

    StageEval e1 = evaluate_stage(cur, params, turbulence, cfg.gauge_fixed);
    double dt = cfg.fixed_dt ? *cfg.fixed_dt
                             : cfg.cfl * e1.frame.min_spacing() /
                                   std::max(e1.trace.v_s.cwiseAbs().maxCoeff(), 1.0);
    if (cur.tau + dt > cfg.t_end) dt = cfg.t_end - cur.tau;
    if (!(dt > 0.0)) throw FlameError("non-positive time step");

    const Points x0 = cur.markers;
    const Field psi0 = cur.psi;
    const Field ot0 = cur.omega - external_shift(e1.trace, th);

    auto stage = [&](const Rates& k, double a) {
        return evaluate_tilde(x0 + a * dt * k.velocity, psi0 + a * dt * k.dpsi,
                              ot0 + a * dt * k.domega_tilde, cur.tau + a * dt, params, turbulence,
                              cfg.gauge_fixed);
    };
    const Rates& k1 = e1.rates;
    const StageEval e2 = stage(k1, 0.5);
    const StageEval e3 = stage(e2.rates, 0.5);
    const StageEval e4 = stage(e3.rates, 1.0);
    const Rates& k2 = e2.rates;
    const Rates& k3 = e3.rates;
    const Rates& k4 = e4.rates;

    FrontState next;
    next.tau = cur.tau + dt;
    next.markers = x0 + dt / 6.0 * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
    next.psi = psi0 + dt / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    next.omega = ot0 + dt / 6.0 * (k1.domega_tilde + 2.0 * k2.domega_tilde +
                                   2.0 * k3.domega_tilde + k4.domega_tilde);
    if (cfg.filter_keep < 1.0) next = filter(next, cfg.filter_keep);
    if (cfg.gauge_fixed) next.psi.setConstant(next.psi.mean());
    if (turbulence && th > 1.0 && !turbulence->modes.empty()) {
        const GeometryFrame nf = build_frame(next.markers);
        const Points ue = turbulence->eval(next.markers);
        next.omega += (ue.array() * nf.normal.array()).rowwise().sum().matrix() / (th - 1.0);
    }

    if (cfg.resample_every > 0 && (step_index + 1) % cfg.resample_every == 0) {
        int count = n;
        if (cfg.target_spacing > 0.0) {
            const double per = build_frame(next.markers).perimeter;
            count = 2 * static_cast<int>(std::lround(0.5 * per / cfg.target_spacing));
            count = std::clamp(count, min_markers, cfg.max_markers);
        }
        next = resample_to_count(next, count);
        if (cfg.gauge_fixed) next.psi.setConstant(next.psi.mean());
        resampled = true;
    }
    if (!is_simple(next.markers)) throw GeometryError("front self-intersected at tau = " +
                                                      std::to_string(next.tau));
    if (info) {
        info->dt = dt;
        info->resampled = resampled;
        info->trace = e1.trace;
        info->frame = e1.frame;
    }
    return next;
}

namespace {

StepRecord make_record(long index, const FrontState& s, const GeometryFrame& frame,
                       const TraceSolution& trace) {
    StepRecord r;
    r.step = index;
    r.tau = s.tau;
    r.perimeter = frame.perimeter;
    r.area = enclosed_area(s.markers);
    r.mean_vs = frame.weights.dot(trace.v_s) / frame.perimeter;
    r.residual = trace.residual;
    const auto modes = mode_amplitudes(s.markers, 8).amplitude;
    r.amplitudes.assign(modes.begin() + 1, modes.end());
    return r;
}

}  // namespace

RunSummary run(const FrontState& initial, const PhysicalParams& params, const StepConfig& cfg,
               const TurbulenceField* turbulence, const RunObserver& observer, long first_step) {
    params.validate();
    cfg.validate();
    check_turbulence(params, turbulence);
    const auto t0 = std::chrono::steady_clock::now();

    FrontState state = initial;
    if (state.psi.size() != state.size()) state.psi = Field::Zero(state.size());
    if (state.omega.size() != state.size()) state.omega = Field::Zero(state.size());
    if (cfg.gauge_fixed && first_step == 0) {
        const GeometryFrame f = build_frame(state.markers);
        state = fix_gauge(state, assemble_layers(f), params.theta);
    }

    long index = first_step;
    const double eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
    while (cfg.t_end - state.tau > eps && index - first_step < cfg.max_steps) {
        StepInfo info;
        FrontState next = step(state, params, cfg, turbulence, index, &info);
        if (observer.on_step) {
            observer.on_step(make_record(index, state, info.frame, info.trace), state, info.frame,
                             info.trace);
        }
        state = std::move(next);
        ++index;
        if (observer.on_checkpoint) observer.on_checkpoint(state, index);
    }

    const StageEval fin = evaluate_stage(state, params, turbulence, false);
    const StepRecord rec = make_record(index, state, fin.frame, fin.trace);
    if (observer.on_step) observer.on_step(rec, state, fin.frame, fin.trace);

    RunSummary out;
    state.solved = std::make_shared<TraceSolution>(fin.trace);
    out.final_state = state;
    out.steps = index - first_step;
    out.perimeter = rec.perimeter;
    out.area = rec.area;
    out.mean_vs = rec.mean_vs;
    out.amplitudes = rec.amplitudes;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace flame
