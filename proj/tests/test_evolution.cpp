#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flame/evolution.hpp"
#include "flame/linear_theory.hpp"

#include <cmath>

using namespace flame;

namespace {

double area_radius(const Points& p) { return std::sqrt(enclosed_area(p) / pi); }

}  // namespace

TEST_CASE("right-hand sides on a circle") {
    const double th = 6.0, r = 1.0;
    const FrontState f = make_front(make_perturbed_circle(128, r, Vec2::Zero()));
    const StageEval s = evaluate_stage(f, {th, 0.0}, nullptr, false);
    // Marker velocity is radial with speed theta.
    for (int j = 0; j < 128; ++j) CHECK(s.rates.velocity.row(j).dot(f.markers.row(j)) / r == doctest::Approx(th));
    // Fuel side is potential and the burnt gas is at rest, so omega stays zero and psi changes uniformly.
    CHECK(s.rates.domega_tilde.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.rates.dpsi.array() - s.rates.dpsi.mean()).abs().maxCoeff() < 1e-8);
}

TEST_CASE("theta = 1 gives zero field rates and unit normal speed") {
    const FrontState f = make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{3, 0.1, 0.2}}));
    const StageEval s = evaluate_stage(f, {1.0, 0.0}, nullptr, false);
    CHECK(s.rates.dpsi.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.rates.domega_tilde.cwiseAbs().maxCoeff() < 1e-10);
    for (int j = 0; j < 128; ++j) CHECK(s.rates.velocity.row(j).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("circle radius grows at theta") {
    StepConfig cfg;
    cfg.t_end = 0.05;
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2(0.3, -0.2)));
    const RunSummary s = run(f0, {6.0, 0.0}, cfg, nullptr);
    CHECK(s.final_state.tau == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(area_radius(s.final_state.markers) == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(s.final_state.omega.cwiseAbs().maxCoeff() < 1e-8);
    const Vec2 c = area_centroid(s.final_state.markers);
    CHECK((c - Vec2(0.3, -0.2)).norm() < 1e-8);
}

TEST_CASE("stretched circle follows R + theta Lambda ln R = R0 + theta tau") {
    const PhysicalParams p{6.0, 2.0};
    StepConfig cfg;
    cfg.t_end = 0.1;
    const RunSummary s = run(make_front(make_perturbed_circle(64, 1.0, Vec2::Zero())), p, cfg, nullptr);
    const double lam = p.stretch_coeff();
    const double r = area_radius(s.final_state.markers);
    CHECK(r + 6.0 * lam * std::log(r) == doctest::Approx(1.0 + 6.0 * 0.1).epsilon(1e-6));
}

TEST_CASE("zero end time leaves the front unchanged") {
    StepConfig cfg;
    cfg.t_end = 0.0;
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero(), {{2, 0.05, 0.0}}));
    const RunSummary s = run(f0, {6.0, 0.0}, cfg, nullptr);
    CHECK(s.steps == 0);
    CHECK(s.final_state.markers == f0.markers);
    CHECK(s.final_state.tau == 0.0);
}

TEST_CASE("m-fold symmetry is preserved") {
    StepConfig cfg;
    cfg.t_end = 0.03;
    cfg.resample_every = 3;
    const FrontState f0 = make_front(make_perturbed_circle(96, 1.0, Vec2::Zero(), {{3, 0.05, 0.0}}));
    const RunSummary s = run(f0, {6.0, 0.5}, cfg, nullptr);
    const ModeAmplitudes a = mode_amplitudes(s.final_state.markers, 8);
    for (int m : {1, 2, 4, 5, 7, 8}) CHECK(a.amplitude[m] < 1e-9);
    CHECK(a.amplitude[3] > 1e-2);
}

TEST_CASE("area grows at the integrated front speed") {
    const FrontState f0 = make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{4, 0.03, 0.0}}));
    StepConfig cfg;
    cfg.fixed_dt = 1e-4;
    cfg.resample_every = 0;
    StepInfo info;
    const FrontState f1 = step(f0, {6.0, 0.0}, cfg, nullptr, 1, &info);
    const double rate = (enclosed_area(f1.markers) - enclosed_area(f0.markers)) / 1e-4;
    const double flux = info.frame.weights.dot(info.trace.v_s);
    CHECK(rate == doctest::Approx(flux).epsilon(1e-3));
}

TEST_CASE("gauge-fixed and literal evolutions differ only by curvature corrections") {
    // The transfer of psi into omega is exact for the trace solution but commutes with the
    // evolution only up to O(1/R) terms; linear growth differs by well under one percent here.
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero(), {{3, 0.01, 0.0}}));
    StepConfig a;
    a.t_end = 0.05;
    a.fixed_dt = 1e-3;
    StepConfig b = a;
    b.gauge_fixed = false;
    const RunSummary ra = run(f0, {6.0, 0.0}, a, nullptr);
    const RunSummary rb = run(f0, {6.0, 0.0}, b, nullptr);
    CHECK(ra.final_state.psi.maxCoeff() == ra.final_state.psi.minCoeff());
    CHECK(rb.final_state.psi.maxCoeff() - rb.final_state.psi.minCoeff() > 1e-4);
    const double a3 = mode_amplitudes(ra.final_state.markers, 3).amplitude[3];
    const double b3 = mode_amplitudes(rb.final_state.markers, 3).amplitude[3];
    CHECK(a3 > 0.01);
    CHECK(std::abs(a3 - b3) < 1e-2 * b3);
}

TEST_CASE("observer sees every step and checkpoints resume identically") {
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero(), {{2, 0.02, 0.0}}));
    StepConfig cfg;
    cfg.fixed_dt = 2e-3;
    cfg.t_end = 0.012;
    cfg.resample_every = 2;
    int records = 0;
    RunObserver obs;
    obs.on_step = [&](const StepRecord&, const FrontState&, const GeometryFrame&, const TraceSolution&) { ++records; };
    const RunSummary full = run(f0, {6.0, 0.0}, cfg, nullptr, obs);
    CHECK(full.steps == 6);
    CHECK(records == 7);

    StepConfig half = cfg;
    half.t_end = 0.006;
    const RunSummary h = run(f0, {6.0, 0.0}, half, nullptr);
    FrontState mid = h.final_state;
    mid.solved.reset();
    const RunSummary rest = run(mid, {6.0, 0.0}, cfg, nullptr, {}, h.steps);
    CHECK((rest.final_state.markers - full.final_state.markers).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("near-planar perturbation relaxes onto the Darrieus-Landau rate") {
    // R0 = 10, m = 40: local wavenumber 4, curvature corrections O(1/m). Starting from a pure
    // displacement the rate overshoots and decays onto the growing root.
    const double th = 6.0, r0 = 10.0;
    const int m = 40;
    StepConfig cfg;
    cfg.t_end = 0.099 * r0 / th;
    std::vector<double> tau, amp, radius;
    RunObserver obs;
    obs.on_step = [&](const StepRecord& r, const FrontState& s, const GeometryFrame&, const TraceSolution&) {
        const ModeAmplitudes a = mode_amplitudes(s.markers, m);
        tau.push_back(r.tau);
        amp.push_back(a.amplitude[m]);
        radius.push_back(a.mean_radius);
    };
    run(make_front(make_perturbed_circle(384, r0, Vec2::Zero(), {{m, 1e-3, 0.0}})), {th, 0.0}, cfg, nullptr, obs);
    const size_t n = tau.size();
    REQUIRE(n > 16);
    auto local = [&](size_t i) {
        const double s = std::log(amp[i] / amp[i - 1]) / (tau[i] - tau[i - 1]);
        return s / dl_growth_rate(th, m / radius[i]).sigma;
    };
    CHECK(local(1) > 2.0);
    for (size_t i = 2; i < n; ++i) CHECK(local(i) < local(i - 1));
    CHECK(local(n - 1) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("step configuration is validated") {
    StepConfig c;
    c.cfl = 0.6;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.cfl = 0.25;
    c.filter_keep = 0.2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.filter_keep = 0.7;
    CHECK_NOTHROW(c.validate());
}
