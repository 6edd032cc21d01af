#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flame/evolution.hpp"
#include "flame/linear_theory.hpp"
#include "flame/turbulence.hpp"

#include <cmath>

using namespace flame;

namespace {

struct Solved {
    FrontState front;
    GeometryFrame frame;
    LayerOperators ops;
    TraceSolution trace;
};

Solved solve(FrontState f, const PhysicalParams& p, const Points& ue = Points()) {
    Solved s;
    s.front = std::move(f);
    s.frame = build_frame(s.front.markers);
    s.ops = assemble_layers(s.frame);
    s.trace = solve_traces(s.front, s.frame, s.ops, p, ue);
    return s;
}

}  // namespace

TEST_CASE("expanding circle: V_s = theta, burnt gas at rest, radial fuel outflow") {
    const double r = 1.4;
    const Solved s = solve(make_front(make_perturbed_circle(256, r, Vec2(0.2, 0.1))), {6.0, 0.0});
    CHECK((s.trace.v_s.array() - 6.0).abs().maxCoeff() < 1e-6);
    CHECK(s.trace.u_t.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.trace.u_n.array() + 5.0).abs().maxCoeff() < 1e-8);
    CHECK(s.trace.flux_plus.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(s.trace.mu == doctest::Approx(5.0 * r).epsilon(1e-10));
    // Potential trace of the source solution (theta - 1) R ln r in the zero-at-infinity gauge.
    CHECK((s.trace.phi_minus.array() - 5.0 * r * std::log(r)).abs().maxCoeff() < 1e-8);
    CHECK(s.trace.residual < 1e-8);
    CHECK(s.trace.y_mismatch < 1e-8);
    CHECK_FALSE(s.trace.mean_pinned);
    // Burnt-side compatibility flux stays small relative to the perimeter.
    CHECK(std::abs(s.frame.weights.dot(s.trace.flux_plus)) < 1e-6 * s.frame.perimeter);
}

TEST_CASE("circle with stretch: V_s = theta / (1 + theta Lambda / R)") {
    const double r = 0.8;
    const PhysicalParams p{8.0, 3.0};
    const Solved s = solve(make_front(make_perturbed_circle(128, r, Vec2::Zero())), p);
    const double lam = p.stretch_coeff();
    const double vs = 8.0 / (1.0 + 8.0 * lam / r);
    CHECK((s.trace.v_s.array() - vs).abs().maxCoeff() < 1e-9);
    CHECK((s.trace.y.array() - vs / r).abs().maxCoeff() < 1e-9);
    CHECK((s.trace.u_n - (Field::Ones(128) - s.trace.v_s - lam * s.trace.y)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("theta = 1: passive unit-speed front with no flow") {
    const Solved s = solve(make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{3, 0.1, 0.0}})), {1.0, 0.0});
    CHECK((s.trace.v_s.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(s.trace.phi_minus.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.trace.u_sq.cwiseAbs().maxCoeff() < 1e-20);
}

TEST_CASE("uniform shift of psi leaves the solution unchanged") {
    FrontState f = make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{4, 0.05, 0.0}}));
    const Solved a = solve(f, {6.0, 0.5});
    f.psi.array() += 3.7;
    const Solved b = solve(f, {6.0, 0.5});
    CHECK((a.trace.v_s - b.trace.v_s).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((a.trace.phi_minus - b.trace.phi_minus).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("moving the non-uniform part of psi into omega leaves the solution unchanged") {
    FrontState f = make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{4, 0.05, 0.0}}));
    for (int j = 0; j < 128; ++j) f.psi[j] = 0.3 * std::cos(3 * 2.0 * pi * j / 128) + 0.1 * std::sin(2.0 * pi * j / 128);
    const Solved a = solve(f, {6.0, 0.0});
    const FrontState g = fix_gauge(f, a.ops, 6.0);
    CHECK((g.psi.array() - g.psi.mean()).abs().maxCoeff() == 0.0);
    const Solved b = solve(g, {6.0, 0.0});
    CHECK((a.trace.v_s - b.trace.v_s).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.trace.phi_minus - b.trace.phi_minus).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("perturbation response is affine in psi and omega") {
    const FrontState base = make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{5, 0.02, 0.0}}));
    Field dpsi(128), domega(128);
    for (int j = 0; j < 128; ++j) {
        const double t = 2.0 * pi * j / 128;
        dpsi[j] = 1e-3 * std::cos(2 * t);
        domega[j] = 2e-3 * std::sin(3 * t);
    }
    auto with = [&](double s) {
        FrontState f = base;
        f.psi += s * dpsi;
        f.omega += s * domega;
        return solve(f, {6.0, 0.0}).trace;
    };
    const TraceSolution t0 = with(0.0), t1 = with(1.0), t2 = with(2.0);
    const Field d1 = t1.v_s - t0.v_s, d2 = t2.v_s - t0.v_s;
    CHECK((d2 - 2.0 * d1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("refining the grid agrees with the coarse solution at shared markers") {
    const auto modes = std::vector<Perturbation>{{3, 0.05, 0.0}};
    const Solved c = solve(make_front(make_perturbed_circle(64, 1.0, Vec2::Zero(), modes)), {6.0, 0.5});
    const Solved f = solve(make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), modes)), {6.0, 0.5});
    double diff = 0.0;
    for (int j = 0; j < 64; ++j) diff = std::max(diff, std::abs(c.trace.v_s[j] - f.trace.v_s[2 * j]));
    CHECK(diff < 1e-8);
}

TEST_CASE("external flow enters through its normal and tangential traces") {
    // An explicit zero field matches the laminar path exactly.
    const int n = 128;
    const FrontState f = make_front(make_perturbed_circle(n, 1.0, Vec2::Zero()));
    Points ue(n, 2);
    ue.col(0).setConstant(0.0);
    ue.col(1).setConstant(0.0);
    const Solved zero = solve(f, {6.0, 0.0}, ue);
    const Solved none = solve(f, {6.0, 0.0});
    CHECK(zero.trace.v_s == none.trace.v_s);
    CHECK(zero.trace.phi_minus == none.trace.phi_minus);

    const TurbulenceField tf = synthesize(0.2, 1.0, 16, -5.0 / 3.0, 3);
    const Solved turb = solve(f, {6.0, 0.0}, tf.eval(f.markers));
    CHECK(turb.trace.residual < 1e-8);
    const Field ut_expect = surface_derivative(turb.trace.phi_minus, turb.frame) + turb.trace.u_et;
    CHECK((turb.trace.u_t - ut_expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("one linearized step of a perturbed circle grows the seeded mode") {
    // The perturbation of V_s must be in phase with the displacement (instability).
    const int m = 6;
    const Solved s = solve(make_front(make_perturbed_circle(256, 1.0, Vec2::Zero(), {{m, 1e-4, 0.0}})), {6.0, 0.0});
    double proj = 0.0;
    for (int j = 0; j < 256; ++j) proj += (s.trace.v_s[j] - 6.0) * std::cos(m * 2.0 * pi * j / 256);
    CHECK(proj > 0.0);
}

TEST_CASE("interior Dirichlet-to-Neumann map on the unit circle") {
    // h = r^m cos(m theta) has inward normal derivative -m cos(m theta) on r = 1.
    const int n = 128, m = 3;
    const GeometryFrame f = build_frame(make_perturbed_circle(n, 1.0, Vec2::Zero()));
    const LayerOperators ops = assemble_layers(f);
    Field h(n);
    for (int j = 0; j < n; ++j) h[j] = std::cos(m * 2.0 * pi * j / n) + 4.0;
    const Field g = interior_dtn(ops, h);
    for (int j = 0; j < n; ++j) CHECK(g[j] == doctest::Approx(-m * std::cos(m * 2.0 * pi * j / n)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("invalid parameters are rejected") {
    const FrontState f = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero()));
    const GeometryFrame fr = build_frame(f.markers);
    const LayerOperators ops = assemble_layers(fr);
    CHECK_THROWS_AS(solve_traces(f, fr, ops, {0.5, 0.0}, Points()), ConfigError);
    CHECK_THROWS_AS(solve_traces(f, fr, ops, {6.0, -1.0}, Points()), ConfigError);
}
