#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flame/evolution.hpp"
#include "flame/turbulence.hpp"

#include <cmath>

using namespace flame;

namespace {

struct Stats {
    double rms_x, rms_y, mean_x, mean_y;
};

Stats grid_stats(const TurbulenceField& f, double side, int n) {
    double sx = 0, sy = 0, mx = 0, my = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 u = f.eval(Vec2(side * i / n, side * j / n));
            sx += u.x() * u.x();
            sy += u.y() * u.y();
            mx += u.x();
            my += u.y();
        }
    const double c = double(n) * n;
    return {std::sqrt(sx / c), std::sqrt(sy / c), mx / c, my / c};
}

}  // namespace

TEST_CASE("zero intensity gives an empty field") {
    const TurbulenceField f = synthesize(0.0, 1.0, 32, -5.0 / 3.0, 7);
    CHECK(f.modes.empty());
    CHECK(f.eval(Vec2(0.3, 0.4)).norm() == 0.0);
    CHECK(f.analytic_rms() == 0.0);
}

TEST_CASE("explicit modes are projected transverse to their wavevector") {
    const TurbulenceField f({{Vec2(1.0, 0.0), Vec2(2.0, 3.0), 0.0}});
    CHECK(f.modes[0].a.x() == 0.0);
    CHECK(f.modes[0].a.y() == 3.0);
    // u = (0, 3 cos x)
    CHECK(f.eval(Vec2(0.5, 7.0)).y() == doctest::Approx(3.0 * std::cos(0.5)));
    CHECK(f.analytic_rms() == doctest::Approx(1.5));
}

TEST_CASE("synthesized field has the requested per-component rms") {
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        const TurbulenceField f = synthesize(0.3, 1.0, 64, -5.0 / 3.0, seed);
        CHECK(f.analytic_rms() == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(f.u_rms == doctest::Approx(0.3));
        const Stats s = grid_stats(f, 16.0, 128);
        const double rms = std::sqrt(0.5 * (s.rms_x * s.rms_x + s.rms_y * s.rms_y));
        CHECK(std::abs(rms - 0.3) < 0.05 * 0.3);
        CHECK(std::abs(s.mean_x) < 0.03);
        CHECK(std::abs(s.mean_y) < 0.03);
    }
}

TEST_CASE("field is divergence free") {
    const TurbulenceField f = synthesize(1.0, 0.5, 48, -5.0 / 3.0, 5);
    const double h = 1e-5;
    for (const Vec2& p : {Vec2(0.1, 0.2), Vec2(-3.0, 1.7), Vec2(10.0, -4.0)}) {
        const double div = (f.eval(Vec2(p + Vec2(h, 0))).x() - f.eval(Vec2(p - Vec2(h, 0))).x() +
                            f.eval(Vec2(p + Vec2(0, h))).y() - f.eval(Vec2(p - Vec2(0, h))).y()) /
                           (2 * h);
        CHECK(std::abs(div) < 1e-6);
    }
    for (const auto& m : f.modes) CHECK(std::abs(m.k.dot(m.a)) < 1e-12 * m.k.norm() * m.a.norm() + 1e-300);
}

TEST_CASE("wavenumbers span the configured band") {
    const double L = 2.0;
    const TurbulenceField f = synthesize(0.5, L, 64, -5.0 / 3.0, 3);
    CHECK(f.modes.size() == 64);
    for (const auto& m : f.modes) {
        CHECK(m.k.norm() >= 2.0 * pi / (8.0 * L) * (1.0 - 1e-12));
        CHECK(m.k.norm() <= 16.0 * pi / L * (1.0 + 1e-12));
    }
    CHECK(synthesize(0.5, L, 7, -5.0 / 3.0, 3).modes.size() == 7);
}

TEST_CASE("component variances agree for every seed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const TurbulenceField f = synthesize(1.0, 1.0, 64, -5.0 / 3.0, seed);
        double cx = 0.0, cy = 0.0;
        for (const auto& m : f.modes) {
            cx += m.a.x() * m.a.x();
            cy += m.a.y() * m.a.y();
        }
        CHECK(cx == doctest::Approx(cy).epsilon(1e-12));
        const Stats s = grid_stats(f, 64.0, 256);
        CHECK(s.rms_x * s.rms_x / (s.rms_y * s.rms_y) == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("same seed reproduces the field, different seeds do not") {
    const TurbulenceField a = synthesize(0.2, 1.0, 16, -5.0 / 3.0, 42);
    const TurbulenceField b = synthesize(0.2, 1.0, 16, -5.0 / 3.0, 42);
    const TurbulenceField c = synthesize(0.2, 1.0, 16, -5.0 / 3.0, 43);
    const Vec2 p(0.37, -1.2);
    CHECK(a.eval(p) == b.eval(p));
    CHECK(a.eval(p) != c.eval(p));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(synthesize(-1.0, 1.0, 8, -5.0 / 3.0, 0), ConfigError);
    CHECK_THROWS_AS(synthesize(1.0, 0.0, 8, -5.0 / 3.0, 0), ConfigError);
    CHECK_THROWS_AS(synthesize(1.0, 1.0, 0, -5.0 / 3.0, 0), ConfigError);
}

TEST_CASE("a zero external field reproduces the laminar evolution exactly") {
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero(), {{3, 0.02, 0.0}}));
    StepConfig cfg;
    cfg.t_end = 0.01;
    const TurbulenceField zero = synthesize(0.0, 1.0, 16, -5.0 / 3.0, 1);
    const RunSummary a = run(f0, {6.0, 0.0}, cfg, nullptr);
    const RunSummary b = run(f0, {6.0, 0.0}, cfg, &zero);
    CHECK(a.final_state.markers == b.final_state.markers);
    CHECK(a.final_state.omega == b.final_state.omega);
}

TEST_CASE("external flow at theta = 1 is rejected") {
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero()));
    StepConfig cfg;
    cfg.t_end = 0.01;
    const TurbulenceField tf = synthesize(0.1, 1.0, 16, -5.0 / 3.0, 1);
    CHECK_THROWS_AS(run(f0, {1.0, 0.0}, cfg, &tf), ConfigError);
}
