#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flame/frankel.hpp"
#include "flame/linear_theory.hpp"

#include <cmath>

using namespace flame;

namespace {

// Cosine coefficient of f against cos(m theta_j) on uniform theta samples.
double cos_coeff(const Field& f, int m) {
    const int n = static_cast<int>(f.size());
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += f[j] * std::cos(m * 2.0 * pi * j / n);
    return 2.0 * s / n;
}

}  // namespace

TEST_CASE("circle propagates at theta") {
    for (double th : {1.1, 1.5, 3.0}) {
        const GeometryFrame f = build_frame(make_perturbed_circle(128, 2.5, Vec2(1.0, 1.0)));
        CHECK((frankel_front_speed(f, th).array() - th).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("linear speed response is (theta - 1)(m - 1)/(2R) times the displacement") {
    const double th = 1.3, r = 1.5, eps = 1e-7;
    for (int m : {2, 4, 9}) {
        const GeometryFrame f = build_frame(make_perturbed_circle(256, r, Vec2::Zero(), {{m, eps, 0.0}}));
        const double c = cos_coeff(frankel_front_speed(f, th), m);
        CHECK(c / eps == doctest::Approx((th - 1.0) * (m - 1) / (2.0 * r)).epsilon(1e-5));
    }
    // Relative to the planar rate (theta - 1) k / 2 with k = m / R the ratio tends to one.
    const double ratio = (20 - 1) / 20.0;
    CHECK(ratio * small_expansion_rate(th, 20 / r) == doctest::Approx((th - 1.0) * 19 / (2.0 * r)));
}

TEST_CASE("front speed is invariant under rotation and translation") {
    const Points p = make_perturbed_circle(128, 1.0, Vec2::Zero(), {{3, 0.1, 0.0}, {5, 0.05, 1.0}});
    const Field v0 = frankel_front_speed(build_frame(p), 1.4);
    const double a = 0.7;
    Eigen::Matrix2d rot;
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    Points q = p * rot.transpose();
    q.rowwise() += Vec2(3.0, -2.0).transpose();
    const Field v1 = frankel_front_speed(build_frame(q), 1.4);
    CHECK((v0 - v1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("small-expansion run grows a circle at theta and keeps fields untouched") {
    StepConfig cfg;
    cfg.t_end = 0.1;
    const FrontState f0 = make_front(make_perturbed_circle(64, 1.0, Vec2::Zero()));
    const RunSummary s = frankel_run(f0, 1.2, cfg);
    CHECK(std::sqrt(enclosed_area(s.final_state.markers) / pi) == doctest::Approx(1.12).epsilon(1e-8));
    CHECK(s.final_state.psi.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.final_state.tau == doctest::Approx(0.1));
}

TEST_CASE("seeded mode grows at the linear rate") {
    const double th = 1.2, eps = 1e-5;
    const int m = 6;
    StepConfig cfg;
    cfg.t_end = 0.2;
    cfg.fixed_dt = 0.01;
    std::vector<double> tau, amp, radius;
    frankel_run(make_front(make_perturbed_circle(128, 1.0, Vec2::Zero(), {{m, eps, 0.0}})), th, cfg,
                [&](const StepRecord& r, const FrontState& s) {
                    tau.push_back(r.tau);
                    const ModeAmplitudes a = mode_amplitudes(s.markers, m);
                    amp.push_back(a.amplitude[m]);
                    radius.push_back(a.mean_radius);
                });
    // R(t) = 1 + theta t, so amplitude ~ R^{(theta - 1)(m - 1)/(2 theta)}.
    const double expo = (th - 1.0) * (m - 1) / (2.0 * th);
    const double expect = eps * std::pow(radius.back(), expo);
    CHECK(amp.back() == doctest::Approx(expect).epsilon(1e-3));
}
