#include "flame/layers.hpp"
#include "flame/spectral.hpp"

#include <cmath>

namespace flame {

namespace {

double distance_to_markers(const Points& pos, const Vec2& p) {
    return (pos.rowwise() - p.transpose()).rowwise().norm().minCoeff();
}

}  // namespace

Vec2 interior_point(const GeometryFrame& frame) {
    const Points& pos = frame.position;
    const Vec2 c = area_centroid(pos);
    const double r_eq = std::sqrt(std::abs(enclosed_area(pos)) / pi);
    double best_clear = -1.0;
    Vec2 best = c;
    if (winding_number(pos, c) > 0.5) {
        best_clear = distance_to_markers(pos, c);
        if (best_clear > 0.25 * r_eq) return c;
    }
    const int n = frame.size();
    const int stride = std::max(1, n / 64);
    for (int i = 0; i < n; i += stride) {
        for (int k = 1; k <= 8; ++k) {
            const double d = r_eq * std::ldexp(1.0, -k + 1);
            const Vec2 q = pos.row(i).transpose() + d * frame.normal.row(i).transpose();
            if (winding_number(pos, q) < 0.5) continue;
            const double clear = distance_to_markers(pos, q);
            if (clear > best_clear) {
                best_clear = clear;
                best = q;
            }
        }
    }
    if (best_clear <= 0.0) throw GeometryError("could not find a point inside the front");
    return best;
}

LayerOperators assemble_layers(const GeometryFrame& frame) {
    const int n = frame.size();
    const double h = 2.0 * pi / n;
    const Field r = spectral::log_weights(n);

    LayerOperators ops;
    ops.position = frame.position;
    ops.normal = frame.normal;
    ops.weights = frame.weights;
    ops.chord = frame.chord;
    ops.single_layer.resize(n, n);
    ops.double_layer.resize(n, n);

    for (int j = 0; j < n; ++j) {
        const Vec2 y = frame.position.row(j).transpose();
        const Vec2 ny = frame.normal.row(j).transpose();
        for (int i = 0; i < n; ++i) {
            const int k = ((i - j) % n + n) % n;
            if (i == j) {
                ops.single_layer(i, j) = (0.5 * r[0] + h * std::log(frame.speed[j])) * frame.speed[j];
                ops.double_layer(i, j) = -0.5 * frame.kappa[j] * frame.weights[j];
                continue;
            }
            const Vec2 d = y - frame.position.row(i).transpose();
            const double d2 = d.squaredNorm();
            const double sn = std::sin(0.5 * h * k);
            ops.single_layer(i, j) =
                (0.5 * r[k] + h * (0.5 * std::log(d2) - 0.5 * std::log(4.0 * sn * sn))) * frame.speed[j];
            ops.double_layer(i, j) = ny.dot(d) / d2 * frame.weights[j];
        }
    }

    ops.center = interior_point(frame);
    ops.log_trace.resize(n);
    ops.log_normal.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 d = frame.position.row(i).transpose() - ops.center;
        ops.log_trace[i] = std::log(d.norm());
        ops.log_normal[i] = frame.normal.row(i).dot(d.transpose()) / d.squaredNorm();
    }
    return ops;
}

void check_clearance(const LayerOperators& ops, const Vec2& p) {
    const int n = ops.size();
    Eigen::Index i = 0;
    const double dist = (ops.position.rowwise() - p.transpose()).rowwise().norm().minCoeff(&i);
    const double local = std::max(ops.chord[i], ops.chord[(i + n - 1) % n]);
    if (dist < 2.0 * local)
        throw GeometryError("evaluation point within two marker spacings of the front");
}

double single_layer_at(const LayerOperators& ops, const Field& density, const Vec2& p) {
    check_clearance(ops, p);
    double sum = 0.0;
    for (int j = 0; j < ops.size(); ++j)
        sum += std::log((ops.position.row(j).transpose() - p).norm()) * density[j] * ops.weights[j];
    return sum;
}

double double_layer_at(const LayerOperators& ops, const Field& density, const Vec2& p) {
    check_clearance(ops, p);
    double sum = 0.0;
    for (int j = 0; j < ops.size(); ++j) {
        const Vec2 d = ops.position.row(j).transpose() - p;
        sum += ops.normal.row(j).dot(d.transpose()) / d.squaredNorm() * density[j] * ops.weights[j];
    }
    return sum;
}

Vec2 single_layer_gradient(const LayerOperators& ops, const Field& density, const Vec2& p) {
    check_clearance(ops, p);
    Vec2 g = Vec2::Zero();
    for (int j = 0; j < ops.size(); ++j) {
        const Vec2 d = p - ops.position.row(j).transpose();
        g += d / d.squaredNorm() * density[j] * ops.weights[j];
    }
    return g;
}

Vec2 double_layer_gradient(const LayerOperators& ops, const Field& density, const Vec2& p) {
    check_clearance(ops, p);
    Vec2 g = Vec2::Zero();
    for (int j = 0; j < ops.size(); ++j) {
        const Vec2 d = ops.position.row(j).transpose() - p;
        const Vec2 nj = ops.normal.row(j).transpose();
        const double d2 = d.squaredNorm();
        g += (-nj / d2 + 2.0 * nj.dot(d) * d / (d2 * d2)) * density[j] * ops.weights[j];
    }
    return g;
}

Vec2 eval_velocity_offfront(const LayerOperators& ops, const SideDensities& fuel,
                            const SideDensities& burnt, const Vec2& p) {
    check_clearance(ops, p);
    if (winding_number(ops.position, p) > 0.5) {
        if (burnt.trace.size() == 0) return Vec2::Zero();
        return (single_layer_gradient(ops, burnt.flux, p) -
                double_layer_gradient(ops, burnt.trace, p)) / (2.0 * pi);
    }
    if (fuel.trace.size() == 0) return Vec2::Zero();
    const Field reg_trace = fuel.trace - fuel.mu * ops.log_trace;
    const Field reg_flux = fuel.flux - fuel.mu * ops.log_normal;
    const Vec2 d = p - ops.center;
    return fuel.mu * d / d.squaredNorm() +
           (double_layer_gradient(ops, reg_trace, p) - single_layer_gradient(ops, reg_flux, p)) /
               (2.0 * pi);
}

double eval_potential_offfront(const LayerOperators& ops, const SideDensities& fuel,
                               const SideDensities& burnt, const Vec2& p) {
    check_clearance(ops, p);
    if (winding_number(ops.position, p) > 0.5) {
        if (burnt.trace.size() == 0) return 0.0;
        return (single_layer_at(ops, burnt.flux, p) - double_layer_at(ops, burnt.trace, p)) /
               (2.0 * pi);
    }
    if (fuel.trace.size() == 0) return 0.0;
    const Field reg_trace = fuel.trace - fuel.mu * ops.log_trace;
    const Field reg_flux = fuel.flux - fuel.mu * ops.log_normal;
    return fuel.mu * std::log((p - ops.center).norm()) +
           (double_layer_at(ops, reg_trace, p) - single_layer_at(ops, reg_flux, p)) / (2.0 * pi);
}

IdentityReport greens_identity_check(const GeometryFrame& frame, const LayerOperators& ops,
                                     const HarmonicTest& test, const std::vector<Vec2>& inside,
                                     const std::vector<Vec2>& outside) {
    const int n = frame.size();
    Field h(n), g(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 x = frame.position.row(i).transpose();
        h[i] = test.value(x);
        g[i] = frame.normal.row(i).dot(test.gradient(x).transpose());
    }

    IdentityReport rep;
    if (test.interior) {
        // S g - D h equals 2 pi h inside, pi h on the curve, zero outside.
        const Field on = ops.single_layer * g - ops.double_layer * h;
        rep.on_curve = (on / pi - h).cwiseAbs().maxCoeff();
        for (const auto& p : inside) {
            const double f = single_layer_at(ops, g, p) - double_layer_at(ops, h, p);
            rep.inside = std::max(rep.inside, std::abs(f / (2.0 * pi) - test.value(p)));
        }
        for (const auto& p : outside) {
            const double f = single_layer_at(ops, g, p) - double_layer_at(ops, h, p);
            rep.outside = std::max(rep.outside, std::abs(f) / (2.0 * pi));
        }
        return rep;
    }

    // Exterior: split off the logarithmic source about the operator center; the remainder
    // decays, and D r - S dr/dn equals 2 pi r outside, pi r on the curve, zero inside.
    const double mu = -ops.weights.dot(g) / (2.0 * pi);
    const Field rt = h - mu * ops.log_trace - Field::Constant(n, test.at_infinity);
    const Field rf = g - mu * ops.log_normal;
    auto regular = [&](const Vec2& p) {
        return test.value(p) - mu * std::log((p - ops.center).norm()) - test.at_infinity;
    };
    const Field on = ops.double_layer * rt - ops.single_layer * rf;
    rep.on_curve = (on / pi - rt).cwiseAbs().maxCoeff();
    for (const auto& p : inside) {
        const double f = double_layer_at(ops, rt, p) - single_layer_at(ops, rf, p);
        rep.inside = std::max(rep.inside, std::abs(f) / (2.0 * pi));
    }
    for (const auto& p : outside) {
        const double f = double_layer_at(ops, rt, p) - single_layer_at(ops, rf, p);
        rep.outside = std::max(rep.outside, std::abs(f / (2.0 * pi) - regular(p)));
    }
    return rep;
}

}  // namespace flame
