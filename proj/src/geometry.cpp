#include "flame/geometry.hpp"
#include "flame/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace flame {

namespace {

Field column(const Points& p, int c) { return p.col(c); }

}  // namespace

GeometryFrame build_frame(const Points& markers) {
    const int n = static_cast<int>(markers.rows());
    if (n < min_markers || n % 2 != 0)
        throw GeometryError("front needs an even number of markers >= " +
                            std::to_string(min_markers) + ", got " + std::to_string(n));

    GeometryFrame f;
    f.position = markers;
    f.chord.resize(n);
    for (int i = 0; i < n; ++i) f.chord[i] = (markers.row((i + 1) % n) - markers.row(i)).norm();
    const double scale = f.chord.maxCoeff();
    if (!(scale > 0.0) || f.chord.minCoeff() < 1e-10)
        throw GeometryError("coincident markers on the front");

    const Field x1 = spectral::derivative(column(markers, 0));
    const Field y1 = spectral::derivative(column(markers, 1));
    const Field x2 = spectral::derivative(x1);
    const Field y2 = spectral::derivative(y1);

    f.speed = (x1.array().square() + y1.array().square()).sqrt();
    if (f.speed.minCoeff() <= 0.0) throw GeometryError("degenerate parametrization");

    f.tangent.resize(n, 2);
    f.tangent.col(0) = x1.array() / f.speed.array();
    f.tangent.col(1) = y1.array() / f.speed.array();
    f.normal.resize(n, 2);
    f.normal.col(0) = -f.tangent.col(1);
    f.normal.col(1) = f.tangent.col(0);
    f.kappa = (x1.array() * y2.array() - y1.array() * x2.array()) / f.speed.array().cube();

    const double h = 2.0 * pi / n;
    f.weights = f.speed * h;
    f.perimeter = f.weights.sum();
    const double mean_speed = f.speed.mean();
    const Field periodic = spectral::integrate_zero_mean(f.speed);
    f.arclength.resize(n);
    for (int i = 0; i < n; ++i) f.arclength[i] = mean_speed * h * i + periodic[i];

    if (enclosed_area(markers) <= 0.0)
        throw GeometryError("front must be traversed counter-clockwise around the burnt region");
    return f;
}

Field surface_derivative(const Field& f, const GeometryFrame& frame) {
    return spectral::derivative(f).array() / frame.speed.array();
}

Field surface_laplacian(const Field& f, const GeometryFrame& frame) {
    return surface_derivative(surface_derivative(f, frame), frame);
}

Field stretch(const GeometryFrame& frame, const Field& u_t, const Field& v_s) {
    return surface_derivative(u_t, frame).array() + frame.kappa.array() * v_s.array();
}

namespace {

// Trapezoid sums of the boundary integrals for area and first moments, with spectral
// derivatives; exact for band-limited curves. Shoelace form for odd or tiny polygons.
struct Moments {
    double area, mx, my;
};

Moments moments(const Points& m) {
    const int n = static_cast<int>(m.rows());
    Moments r{0.0, 0.0, 0.0};
    if (n >= 8 && n % 2 == 0) {
        const Field x = m.col(0), y = m.col(1);
        const Field dx = spectral::derivative(x), dy = spectral::derivative(y);
        const double h = 2.0 * pi / n;
        r.area = 0.5 * h * (x.cwiseProduct(dy) - y.cwiseProduct(dx)).sum();
        r.mx = 0.5 * h * x.cwiseProduct(x).cwiseProduct(dy).sum();
        r.my = -0.5 * h * y.cwiseProduct(y).cwiseProduct(dx).sum();
        return r;
    }
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double cross = m(i, 0) * m(j, 1) - m(j, 0) * m(i, 1);
        r.area += 0.5 * cross;
        r.mx += (m(i, 0) + m(j, 0)) * cross / 6.0;
        r.my += (m(i, 1) + m(j, 1)) * cross / 6.0;
    }
    return r;
}

}  // namespace

double enclosed_area(const Points& m) { return moments(m).area; }

Vec2 area_centroid(const Points& m) {
    const Moments r = moments(m);
    return Vec2(r.mx, r.my) / r.area;
}

double winding_number(const Points& m, const Vec2& p) {
    const int n = static_cast<int>(m.rows());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 a = m.row(i).transpose() - p;
        const Vec2 b = m.row((i + 1) % n).transpose() - p;
        total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return total / (2.0 * pi);
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

}  // namespace

bool is_simple(const Points& m) {
    const int n = static_cast<int>(m.rows());
    double cell = 0.0;
    for (int i = 0; i < n; ++i) cell = std::max(cell, (m.row((i + 1) % n) - m.row(i)).norm());
    if (cell <= 0.0) return false;
    const Vec2 lo = m.colwise().minCoeff().transpose();

    // Bucket segments on a uniform grid so only nearby pairs are tested.
    std::unordered_map<long long, std::vector<int>> grid;
    auto key = [](long long ix, long long iy) { return (ix << 32) ^ (iy & 0xffffffffLL); };
    for (int i = 0; i < n; ++i) {
        const Vec2 a = m.row(i).transpose(), b = m.row((i + 1) % n).transpose();
        const long long x0 = static_cast<long long>(std::floor((std::min(a.x(), b.x()) - lo.x()) / cell));
        const long long x1 = static_cast<long long>(std::floor((std::max(a.x(), b.x()) - lo.x()) / cell));
        const long long y0 = static_cast<long long>(std::floor((std::min(a.y(), b.y()) - lo.y()) / cell));
        const long long y1 = static_cast<long long>(std::floor((std::max(a.y(), b.y()) - lo.y()) / cell));
        for (long long ix = x0; ix <= x1; ++ix)
            for (long long iy = y0; iy <= y1; ++iy) grid[key(ix, iy)].push_back(i);
    }
    for (const auto& [k, segs] : grid) {
        for (size_t p = 0; p < segs.size(); ++p)
            for (size_t q = p + 1; q < segs.size(); ++q) {
                const int i = segs[p], j = segs[q];
                const int gap = std::abs(i - j);
                if (gap <= 1 || gap == n - 1) continue;
                if (segments_cross(m.row(i).transpose(), m.row((i + 1) % n).transpose(),
                                   m.row(j).transpose(), m.row((j + 1) % n).transpose()))
                    return false;
            }
    }
    return true;
}

namespace {

double cubic_at(const double* s, const double* v, double x) {
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (x - s[b]) / (s[a] - s[b]);
        sum += l * v[a];
    }
    return sum;
}

}  // namespace

FrontState resample_to_count(const FrontState& front, int count) {
    if (count < min_markers || count % 2 != 0)
        throw GeometryError("resampling needs an even marker count >= " +
                            std::to_string(min_markers) + ", got " + std::to_string(count));
    const GeometryFrame frame = build_frame(front.markers);
    const int n = frame.size();
    const double h = 2.0 * pi / n;
    const double mean_speed = frame.speed.mean();
    const spectral::Interpolant periodic(spectral::integrate_zero_mean(frame.speed));
    const spectral::Interpolant xs(front.markers.col(0)), ys(front.markers.col(1));
    const double total = frame.perimeter;

    FrontState out;
    out.tau = front.tau;
    out.markers.resize(count, 2);
    out.psi.resize(count);
    out.omega.resize(count);

    int j = 0;
    for (int m = 0; m < count; ++m) {
        const double target = total * m / count;
        while (j + 1 < n && frame.arclength[j + 1] <= target) ++j;
        const double s_lo = frame.arclength[j];
        const double s_hi = (j + 1 < n) ? frame.arclength[j + 1] : total;
        double t = h * (j + (target - s_lo) / (s_hi - s_lo));
        for (int it = 0; it < 30; ++it) {
            const double r = mean_speed * t + periodic(t) - target;
            const double dt = r / (mean_speed + periodic.derivative(t));
            t -= dt;
            if (std::abs(dt) < 1e-15 * (1.0 + std::abs(t))) break;
        }
        out.markers(m, 0) = xs(t);
        out.markers(m, 1) = ys(t);

        double s[4], vp[4], vo[4];
        for (int a = 0; a < 4; ++a) {
            int idx = j - 1 + a;
            double shift = 0.0;
            if (idx < 0) { idx += n; shift = -total; }
            if (idx >= n) { idx -= n; shift = total; }
            s[a] = frame.arclength[idx] + shift;
            vp[a] = front.psi[idx];
            vo[a] = front.omega[idx];
        }
        out.psi[m] = cubic_at(s, vp, target);
        out.omega[m] = cubic_at(s, vo, target);
    }
    return out;
}

FrontState resample(const FrontState& front, double target_spacing) {
    if (!(target_spacing > 0.0)) throw GeometryError("target spacing must be positive");
    const GeometryFrame frame = build_frame(front.markers);
    int count = 2 * static_cast<int>(std::lround(0.5 * frame.perimeter / target_spacing));
    return resample_to_count(front, count);
}

FrontState filter(const FrontState& front, double keep) {
    FrontState out;
    out.tau = front.tau;
    out.markers.resize(front.size(), 2);
    out.markers.col(0) = spectral::lowpass(front.markers.col(0), keep);
    out.markers.col(1) = spectral::lowpass(front.markers.col(1), keep);
    out.psi = spectral::lowpass(front.psi, keep);
    out.omega = spectral::lowpass(front.omega, keep);
    return out;
}

Points make_perturbed_circle(int n, double radius, const Vec2& center,
                             const std::vector<Perturbation>& modes) {
    Points p(n, 2);
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * pi * j / n;
        double r = radius;
        for (const auto& m : modes) r += m.amplitude * std::cos(m.mode * th + m.phase);
        p(j, 0) = center.x() + r * std::cos(th);
        p(j, 1) = center.y() + r * std::sin(th);
    }
    return p;
}

}  // namespace flame
