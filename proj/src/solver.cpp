#include "flame/solver.hpp"
#include "flame/spectral.hpp"

#include <cmath>

namespace flame {

void PhysicalParams::validate() const {
    if (!std::isfinite(theta) || theta < 1.0)
        throw ConfigError("theta must be >= 1, got " + std::to_string(theta));
    if (!std::isfinite(lambda_c) || lambda_c < 0.0)
        throw ConfigError("lambda_c must be >= 0, got " + std::to_string(lambda_c));
}

namespace {

// Fuel side, with the far-field logarithm split off about ops.center:
//   (pi - D) phi_m + P g_m = 0,  P = S + E w^T / (2 pi)
// Burnt side, compatibility enforced through a multiplier c:
//   (pi + D) phi_p - S g_p + c = 0,  w^T g_p = 0
// with phi_p = theta phi_m + (theta - 1) psi and both fluxes affine in phi_m and V_s.
struct System {
    Eigen::MatrixXd m;
    Eigen::VectorXd b;
};

}  // namespace

TraceSolution solve_traces(const FrontState& front, const GeometryFrame& frame,
                           const LayerOperators& ops, const PhysicalParams& params,
                           const Points& u_e) {
    params.validate();
    const int n = frame.size();
    if (ops.size() != n || front.psi.size() != n || front.omega.size() != n)
        throw FlameError("solve_traces: marker count mismatch between state, frame and operators");
    const double th = params.theta;
    const double lam = params.stretch_coeff();

    Field ue_n = Field::Zero(n), ue_t = Field::Zero(n);
    if (u_e.rows() == n) {
        ue_n = (u_e.array() * frame.normal.array()).rowwise().sum();
        ue_t = (u_e.array() * frame.tangent.array()).rowwise().sum();
    }
    const Field y_e = surface_derivative(ue_t, frame);

    const Eigen::MatrixXd& S = ops.single_layer;
    const Eigen::MatrixXd& D = ops.double_layer;
    const Field& w = ops.weights;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd ds = spectral::derivative_matrix(n);
    for (int i = 0; i < n; ++i) ds.row(i) /= frame.speed[i];
    const Eigen::MatrixXd lap = ds * ds;

    const Field e = (pi * I - D) * ops.log_trace + S * ops.log_normal;
    const Eigen::MatrixXd P = S + e * w.transpose() / (2.0 * pi);

    const Field g_m = Field::Ones(n) + lam * frame.kappa;
    const Field g_p = Field::Ones(n) + th * lam * frame.kappa;
    const Field a_m = Field::Ones(n) - ue_n - lam * y_e;
    const Field a_p = Field::Constant(n, th) - th * lam * y_e - (th - 1.0) * front.omega;

    System sys;
    sys.m = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    sys.b = Eigen::VectorXd::Zero(2 * n + 1);
    const double row_scale = pi / frame.perimeter;

    sys.m.block(0, 0, n, n) = pi * I - D;
    sys.m.block(0, n, n, n) = -(P * g_m.asDiagonal());
    sys.b.segment(0, n) = -(P * a_m);

    sys.m.block(n, 0, n, n) = th * (pi * I + D);
    sys.m.block(n, n, n, n) = S * g_p.asDiagonal();
    sys.m.block(n, 2 * n, n, 1).setOnes();
    sys.b.segment(n, n) = S * a_p - (th - 1.0) * ((pi * I + D) * front.psi);

    sys.m.block(2 * n, n, 1, n) = -row_scale * (w.array() * g_p.array()).matrix().transpose();
    sys.b[2 * n] = -row_scale * w.dot(a_p);

    if (lam != 0.0) {
        const Eigen::MatrixXd sl = S * lap;
        const Eigen::RowVectorXd wl = w.transpose() * lap;
        sys.m.block(0, 0, n, n) -= lam * (sl + e * wl / (2.0 * pi));
        sys.m.block(n, 0, n, n) += th * lam * sl;
        sys.m.block(2 * n, 0, 1, n) = -row_scale * th * lam * wl;
    }

    TraceSolution out;
    Eigen::VectorXd z;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.m);
    out.rcond = lu.rcond();
    if (out.rcond >= rcond_limit) {
        z = lu.solve(sys.b);
        out.residual = (sys.m * z - sys.b).norm() / std::max(sys.b.norm(), 1e-300);
    } else {
        // Pin the mean of phi_minus with a bordered row and column.
        const int k = 2 * n + 1;
        Eigen::MatrixXd mb = Eigen::MatrixXd::Zero(k + 1, k + 1);
        mb.topLeftCorner(k, k) = sys.m;
        mb.block(0, k, n, 1).setConstant(1.0 / n);
        mb.block(k, 0, 1, n).setConstant(1.0 / n);
        Eigen::VectorXd bb = Eigen::VectorXd::Zero(k + 1);
        bb.head(k) = sys.b;
        Eigen::PartialPivLU<Eigen::MatrixXd> lub(mb);
        out.rcond = lub.rcond();
        if (out.rcond < rcond_limit)
            throw SolveError("trace system is ill-conditioned (rcond " + std::to_string(out.rcond) + ")",
                             frame.position);
        const Eigen::VectorXd zb = lub.solve(bb);
        out.residual = (mb * zb - bb).norm() / std::max(bb.norm(), 1e-300);
        z = zb.head(k);
        out.mean_pinned = true;
    }

    out.phi_minus = z.segment(0, n);
    out.v_s = z.segment(n, n);
    out.multiplier = z[2 * n];
    out.u_en = ue_n;
    out.u_et = ue_t;

    const Field lphi = lap * out.phi_minus;
    out.y = lphi + frame.kappa.cwiseProduct(out.v_s) + y_e;
    out.flux_minus = a_m - lam * lphi - g_m.cwiseProduct(out.v_s);
    out.flux_plus = a_p - th * lam * lphi - g_p.cwiseProduct(out.v_s);
    out.phi_plus = th * out.phi_minus + (th - 1.0) * front.psi;
    out.mu = -w.dot(out.flux_minus) / (2.0 * pi);
    out.u_t = surface_derivative(out.phi_minus, frame) + ue_t;
    out.u_n = Field::Ones(n) - out.v_s - lam * out.y;
    out.u_sq = out.u_t.array().square() + out.u_n.array().square();
    out.y_mismatch = (stretch(frame, out.u_t, out.v_s) - out.y).cwiseAbs().maxCoeff();
    return out;
}

Field interior_dtn(const LayerOperators& ops, const Field& h) {
    const int n = ops.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = ops.single_layer;
    m.block(0, n, n, 1).setOnes();
    m.block(n, 0, 1, n) = ops.weights.transpose() / ops.weights.sum();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b.head(n) = pi * h + ops.double_layer * h;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    return lu.solve(b).head(n);
}

}  // namespace flame
