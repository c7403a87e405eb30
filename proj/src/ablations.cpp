#include "gdn/ablations.hpp"

#include <algorithm>
#include <cmath>

#include "gdn/prox.hpp"

namespace gdn {

namespace {

Matrix l0_apply(const Matrix& y, const Matrix& v) { return v - y * v; }
Matrix l0t_apply(const Matrix& y, const Matrix& v) { return v - y.transpose() * v; }

}  // namespace

NodeAdmmResult node_admm_solve(const Graph& g, const FrameletSystem& sys,
                               const Matrix& x, const SolverConfig& cfg) {
    cfg.validate();
    if (x.rows() != g.n) throw Error("node_admm_solve: signal rows do not match graph size");

    Matrix u = x;
    Coefficients q = framelet_decompose(sys, u);
    Coefficients lam2;
    for (const auto& [key, mat] : q) lam2.emplace(key, Matrix::Zero(mat.rows(), mat.cols()));
    double mu2 = cfg.mu_init[1];

    DiagnosticsTrace trace;
    for (int t = 1; t <= cfg.max_iter; ++t) {
        // U = (D + mu2 I)^{-1} (D X + sum W^T (mu2 Q + Lam2)), inverted entrywise.
        Coefficients combined;
        for (const auto& [key, qkl] : q) combined.emplace(key, mu2 * qkl + lam2.at(key));
        Matrix rhs = framelet_reconstruct(sys, combined);
        rhs += g.degrees.asDiagonal() * x;
        const Vector diag = g.degrees.array() + mu2;
        u = diag.cwiseInverse().asDiagonal() * rhs;

        const Coefficients wu = framelet_decompose(sys, u);
        for (auto& [key, qkl] : q) {
            const Matrix base = wu.at(key) - lam2.at(key) / mu2;
            const double nu_kl = cfg.nu(key.first, key.second, sys.levels);
            if (nu_kl == 0.0)
                qkl = base;
            else
                qkl = batch_threshold(base,
                                      (nu_kl / mu2) * g.degrees.replicate(1, base.cols()));
        }
        for (auto& [key, lam] : lam2) lam += mu2 * (q.at(key) - wu.at(key));

        IterationRecord rec;
        rec.iter = t;
        // The objective column evaluates at the consensus point Q = W U;
        // the Lagrangian keeps the split variable.
        double obj = 0.0, obj_split = 0.0, r2 = 0.0, lagr = 0.0;
        for (const auto& [key, qkl] : q) {
            const double nu_kl = cfg.nu(key.first, key.second, sys.levels);
            obj += nu_kl * graph_norm(wu.at(key), g.degrees, GraphNorm::L1G);
            obj_split += nu_kl * graph_norm(qkl, g.degrees, GraphNorm::L1G);
            const Matrix res = qkl - wu.at(key);
            r2 = std::max(r2, res.norm());
            lagr += 0.5 * mu2 * res.squaredNorm() + (lam2.at(key).array() * res.array()).sum();
        }
        const double fid = 0.5 * graph_norm(u - x, g.degrees, GraphNorm::L2GSquared);
        obj += fid;
        obj_split += fid;
        rec.objective = obj;
        rec.lagrangian = obj_split + lagr;
        rec.r2 = r2;
        rec.mu[1] = mu2;
        trace.records.push_back(rec);

        mu2 = std::min(cfg.rho * mu2, cfg.mu_max[1]);
    }
    return NodeAdmmResult{std::move(u), std::move(trace)};
}

EdgeAdmmResult edge_admm_solve(const Graph& g, const Matrix& x, const SolverConfig& cfg) {
    cfg.validate();
    if (x.rows() != g.n) throw Error("edge_admm_solve: signal rows do not match graph size");
    if (g.n > cfg.n_cap)
        throw Error("edge_admm_solve: dense self-expression matrices need n <= " +
                    std::to_string(cfg.n_cap));

    // The full-state sweep minus the framelet channels; the shared updates
    // ignore Q and Lam2 when those maps are empty.
    DotState s;
    s.u = x;
    s.y = row_normalized_adjacency(g);
    s.z = s.y;
    s.e = l0_apply(s.y, s.u);
    s.lam1 = Matrix::Zero(g.n, x.cols());
    s.lam3 = Vector::Zero(g.n);
    s.lam4 = Matrix::Zero(g.n, g.n);
    s.mu = cfg.mu_init;

    DiagnosticsTrace trace;
    const Vector ones = Vector::Ones(g.n);
    for (int t = 1; t <= cfg.max_iter; ++t) {
        // (lambda2 D + mu1 L0^T L0) U = lambda2 D X + mu1 L0^T E - L0^T Lam1
        const double mu1 = s.mu[0];
        Matrix rhs = l0t_apply(s.y, mu1 * s.e - s.lam1);
        rhs += (cfg.lambda2 * g.degrees).asDiagonal() * x;
        if (cfg.u_solve == USolve::TaylorApprox) {
            const Vector dinv = (cfg.lambda2 * g.degrees)
                                    .unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
            const Matrix w = dinv.asDiagonal() * rhs;
            s.u = w - mu1 * (dinv.asDiagonal() * l0t_apply(s.y, l0_apply(s.y, w)));
        } else {
            Matrix l0 = Matrix::Identity(g.n, g.n) - s.y;
            Matrix sys_mat = mu1 * (l0.transpose() * l0);
            sys_mat.diagonal() += cfg.lambda2 * g.degrees;
            Eigen::LLT<Matrix> llt(sys_mat);
            if (llt.info() != Eigen::Success)
                throw Error("edge_admm_solve: Cholesky factorization failed at iteration " +
                            std::to_string(t));
            s.u = llt.solve(rhs);
        }

        s.e = update_e(s, g, cfg);
        s.y = update_y(s, cfg);
        s.z = update_z(s, cfg);

        s.lam1 += s.mu[0] * (l0_apply(s.y, s.u) - s.e);
        s.lam3 += s.mu[2] * (s.y.rowwise().sum() - ones);
        s.lam4 += s.mu[3] * (s.y - s.z);
        for (int i : {0, 2, 3}) s.mu[i] = std::min(cfg.rho * s.mu[i], cfg.mu_max[i]);
        ++s.iter;

        IterationRecord rec;
        rec.iter = t;
        const Matrix res1 = l0_apply(s.y, s.u) - s.e;
        const Vector res3 = s.y.rowwise().sum() - ones;
        const Matrix res4 = s.y - s.z;
        double obj = s.z.cwiseAbs().sum() +
                     cfg.lambda1 * graph_norm(s.e, g.degrees, GraphNorm::L21G) +
                     0.5 * cfg.lambda2 * graph_norm(s.u - x, g.degrees, GraphNorm::L2GSquared);
        rec.objective = obj;
        rec.lagrangian = obj + 0.5 * s.mu[0] * res1.squaredNorm() +
                         (s.lam1.array() * res1.array()).sum() +
                         0.5 * s.mu[2] * res3.squaredNorm() + s.lam3.dot(res3) +
                         0.5 * s.mu[3] * res4.squaredNorm() +
                         (s.lam4.array() * res4.array()).sum();
        rec.r1 = res1.norm();
        rec.r3 = res3.norm();
        rec.r4 = res4.norm();
        Matrix lam4_off = s.lam4;
        lam4_off.diagonal().setZero();
        rec.kkt_dual_max = std::max(lam4_off.cwiseAbs().maxCoeff() - 1.0, 0.0);
        Matrix stat = s.lam1 * s.u.transpose() - s.lam4;
        stat.colwise() -= s.lam3;
        rec.kkt_stationarity = stat.norm();
        rec.mu = s.mu;
        rec.mu[1] = IterationRecord::absent;
        trace.records.push_back(rec);
    }
    return EdgeAdmmResult{std::move(s.u), std::move(s.z), std::move(trace)};
}

Matrix tv_smooth(const Graph& g, const Matrix& x, double alpha, SmootherMode mode) {
    if (x.rows() != g.n) throw Error("tv_smooth: signal rows do not match graph size");
    if (alpha < 0.0) throw Error("tv_smooth: alpha must be nonnegative");
    const SpMat l = laplacian(g, LaplacianKind::Unnormalized);

    if (mode == SmootherMode::FirstOrder) {
        // (I - alpha D^{-1} L) X; isolated rows pass through (their L row is zero).
        const Vector dinv =
            g.degrees.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
        return x - alpha * (dinv.asDiagonal() * (l * x));
    }

    // (D + alpha L) U = D X with identity rows substituted for isolated nodes.
    SpMat sys = l * alpha;
    Matrix rhs = g.degrees.asDiagonal() * x;
    for (int i = 0; i < g.n; ++i) {
        if (g.degrees[i] > 0.0) {
            sys.coeffRef(i, i) += g.degrees[i];
        } else {
            sys.coeffRef(i, i) = 1.0;
            rhs.row(i) = x.row(i);
        }
    }
    const Eigen::SparseMatrix<double> sys_cm(sys);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys_cm);
    if (llt.info() != Eigen::Success)
        throw Error("tv_smooth: Cholesky factorization failed");
    return llt.solve(rhs);
}

}  // namespace gdn
