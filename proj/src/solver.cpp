#include "gdn/solver.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "gdn/prox.hpp"

namespace gdn {

double SolverConfig::nu(int k, int l, int levels) const {
    const auto found = nu_override.find(ChannelKey{k, l});
    if (found != nu_override.end()) return found->second;
    if (k == 0 && l == levels) return 0.0;
    return std::pow(4.0, -static_cast<double>(l) - 1.0) * nu0;
}

void SolverConfig::validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw Error("SolverConfig: lambda1 and lambda2 must be positive");
    if (nu0 < 0.0) throw Error("SolverConfig: nu0 must be nonnegative");
    for (const auto& [key, value] : nu_override)
        if (value < 0.0) throw Error("SolverConfig: nu override must be nonnegative");
    if (rho < 1.0) throw Error("SolverConfig: rho must be >= 1");
    for (int i = 0; i < 4; ++i) {
        if (!(mu_init[i] > 0.0))
            throw Error("SolverConfig: mu_init must be positive");
        if (mu_init[i] > mu_max[i])
            throw Error("SolverConfig: mu_init exceeds mu_max");
    }
    if (max_iter < 0) throw Error("SolverConfig: max_iter must be nonnegative");
    if (!(tol_residual > 0.0)) throw Error("SolverConfig: tol_residual must be positive");
}

namespace {

// I - Y applied as U - Y U without forming the dense operator.
Matrix l0_apply(const Matrix& y, const Matrix& v) { return v - y * v; }
Matrix l0t_apply(const Matrix& y, const Matrix& v) { return v - y.transpose() * v; }

Coefficients zero_coefficients(const FrameletSystem& sys, Eigen::Index rows,
                               Eigen::Index cols) {
    Coefficients q;
    for (const ChannelKey& key : sys.index_set())
        q.emplace(key, Matrix::Zero(rows, cols));
    return q;
}

// Block CG with Frobenius inner products; equivalent to running CG on every
// column of the stacked SPD system.
Matrix conjugate_gradient(const std::function<Matrix(const Matrix&)>& apply,
                          const Matrix& rhs, double tol, int max_iter) {
    Matrix x = Matrix::Zero(rhs.rows(), rhs.cols());
    Matrix r = rhs;
    Matrix p = r;
    double rs = r.squaredNorm();
    const double stop = tol * tol * rhs.squaredNorm();
    for (int it = 0; it < max_iter && rs > stop; ++it) {
        const Matrix ap = apply(p);
        const double alpha = rs / p.cwiseProduct(ap).sum();
        x += alpha * p;
        r -= alpha * ap;
        const double rs_next = r.squaredNorm();
        p = r + (rs_next / rs) * p;
        rs = rs_next;
    }
    return x;
}

double frobenius(const Matrix& m) { return m.norm(); }

}  // namespace

Matrix row_normalized_adjacency(const Graph& g) {
    Matrix y = Matrix::Zero(g.n, g.n);
    for (int i = 0; i < g.n; ++i) {
        if (g.degrees[i] > 0.0) {
            for (SpMat::InnerIterator it(g.adjacency, i); it; ++it)
                y(i, it.col()) = it.value() / g.degrees[i];
        } else if (g.n > 1) {
            // Isolated rows get a uniform off-diagonal so Y 1 = 1 at init.
            const double w = 1.0 / static_cast<double>(g.n - 1);
            y.row(i).setConstant(w);
            y(i, i) = 0.0;
        }
    }
    return y;
}

DotState init_state(const Graph& g, const FrameletSystem& sys, const Matrix& x,
                    const SolverConfig& cfg) {
    cfg.validate();
    if (x.rows() != g.n) throw Error("init_state: signal rows do not match graph size");
    if (x.cols() < 1) throw Error("init_state: signal needs at least one column");
    if (g.n > cfg.n_cap)
        throw Error("init_state: dense self-expression matrices need n <= " +
                    std::to_string(cfg.n_cap) + ", got n = " + std::to_string(g.n));
    if (sys.n() != g.n) throw Error("init_state: framelet system built for a different graph");

    DotState s;
    s.u = x;
    s.y = row_normalized_adjacency(g);
    s.z = s.y;
    s.e = l0_apply(s.y, s.u);
    s.q = framelet_decompose(sys, s.u);
    s.lam1 = Matrix::Zero(g.n, x.cols());
    s.lam2 = zero_coefficients(sys, g.n, x.cols());
    s.lam3 = Vector::Zero(g.n);
    s.lam4 = Matrix::Zero(g.n, g.n);
    s.mu = cfg.mu_init;
    s.iter = 0;
    return s;
}

Matrix update_u(const DotState& s, const Graph& g, const FrameletSystem& sys,
                const Matrix& x, const SolverConfig& cfg) {
    const double mu1 = s.mu[0], mu2 = s.mu[1];
    const int n = g.n;

    // rhs = mu1 L0^T E + lambda2 D X - L0^T Lam1 + sum W^T (mu2 Q + Lam2)
    Coefficients combined;
    for (const auto& [key, qkl] : s.q)
        combined.emplace(key, mu2 * qkl + s.lam2.at(key));
    Matrix rhs = framelet_reconstruct(sys, combined);
    rhs += l0t_apply(s.y, mu1 * s.e - s.lam1);
    rhs += (cfg.lambda2 * g.degrees).asDiagonal() * x;

    USolve strategy = cfg.u_solve;
    if (strategy == USolve::Cholesky && n > cfg.dense_solve_cap)
        strategy = USolve::ConjugateGradient;

    if (strategy == USolve::TaylorApprox) {
        // First-order expansion around the diagonal part lambda2 D + mu2 I.
        const Vector diag = (cfg.lambda2 * g.degrees).array() + mu2;
        const Matrix w = diag.cwiseInverse().asDiagonal() * rhs;
        const Matrix correction = l0t_apply(s.y, l0_apply(s.y, w));
        return w - mu1 * (diag.cwiseInverse().asDiagonal() * correction);
    }

    if (strategy == USolve::ConjugateGradient) {
        auto apply = [&](const Matrix& v) -> Matrix {
            Matrix av = (cfg.lambda2 * g.degrees).asDiagonal() * v;
            av += mu1 * l0t_apply(s.y, l0_apply(s.y, v));
            av += mu2 * v;
            return av;
        };
        return conjugate_gradient(apply, rhs, 1e-8, 10 * n);
    }

    // Dense Cholesky of lambda2 D + mu1 L0^T L0 + mu2 I.
    Matrix l0 = Matrix::Identity(n, n) - s.y;
    Matrix sys_mat = mu1 * (l0.transpose() * l0);
    sys_mat.diagonal() += cfg.lambda2 * g.degrees;
    sys_mat.diagonal().array() += mu2;
    Eigen::LLT<Matrix> llt(sys_mat);
    if (llt.info() != Eigen::Success)
        throw Error("update_u: Cholesky factorization failed");
    Matrix u = llt.solve(rhs);
    const double rel = frobenius(sys_mat * u - rhs) / std::max(frobenius(rhs), 1e-300);
    if (rel > 1e-8) {
        std::ostringstream msg;
        msg << "update_u: direct solve residual " << rel << " exceeds 1e-8";
        throw Error(msg.str());
    }
    return u;
}

Matrix update_z(const DotState& s, const SolverConfig&) {
    const double mu4 = s.mu[3];
    Matrix r = soft_threshold(Matrix(s.y + s.lam4 / mu4), 1.0 / mu4);
    r.diagonal().setZero();
    return r;
}

Matrix update_e(const DotState& s, const Graph& g, const SolverConfig& cfg) {
    const double mu1 = s.mu[0];
    const Matrix v = l0_apply(s.y, s.u) + s.lam1 / mu1;
    Vector eta(g.n);
    if (cfg.e_threshold == EThreshold::Plain)
        eta.setConstant(1.0 / mu1);
    else
        eta = (cfg.lambda1 / mu1) * g.degrees;
    return soft_threshold_rows(v, eta);
}

Matrix update_y(const DotState& s, const SolverConfig&) {
    const double mu1 = s.mu[0], mu3 = s.mu[2], mu4 = s.mu[3];
    const Eigen::Index n = s.u.rows(), d = s.u.cols();

    Matrix b = mu1 * ((s.u - s.e) * s.u.transpose());
    b.array() += mu3;  // mu3 * 1 1^T
    b += mu4 * s.z + s.lam1 * s.u.transpose();
    b.colwise() -= s.lam3;  // - Lam3 1^T
    b -= s.lam4;

    // (mu1 U U^T + mu3 1 1^T + mu4 I)^{-1} via the Woodbury identity with
    // Utilde = [sqrt(mu1) U, sqrt(mu3) 1].
    Matrix utilde(n, d + 1);
    utilde.leftCols(d) = std::sqrt(mu1) * s.u;
    utilde.col(d).setConstant(std::sqrt(mu3));
    Matrix gram = utilde.transpose() * utilde;
    gram.diagonal().array() += mu4;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw Error("update_y: inner (d+1) x (d+1) solve failed");
    const Matrix bu = b * utilde;
    return (b - bu * llt.solve(utilde.transpose())) / mu4;
}

namespace {

Matrix q_threshold_delta(const Graph& g, double nu_kl, double mu2, Eigen::Index cols) {
    return (nu_kl / mu2) * g.degrees.replicate(1, cols);
}

Coefficients update_q_impl(const DotState& s, const Graph& g, const FrameletSystem& sys,
                           const SolverConfig& cfg, const Coefficients& wu) {
    const double mu2 = s.mu[1];
    Coefficients q;
    for (const auto& [key, wu_kl] : wu) {
        const Matrix base = wu_kl - s.lam2.at(key) / mu2;
        const double nu_kl = cfg.nu(key.first, key.second, sys.levels);
        if (nu_kl == 0.0) {
            q.emplace(key, base);  // pass-through; the low-pass channel lands here
        } else {
            q.emplace(key, batch_threshold(base, q_threshold_delta(g, nu_kl, mu2, base.cols())));
        }
    }
    return q;
}

void update_multipliers_impl(DotState& s, const SolverConfig& cfg, const Coefficients& wu) {
    s.lam1 += s.mu[0] * (l0_apply(s.y, s.u) - s.e);
    for (auto& [key, lam] : s.lam2) lam += s.mu[1] * (s.q.at(key) - wu.at(key));
    s.lam3 += s.mu[2] * (s.y.rowwise().sum() - Vector::Ones(s.y.rows()));
    s.lam4 += s.mu[3] * (s.y - s.z);  // diag(Z) is exactly zero
    for (int i = 0; i < 4; ++i) s.mu[i] = std::min(cfg.rho * s.mu[i], cfg.mu_max[i]);
    ++s.iter;
}

}  // namespace

Coefficients update_q(const DotState& s, const Graph& g, const FrameletSystem& sys,
                      const SolverConfig& cfg) {
    return update_q_impl(s, g, sys, cfg, framelet_decompose(sys, s.u));
}

void update_multipliers_penalties(DotState& s, const FrameletSystem& sys,
                                  const SolverConfig& cfg) {
    update_multipliers_impl(s, cfg, framelet_decompose(sys, s.u));
}

double objective_value(const DotState& s, const Matrix& x, const Graph& g,
                       const FrameletSystem& sys, const SolverConfig& cfg) {
    const Coefficients wu = framelet_decompose(sys, s.u);
    double obj = 0.0;
    for (const auto& [key, wu_kl] : wu)
        obj += cfg.nu(key.first, key.second, sys.levels) *
               graph_norm(wu_kl, g.degrees, GraphNorm::L1G);
    obj += s.z.cwiseAbs().sum();
    obj += cfg.lambda1 * graph_norm(s.e, g.degrees, GraphNorm::L21G);
    obj += 0.5 * cfg.lambda2 * graph_norm(s.u - x, g.degrees, GraphNorm::L2GSquared);
    return obj;
}

double lagrangian_value(const DotState& s, const Matrix& x, const Graph& g,
                        const FrameletSystem& sys, const SolverConfig& cfg) {
    const Coefficients wu = framelet_decompose(sys, s.u);
    double value = objective_value(s, x, g, sys, cfg);

    const Matrix res1 = l0_apply(s.y, s.u) - s.e;
    value += 0.5 * s.mu[0] * res1.squaredNorm() + (s.lam1.array() * res1.array()).sum();

    for (const auto& [key, qkl] : s.q) {
        const Matrix res2 = qkl - wu.at(key);
        value += 0.5 * s.mu[1] * res2.squaredNorm() +
                 (s.lam2.at(key).array() * res2.array()).sum();
    }

    const Vector res3 = s.y.rowwise().sum() - Vector::Ones(s.y.rows());
    value += 0.5 * s.mu[2] * res3.squaredNorm() + s.lam3.dot(res3);

    const Matrix res4 = s.y - s.z;
    value += 0.5 * s.mu[3] * res4.squaredNorm() + (s.lam4.array() * res4.array()).sum();
    return value;
}

KktReport kkt_residuals(const DotState& s, const Graph& g, const FrameletSystem& sys,
                        const SolverConfig& cfg) {
    KktReport rep;
    const Coefficients wu = framelet_decompose(sys, s.u);

    rep.r1 = frobenius(l0_apply(s.y, s.u) - s.e);
    rep.r2 = 0.0;
    for (const auto& [key, qkl] : s.q)
        rep.r2 = std::max(rep.r2, frobenius(qkl - wu.at(key)));
    rep.r3 = (s.y.rowwise().sum() - Vector::Ones(s.y.rows())).norm();
    rep.r4 = frobenius(s.y - s.z);

    for (Eigen::Index i = 0; i < s.lam1.rows(); ++i) {
        const double thr =
            cfg.e_threshold == EThreshold::Plain ? 1.0 : cfg.lambda1 * g.degrees[i];
        rep.dual_lam1 = std::max(rep.dual_lam1, s.lam1.row(i).norm() - thr);
    }
    rep.dual_lam1 = std::max(rep.dual_lam1, 0.0);

    for (const auto& [key, lam] : s.lam2) {
        const double nu_kl = cfg.nu(key.first, key.second, sys.levels);
        for (Eigen::Index i = 0; i < lam.rows(); ++i) {
            const double bound = nu_kl * g.degrees[i];
            const double excess = lam.row(i).cwiseAbs().maxCoeff() - bound;
            rep.dual_lam2 = std::max(rep.dual_lam2, excess);
        }
    }
    rep.dual_lam2 = std::max(rep.dual_lam2, 0.0);

    // The subgradient bound |Lam4| <= 1 covers the off-diagonal entries only:
    // the diagonal of the fourth constraint is diag(Y) = 0, independent of Z,
    // so its multipliers never pass through the l1 prox.
    Matrix lam4_off = s.lam4;
    lam4_off.diagonal().setZero();
    rep.dual_lam4 = std::max(lam4_off.cwiseAbs().maxCoeff() - 1.0, 0.0);

    // Stationarity of the Y block after dual ascent: Lam1 U^T = Lam3 1^T + Lam4
    // up to mu4 * (Z step movement) within one sweep.
    Matrix stat = s.lam1 * s.u.transpose() - s.lam4;
    stat.colwise() -= s.lam3;
    rep.stationarity = frobenius(stat);
    return rep;
}

DotResult solve(const Graph& g, const FrameletSystem& sys, const Matrix& x,
                const SolverConfig& cfg) {
    DotState s = init_state(g, sys, x, cfg);
    DiagnosticsTrace trace;
    trace.records.reserve(static_cast<std::size_t>(cfg.max_iter));

    for (int t = 1; t <= cfg.max_iter; ++t) {
        // E and Y consume the previous sweep's Y and Z; Z then shrinks the
        // fresh Y, which keeps the dual ascent aligned with the Z prox and
        // makes the multiplier bounds of the l1 blocks hold at every sweep.
        try {
            s.u = update_u(s, g, sys, x, cfg);
            s.e = update_e(s, g, cfg);
            s.y = update_y(s, cfg);
            s.z = update_z(s, cfg);
            const Coefficients wu = framelet_decompose(sys, s.u);
            s.q = update_q_impl(s, g, sys, cfg, wu);
            update_multipliers_impl(s, cfg, wu);
        } catch (const Error& e) {
            throw Error("solve: iteration " + std::to_string(t) + ": " + e.what());
        }

        const KktReport kkt = kkt_residuals(s, g, sys, cfg);
        IterationRecord rec;
        rec.iter = t;
        rec.objective = objective_value(s, x, g, sys, cfg);
        rec.lagrangian = lagrangian_value(s, x, g, sys, cfg);
        rec.r1 = kkt.r1;
        rec.r2 = kkt.r2;
        rec.r3 = kkt.r3;
        rec.r4 = kkt.r4;
        rec.kkt_dual_max = kkt.dual_max();
        rec.kkt_stationarity = kkt.stationarity;
        rec.mu = s.mu;
        trace.records.push_back(rec);
    }
    return DotResult{s.u, s.z, std::move(trace)};
}

}  // namespace gdn
