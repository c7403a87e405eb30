#pragma once

#include <array>
#include <limits>
#include <map>

#include "gdn/framelet.hpp"
#include "gdn/graph.hpp"

namespace gdn {

enum class USolve { Cholesky, ConjugateGradient, TaylorApprox };

// Threshold schedule of the residual-row prox. Plain uses 1/mu1 for every
// row; DegreeWeighted uses lambda1 * d_i / mu1, the exact prox of the
// degree-weighted group norm in the objective.
enum class EThreshold { Plain, DegreeWeighted };

struct SolverConfig {
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    // High-pass sparsity weights: nu_{0,L} = 0, nu_{k,l} = 4^{-l-1} * nu0,
    // unless an explicit per-channel override is present.
    double nu0 = 0.0;
    std::map<ChannelKey, double> nu_override;

    double rho = 1.1;
    std::array<double, 4> mu_init{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> mu_max{1e6, 1e6, 1e6, 1e6};
    int max_iter = 10;
    USolve u_solve = USolve::Cholesky;
    EThreshold e_threshold = EThreshold::Plain;
    double tol_residual = 1e-2;

    // Dense self-expression matrices cap the graph size.
    int n_cap = 5000;
    // Direct Cholesky of the U system up to this size, CG above.
    int dense_solve_cap = 2000;

    double nu(int k, int l, int levels) const;
    void validate() const;
};

/// All primal variables, multipliers and penalties of one solve.
struct DotState {
    Matrix u;   // n x d, clean feature estimate
    Matrix z;   // n x n, clean structure, zero diagonal
    Matrix e;   // n x d, self-expression residual
    Matrix y;   // n x n, splitting copy of Z
    Coefficients q;

    Matrix lam1;        // n x d
    Coefficients lam2;  // per channel, n x d
    Vector lam3;        // n
    Matrix lam4;        // n x n
    std::array<double, 4> mu{};
    int iter = 0;
};

struct KktReport {
    double r1 = 0;  // ||U - YU - E||_F
    double r2 = 0;  // max_{k,l} ||Q_{k,l} - W_{k,l} U||_F
    double r3 = 0;  // ||Y 1 - 1||_2
    double r4 = 0;  // ||Y - Z + diag(Z)||_F
    double dual_lam1 = 0;       // max_i (||Lam1[i,:]|| - row threshold)+
    double dual_lam2 = 0;       // max entries (|Lam2| - nu_{k,l} d_i)+
    double dual_lam4 = 0;       // (||Lam4||_inf - 1)+
    double stationarity = 0;    // ||Lam1 U^T - Lam3 1^T - Lam4||_F
    double dual_max() const { return std::max({dual_lam1, dual_lam2, dual_lam4}); }
    double primal_max() const { return std::max({r1, r2, r3, r4}); }
};

struct IterationRecord {
    static constexpr double absent = std::numeric_limits<double>::quiet_NaN();
    int iter = 0;
    double objective = absent;
    double lagrangian = absent;
    double r1 = absent, r2 = absent, r3 = absent, r4 = absent;
    double kkt_dual_max = absent;
    double kkt_stationarity = absent;
    std::array<double, 4> mu{absent, absent, absent, absent};
};

struct DiagnosticsTrace {
    std::vector<IterationRecord> records;
};

struct DotResult {
    Matrix u;
    Matrix z;
    DiagnosticsTrace trace;
};

// Row-normalized adjacency; isolated rows get a uniform off-diagonal so the
// row sums are 1 (degenerate single-node graphs fall back to zero).
Matrix row_normalized_adjacency(const Graph& g);

// U0 = X; Y0 = Z0 = row-normalized adjacency (isolated rows uniform
// off-diagonal so Y0 1 = 1); E0 = U0 - Y0 U0; Q0 = W U0; multipliers zero.
DotState init_state(const Graph& g, const FrameletSystem& sys, const Matrix& x,
                    const SolverConfig& cfg);

// Solves (lambda2 D + mu1 L0^T L0 + mu2 I) U = mu1 L0^T E + lambda2 D X
//        - L0^T Lam1 + sum_{k,l} W^T (mu2 Q_{k,l} + Lam2_{k,l}),
// with L0 = I - Y.
Matrix update_u(const DotState& s, const Graph& g, const FrameletSystem& sys,
                const Matrix& x, const SolverConfig& cfg);

// R = T_{1/mu4}(Y + Lam4/mu4); Z = R - diag(R).
Matrix update_z(const DotState& s, const SolverConfig& cfg);

// Row prox of L0 U + Lam1/mu1 at the configured threshold schedule.
Matrix update_e(const DotState& s, const Graph& g, const SolverConfig& cfg);

// Y = B M^{-1} through the Woodbury identity; the inner solve is
// (d+1) x (d+1).
Matrix update_y(const DotState& s, const SolverConfig& cfg);

// Per-channel batch threshold at nu_{k,l} d_i / mu2; the low-pass channel
// passes through.
Coefficients update_q(const DotState& s, const Graph& g, const FrameletSystem& sys,
                      const SolverConfig& cfg);

// Dual ascent on all four constraints, then mu_i <- min(rho mu_i, mu_max).
void update_multipliers_penalties(DotState& s, const FrameletSystem& sys,
                                  const SolverConfig& cfg);

double objective_value(const DotState& s, const Matrix& x, const Graph& g,
                       const FrameletSystem& sys, const SolverConfig& cfg);

double lagrangian_value(const DotState& s, const Matrix& x, const Graph& g,
                        const FrameletSystem& sys, const SolverConfig& cfg);

KktReport kkt_residuals(const DotState& s, const Graph& g, const FrameletSystem& sys,
                        const SolverConfig& cfg);

// Sweeps U -> E -> Y -> Z -> Q -> multipliers for max_iter iterations,
// recording diagnostics after each sweep. Z follows Y so the dual ascent on
// the fourth constraint matches the Z prox exactly. Deterministic given its
// inputs.
DotResult solve(const Graph& g, const FrameletSystem& sys, const Matrix& x,
                const SolverConfig& cfg);

}  // namespace gdn
