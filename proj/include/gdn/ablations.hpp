#pragma once

#include "gdn/solver.hpp"

namespace gdn {

struct NodeAdmmResult {
    Matrix u;
    DiagnosticsTrace trace;
};

// Feature-only solver: U = (D + mu2 I)^{-1} (D X + sum W^T (mu2 Q + Lam2))
// with the diagonal system inverted entrywise, Q thresholded as in the full
// solver, Lam2/mu2 updated by dual ascent.
NodeAdmmResult node_admm_solve(const Graph& g, const FrameletSystem& sys,
                               const Matrix& x, const SolverConfig& cfg);

struct EdgeAdmmResult {
    Matrix u;
    Matrix z;
    DiagnosticsTrace trace;
};

// Structure-only solver: the full sweep with the framelet channels removed.
// U solves (lambda2 D + mu1 L0^T L0) U = lambda2 D X + mu1 L0^T E - L0^T Lam1;
// Z, E, Y and multiplier updates are shared with the full solver.
EdgeAdmmResult edge_admm_solve(const Graph& g, const Matrix& x, const SolverConfig& cfg);

// (D + alpha L) U = D X with the unnormalized Laplacian; FirstOrder returns
// (I - alpha D^{-1} L) X. Isolated nodes pass through unchanged.
Matrix tv_smooth(const Graph& g, const Matrix& x, double alpha, SmootherMode mode);

}  // namespace gdn
