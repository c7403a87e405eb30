#pragma once

#include <vector>

#include "gdn/types.hpp"

namespace gdn {

struct Edge {
    int i = 0;
    int j = 0;
    double w = 1.0;
};

/// Undirected weighted graph. The adjacency matrix is symmetric with an
/// exactly zero diagonal; degrees[i] is the i-th row sum.
struct Graph {
    int n = 0;
    SpMat adjacency;
    Vector degrees;

    bool has_edge(int i, int j) const { return adjacency.coeff(i, j) != 0.0; }
    std::vector<Edge> edge_list() const;  // canonical order: i < j, ascending
    std::ptrdiff_t edge_count() const { return adjacency.nonZeros() / 2; }
};

enum class LaplacianKind { Unnormalized, Normalized };

// Duplicate undirected edges collapse with weights summed. Self-loops,
// out-of-range endpoints and non-positive weights are rejected.
Graph build_graph(const std::vector<Edge>& edges, int n);

// Rebuild a Graph from an adjacency matrix (validates symmetry/diagonal,
// recomputes degrees).
Graph graph_from_adjacency(const SpMat& adjacency);

// Unnormalized: L = D - A. Normalized: I - D^{-1/2} A D^{-1/2}, where rows
// and columns of isolated nodes are zero off-diagonal and 1 on-diagonal.
SpMat laplacian(const Graph& g, LaplacianKind kind);

enum class GraphNorm {
    L1G,        // sum_i d_i * sum_j |M_ij|
    L2GSquared, // sum_i d_i * sum_j M_ij^2  (= tr(M^T D M))
    L21G        // sum_i d_i * ||M_i||_2
};

double graph_norm(const Matrix& m, const Vector& degrees, GraphNorm kind);

struct PowerIterationError : Error {
    PowerIterationError(const std::string& what, double best)
        : Error(what), best_estimate(best) {}
    double best_estimate;
};

// Power iteration with a deterministic all-ones start; the converged value
// is inflated by (1 + tol) so it upper-bounds lambda_max.
double estimate_lambda_max(const SpMat& l, double tol = 1e-6, int max_iter = 1000);

// tr(U^T Ltilde U)
double dirichlet_energy(const Matrix& u, const SpMat& ltilde);

enum class SmootherMode { Exact, FirstOrder };

// Exact solves (I + Ltilde) U = X; FirstOrder returns Atilde X.
Matrix l2_smoother(const Matrix& x, const Graph& g, SmootherMode mode);

}  // namespace gdn
