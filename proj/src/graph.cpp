#include "gdn/graph.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace gdn {

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(adjacency.nonZeros() / 2));
    for (int i = 0; i < n; ++i) {
        for (SpMat::InnerIterator it(adjacency, i); it; ++it) {
            if (it.col() > i) out.push_back({i, static_cast<int>(it.col()), it.value()});
        }
    }
    return out;
}

Graph build_graph(const std::vector<Edge>& edges, int n) {
    if (n <= 0) throw Error("build_graph: node count must be positive, got " + std::to_string(n));
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
            std::ostringstream msg;
            msg << "build_graph: edge (" << e.i << ", " << e.j << ") out of range for n = " << n;
            throw Error(msg.str());
        }
        if (e.i == e.j)
            throw Error("build_graph: self-loop at node " + std::to_string(e.i));
        if (!(e.w > 0.0))
            throw Error("build_graph: edge weight must be positive");
        trips.emplace_back(e.i, e.j, e.w);
        trips.emplace_back(e.j, e.i, e.w);
    }
    Graph g;
    g.n = n;
    g.adjacency.resize(n, n);
    g.adjacency.setFromTriplets(trips.begin(), trips.end());  // duplicates sum
    g.adjacency.makeCompressed();
    g.degrees = g.adjacency * Vector::Ones(n);
    return g;
}

Graph graph_from_adjacency(const SpMat& adjacency) {
    if (adjacency.rows() != adjacency.cols())
        throw Error("graph_from_adjacency: matrix must be square");
    const int n = static_cast<int>(adjacency.rows());
    for (int i = 0; i < n; ++i) {
        for (SpMat::InnerIterator it(adjacency, i); it; ++it) {
            if (it.row() == it.col() && it.value() != 0.0)
                throw Error("graph_from_adjacency: nonzero diagonal at " + std::to_string(i));
            if (it.value() < 0.0)
                throw Error("graph_from_adjacency: negative weight");
            if (std::abs(it.value() - adjacency.coeff(it.col(), it.row())) > 0.0)
                throw Error("graph_from_adjacency: adjacency not symmetric");
        }
    }
    Graph g;
    g.n = n;
    g.adjacency = adjacency;
    g.adjacency.prune(0.0);
    g.adjacency.makeCompressed();
    g.degrees = g.adjacency * Vector::Ones(n);
    return g;
}

SpMat laplacian(const Graph& g, LaplacianKind kind) {
    const int n = g.n;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(g.adjacency.nonZeros()) + n);
    if (kind == LaplacianKind::Unnormalized) {
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, g.degrees[i]);
        for (int i = 0; i < n; ++i)
            for (SpMat::InnerIterator it(g.adjacency, i); it; ++it)
                trips.emplace_back(i, static_cast<int>(it.col()), -it.value());
    } else {
        // Isolated nodes keep a unit diagonal and empty off-diagonal.
        Vector dinv_sqrt(n);
        for (int i = 0; i < n; ++i)
            dinv_sqrt[i] = g.degrees[i] > 0.0 ? 1.0 / std::sqrt(g.degrees[i]) : 0.0;
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, 1.0);
        for (int i = 0; i < n; ++i)
            for (SpMat::InnerIterator it(g.adjacency, i); it; ++it)
                trips.emplace_back(i, static_cast<int>(it.col()),
                                   -dinv_sqrt[i] * it.value() * dinv_sqrt[it.col()]);
    }
    SpMat l(n, n);
    l.setFromTriplets(trips.begin(), trips.end());
    l.makeCompressed();
    return l;
}

double graph_norm(const Matrix& m, const Vector& degrees, GraphNorm kind) {
    if (m.rows() != degrees.size())
        throw Error("graph_norm: row count does not match degree vector length");
    double acc = 0.0;
    switch (kind) {
        case GraphNorm::L1G:
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                acc += degrees[i] * m.row(i).cwiseAbs().sum();
            break;
        case GraphNorm::L2GSquared:
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                acc += degrees[i] * m.row(i).squaredNorm();
            break;
        case GraphNorm::L21G:
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                acc += degrees[i] * m.row(i).norm();
            break;
    }
    return acc;
}

double estimate_lambda_max(const SpMat& l, double tol, int max_iter) {
    if (l.rows() != l.cols()) throw Error("estimate_lambda_max: matrix must be square");
    const Eigen::Index n = l.rows();
    if (n == 0) return 0.0;
    // All-ones start plus a small integer-hash jitter; the plain ones vector
    // sits in the kernel of unnormalized Laplacians and would stall there.
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto h = (static_cast<std::uint64_t>(i) + 1) * 2654435761ULL;
        v[i] = 1.0 + (static_cast<double>(h % 1024) / 1024.0 - 0.5) * 0.25;
    }
    v /= v.norm();
    // Rayleigh quotients converge geometrically from below; Aitken's delta
    // squared extrapolates through clustered top eigenvalues, and convergence
    // is declared once the extrapolated value itself stabilizes.
    double lambda = 0.0, diff_prev = 0.0;
    double estimate = 0.0, estimate_prev = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = l * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;  // annihilated start: the operator is null on it
        const double next = v.dot(w);
        v = w / norm;
        const double diff = next - lambda;
        if (it > 0) {
            estimate = next;
            if (it > 1 && diff_prev > diff && diff > 0.0)
                estimate = next + diff * diff / (diff_prev - diff);
            const double scale = std::max(std::abs(estimate), 1e-300);
            if (it > 1 && std::abs(estimate - estimate_prev) <= 0.25 * tol * scale)
                ++stable;
            else
                stable = 0;
            if (stable >= 2 || std::abs(diff) <= 1e-2 * tol * scale)
                return estimate * (1.0 + tol);
            estimate_prev = estimate;
            diff_prev = diff;
        }
        lambda = next;
    }
    throw PowerIterationError(
        "estimate_lambda_max: no convergence within " + std::to_string(max_iter) +
            " iterations; best estimate " + std::to_string(estimate),
        estimate);
}

double dirichlet_energy(const Matrix& u, const SpMat& ltilde) {
    if (u.rows() != ltilde.rows())
        throw Error("dirichlet_energy: dimension mismatch");
    return (u.transpose() * (ltilde * u)).trace();
}

Matrix l2_smoother(const Matrix& x, const Graph& g, SmootherMode mode) {
    if (x.rows() != g.n) throw Error("l2_smoother: signal rows do not match graph size");
    const SpMat ltilde = laplacian(g, LaplacianKind::Normalized);
    if (mode == SmootherMode::FirstOrder) {
        // Atilde X = (I - Ltilde) X
        return x - ltilde * x;
    }
    SpMat sys = ltilde;
    for (int i = 0; i < g.n; ++i) sys.coeffRef(i, i) += 1.0;
    const Eigen::SparseMatrix<double> sys_cm(sys);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys_cm);
    if (llt.info() != Eigen::Success)
        throw Error("l2_smoother: Cholesky factorization failed");
    return llt.solve(x);
}

}  // namespace gdn
