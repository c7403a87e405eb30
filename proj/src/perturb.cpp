#include "gdn/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace gdn {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error("Rng::below: bound must be positive");
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        const std::uint64_t r = next() & mask;
        if (r < bound) return r;
    }
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = real();
    while (u1 <= 0.0) u1 = real();
    const double u2 = real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw Error("Rng::sample_without_replacement: k exceeds population");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + static_cast<std::size_t>(below(n - i))]);
    idx.resize(k);
    return idx;
}

void NoiseSpec::validate() const {
    if (feature_kind == FeatureKind::BinaryFlip && (flip_ratio < 0.0 || flip_ratio >= 1.0))
        throw Error("NoiseSpec: flip ratio must lie in [0, 1)");
    if (feature_kind == FeatureKind::Gaussian && sigma < 0.0)
        throw Error("NoiseSpec: sigma must be nonnegative");
    if (structure_ratio < 0.0 || structure_ratio >= 1.0)
        throw Error("NoiseSpec: structure ratio must lie in [0, 1)");
}

Matrix perturb_features(const Matrix& x, const NoiseSpec& spec, Rng& rng) {
    spec.validate();
    Matrix out = x;
    if (spec.feature_kind == NoiseSpec::FeatureKind::BinaryFlip) {
        if (!((x.array() == 0.0) || (x.array() == 1.0)).all())
            throw Error("perturb_features: binary flips need a 0/1 matrix");
        const std::size_t total = static_cast<std::size_t>(x.size());
        const std::size_t count =
            static_cast<std::size_t>(std::floor(spec.flip_ratio * static_cast<double>(total)));
        // Positions index the matrix row-major.
        for (std::size_t pos : rng.sample_without_replacement(total, count)) {
            const Eigen::Index i = static_cast<Eigen::Index>(pos) / x.cols();
            const Eigen::Index j = static_cast<Eigen::Index>(pos) % x.cols();
            out(i, j) = 1.0 - out(i, j);
        }
    } else if (spec.feature_kind == NoiseSpec::FeatureKind::Gaussian) {
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                out(i, j) += spec.sigma * rng.normal();
    }
    return out;
}

Graph perturb_edges(const Graph& g, double ratio, Rng& rng) {
    if (ratio < 0.0 || ratio >= 1.0) throw Error("perturb_edges: ratio must lie in [0, 1)");
    std::vector<Edge> edges = g.edge_list();
    const std::size_t e_total = edges.size();
    const std::size_t del_count =
        static_cast<std::size_t>(std::floor(0.5 * ratio * static_cast<double>(e_total)));
    if (ratio > 0.0 && e_total == 0)
        throw Error("perturb_edges: graph has no edges to perturb");
    if (del_count == 0) return g;

    // New links come from pairs that were NOT edges of the original graph,
    // so the perturbation cannot undo itself.
    const std::size_t pair_total =
        static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n - 1) / 2;
    if (pair_total - e_total < del_count)
        throw Error("perturb_edges: not enough non-edges to restore the edge count");

    std::vector<bool> deleted(e_total, false);
    for (std::size_t idx : rng.sample_without_replacement(e_total, del_count))
        deleted[idx] = true;

    std::set<std::pair<int, int>> occupied;
    for (const Edge& e : edges) occupied.emplace(std::min(e.i, e.j), std::max(e.i, e.j));

    std::vector<Edge> result;
    result.reserve(e_total);
    for (std::size_t idx = 0; idx < e_total; ++idx)
        if (!deleted[idx]) result.push_back(edges[idx]);

    // Rejection sampling over unordered pairs; falls back to enumeration for
    // nearly complete graphs so the draw always terminates.
    std::size_t added = 0;
    std::size_t attempts = 0;
    const std::size_t attempt_cap = 100 * del_count + 1000;
    std::set<std::pair<int, int>> fresh;
    while (added < del_count && attempts < attempt_cap) {
        ++attempts;
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n)));
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n)));
        if (i == j) continue;
        const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
        if (occupied.count(key) || fresh.count(key)) continue;
        fresh.insert(key);
        result.push_back({key.first, key.second, 1.0});
        ++added;
    }
    if (added < del_count) {
        std::vector<std::pair<int, int>> candidates;
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (!occupied.count({i, j}) && !fresh.count({i, j}))
                    candidates.push_back({i, j});
        for (std::size_t idx :
             rng.sample_without_replacement(candidates.size(), del_count - added))
            result.push_back({candidates[idx].first, candidates[idx].second, 1.0});
    }
    return build_graph(result, g.n);
}

Graph sbm_generate(const std::vector<int>& sizes, double p_in, double p_out, Rng& rng) {
    if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
        throw Error("sbm_generate: probabilities must lie in [0, 1]");
    int n = 0;
    std::vector<int> block;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        if (sizes[b] <= 0) throw Error("sbm_generate: block sizes must be positive");
        for (int i = 0; i < sizes[b]; ++i) block.push_back(static_cast<int>(b));
        n += sizes[b];
    }
    if (n == 0) throw Error("sbm_generate: no nodes");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = block[i] == block[j] ? p_in : p_out;
            if (rng.real() < p) edges.push_back({i, j, 1.0});
        }
    }
    return build_graph(edges, n);
}

Matrix piecewise_signal(const std::vector<int>& sizes, const std::vector<double>& values,
                        int d) {
    if (sizes.size() != values.size())
        throw Error("piecewise_signal: one value per block required");
    if (d < 1) throw Error("piecewise_signal: feature dimension must be >= 1");
    int n = 0;
    for (int s : sizes) {
        if (s <= 0) throw Error("piecewise_signal: block sizes must be positive");
        n += s;
    }
    Matrix x(n, d);
    int row = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b)
        for (int i = 0; i < sizes[b]; ++i, ++row) x.row(row).setConstant(values[b]);
    return x;
}

RecoveryReport recovery_metrics(const Matrix& u, const Matrix& clean, const Matrix& x_noisy) {
    if (u.rows() != clean.rows() || u.cols() != clean.cols() ||
        x_noisy.rows() != clean.rows() || x_noisy.cols() != clean.cols())
        throw Error("recovery_metrics: shape mismatch");
    const double count = static_cast<double>(clean.size());
    RecoveryReport rep;
    rep.mse_recovered = (u - clean).squaredNorm() / count;
    rep.mse_noisy = (x_noisy - clean).squaredNorm() / count;
    if (rep.mse_noisy > 0.0)
        rep.ratio = rep.mse_recovered / rep.mse_noisy;
    else
        rep.ratio = rep.mse_recovered == 0.0 ? 0.0
                                             : std::numeric_limits<double>::infinity();
    if (rep.mse_recovered == 0.0 && rep.mse_noisy == 0.0)
        rep.snr_gain_db = 0.0;
    else if (rep.mse_recovered == 0.0)
        rep.snr_gain_db = std::numeric_limits<double>::infinity();
    else if (rep.mse_noisy == 0.0)
        rep.snr_gain_db = -std::numeric_limits<double>::infinity();
    else
        rep.snr_gain_db = 10.0 * std::log10(rep.mse_noisy / rep.mse_recovered);
    return rep;
}

}  // namespace gdn
