#pragma once

#include <cstdint>
#include <random>

#include "gdn/graph.hpp"

namespace gdn {

/// Deterministic random source. The raw stream is std::mt19937_64 seeded
/// directly with the 64-bit seed; every derived draw below is implemented
/// here (rejection sampling, 53-bit reals, Box-Muller pairs) rather than
/// through std distributions, so traces reproduce across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Unbiased integer in [0, bound) by masked rejection.
    std::uint64_t below(std::uint64_t bound);

    // [0, 1) with 53 significant bits.
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; draws come in cached pairs.
    double normal();

    // First k entries of a Fisher-Yates walk over {0, ..., n-1}.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct NoiseSpec {
    enum class FeatureKind { None, BinaryFlip, Gaussian };
    FeatureKind feature_kind = FeatureKind::None;
    double flip_ratio = 0.0;      // BinaryFlip: fraction p of entries flipped
    double sigma = 0.0;           // Gaussian: noise standard deviation
    double structure_ratio = 0.0; // edge perturbation ratio r
    std::uint64_t seed = 0;

    void validate() const;
};

// BinaryFlip flips floor(p * N * d) distinct entries chosen without
// replacement (requires a 0/1 matrix); Gaussian adds N(0, sigma^2) to every
// entry in row-major order.
Matrix perturb_features(const Matrix& x, const NoiseSpec& spec, Rng& rng);

// Deletes floor((r/2) * E) existing edges, then inserts the same number of
// new non-edges, keeping the edge count unchanged.
Graph perturb_edges(const Graph& g, double ratio, Rng& rng);

// Stochastic block model over lexicographic node pairs.
Graph sbm_generate(const std::vector<int>& sizes, double p_in, double p_out, Rng& rng);

// Block-constant signal, one value per block, replicated across d columns.
Matrix piecewise_signal(const std::vector<int>& sizes, const std::vector<double>& values,
                        int d);

struct RecoveryReport {
    double mse_recovered = 0;
    double mse_noisy = 0;
    double ratio = 0;        // mse_recovered / mse_noisy; < 1 means denoising helped
    double snr_gain_db = 0;  // 10 log10(mse_noisy / mse_recovered)
};

RecoveryReport recovery_metrics(const Matrix& u, const Matrix& clean, const Matrix& x_noisy);

}  // namespace gdn
