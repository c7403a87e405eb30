#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "gdn/graph.hpp"

namespace gdn {

/// Scaling functions of a tight filter bank on [0, pi]: one low-pass
/// alpha_hat and K high-pass beta_hat's satisfying
/// |alpha_hat(xi)|^2 + sum_k |beta_hat_k(xi)|^2 = 1.
struct FilterBank {
    std::function<double(double)> alpha_hat;
    std::vector<std::function<double(double)>> beta_hats;

    int high_pass_count() const { return static_cast<int>(beta_hats.size()); }
    // Max deviation of the tightness identity on a uniform grid over [0, pi].
    double tightness_defect(int grid_points = 1001) const;
};

// K = 1 bank with alpha_hat = cos(xi/2), beta_hat = sin(xi/2).
FilterBank haar_filter_bank();

// Smallest integer H >= 0 with lambda_max <= 2^H * pi.
int dilation_scale(double lambda_max);

// Chebyshev interpolation coefficients of g on [0, pi] (length order + 1).
// The fitted polynomial reproduces g exactly at the interpolation nodes.
Vector chebyshev_fit(const std::function<double(double)>& g, int order);

// p(l_scaled) * x via the three-term recurrence, where p is the fitted
// polynomial and spectrum(l_scaled) must lie in [0, pi].
Matrix chebyshev_apply(const Vector& coeffs, const SpMat& l_scaled, const Matrix& x);

// Which dilation exponent each level's band filter is evaluated at.
// Tight: level l filters act at 2^{-H-l+1} L after the low-pass cascade
//   2^{-H} ... 2^{-H-l+2}; the telescoping products form a tight frame.
// Shifted: the band filter of level l >= 2 acts one dilation step lower,
//   at 2^{-H-l} L after a cascade through 2^{-H-l+1}; not tight for L >= 2.
enum class LevelSchedule { Tight, Shifted };

using ChannelKey = std::pair<int, int>;          // (k, l)
using Coefficients = std::map<ChannelKey, Matrix>;

/// One channel of the transform: W_{k,l} = prod over factors of
/// filter(2^{-H-offset} L), applied right to left.
struct Channel {
    int k = 0;
    int l = 0;
    std::vector<std::pair<int, int>> factors;  // (filter index, dilation offset); 0 = low-pass
};

struct FrameletSystem {
    FilterBank bank;
    int levels = 1;        // L
    int cheb_order = 1;    // m
    int dilation = 0;      // H
    LaplacianKind kind = LaplacianKind::Normalized;
    LevelSchedule schedule = LevelSchedule::Tight;
    double lambda_max = 0.0;
    SpMat lap;                       // the Laplacian the transform acts on
    std::vector<Channel> channels;   // index set B = {(0,L)} u {(k,l)}
    std::vector<Vector> cheb;        // coefficient vector per filter; [0] = alpha

    int n() const { return static_cast<int>(lap.rows()); }
    std::vector<ChannelKey> index_set() const;
    const Channel& channel(int k, int l) const;
};

FrameletSystem build_framelet_system(const Graph& g, LaplacianKind kind, int levels,
                                     int cheb_order,
                                     const FilterBank& bank = haar_filter_bank(),
                                     LevelSchedule schedule = LevelSchedule::Tight);

// Q_{k,l} = W_{k,l} X for every (k,l), via chained Chebyshev applications;
// the channel operators are never materialized.
Coefficients framelet_decompose(const FrameletSystem& sys, const Matrix& x);

// sum_{k,l} W_{k,l}^T Q_{k,l}; each factor is a symmetric polynomial of L,
// so the adjoint applies the factor chain in reverse order.
Matrix framelet_reconstruct(const FrameletSystem& sys, const Coefficients& q);

// Dense-eigendecomposition ground truth for the Chebyshev path; evaluates
// the channel filters exactly on the spectrum. Capped at small n.
Coefficients exact_framelet_decompose(const Graph& g, LaplacianKind kind, int levels,
                                      const Matrix& x,
                                      const FilterBank& bank = haar_filter_bank(),
                                      LevelSchedule schedule = LevelSchedule::Tight,
                                      int cap = 200);

// Exact-spectral adjoint, same cap; the oracle counterpart of
// framelet_reconstruct.
Matrix exact_framelet_reconstruct(const Graph& g, LaplacianKind kind, int levels,
                                  const Coefficients& q,
                                  const FilterBank& bank = haar_filter_bank(),
                                  LevelSchedule schedule = LevelSchedule::Tight,
                                  int cap = 200);

// Scalar spectral response of channel (k,l) at eigenvalue lambda.
double channel_filter_value(const FrameletSystem& sys, int k, int l, double lambda);

// Serialization: one matrix file per channel plus a key-value metadata
// header (K, L, m, H, laplacian kind, schedule).
void save_coefficients(const std::string& dir, const FrameletSystem& sys,
                       const Coefficients& q);
Coefficients load_coefficients(const std::string& dir);

}  // namespace gdn
