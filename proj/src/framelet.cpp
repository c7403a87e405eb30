#include "gdn/framelet.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "gdn/io.hpp"

namespace gdn {

namespace {

constexpr double kPi = std::numbers::pi;

// Channel chains per schedule; factors apply right to left.
std::vector<Channel> make_channels(int high_pass_count, int levels, LevelSchedule schedule) {
    std::vector<Channel> channels;
    const int K = high_pass_count;
    const int L = levels;
    if (schedule == LevelSchedule::Tight) {
        // W_{k,l} = beta_k(2^{-H-l+1} L) . alpha(2^{-H-l+2} L) ... alpha(2^{-H} L)
        // W_{0,L} = alpha(2^{-H-L+1} L) ... alpha(2^{-H} L)
        for (int l = 1; l <= L; ++l) {
            for (int k = 1; k <= K; ++k) {
                Channel ch{k, l, {}};
                ch.factors.emplace_back(k, l - 1);
                for (int j = l - 2; j >= 0; --j) ch.factors.emplace_back(0, j);
                channels.push_back(std::move(ch));
            }
        }
        Channel low{0, L, {}};
        for (int j = L - 1; j >= 0; --j) low.factors.emplace_back(0, j);
        channels.push_back(std::move(low));
    } else {
        // W_{k,1} = beta_k(2^{-H} L);
        // W_{k,l} = beta_k(2^{-H-l} L) . alpha(2^{-H-l+1} L) ... alpha(2^{-H} L)
        for (int k = 1; k <= K; ++k) channels.push_back({k, 1, {{k, 0}}});
        for (int l = 2; l <= L; ++l) {
            for (int k = 1; k <= K; ++k) {
                Channel ch{k, l, {}};
                ch.factors.emplace_back(k, l);
                for (int j = l - 1; j >= 0; --j) ch.factors.emplace_back(0, j);
                channels.push_back(std::move(ch));
            }
        }
        Channel low{0, L, {}};
        if (L >= 2) {
            low.factors.emplace_back(0, L);
            for (int j = L - 1; j >= 0; --j) low.factors.emplace_back(0, j);
        } else {
            low.factors.emplace_back(0, 0);
        }
        channels.push_back(std::move(low));
    }
    return channels;
}

}  // namespace

double FilterBank::tightness_defect(int grid_points) const {
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double xi = kPi * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        double s = alpha_hat(xi) * alpha_hat(xi);
        for (const auto& b : beta_hats) s += b(xi) * b(xi);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

FilterBank haar_filter_bank() {
    FilterBank bank;
    bank.alpha_hat = [](double xi) { return std::cos(xi / 2.0); };
    bank.beta_hats = {[](double xi) { return std::sin(xi / 2.0); }};
    return bank;
}

int dilation_scale(double lambda_max) {
    if (lambda_max < 0.0) throw Error("dilation_scale: negative spectral bound");
    int h = 0;
    double reach = kPi;
    while (lambda_max > reach) {
        reach *= 2.0;
        ++h;
    }
    return h;
}

Vector chebyshev_fit(const std::function<double(double)>& g, int order) {
    if (order < 0) throw Error("chebyshev_fit: order must be nonnegative");
    const int m = order + 1;  // interpolation points
    // Chebyshev-Gauss nodes on [-1, 1], mapped affinely to [0, pi].
    std::vector<double> gv(m), theta(m);
    for (int i = 0; i < m; ++i) {
        theta[i] = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
        const double x = std::cos(theta[i]);
        gv[i] = g((x + 1.0) * kPi / 2.0);
    }
    Vector coeffs(m);
    for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += gv[i] * std::cos(k * theta[i]);
        coeffs[k] = acc * (k == 0 ? 1.0 : 2.0) / static_cast<double>(m);
    }
    return coeffs;
}

Matrix chebyshev_apply(const Vector& coeffs, const SpMat& l_scaled, const Matrix& x) {
    if (l_scaled.rows() != x.rows())
        throw Error("chebyshev_apply: dimension mismatch");
    if (coeffs.size() == 0) throw Error("chebyshev_apply: empty coefficient vector");
    // Map [0, pi] to [-1, 1]: A = (2/pi) L - I, then the three-term recurrence.
    const double scale = 2.0 / kPi;
    auto apply_a = [&](const Matrix& v) -> Matrix { return scale * (l_scaled * v) - v; };
    Matrix t_prev = x;                       // T_0 x
    Matrix out = coeffs[0] * t_prev;
    if (coeffs.size() == 1) return out;
    Matrix t_curr = apply_a(x);              // T_1 x
    out += coeffs[1] * t_curr;
    for (Eigen::Index k = 2; k < coeffs.size(); ++k) {
        Matrix t_next = 2.0 * apply_a(t_curr) - t_prev;
        out += coeffs[k] * t_next;
        t_prev = std::move(t_curr);
        t_curr = std::move(t_next);
    }
    return out;
}

std::vector<ChannelKey> FrameletSystem::index_set() const {
    std::vector<ChannelKey> keys;
    keys.reserve(channels.size());
    for (const Channel& ch : channels) keys.emplace_back(ch.k, ch.l);
    return keys;
}

const Channel& FrameletSystem::channel(int k, int l) const {
    for (const Channel& ch : channels)
        if (ch.k == k && ch.l == l) return ch;
    throw Error("framelet: no channel (" + std::to_string(k) + ", " + std::to_string(l) + ")");
}

FrameletSystem build_framelet_system(const Graph& g, LaplacianKind kind, int levels,
                                     int cheb_order, const FilterBank& bank,
                                     LevelSchedule schedule) {
    if (levels < 1) throw Error("build_framelet_system: levels must be >= 1");
    if (cheb_order < 1) throw Error("build_framelet_system: Chebyshev order must be >= 1");
    if (!bank.alpha_hat || bank.beta_hats.empty())
        throw Error("build_framelet_system: filter bank is incomplete");
    const double defect = bank.tightness_defect();
    if (defect > 1e-12)
        throw Error("build_framelet_system: filter bank violates tightness, defect " +
                    std::to_string(defect));

    FrameletSystem sys;
    sys.bank = bank;
    sys.levels = levels;
    sys.cheb_order = cheb_order;
    sys.kind = kind;
    sys.schedule = schedule;
    sys.lap = laplacian(g, kind);

    double lmax = 0.0;
    try {
        lmax = estimate_lambda_max(sys.lap);
    } catch (const PowerIterationError& e) {
        lmax = e.best_estimate;  // still an estimate; the margin below covers it
    }
    sys.lambda_max = lmax;
    sys.dilation = dilation_scale(lmax * 1.01);  // 1% safety margin on the bound

    sys.cheb.push_back(chebyshev_fit(bank.alpha_hat, cheb_order));
    for (const auto& b : bank.beta_hats) sys.cheb.push_back(chebyshev_fit(b, cheb_order));
    sys.channels = make_channels(bank.high_pass_count(), levels, schedule);
    return sys;
}

Coefficients framelet_decompose(const FrameletSystem& sys, const Matrix& x) {
    if (x.rows() != sys.lap.rows())
        throw Error("framelet_decompose: signal rows do not match graph size");
    // Scaled Laplacians per dilation offset, shared across channels.
    int max_offset = 0;
    for (const Channel& ch : sys.channels)
        for (const auto& f : ch.factors) max_offset = std::max(max_offset, f.second);
    std::vector<SpMat> scaled(max_offset + 1);
    for (int j = 0; j <= max_offset; ++j)
        scaled[j] = sys.lap * std::pow(2.0, -static_cast<double>(sys.dilation + j));

    Coefficients q;
    for (const Channel& ch : sys.channels) {
        Matrix v = x;
        for (auto it = ch.factors.rbegin(); it != ch.factors.rend(); ++it)
            v = chebyshev_apply(sys.cheb[static_cast<std::size_t>(it->first)],
                                scaled[static_cast<std::size_t>(it->second)], v);
        q.emplace(ChannelKey{ch.k, ch.l}, std::move(v));
    }
    return q;
}

Matrix framelet_reconstruct(const FrameletSystem& sys, const Coefficients& q) {
    if (q.size() != sys.channels.size())
        throw Error("framelet_reconstruct: coefficient keys do not match the index set");
    int max_offset = 0;
    for (const Channel& ch : sys.channels)
        for (const auto& f : ch.factors) max_offset = std::max(max_offset, f.second);
    std::vector<SpMat> scaled(max_offset + 1);
    for (int j = 0; j <= max_offset; ++j)
        scaled[j] = sys.lap * std::pow(2.0, -static_cast<double>(sys.dilation + j));

    Matrix out;
    for (const Channel& ch : sys.channels) {
        const auto found = q.find(ChannelKey{ch.k, ch.l});
        if (found == q.end())
            throw Error("framelet_reconstruct: missing channel (" + std::to_string(ch.k) +
                        ", " + std::to_string(ch.l) + ")");
        Matrix v = found->second;
        for (const auto& f : ch.factors)  // forward order = adjoint of the chain
            v = chebyshev_apply(sys.cheb[static_cast<std::size_t>(f.first)],
                                scaled[static_cast<std::size_t>(f.second)], v);
        if (out.size() == 0)
            out = std::move(v);
        else
            out += v;
    }
    return out;
}

double channel_filter_value(const FrameletSystem& sys, int k, int l, double lambda) {
    const Channel& ch = sys.channel(k, l);
    double value = 1.0;
    for (const auto& f : ch.factors) {
        const double xi = lambda * std::pow(2.0, -static_cast<double>(sys.dilation + f.second));
        value *= f.first == 0 ? sys.bank.alpha_hat(xi)
                              : sys.bank.beta_hats[static_cast<std::size_t>(f.first - 1)](xi);
    }
    return value;
}

namespace {

struct ExactBasis {
    FrameletSystem sys;          // channel chains + H; Chebyshev part unused
    Matrix eigvecs;
    Vector eigvals;
};

ExactBasis exact_basis(const Graph& g, LaplacianKind kind, int levels,
                       const FilterBank& bank, LevelSchedule schedule, int cap) {
    if (g.n > cap)
        throw Error("exact framelet oracle: graph size " + std::to_string(g.n) +
                    " exceeds cap " + std::to_string(cap));
    ExactBasis basis;
    basis.sys.bank = bank;
    basis.sys.levels = levels;
    basis.sys.kind = kind;
    basis.sys.schedule = schedule;
    basis.sys.lap = laplacian(g, kind);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(basis.sys.lap));
    if (eig.info() != Eigen::Success) throw Error("exact framelet oracle: eigensolver failed");
    basis.eigvals = eig.eigenvalues().cwiseMax(0.0);  // clamp -0-level noise
    basis.eigvecs = eig.eigenvectors();
    basis.sys.lambda_max = basis.eigvals.size() > 0 ? basis.eigvals.maxCoeff() : 0.0;
    basis.sys.dilation = dilation_scale(basis.sys.lambda_max);
    basis.sys.channels = make_channels(bank.high_pass_count(), levels, schedule);
    return basis;
}

}  // namespace

Coefficients exact_framelet_decompose(const Graph& g, LaplacianKind kind, int levels,
                                      const Matrix& x, const FilterBank& bank,
                                      LevelSchedule schedule, int cap) {
    if (x.rows() != g.n) throw Error("exact_framelet_decompose: dimension mismatch");
    const ExactBasis basis = exact_basis(g, kind, levels, bank, schedule, cap);
    const Matrix spectral = basis.eigvecs.transpose() * x;
    Coefficients q;
    for (const Channel& ch : basis.sys.channels) {
        Vector response(basis.eigvals.size());
        for (Eigen::Index i = 0; i < basis.eigvals.size(); ++i)
            response[i] = channel_filter_value(basis.sys, ch.k, ch.l, basis.eigvals[i]);
        q.emplace(ChannelKey{ch.k, ch.l}, basis.eigvecs * (response.asDiagonal() * spectral));
    }
    return q;
}

Matrix exact_framelet_reconstruct(const Graph& g, LaplacianKind kind, int levels,
                                  const Coefficients& q, const FilterBank& bank,
                                  LevelSchedule schedule, int cap) {
    const ExactBasis basis = exact_basis(g, kind, levels, bank, schedule, cap);
    if (q.size() != basis.sys.channels.size())
        throw Error("exact_framelet_reconstruct: coefficient keys do not match the index set");
    Matrix out;
    for (const Channel& ch : basis.sys.channels) {
        const auto found = q.find(ChannelKey{ch.k, ch.l});
        if (found == q.end()) throw Error("exact_framelet_reconstruct: missing channel");
        Vector response(basis.eigvals.size());
        for (Eigen::Index i = 0; i < basis.eigvals.size(); ++i)
            response[i] = channel_filter_value(basis.sys, ch.k, ch.l, basis.eigvals[i]);
        Matrix v = basis.eigvecs *
                   (response.asDiagonal() * (basis.eigvecs.transpose() * found->second));
        if (out.size() == 0)
            out = std::move(v);
        else
            out += v;
    }
    return out;
}

void save_coefficients(const std::string& dir, const FrameletSystem& sys,
                       const Coefficients& q) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("save_coefficients: cannot create " + dir);
    std::ostringstream meta;
    meta << "high_pass_count " << sys.bank.high_pass_count() << "\n"
         << "levels " << sys.levels << "\n"
         << "cheb_order " << sys.cheb_order << "\n"
         << "dilation " << sys.dilation << "\n"
         << "laplacian " << (sys.kind == LaplacianKind::Normalized ? "normalized" : "unnormalized")
         << "\n"
         << "schedule " << (sys.schedule == LevelSchedule::Tight ? "tight" : "shifted") << "\n";
    write_text_file((fs::path(dir) / "channels.meta").string(), meta.str());
    for (const auto& [key, mat] : q) {
        std::ostringstream name;
        name << "channel_" << key.first << "_" << key.second << ".csv";
        write_matrix((fs::path(dir) / name.str()).string(), mat);
    }
}

Coefficients load_coefficients(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(fs::path(dir) / "channels.meta"))
        throw IoError("load_coefficients: missing metadata in " + dir);
    Coefficients q;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        int k = 0, l = 0;
        if (std::sscanf(name.c_str(), "channel_%d_%d.csv", &k, &l) == 2)
            q.emplace(ChannelKey{k, l}, read_matrix(entry.path().string()));
    }
    if (q.empty()) throw IoError("load_coefficients: no channel files in " + dir);
    return q;
}

}  // namespace gdn
