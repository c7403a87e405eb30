// Command-line harness: graph/feature I/O, contamination, the four solvers,
// offline re-validation and the seeded benchmark matrix.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gdn/ablations.hpp"
#include "gdn/io.hpp"
#include "gdn/perturb.hpp"
#include "gdn/solver.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;
using namespace gdn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitIoError = 2;

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

fs::path resolve_out_dir(std::string out) {
    if (out.empty()) {
        if (const char* env = std::getenv("GDN_OUT_DIR")) out = env;
    }
    if (out.empty()) throw Error("no output directory: pass --out or set GDN_OUT_DIR");
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

NoiseSpec parse_feature_noise(const std::string& text) {
    NoiseSpec spec;
    if (text == "none" || text.empty()) {
        spec.feature_kind = NoiseSpec::FeatureKind::None;
        return spec;
    }
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const double value = colon == std::string::npos ? 0.0 : std::stod(text.substr(colon + 1));
    if (kind == "gaussian") {
        spec.feature_kind = NoiseSpec::FeatureKind::Gaussian;
        spec.sigma = value;
    } else if (kind == "flip") {
        spec.feature_kind = NoiseSpec::FeatureKind::BinaryFlip;
        spec.flip_ratio = value;
    } else {
        throw Error("unknown feature noise '" + kind + "' (use gaussian:SIGMA, flip:P, none)");
    }
    return spec;
}

struct FrameletOptions {
    int levels = 1;
    int cheb_order = 20;
    std::string laplacian = "normalized";
    std::string schedule = "tight";

    LaplacianKind kind() const {
        if (laplacian == "normalized") return LaplacianKind::Normalized;
        if (laplacian == "unnormalized") return LaplacianKind::Unnormalized;
        throw Error("unknown laplacian kind: " + laplacian);
    }
    LevelSchedule level_schedule() const {
        if (schedule == "tight") return LevelSchedule::Tight;
        if (schedule == "shifted") return LevelSchedule::Shifted;
        throw Error("unknown schedule: " + schedule);
    }
    Json to_json() const {
        return Json{{"levels", levels},
                    {"cheb_order", cheb_order},
                    {"laplacian", laplacian},
                    {"schedule", schedule}};
    }
};

struct DenoiseArgs {
    std::string solver = "dot";
    std::string edges;
    std::string features;
    bool header = false;
    std::string config_path;
    std::string out;
    FrameletOptions framelet;
    double alpha = 0.1;

    // flag overrides; only applied when the user passed them
    std::optional<double> lambda1, lambda2, nu0, rho, tol;
    std::optional<int> max_iter;
    std::optional<std::string> u_solve, e_threshold;
    std::optional<std::vector<double>> mu_init, mu_max;
};

SolverConfig effective_config(const DenoiseArgs& args) {
    SolverConfig cfg;
    if (!args.config_path.empty())
        cfg = solver_config_from_json(read_text_file(args.config_path));
    if (args.lambda1) cfg.lambda1 = *args.lambda1;
    if (args.lambda2) cfg.lambda2 = *args.lambda2;
    if (args.nu0) cfg.nu0 = *args.nu0;
    if (args.rho) cfg.rho = *args.rho;
    if (args.tol) cfg.tol_residual = *args.tol;
    if (args.max_iter) cfg.max_iter = *args.max_iter;
    if (args.mu_init) {
        if (args.mu_init->size() != 4) throw Error("--mu-init needs four values");
        for (int i = 0; i < 4; ++i)
            cfg.mu_init[static_cast<std::size_t>(i)] = (*args.mu_init)[static_cast<std::size_t>(i)];
    }
    if (args.mu_max) {
        if (args.mu_max->size() != 4) throw Error("--mu-max needs four values");
        for (int i = 0; i < 4; ++i)
            cfg.mu_max[static_cast<std::size_t>(i)] = (*args.mu_max)[static_cast<std::size_t>(i)];
    }
    if (args.u_solve) {
        SolverConfig probe = solver_config_from_json("{\"u_solve\": \"" + *args.u_solve + "\"}");
        cfg.u_solve = probe.u_solve;
    }
    if (args.e_threshold) {
        SolverConfig probe =
            solver_config_from_json("{\"e_threshold\": \"" + *args.e_threshold + "\"}");
        cfg.e_threshold = probe.e_threshold;
    }
    cfg.validate();
    return cfg;
}

struct DenoiseOutcome {
    Matrix u;
    std::optional<Matrix> z;
    DiagnosticsTrace trace;
    Json kkt;  // final KKT block when the solver defines one
    double objective = std::numeric_limits<double>::quiet_NaN();
};

DenoiseOutcome run_solver(const std::string& solver, const Graph& g, const Matrix& x,
                          const SolverConfig& cfg, const FrameletOptions& fopt, double alpha) {
    DenoiseOutcome out;
    if (solver == "dot") {
        const FrameletSystem sys =
            build_framelet_system(g, fopt.kind(), fopt.levels, fopt.cheb_order,
                                  haar_filter_bank(), fopt.level_schedule());
        DotResult res = solve(g, sys, x, cfg);
        out.u = res.u;
        out.z = res.z;
        out.trace = std::move(res.trace);
        if (!out.trace.records.empty()) {
            const IterationRecord& last = out.trace.records.back();
            out.objective = last.objective;
            out.kkt = Json{{"r1", last.r1},
                           {"r2", last.r2},
                           {"r3", last.r3},
                           {"r4", last.r4},
                           {"dual_max", last.kkt_dual_max},
                           {"stationarity", last.kkt_stationarity}};
        }
    } else if (solver == "node-admm") {
        const FrameletSystem sys =
            build_framelet_system(g, fopt.kind(), fopt.levels, fopt.cheb_order,
                                  haar_filter_bank(), fopt.level_schedule());
        NodeAdmmResult res = node_admm_solve(g, sys, x, cfg);
        out.u = res.u;
        out.trace = std::move(res.trace);
        if (!out.trace.records.empty()) {
            out.objective = out.trace.records.back().objective;
            out.kkt = Json{{"r2", out.trace.records.back().r2}};
        }
    } else if (solver == "edge-admm") {
        EdgeAdmmResult res = edge_admm_solve(g, x, cfg);
        out.u = res.u;
        out.z = res.z;
        out.trace = std::move(res.trace);
        if (!out.trace.records.empty()) {
            const IterationRecord& last = out.trace.records.back();
            out.objective = last.objective;
            out.kkt = Json{{"r1", last.r1},
                           {"r3", last.r3},
                           {"r4", last.r4},
                           {"dual_max", last.kkt_dual_max},
                           {"stationarity", last.kkt_stationarity}};
        }
    } else if (solver == "tv") {
        out.u = tv_smooth(g, x, alpha, SmootherMode::Exact);
        IterationRecord rec;
        rec.iter = 1;
        const SpMat l = laplacian(g, LaplacianKind::Unnormalized);
        rec.objective = 0.5 * alpha * dirichlet_energy(out.u, l) +
                        0.5 * graph_norm(out.u - x, g.degrees, GraphNorm::L2GSquared);
        out.trace.records.push_back(rec);
        out.objective = rec.objective;
    } else {
        throw Error("unknown solver '" + solver + "' (dot, node-admm, edge-admm, tv)");
    }
    return out;
}

int cmd_perturb(const std::string& edges_path, const std::string& features_path, bool header,
                const std::string& feature_noise, double edge_ratio, std::uint64_t seed,
                const std::string& out) {
    const fs::path dir = resolve_out_dir(out);
    const Matrix x = read_matrix(features_path, header);
    const Graph g = read_edge_list(edges_path, static_cast<int>(x.rows()));

    NoiseSpec spec = parse_feature_noise(feature_noise);
    spec.structure_ratio = edge_ratio;
    spec.seed = seed;
    spec.validate();

    // One stream drives both legs: features first, then structure.
    Rng rng(spec.seed);
    const Matrix noisy = perturb_features(x, spec, rng);
    const Graph noisy_g = perturb_edges(g, spec.structure_ratio, rng);

    write_matrix((dir / "features.csv").string(), noisy);
    write_edge_list((dir / "edges.txt").string(), noisy_g);

    Json prov;
    prov["noise"] = Json::parse(noise_spec_to_json(spec));
    prov["input_edges"] = {{"path", edges_path}, {"fnv1a64", hash_hex(fnv1a64_file(edges_path))}};
    prov["input_features"] = {{"path", features_path},
                              {"fnv1a64", hash_hex(fnv1a64_file(features_path))}};
    write_text_file((dir / "provenance.json").string(), prov.dump(2) + "\n");
    std::cout << "perturbed graph written to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_denoise(const DenoiseArgs& args) {
    const fs::path dir = resolve_out_dir(args.out);
    const SolverConfig cfg = effective_config(args);  // validate before compute
    const Matrix x = read_matrix(args.features, args.header);
    const Graph g = read_edge_list(args.edges, static_cast<int>(x.rows()));

    const auto started = std::chrono::steady_clock::now();
    const DenoiseOutcome out = run_solver(args.solver, g, x, cfg, args.framelet, args.alpha);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    write_matrix((dir / "U.csv").string(), out.u);
    if (out.z) write_matrix((dir / "Z.csv").string(), *out.z);
    write_trace_csv((dir / "trace.csv").string(), out.trace);

    Json summary;
    summary["solver"] = args.solver;
    summary["config"] = Json::parse(solver_config_to_json(cfg));
    summary["framelet"] = args.framelet.to_json();
    if (args.solver == "tv") summary["alpha"] = args.alpha;
    summary["inputs"] = {
        {"edges", {{"path", fs::absolute(args.edges).string()},
                   {"fnv1a64", hash_hex(fnv1a64_file(args.edges))}}},
        {"features", {{"path", fs::absolute(args.features).string()},
                      {"fnv1a64", hash_hex(fnv1a64_file(args.features))},
                      {"header", args.header}}}};
    summary["n"] = g.n;
    summary["d"] = out.u.cols();
    if (!std::isnan(out.objective)) summary["objective"] = out.objective;
    if (!out.kkt.is_null()) summary["kkt"] = out.kkt;
    summary["wall_time_s"] = wall_s;
    write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << "run artifacts written to " << dir.string() << "\n";
    return kExitOk;
}

struct CheckRow {
    std::string name;
    bool passed;
    std::string detail;
};

int cmd_check(const std::string& run_dir, double tol_flag) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "summary.json"))
        throw IoError("no summary.json under " + run_dir);
    Json summary;
    try {
        summary = Json::parse(read_text_file((dir / "summary.json").string()));
    } catch (const Json::exception& e) {
        throw IoError(std::string("corrupted summary.json: ") + e.what());
    }

    std::vector<CheckRow> rows;
    auto record = [&rows](const std::string& name, bool ok, const std::string& detail) {
        rows.push_back({name, ok, detail});
    };

    const std::string solver = summary.at("solver").get<std::string>();
    const SolverConfig cfg = solver_config_from_json(summary.at("config").dump());
    FrameletOptions fopt;
    if (summary.contains("framelet")) {
        fopt.levels = summary["framelet"].value("levels", 1);
        fopt.cheb_order = summary["framelet"].value("cheb_order", 20);
        fopt.laplacian = summary["framelet"].value("laplacian", "normalized");
        fopt.schedule = summary["framelet"].value("schedule", "tight");
    }
    const double alpha = summary.value("alpha", 0.1);
    const bool header = summary["inputs"]["features"].value("header", false);
    const std::string edges_path = summary["inputs"]["edges"]["path"].get<std::string>();
    const std::string features_path = summary["inputs"]["features"]["path"].get<std::string>();

    const Matrix x = read_matrix(features_path, header);
    const Graph g = read_edge_list(edges_path, static_cast<int>(x.rows()));
    // The residual gate defaults to the tolerance the run itself declared.
    const double tol = tol_flag > 0.0 ? tol_flag : cfg.tol_residual;

    // Input provenance.
    record("input-hash-edges",
           hash_hex(fnv1a64_file(edges_path)) ==
               summary["inputs"]["edges"]["fnv1a64"].get<std::string>(),
           "edge list bytes match the recorded hash");
    record("input-hash-features",
           hash_hex(fnv1a64_file(features_path)) ==
               summary["inputs"]["features"]["fnv1a64"].get<std::string>(),
           "feature bytes match the recorded hash");

    // Frame tightness: the bank identity always, the exact-path round trip at
    // oracle scale for the framelet-based solvers.
    {
        const double defect = haar_filter_bank().tightness_defect();
        record("frame-tightness", defect <= 1e-12,
               "bank tightness defect " + std::to_string(defect));
        if (g.n <= 200 && (solver == "dot" || solver == "node-admm") &&
            fopt.level_schedule() == LevelSchedule::Tight) {
            const Matrix probe = Matrix::Ones(g.n, 1);
            const Coefficients q =
                exact_framelet_decompose(g, fopt.kind(), fopt.levels, probe,
                                         haar_filter_bank(), fopt.level_schedule());
            const Matrix back =
                exact_framelet_reconstruct(g, fopt.kind(), fopt.levels, q,
                                           haar_filter_bank(), fopt.level_schedule());
            const double err = (back - probe).norm() / probe.norm();
            record("frame-identity", err <= 1e-10,
                   "exact-path round trip error " + std::to_string(err));
        }
    }

    // Deterministic re-run must reproduce the stored artifacts.
    const DenoiseOutcome redo = run_solver(solver, g, x, cfg, fopt, alpha);
    {
        const Matrix u_stored = read_matrix((dir / "U.csv").string());
        const double du = (u_stored - redo.u).cwiseAbs().maxCoeff();
        record("recompute-u", du <= 1e-12, "max |U - recomputed U| = " + std::to_string(du));
        if (redo.z && fs::exists(dir / "Z.csv")) {
            const Matrix z_stored = read_matrix((dir / "Z.csv").string());
            const double dz = (z_stored - *redo.z).cwiseAbs().maxCoeff();
            record("recompute-z", dz <= 1e-12,
                   "max |Z - recomputed Z| = " + std::to_string(dz));
        }
    }

    // Trace: mu columns never decrease; final residuals within tolerance.
    {
        const DiagnosticsTrace trace = read_trace_csv((dir / "trace.csv").string());
        bool monotone = true;
        for (std::size_t t = 1; t < trace.records.size(); ++t)
            for (std::size_t i = 0; i < 4; ++i) {
                const double prev = trace.records[t - 1].mu[i];
                const double curr = trace.records[t].mu[i];
                if (!std::isnan(prev) && !std::isnan(curr) && curr < prev) monotone = false;
            }
        record("mu-monotone", monotone, "penalty parameters never decrease");

        if (!trace.records.empty() && (solver == "dot" || solver == "edge-admm")) {
            const IterationRecord& last = trace.records.back();
            const double worst =
                std::max({std::isnan(last.r1) ? 0.0 : last.r1, std::isnan(last.r3) ? 0.0 : last.r3,
                          std::isnan(last.r4) ? 0.0 : last.r4});
            record("kkt-primal", worst <= tol,
                   "final primal residual " + std::to_string(worst) + " vs tol " +
                       std::to_string(tol));
            const double dual = std::isnan(last.kkt_dual_max) ? 0.0 : last.kkt_dual_max;
            record("kkt-dual", dual <= tol, "dual surrogate " + std::to_string(dual) +
                                                " vs tol " + std::to_string(tol));
        }
    }

    bool all_ok = true;
    std::printf("%-22s %-6s %s\n", "check", "result", "detail");
    for (const CheckRow& row : rows) {
        all_ok = all_ok && row.passed;
        std::printf("%-22s %-6s %s\n", row.name.c_str(), row.passed ? "pass" : "FAIL",
                    row.detail.c_str());
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

struct BenchScenario {
    std::vector<int> sizes{50, 50};
    double p_in = 0.2;
    double p_out = 0.02;
    std::vector<double> block_values{1.0, -1.0};
    int d = 4;
    std::uint64_t graph_seed = 7;
    NoiseSpec noise;
    std::vector<std::string> solvers{"dot", "node-admm", "edge-admm", "tv"};
    SolverConfig config;
    FrameletOptions framelet;
    double alpha = 0.1;

    static BenchScenario defaults() {
        BenchScenario s;
        s.noise.feature_kind = NoiseSpec::FeatureKind::Gaussian;
        s.noise.sigma = 0.5;
        s.noise.structure_ratio = 0.25;
        s.noise.seed = 7;
        s.config.nu0 = 1.0;
        s.config.max_iter = 10;
        s.framelet.levels = 2;
        s.framelet.cheb_order = 16;
        return s;
    }
};

BenchScenario load_scenario(const std::string& path) {
    BenchScenario s = BenchScenario::defaults();
    if (path.empty()) return s;
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::exception& e) {
        throw IoError(std::string("scenario parse error: ") + e.what());
    }
    if (j.contains("sizes")) s.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("p_in")) s.p_in = j["p_in"].get<double>();
    if (j.contains("p_out")) s.p_out = j["p_out"].get<double>();
    if (j.contains("block_values"))
        s.block_values = j["block_values"].get<std::vector<double>>();
    if (j.contains("d")) s.d = j["d"].get<int>();
    if (j.contains("graph_seed")) s.graph_seed = j["graph_seed"].get<std::uint64_t>();
    if (j.contains("noise")) s.noise = noise_spec_from_json(j["noise"].dump());
    if (j.contains("solvers")) s.solvers = j["solvers"].get<std::vector<std::string>>();
    if (j.contains("config")) s.config = solver_config_from_json(j["config"].dump());
    if (j.contains("framelet")) {
        s.framelet.levels = j["framelet"].value("levels", s.framelet.levels);
        s.framelet.cheb_order = j["framelet"].value("cheb_order", s.framelet.cheb_order);
        s.framelet.laplacian = j["framelet"].value("laplacian", s.framelet.laplacian);
        s.framelet.schedule = j["framelet"].value("schedule", s.framelet.schedule);
    }
    if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
    if (s.sizes.size() != s.block_values.size())
        throw Error("scenario: sizes and block_values must have matching lengths");
    return s;
}

int cmd_bench(const std::string& scenario_path, const std::string& out, int jobs) {
    const BenchScenario s = load_scenario(scenario_path);
    const fs::path dir = resolve_out_dir(out);

    Rng graph_rng(s.graph_seed);
    const Graph clean_g = sbm_generate(s.sizes, s.p_in, s.p_out, graph_rng);
    const Matrix clean_x = piecewise_signal(s.sizes, s.block_values, s.d);

    Rng noise_rng(s.noise.seed);
    const Matrix noisy_x = perturb_features(clean_x, s.noise, noise_rng);
    const Graph noisy_g = perturb_edges(clean_g, s.noise.structure_ratio, noise_rng);

    const double mse_clean = 0.0;
    const double mse_noisy =
        (noisy_x - clean_x).squaredNorm() / static_cast<double>(clean_x.size());

    struct Cell {
        std::string solver;
        double mse_denoised = 0.0;
        std::string error;
    };
    std::vector<Cell> cells(s.solvers.size());
    auto run_cell = [&](std::size_t idx) {
        cells[idx].solver = s.solvers[idx];
        try {
            const DenoiseOutcome out_cell =
                run_solver(s.solvers[idx], noisy_g, noisy_x, s.config, s.framelet, s.alpha);
            cells[idx].mse_denoised =
                (out_cell.u - clean_x).squaredNorm() / static_cast<double>(clean_x.size());
        } catch (const std::exception& e) {
            cells[idx].error = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        // Independent cells; wave scheduling keeps at most `jobs` threads alive.
        std::size_t next = 0;
        while (next < cells.size()) {
            std::vector<std::thread> pool;
            for (int w = 0; w < jobs && next < cells.size(); ++w, ++next)
                pool.emplace_back([&cells, &run_cell, idx = next] {
                    (void)cells;
                    run_cell(idx);
                });
            for (auto& th : pool) th.join();
        }
    }

    std::string csv = "solver,mse_noise_free,mse_noisy,mse_denoised\n";
    for (const Cell& cell : cells) {
        if (!cell.error.empty()) throw Error("bench cell " + cell.solver + ": " + cell.error);
        char line[160];
        std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g\n", cell.solver.c_str(),
                      mse_clean, mse_noisy, cell.mse_denoised);
        csv += line;
    }
    write_text_file((dir / "bench.csv").string(), csv);
    std::cout << csv;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph feature/structure denoising toolkit"};
    app.require_subcommand(1);

    // perturb
    auto* perturb = app.add_subcommand("perturb", "contaminate features and edges");
    std::string p_edges, p_features, p_noise = "none", p_out;
    bool p_header = false;
    double p_ratio = 0.0;
    std::uint64_t p_seed = 0;
    perturb->add_option("--edges", p_edges, "edge list file")->required();
    perturb->add_option("--features", p_features, "feature matrix file")->required();
    perturb->add_flag("--header", p_header, "feature file has a header row");
    perturb->add_option("--feature-noise", p_noise, "gaussian:SIGMA | flip:P | none");
    perturb->add_option("--edge-ratio", p_ratio, "structure noise ratio in [0, 1)");
    perturb->add_option("--seed", p_seed, "64-bit RNG seed");
    perturb->add_option("--out", p_out, "output directory (or GDN_OUT_DIR)");

    // denoise
    auto* denoise = app.add_subcommand("denoise", "recover clean features and structure");
    DenoiseArgs d;
    double d_l1 = 0, d_l2 = 0, d_nu0 = 0, d_rho = 0, d_tol = 0;
    int d_iter = 0;
    std::string d_usolve, d_ethr;
    std::vector<double> d_mu_init, d_mu_max;
    denoise->add_option("--solver", d.solver, "dot | node-admm | edge-admm | tv");
    denoise->add_option("--edges", d.edges, "edge list file")->required();
    denoise->add_option("--features", d.features, "feature matrix file")->required();
    denoise->add_flag("--header", d.header, "feature file has a header row");
    denoise->add_option("--config", d.config_path, "solver config JSON");
    denoise->add_option("--out", d.out, "output directory (or GDN_OUT_DIR)");
    denoise->add_option("--levels", d.framelet.levels, "framelet levels L");
    denoise->add_option("--cheb-order", d.framelet.cheb_order, "Chebyshev order m");
    denoise->add_option("--laplacian", d.framelet.laplacian, "normalized | unnormalized");
    denoise->add_option("--schedule", d.framelet.schedule, "tight | shifted");
    denoise->add_option("--alpha", d.alpha, "tv smoothing weight");
    auto* o_l1 = denoise->add_option("--lambda1", d_l1, "residual group-norm weight");
    auto* o_l2 = denoise->add_option("--lambda2", d_l2, "fidelity weight");
    auto* o_nu0 = denoise->add_option("--nu0", d_nu0, "framelet sparsity scale");
    auto* o_rho = denoise->add_option("--rho", d_rho, "penalty growth factor");
    auto* o_tol = denoise->add_option("--tol", d_tol, "residual tolerance");
    auto* o_iter = denoise->add_option("--max-iter", d_iter, "ADMM sweeps");
    auto* o_us = denoise->add_option("--u-solve", d_usolve, "cholesky | cg | taylor");
    auto* o_et = denoise->add_option("--e-threshold", d_ethr, "plain | degree-weighted");
    auto* o_mi = denoise->add_option("--mu-init", d_mu_init, "four initial penalties")
                     ->expected(4);
    auto* o_mm = denoise->add_option("--mu-max", d_mu_max, "four penalty caps")->expected(4);

    // check
    auto* check = app.add_subcommand("check", "re-validate a finished run directory");
    std::string c_run;
    double c_tol = -1.0;
    check->add_option("--run", c_run, "run directory")->required();
    check->add_option("--tol", c_tol, "primal residual tolerance (defaults to the run's own)");

    // bench
    auto* bench = app.add_subcommand("bench", "seeded scenario matrix");
    std::string b_scenario, b_out;
    int b_jobs = 1;
    bench->add_option("--scenario", b_scenario, "scenario JSON (defaults built in)");
    bench->add_option("--out", b_out, "output directory (or GDN_OUT_DIR)");
    bench->add_option("--jobs", b_jobs, "parallel scenario cells");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*perturb)
            return cmd_perturb(p_edges, p_features, p_header, p_noise, p_ratio, p_seed, p_out);
        if (*denoise) {
            if (o_l1->count()) d.lambda1 = d_l1;
            if (o_l2->count()) d.lambda2 = d_l2;
            if (o_nu0->count()) d.nu0 = d_nu0;
            if (o_rho->count()) d.rho = d_rho;
            if (o_tol->count()) d.tol = d_tol;
            if (o_iter->count()) d.max_iter = d_iter;
            if (o_us->count()) d.u_solve = d_usolve;
            if (o_et->count()) d.e_threshold = d_ethr;
            if (o_mi->count()) d.mu_init = d_mu_init;
            if (o_mm->count()) d.mu_max = d_mu_max;
            return cmd_denoise(d);
        }
        if (*check) return cmd_check(c_run, c_tol);
        if (*bench) return cmd_bench(b_scenario, b_out, b_jobs);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}
