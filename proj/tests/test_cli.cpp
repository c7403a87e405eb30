#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gdn/io.hpp"
#include "gdn/perturb.hpp"
#include "test_util.hpp"

using namespace gdn;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GDN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct CliFixture {
    fs::path root;

    CliFixture() {
        root = fs::temp_directory_path() / "gdn_cli_test";
        fs::remove_all(root);
        fs::create_directories(root);

        Rng rng(5);
        const Graph g = sbm_generate({10, 10}, 0.4, 0.05, rng);
        const Matrix x = piecewise_signal({10, 10}, {1.0, -1.0}, 2);
        write_edge_list((root / "g.txt").string(), g);
        write_matrix((root / "x.csv").string(), x);
    }
    ~CliFixture() { fs::remove_all(root); }

    std::string edges() const { return (root / "g.txt").string(); }
    std::string features() const { return (root / "x.csv").string(); }
};

}  // namespace

TEST_CASE("cli perturb writes outputs and a provenance sidecar") {
    CliFixture fx;
    const fs::path out = fx.root / "noisy";
    const int rc = run_cli("perturb --edges " + fx.edges() + " --features " + fx.features() +
                           " --feature-noise gaussian:0.25 --edge-ratio 0.25 --seed 7 --out " +
                           out.string());
    CHECK(rc == 0);
    CHECK(fs::exists(out / "edges.txt"));
    CHECK(fs::exists(out / "features.csv"));
    CHECK(fs::exists(out / "provenance.json"));

    const Graph noisy = read_edge_list((out / "edges.txt").string(), 20);
    const Graph original = read_edge_list(fx.edges(), 20);
    CHECK(noisy.edge_count() == original.edge_count());
}

TEST_CASE("cli perturb with zero ratios reproduces the input edge list") {
    CliFixture fx;
    const fs::path out = fx.root / "null_noise";
    const int rc = run_cli("perturb --edges " + fx.edges() + " --features " + fx.features() +
                           " --feature-noise none --edge-ratio 0 --seed 3 --out " + out.string());
    CHECK(rc == 0);
    CHECK(read_text_file((out / "edges.txt").string()) == read_text_file(fx.edges()));
}

TEST_CASE("cli perturb missing input exits 2") {
    CliFixture fx;
    const int rc = run_cli("perturb --edges /no/such/file --features " + fx.features() +
                           " --out " + (fx.root / "x").string());
    CHECK(rc == 2);
}

TEST_CASE("cli denoise produces the artifact set and bitwise-identical reruns") {
    CliFixture fx;
    const std::string common = "denoise --solver dot --edges " + fx.edges() + " --features " +
                               fx.features() +
                               " --nu0 0.5 --max-iter 5 --levels 2 --cheb-order 12 --out ";
    const fs::path run1 = fx.root / "run1";
    const fs::path run2 = fx.root / "run2";
    CHECK(run_cli(common + run1.string()) == 0);
    CHECK(run_cli(common + run2.string()) == 0);

    for (const char* name : {"U.csv", "Z.csv", "trace.csv", "summary.json"})
        CHECK(fs::exists(run1 / name));
    CHECK(read_text_file((run1 / "trace.csv").string()) ==
          read_text_file((run2 / "trace.csv").string()));
    CHECK(read_text_file((run1 / "U.csv").string()) ==
          read_text_file((run2 / "U.csv").string()));
}

TEST_CASE("cli denoise with max-iter 0 echoes the input features") {
    CliFixture fx;
    const fs::path run = fx.root / "noop";
    CHECK(run_cli("denoise --solver dot --edges " + fx.edges() + " --features " +
                  fx.features() + " --max-iter 0 --out " + run.string()) == 0);
    const Matrix u = read_matrix((run / "U.csv").string());
    const Matrix x = read_matrix(fx.features());
    CHECK((u - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cli denoise artifact sets per solver") {
    CliFixture fx;

    const fs::path tv = fx.root / "tv";
    CHECK(run_cli("denoise --solver tv --alpha 0.1 --edges " + fx.edges() + " --features " +
                  fx.features() + " --out " + tv.string()) == 0);
    CHECK(fs::exists(tv / "U.csv"));
    CHECK(fs::exists(tv / "trace.csv"));
    CHECK(!fs::exists(tv / "Z.csv"));

    const fs::path node = fx.root / "node";
    CHECK(run_cli("denoise --solver node-admm --nu0 0.5 --max-iter 3 --edges " + fx.edges() +
                  " --features " + fx.features() + " --out " + node.string()) == 0);
    CHECK(fs::exists(node / "U.csv"));
    CHECK(!fs::exists(node / "Z.csv"));
    // absent residual columns stay empty in the trace
    const DiagnosticsTrace nt = read_trace_csv((node / "trace.csv").string());
    REQUIRE(nt.records.size() == 3);
    CHECK(std::isnan(nt.records[0].r1));
    CHECK(!std::isnan(nt.records[0].r2));

    const fs::path edge = fx.root / "edge";
    CHECK(run_cli("denoise --solver edge-admm --max-iter 3 --edges " + fx.edges() +
                  " --features " + fx.features() + " --out " + edge.string()) == 0);
    CHECK(fs::exists(edge / "Z.csv"));
    const DiagnosticsTrace et = read_trace_csv((edge / "trace.csv").string());
    REQUIRE(et.records.size() == 3);
    CHECK(std::isnan(et.records[0].r2));
    CHECK(!std::isnan(et.records[0].r1));
}

TEST_CASE("cli denoise rejects a bad config before computing") {
    CliFixture fx;
    write_text_file((fx.root / "bad.json").string(), "{\"rho\": 0.2}");
    const int rc = run_cli("denoise --edges " + fx.edges() + " --features " + fx.features() +
                           " --config " + (fx.root / "bad.json").string() + " --out " +
                           (fx.root / "bad_run").string());
    CHECK(rc == 1);
    CHECK(!fs::exists(fx.root / "bad_run" / "U.csv"));
}

TEST_CASE("cli check passes on a healthy run and spots tampering") {
    CliFixture fx;
    const fs::path run = fx.root / "checked";
    REQUIRE(run_cli("denoise --solver dot --edges " + fx.edges() + " --features " +
                    fx.features() + " --nu0 0.5 --rho 1.6 --max-iter 20 --out " +
                    run.string()) == 0);
    CHECK(run_cli("check --run " + run.string()) == 0);

    // Tamper with U: the deterministic recompute must flag it.
    Matrix u = read_matrix((run / "U.csv").string());
    u(0, 0) += 0.5;
    write_matrix((run / "U.csv").string(), u);
    CHECK(run_cli("check --run " + run.string()) == 1);

    CHECK(run_cli("check --run /no/such/run") == 2);
}

TEST_CASE("cli check flags a decreasing mu column") {
    CliFixture fx;
    const fs::path run = fx.root / "mu_tamper";
    REQUIRE(run_cli("denoise --solver dot --edges " + fx.edges() + " --features " +
                    fx.features() + " --nu0 0.5 --rho 1.6 --max-iter 20 --out " +
                    run.string()) == 0);
    DiagnosticsTrace trace = read_trace_csv((run / "trace.csv").string());
    REQUIRE(trace.records.size() == 20);
    trace.records[19].mu[0] = trace.records[0].mu[0] / 2.0;
    write_trace_csv((run / "trace.csv").string(), trace);
    // mu tampering also breaks nothing else, so the failure names mu-monotone.
    CHECK(run_cli("check --run " + run.string()) == 1);
}

namespace {

struct BenchRow {
    std::string solver;
    double mse_noise_free = 0, mse_noisy = 0, mse_denoised = 0;
};

std::vector<BenchRow> parse_bench(const std::string& csv) {
    std::vector<BenchRow> rows;
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        BenchRow row;
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1),
                   c3 = line.find(',', c2 + 1);
        row.solver = line.substr(0, c1);
        row.mse_noise_free = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        row.mse_noisy = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        row.mse_denoised = std::stod(line.substr(c3 + 1));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("cli bench emits the scenario matrix and the dot row improves") {
    CliFixture fx;
    const fs::path out = fx.root / "bench";
    write_text_file((fx.root / "scenario.json").string(),
                    "{\"sizes\": [10, 10], \"block_values\": [1, -1], \"d\": 2, "
                    "\"config\": {\"nu0\": 2.0, \"rho\": 1.5, "
                    "\"mu_init\": [9, 9, 9, 30], \"max_iter\": 8}, "
                    "\"framelet\": {\"levels\": 1, \"cheb_order\": 10}}");
    CHECK(run_cli("bench --scenario " + (fx.root / "scenario.json").string() + " --jobs 2 --out " +
                  out.string()) == 0);
    const std::string csv = read_text_file((out / "bench.csv").string());
    CHECK(csv.find("solver,mse_noise_free,mse_noisy,mse_denoised") == 0);
    const auto rows = parse_bench(csv);
    REQUIRE(rows.size() == 4);  // dot, node-admm, edge-admm, tv
    CHECK(rows[0].solver == "dot");
    CHECK(rows[0].mse_denoised < rows[0].mse_noisy);  // improvement ratio < 1

    // jobs > 1 and jobs = 1 must agree cell by cell
    const fs::path serial = fx.root / "bench_serial";
    CHECK(run_cli("bench --scenario " + (fx.root / "scenario.json").string() + " --out " +
                  serial.string()) == 0);
    CHECK(read_text_file((serial / "bench.csv").string()) == csv);
}

TEST_CASE("cli bench with a zero-noise scenario degenerates cleanly") {
    CliFixture fx;
    const fs::path out = fx.root / "bench0";
    write_text_file((fx.root / "scenario.json").string(),
                    "{\"sizes\": [10, 10], \"block_values\": [1, -1], \"d\": 2, "
                    "\"noise\": {\"feature_kind\": \"none\", \"structure_ratio\": 0}, "
                    "\"config\": {\"nu0\": 0.1, \"rho\": 1.5, \"max_iter\": 8}, "
                    "\"framelet\": {\"levels\": 1, \"cheb_order\": 10}}");
    CHECK(run_cli("bench --scenario " + (fx.root / "scenario.json").string() + " --out " +
                  out.string()) == 0);
    const auto rows = parse_bench(read_text_file((out / "bench.csv").string()));
    REQUIRE(rows.size() == 4);
    for (const BenchRow& row : rows) {
        CHECK(row.mse_noisy == 0.0);  // input untouched
        CHECK(row.mse_denoised <= 0.05);  // solvers stay near the clean signal
    }
}

TEST_CASE("cli check validates tv and node-admm runs") {
    CliFixture fx;
    const fs::path tv_run = fx.root / "tv_checked";
    REQUIRE(run_cli("denoise --solver tv --alpha 0.2 --edges " + fx.edges() + " --features " +
                    fx.features() + " --out " + tv_run.string()) == 0);
    CHECK(run_cli("check --run " + tv_run.string()) == 0);

    const fs::path node_run = fx.root / "node_checked";
    REQUIRE(run_cli("denoise --solver node-admm --nu0 0.5 --max-iter 5 --edges " + fx.edges() +
                    " --features " + fx.features() + " --out " + node_run.string()) == 0);
    CHECK(run_cli("check --run " + node_run.string()) == 0);
}
