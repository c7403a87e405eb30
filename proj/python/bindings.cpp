// Python bindings for the core denoising operations.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdn/ablations.hpp"
#include "gdn/io.hpp"
#include "gdn/perturb.hpp"
#include "gdn/prox.hpp"
#include "gdn/solver.hpp"

namespace py = pybind11;
using namespace gdn;

namespace {

Graph graph_from_edges(const std::vector<std::tuple<int, int, double>>& edges, int n) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (const auto& [i, j, w] : edges) es.push_back({i, j, w});
    return build_graph(es, n);
}

py::dict coefficients_to_dict(const Coefficients& q) {
    py::dict out;
    for (const auto& [key, mat] : q)
        out[py::make_tuple(key.first, key.second)] = mat;
    return out;
}

Coefficients coefficients_from_dict(const py::dict& d) {
    Coefficients q;
    for (const auto& item : d) {
        const auto key = item.first.cast<std::pair<int, int>>();
        q.emplace(key, item.second.cast<Matrix>());
    }
    return q;
}

py::dict trace_to_dict(const DiagnosticsTrace& trace) {
    const auto n = static_cast<py::ssize_t>(trace.records.size());
    auto column = [&](auto getter) {
        py::list values;
        for (const IterationRecord& r : trace.records) values.append(getter(r));
        return values;
    };
    py::dict out;
    out["iter"] = column([](const IterationRecord& r) { return r.iter; });
    out["objective"] = column([](const IterationRecord& r) { return r.objective; });
    out["lagrangian"] = column([](const IterationRecord& r) { return r.lagrangian; });
    out["r1"] = column([](const IterationRecord& r) { return r.r1; });
    out["r2"] = column([](const IterationRecord& r) { return r.r2; });
    out["r3"] = column([](const IterationRecord& r) { return r.r3; });
    out["r4"] = column([](const IterationRecord& r) { return r.r4; });
    out["kkt_dual_max"] = column([](const IterationRecord& r) { return r.kkt_dual_max; });
    out["kkt_stationarity"] =
        column([](const IterationRecord& r) { return r.kkt_stationarity; });
    for (int i = 0; i < 4; ++i)
        out[("mu" + std::to_string(i + 1)).c_str()] =
            column([i](const IterationRecord& r) { return r.mu[static_cast<std::size_t>(i)]; });
    (void)n;
    return out;
}

SolverConfig config_from_kwargs(const py::kwargs& kwargs) {
    SolverConfig cfg;
    for (const auto& item : kwargs) {
        const std::string key = item.first.cast<std::string>();
        if (key == "lambda1") cfg.lambda1 = item.second.cast<double>();
        else if (key == "lambda2") cfg.lambda2 = item.second.cast<double>();
        else if (key == "nu0") cfg.nu0 = item.second.cast<double>();
        else if (key == "rho") cfg.rho = item.second.cast<double>();
        else if (key == "max_iter") cfg.max_iter = item.second.cast<int>();
        else if (key == "mu_init") cfg.mu_init = item.second.cast<std::array<double, 4>>();
        else if (key == "mu_max") cfg.mu_max = item.second.cast<std::array<double, 4>>();
        else if (key == "tol_residual") cfg.tol_residual = item.second.cast<double>();
        else if (key == "u_solve") {
            const std::string v = item.second.cast<std::string>();
            cfg.u_solve = v == "cg" ? USolve::ConjugateGradient
                          : v == "taylor" ? USolve::TaylorApprox
                                          : USolve::Cholesky;
        } else if (key == "e_threshold") {
            cfg.e_threshold = item.second.cast<std::string>() == "degree-weighted"
                                  ? EThreshold::DegreeWeighted
                                  : EThreshold::Plain;
        } else if (key == "nu_override") {
            for (const auto& entry : item.second.cast<py::dict>())
                cfg.nu_override[entry.first.cast<std::pair<int, int>>()] =
                    entry.second.cast<double>();
        } else {
            throw Error("unknown solver option: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "graph feature/structure denoising: framelet transforms, the "
              "double-term ADMM solver, its ablations, and the perturbation "
              "harness";

    py::register_exception<Error>(m, "GdnError");

    py::class_<Graph>(m, "Graph")
        .def_readonly("n", &Graph::n)
        .def_property_readonly("adjacency", [](const Graph& g) { return g.adjacency; })
        .def_property_readonly("degrees", [](const Graph& g) { return g.degrees; })
        .def("edge_count", &Graph::edge_count)
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::tuple<int, int, double>> out;
                 for (const Edge& e : g.edge_list()) out.emplace_back(e.i, e.j, e.w);
                 return out;
             })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.n) +
                   ", edges=" + std::to_string(g.edge_count()) + ")";
        });

    py::enum_<LaplacianKind>(m, "LaplacianKind")
        .value("UNNORMALIZED", LaplacianKind::Unnormalized)
        .value("NORMALIZED", LaplacianKind::Normalized);

    py::enum_<LevelSchedule>(m, "LevelSchedule")
        .value("TIGHT", LevelSchedule::Tight)
        .value("SHIFTED", LevelSchedule::Shifted);

    m.def("build_graph", &graph_from_edges, py::arg("edges"), py::arg("n"),
          "Build an undirected graph from (i, j, w) triples.");
    m.def("laplacian",
          [](const Graph& g, LaplacianKind kind) { return SpMat(laplacian(g, kind)); },
          py::arg("graph"), py::arg("kind") = LaplacianKind::Normalized);
    m.def("graph_norm",
          [](const Matrix& mat, const Vector& degrees, const std::string& kind) {
              const GraphNorm gk = kind == "l1" ? GraphNorm::L1G
                                   : kind == "l2_sq" ? GraphNorm::L2GSquared
                                                     : GraphNorm::L21G;
              if (kind != "l1" && kind != "l2_sq" && kind != "l21")
                  throw Error("graph_norm kind must be l1, l2_sq or l21");
              return graph_norm(mat, degrees, gk);
          },
          py::arg("m"), py::arg("degrees"), py::arg("kind"));
    m.def("estimate_lambda_max",
          [](const SpMat& l, double tol) { return estimate_lambda_max(l, tol); },
          py::arg("laplacian"), py::arg("tol") = 1e-6);
    m.def("dirichlet_energy", &dirichlet_energy, py::arg("u"), py::arg("ltilde"));
    m.def("l2_smoother",
          [](const Matrix& x, const Graph& g, const std::string& mode) {
              return l2_smoother(x, g,
                                 mode == "first_order" ? SmootherMode::FirstOrder
                                                       : SmootherMode::Exact);
          },
          py::arg("x"), py::arg("graph"), py::arg("mode") = "exact");

    py::class_<FrameletSystem>(m, "FrameletSystem")
        .def_readonly("levels", &FrameletSystem::levels)
        .def_readonly("cheb_order", &FrameletSystem::cheb_order)
        .def_readonly("dilation", &FrameletSystem::dilation)
        .def_readonly("lambda_max", &FrameletSystem::lambda_max)
        .def_property_readonly("index_set", &FrameletSystem::index_set);

    m.def("build_framelet_system",
          [](const Graph& g, LaplacianKind kind, int levels, int cheb_order,
             LevelSchedule schedule) {
              return build_framelet_system(g, kind, levels, cheb_order, haar_filter_bank(),
                                           schedule);
          },
          py::arg("graph"), py::arg("kind") = LaplacianKind::Normalized,
          py::arg("levels") = 1, py::arg("cheb_order") = 20,
          py::arg("schedule") = LevelSchedule::Tight);
    m.def("framelet_decompose",
          [](const FrameletSystem& sys, const Matrix& x) {
              return coefficients_to_dict(framelet_decompose(sys, x));
          },
          py::arg("system"), py::arg("x"));
    m.def("framelet_reconstruct",
          [](const FrameletSystem& sys, const py::dict& q) {
              return framelet_reconstruct(sys, coefficients_from_dict(q));
          },
          py::arg("system"), py::arg("coefficients"));
    m.def("exact_framelet_decompose",
          [](const Graph& g, LaplacianKind kind, int levels, const Matrix& x,
             LevelSchedule schedule) {
              return coefficients_to_dict(
                  exact_framelet_decompose(g, kind, levels, x, haar_filter_bank(), schedule));
          },
          py::arg("graph"), py::arg("kind"), py::arg("levels"), py::arg("x"),
          py::arg("schedule") = LevelSchedule::Tight);
    m.def("exact_framelet_reconstruct",
          [](const Graph& g, LaplacianKind kind, int levels, const py::dict& q,
             LevelSchedule schedule) {
              return exact_framelet_reconstruct(g, kind, levels, coefficients_from_dict(q),
                                                haar_filter_bank(), schedule);
          },
          py::arg("graph"), py::arg("kind"), py::arg("levels"), py::arg("coefficients"),
          py::arg("schedule") = LevelSchedule::Tight);

    m.def("soft_threshold",
          [](const Matrix& x, double eta) { return soft_threshold(x, eta); }, py::arg("x"),
          py::arg("eta"));
    m.def("soft_threshold_rows", &soft_threshold_rows, py::arg("m"), py::arg("eta"));
    m.def("batch_threshold", &batch_threshold, py::arg("m"), py::arg("delta"));

    m.def("solve",
          [](const Graph& g, const Matrix& x, int levels, int cheb_order,
             const py::kwargs& kwargs) {
              const SolverConfig cfg = config_from_kwargs(kwargs);
              const FrameletSystem sys =
                  build_framelet_system(g, LaplacianKind::Normalized, levels, cheb_order);
              DotResult res = solve(g, sys, x, cfg);
              return py::make_tuple(res.u, res.z, trace_to_dict(res.trace));
          },
          py::arg("graph"), py::arg("x"), py::arg("levels") = 1, py::arg("cheb_order") = 20,
          "Joint feature/structure denoiser; returns (U, Z, trace).");
    m.def("node_admm_solve",
          [](const Graph& g, const Matrix& x, int levels, int cheb_order,
             const py::kwargs& kwargs) {
              const SolverConfig cfg = config_from_kwargs(kwargs);
              const FrameletSystem sys =
                  build_framelet_system(g, LaplacianKind::Normalized, levels, cheb_order);
              NodeAdmmResult res = node_admm_solve(g, sys, x, cfg);
              return py::make_tuple(res.u, trace_to_dict(res.trace));
          },
          py::arg("graph"), py::arg("x"), py::arg("levels") = 1, py::arg("cheb_order") = 20);
    m.def("edge_admm_solve",
          [](const Graph& g, const Matrix& x, const py::kwargs& kwargs) {
              const SolverConfig cfg = config_from_kwargs(kwargs);
              EdgeAdmmResult res = edge_admm_solve(g, x, cfg);
              return py::make_tuple(res.u, res.z, trace_to_dict(res.trace));
          },
          py::arg("graph"), py::arg("x"));
    m.def("tv_smooth",
          [](const Graph& g, const Matrix& x, double alpha, const std::string& mode) {
              return tv_smooth(g, x, alpha,
                               mode == "first_order" ? SmootherMode::FirstOrder
                                                     : SmootherMode::Exact);
          },
          py::arg("graph"), py::arg("x"), py::arg("alpha"), py::arg("mode") = "exact");

    m.def("perturb_features",
          [](const Matrix& x, const std::string& kind, double amount, std::uint64_t seed) {
              NoiseSpec spec;
              if (kind == "gaussian") {
                  spec.feature_kind = NoiseSpec::FeatureKind::Gaussian;
                  spec.sigma = amount;
              } else if (kind == "flip") {
                  spec.feature_kind = NoiseSpec::FeatureKind::BinaryFlip;
                  spec.flip_ratio = amount;
              } else if (kind == "none") {
                  spec.feature_kind = NoiseSpec::FeatureKind::None;
              } else {
                  throw Error("feature noise kind must be gaussian, flip or none");
              }
              spec.seed = seed;
              Rng rng(seed);
              return perturb_features(x, spec, rng);
          },
          py::arg("x"), py::arg("kind"), py::arg("amount"), py::arg("seed"));
    m.def("perturb_edges",
          [](const Graph& g, double ratio, std::uint64_t seed) {
              Rng rng(seed);
              return perturb_edges(g, ratio, rng);
          },
          py::arg("graph"), py::arg("ratio"), py::arg("seed"));
    m.def("sbm_generate",
          [](const std::vector<int>& sizes, double p_in, double p_out, std::uint64_t seed) {
              Rng rng(seed);
              return sbm_generate(sizes, p_in, p_out, rng);
          },
          py::arg("sizes"), py::arg("p_in"), py::arg("p_out"), py::arg("seed"));
    m.def("piecewise_signal", &piecewise_signal, py::arg("sizes"), py::arg("values"),
          py::arg("d") = 1);
    m.def("recovery_metrics",
          [](const Matrix& u, const Matrix& clean, const Matrix& noisy) {
              const RecoveryReport rep = recovery_metrics(u, clean, noisy);
              py::dict out;
              out["mse_recovered"] = rep.mse_recovered;
              out["mse_noisy"] = rep.mse_noisy;
              out["ratio"] = rep.ratio;
              out["snr_gain_db"] = rep.snr_gain_db;
              return out;
          },
          py::arg("u"), py::arg("clean"), py::arg("noisy"));

    m.def("read_edge_list", &read_edge_list, py::arg("path"), py::arg("n") = -1);
    m.def("read_matrix", &read_matrix, py::arg("path"), py::arg("header") = false);
    m.def("write_matrix", &write_matrix, py::arg("path"), py::arg("m"));
    m.def("write_edge_list", &write_edge_list, py::arg("path"), py::arg("graph"));
}
