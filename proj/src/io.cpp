#include "gdn/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gdn {

namespace {

using Json = nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) fields.push_back(field);
    if (!line.empty() && line.back() == delim) fields.push_back("");
    return fields;
}

}  // namespace

Graph read_edge_list(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);
    std::vector<Edge> edges;
    int max_node = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        Edge e;
        if (!(ss >> e.i >> e.j))
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed edge line");
        if (!(ss >> e.w)) e.w = 1.0;
        edges.push_back(e);
        max_node = std::max({max_node, e.i, e.j});
    }
    if (max_node < 0 && n < 1) throw IoError(path + ": empty edge list");
    if (n >= 1 && max_node >= n)
        throw IoError(path + ": edge endpoint " + std::to_string(max_node) +
                      " out of range for declared n = " + std::to_string(n));
    return build_graph(edges, n >= 1 ? n : max_node + 1);
}

void write_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write edge list: " + path);
    for (const Edge& e : g.edge_list()) {
        out << e.i << ' ' << e.j;
        if (e.w != 1.0) out << ' ' << format_double(e.w);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool skipped_header = !header;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (row.empty() || (ss.fail() && !ss.eof()))
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed matrix row");
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError(path + ":" + std::to_string(line_no) + ": ragged matrix row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty matrix");
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write matrix: " + path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

constexpr const char* kTraceHeader =
    "iter,objective,lagrangian,r1,r2,r3,r4,kkt_dual_max,kkt_stationarity,mu1,mu2,mu3,mu4";

std::string field_or_empty(double v) { return std::isnan(v) ? "" : format_double(v); }

double parse_or_nan(const std::string& s) {
    if (s.empty()) return IterationRecord::absent;
    return std::stod(s);
}

}  // namespace

void write_trace_csv(const std::string& path, const DiagnosticsTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace: " + path);
    out << kTraceHeader << '\n';
    for (const IterationRecord& r : trace.records) {
        out << r.iter << ',' << field_or_empty(r.objective) << ','
            << field_or_empty(r.lagrangian) << ',' << field_or_empty(r.r1) << ','
            << field_or_empty(r.r2) << ',' << field_or_empty(r.r3) << ','
            << field_or_empty(r.r4) << ',' << field_or_empty(r.kkt_dual_max) << ','
            << field_or_empty(r.kkt_stationarity) << ',' << field_or_empty(r.mu[0]) << ','
            << field_or_empty(r.mu[1]) << ',' << field_or_empty(r.mu[2]) << ','
            << field_or_empty(r.mu[3]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

DiagnosticsTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw IoError(path + ": unexpected trace header");
    DiagnosticsTrace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line, ',');
        if (fields.size() != 13) throw IoError(path + ": malformed trace row");
        IterationRecord r;
        r.iter = std::stoi(fields[0]);
        r.objective = parse_or_nan(fields[1]);
        r.lagrangian = parse_or_nan(fields[2]);
        r.r1 = parse_or_nan(fields[3]);
        r.r2 = parse_or_nan(fields[4]);
        r.r3 = parse_or_nan(fields[5]);
        r.r4 = parse_or_nan(fields[6]);
        r.kkt_dual_max = parse_or_nan(fields[7]);
        r.kkt_stationarity = parse_or_nan(fields[8]);
        for (int i = 0; i < 4; ++i) r.mu[static_cast<std::size_t>(i)] = parse_or_nan(fields[9 + i]);
        trace.records.push_back(r);
    }
    return trace;
}

namespace {

const std::map<std::string, USolve> kUSolveNames{
    {"cholesky", USolve::Cholesky},
    {"cg", USolve::ConjugateGradient},
    {"taylor", USolve::TaylorApprox}};

const std::map<std::string, EThreshold> kEThresholdNames{
    {"plain", EThreshold::Plain}, {"degree-weighted", EThreshold::DegreeWeighted}};

template <typename T>
std::string name_of(const std::map<std::string, T>& names, T value) {
    for (const auto& [name, v] : names)
        if (v == value) return name;
    throw Error("unknown enum value");
}

template <typename T>
T value_of(const std::map<std::string, T>& names, const std::string& name,
           const std::string& what) {
    const auto found = names.find(name);
    if (found == names.end()) throw Error("unknown " + what + ": " + name);
    return found->second;
}

}  // namespace

std::string solver_config_to_json(const SolverConfig& cfg) {
    Json j;
    j["lambda1"] = cfg.lambda1;
    j["lambda2"] = cfg.lambda2;
    j["nu0"] = cfg.nu0;
    if (!cfg.nu_override.empty()) {
        Json nu = Json::array();
        for (const auto& [key, value] : cfg.nu_override)
            nu.push_back({{"k", key.first}, {"l", key.second}, {"nu", value}});
        j["nu_override"] = nu;
    }
    j["rho"] = cfg.rho;
    j["mu_init"] = cfg.mu_init;
    j["mu_max"] = cfg.mu_max;
    j["max_iter"] = cfg.max_iter;
    j["u_solve"] = name_of(kUSolveNames, cfg.u_solve);
    j["e_threshold"] = name_of(kEThresholdNames, cfg.e_threshold);
    j["tol_residual"] = cfg.tol_residual;
    return j.dump(2);
}

SolverConfig solver_config_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw IoError(std::string("config parse error: ") + e.what());
    }
    SolverConfig cfg;
    try {
        if (j.contains("lambda1")) cfg.lambda1 = j["lambda1"].get<double>();
        if (j.contains("lambda2")) cfg.lambda2 = j["lambda2"].get<double>();
        if (j.contains("nu0")) cfg.nu0 = j["nu0"].get<double>();
        if (j.contains("nu_override"))
            for (const auto& entry : j["nu_override"])
                cfg.nu_override[{entry["k"].get<int>(), entry["l"].get<int>()}] =
                    entry["nu"].get<double>();
        if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
        if (j.contains("mu_init")) cfg.mu_init = j["mu_init"].get<std::array<double, 4>>();
        if (j.contains("mu_max")) cfg.mu_max = j["mu_max"].get<std::array<double, 4>>();
        if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();
        if (j.contains("u_solve"))
            cfg.u_solve = value_of(kUSolveNames, j["u_solve"].get<std::string>(), "u_solve");
        if (j.contains("e_threshold"))
            cfg.e_threshold = value_of(kEThresholdNames, j["e_threshold"].get<std::string>(),
                                       "e_threshold");
        if (j.contains("tol_residual")) cfg.tol_residual = j["tol_residual"].get<double>();
    } catch (const Json::exception& e) {
        throw IoError(std::string("config field error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string noise_spec_to_json(const NoiseSpec& spec) {
    Json j;
    switch (spec.feature_kind) {
        case NoiseSpec::FeatureKind::None: j["feature_kind"] = "none"; break;
        case NoiseSpec::FeatureKind::BinaryFlip:
            j["feature_kind"] = "binary-flip";
            j["flip_ratio"] = spec.flip_ratio;
            break;
        case NoiseSpec::FeatureKind::Gaussian:
            j["feature_kind"] = "gaussian";
            j["sigma"] = spec.sigma;
            break;
    }
    j["structure_ratio"] = spec.structure_ratio;
    j["seed"] = spec.seed;
    return j.dump(2);
}

NoiseSpec noise_spec_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw IoError(std::string("noise spec parse error: ") + e.what());
    }
    NoiseSpec spec;
    const std::string kind = j.value("feature_kind", "none");
    if (kind == "none") {
        spec.feature_kind = NoiseSpec::FeatureKind::None;
    } else if (kind == "binary-flip") {
        spec.feature_kind = NoiseSpec::FeatureKind::BinaryFlip;
        spec.flip_ratio = j.value("flip_ratio", 0.0);
    } else if (kind == "gaussian") {
        spec.feature_kind = NoiseSpec::FeatureKind::Gaussian;
        spec.sigma = j.value("sigma", 0.0);
    } else {
        throw IoError("unknown feature_kind: " + kind);
    }
    spec.structure_ratio = j.value("structure_ratio", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.validate();
    return spec;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path);
    std::uint64_t hash = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (in.eof()) break;
    }
    return hash;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace gdn
