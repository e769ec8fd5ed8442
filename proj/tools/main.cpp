// csmds: command-line driver for the coordinate-search MDS toolkit.
//
// Subcommands: generate (swissroll | mnist), distances, embed, knn-eval,
// convergence-grid, rerun. Every command writes a JSON manifest alongside its
// primary output; `rerun --manifest m.json` re-executes the recorded command
// and reproduces all deterministic outputs bit-for-bit (trace elapsed_ms is
// wall-clock and exempt).
//
// Exit codes: 0 success, 2 usage/config error, 3 data/validation error,
// 4 numerical non-convergence.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csmds/baselines.hpp"
#include "csmds/coordsearch.hpp"
#include "csmds/csv.hpp"
#include "csmds/errors.hpp"
#include "csmds/evaluation.hpp"
#include "csmds/geometry.hpp"
#include "csmds/idx.hpp"
#include "csmds/stress.hpp"
#include "csmds/types.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace csmds;

namespace {

constexpr const char* kVersion = "0.1.0";

fs::path manifest_path(const fs::path& primary_output) {
    fs::path p = primary_output;
    p.replace_extension();
    p += ".manifest.json";
    return p;
}

fs::path derived_path(const fs::path& base, const std::string& suffix) {
    fs::path p = base;
    p.replace_extension();
    p += suffix;
    return p;
}

void write_manifest(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw validation_error(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw validation_error(path.string() + ": write failed");
}

json load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error(path.string() + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
    return j;
}

json manifest_head(const std::string& command, std::uint64_t seed) {
    json j;
    j["toolkit_version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

bool header_is_pointcloud(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error(path.string() + ": cannot open file");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    return header.size() >= 4 && header.substr(header.size() - 4) == ",aux";
}

Matrix read_points(const fs::path& path) {
    if (header_is_pointcloud(path)) return read_pointcloud_csv(path).points;
    return read_matrix_csv(path);
}

TargetMatrix read_target(const fs::path& path) {
    return TargetMatrix::validate(read_matrix_csv(path));
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ---------------------------------------------------------------- generate

struct SwissrollParams {
    std::size_t n = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate_swissroll(const SwissrollParams& p) {
    const PointCloud cloud = generate_swissroll(p.n, p.noise, p.seed);
    write_pointcloud_csv(p.out, cloud);

    json m = manifest_head("generate-swissroll", p.seed);
    m["config"] = {{"n", p.n}, {"noise", p.noise}};
    m["inputs"] = json::object();
    m["outputs"] = {{"points", p.out}};
    write_manifest(manifest_path(p.out), m);
    return 0;
}

struct MnistParams {
    std::string images;
    std::string labels;
    std::vector<int> classes;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels_out;
};

int run_generate_mnist(const MnistParams& p) {
    const Matrix images = read_idx_images(p.images);
    const std::vector<int> labels = read_idx_labels(p.labels);
    if (images.rows() != labels.size())
        throw validation_error("image and label files disagree on item count");
    const std::set<int> classes(p.classes.begin(), p.classes.end());
    const LabeledDataset subset =
        subsample(LabeledDataset{images, labels}, classes, p.count, p.seed);
    write_matrix_csv(p.out, subset.vectors, "px");
    write_labels_csv(p.labels_out, subset.labels);

    json m = manifest_head("generate-mnist", p.seed);
    m["config"] = {{"classes", p.classes}, {"count", p.count}};
    m["inputs"] = {{"images", p.images}, {"labels", p.labels}};
    m["outputs"] = {{"vectors", p.out}, {"labels", p.labels_out}};
    write_manifest(manifest_path(p.out), m);
    return 0;
}

// --------------------------------------------------------------- distances

struct DistancesParams {
    std::string in;
    std::string metric = "euclidean";
    std::size_t knn = 0;  // 0 = not set
    std::string out;
};

int run_distances(const DistancesParams& p) {
    if (p.metric != "euclidean" && p.metric != "geodesic")
        throw config_error("unknown metric '" + p.metric + "' (euclidean | geodesic)");
    if (p.metric == "geodesic" && p.knn == 0)
        throw config_error("--metric geodesic requires --knn");
    if (p.metric == "euclidean" && p.knn != 0)
        throw config_error("--knn only applies to --metric geodesic");

    const Matrix points = read_points(p.in);
    Matrix dist;
    if (p.metric == "euclidean") {
        dist = compute_distance_matrix(points);
    } else {
        const NeighborGraph g = knn_graph(points, p.knn);
        dist = geodesic_distances(g).values();
    }
    write_matrix_csv(p.out, dist, "d");

    json m = manifest_head("distances", 0);
    m["config"] = {{"metric", p.metric}};
    if (p.metric == "geodesic") m["config"]["knn"] = p.knn;
    m["inputs"] = {{"points", p.in}};
    m["outputs"] = {{"distances", p.out}};
    write_manifest(manifest_path(p.out), m);
    return 0;
}

// ------------------------------------------------------------------- embed

struct EmbedParams {
    std::string in;
    std::string method;
    std::size_t dims = 0;
    double r0 = 5.0;
    double eps = 1e-4;
    double delta = 1e-3;
    std::optional<double> p_init;
    std::optional<double> p_a;
    std::optional<double> p_th;
    std::uint64_t seed = 0;
    std::size_t max_epochs = 10000;
    double smacof_tol = 1e-6;
    std::size_t smacof_max_iter = 300;
    std::string out;
    std::string trace;  // empty = derive from out
};

int run_embed(const EmbedParams& p) {
    const fs::path trace_path =
        p.trace.empty() ? derived_path(p.out, "_trace.csv") : fs::path(p.trace);
    const TargetMatrix target = read_target(p.in);

    json m = manifest_head("embed", p.seed);
    m["inputs"] = {{"target", p.in}};
    m["outputs"] = {{"embedding", p.out}, {"trace", trace_path.string()}};

    bool converged = true;
    if (p.method == "fs" || p.method == "rn" || p.method == "bs") {
        VariantOverrides o;
        o.p_init = p.p_init;
        o.p_a = p.p_a;
        o.p_th = p.p_th;
        o.r0 = p.r0;
        o.epsilon = p.eps;
        o.delta = p.delta;
        o.max_epochs = p.max_epochs;
        o.seed = p.seed;
        const RunConfig config = config_for_variant(variant_from_name(p.method), p.dims, o);
        const RunResult result = run_csmds(target, config);
        write_matrix_csv(p.out, result.embedding.coords(), "y");
        write_trace_csv(trace_path, result.trace);
        converged = result.converged;
        m["config"] = {{"method", p.method},        {"dims", config.l},
                       {"r0", config.r0},           {"eps", config.epsilon},
                       {"delta", config.delta},     {"p_init", config.p_init},
                       {"p_a", config.p_a},         {"p_th", config.p_th},
                       {"max_epochs", config.max_epochs}};
    } else if (p.method == "smacof") {
        const SmacofResult result =
            run_smacof(target, p.dims, SmacofOptions{p.smacof_tol, p.smacof_max_iter, p.seed});
        write_matrix_csv(p.out, result.embedding.coords(), "y");
        write_trace_csv(trace_path, result.trace);
        converged = result.converged;
        m["config"] = {{"method", p.method},
                       {"dims", p.dims},
                       {"tol", p.smacof_tol},
                       {"max_iter", p.smacof_max_iter}};
    } else if (p.method == "classical") {
        const auto t0 = std::chrono::steady_clock::now();
        const ClassicalMdsResult result = classical_mds(target, p.dims);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (result.clamped_eigenvalues > 0)
            std::cerr << "note: clamped " << result.clamped_eigenvalues
                      << " negative eigenvalue(s) to zero\n";
        write_matrix_csv(p.out, result.embedding.coords(), "y");
        const TraceRecord record{0, raw_stress(target, result.embedding.distances()), 0.0, 0, ms};
        write_trace_csv(trace_path, {&record, 1});
        m["config"] = {{"method", p.method}, {"dims", p.dims}};
    } else {
        throw config_error("unknown method '" + p.method +
                           "' (fs | rn | bs | smacof | classical)");
    }
    write_manifest(manifest_path(p.out), m);
    if (!converged) {
        std::cerr << "warning: run stopped at the epoch/iteration cap without converging\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------- knn-eval

struct KnnEvalParams {
    std::vector<std::string> embeddings;
    std::string labels;
    std::vector<std::size_t> ks;
    double train_frac = 0.9;
    std::uint64_t seed = 0;
    std::string out;
};

struct EmbeddingMeta {
    std::string method;
    std::size_t dims = 0;
    double embed_time_ms = 0.0;
};

EmbeddingMeta embedding_metadata(const fs::path& embedding_file, std::size_t cols) {
    const fs::path mpath = manifest_path(embedding_file);
    // Anything that did not come out of `embed` (raw vectors straight from
    // `generate`, hand-made CSVs) is the no-reduction baseline row.
    if (!fs::exists(mpath)) return {"initial", cols, 0.0};
    const json m = load_manifest(mpath);
    if (m.value("command", "") != "embed") return {"initial", cols, 0.0};
    EmbeddingMeta meta;
    meta.method = m.at("config").at("method").get<std::string>();
    meta.dims = m.at("config").at("dims").get<std::size_t>();

    fs::path trace = fs::path(m.at("outputs").at("trace").get<std::string>());
    if (!fs::exists(trace)) trace = mpath.parent_path() / trace.filename();
    const auto records = read_trace_csv(trace);
    if (!records.empty()) meta.embed_time_ms = records.back().elapsed_ms;
    return meta;
}

int run_knn_eval(const KnnEvalParams& p) {
    if (p.embeddings.empty()) throw config_error("at least one --embedding is required");
    if (p.ks.empty()) throw config_error("--k list must not be empty");
    for (std::size_t k : p.ks)
        if (k == 0) throw config_error("--k values must be positive");

    const std::vector<int> labels = read_labels_csv(p.labels);
    const std::size_t n = labels.size();
    const SplitIndices split = train_test_split(n, p.train_frac, p.seed);

    std::ofstream out(p.out);
    if (!out) throw validation_error(p.out + ": cannot open for writing");
    out << "method,dims,K,accuracy,embed_time_ms\n";

    for (const std::string& file : p.embeddings) {
        const Matrix x = read_matrix_csv(file);
        if (x.rows() != n)
            throw validation_error(file + ": " + std::to_string(x.rows()) + " rows but " +
                                   std::to_string(n) + " labels");
        const EmbeddingMeta meta = embedding_metadata(file, x.cols());

        Matrix train_x(split.train.size(), x.cols());
        std::vector<int> train_y(split.train.size());
        for (std::size_t r = 0; r < split.train.size(); ++r) {
            const auto src = x.row(split.train[r]);
            std::copy(src.begin(), src.end(), train_x.row(r).begin());
            train_y[r] = labels[split.train[r]];
        }
        std::vector<int> truth(split.test.size());
        for (std::size_t r = 0; r < split.test.size(); ++r) truth[r] = labels[split.test[r]];

        for (std::size_t k : p.ks) {
            std::vector<int> pred(split.test.size());
            for (std::size_t r = 0; r < split.test.size(); ++r)
                pred[r] = knn_predict(train_x, train_y, x.row(split.test[r]), k);
            out << meta.method << ',' << meta.dims << ',' << k << ','
                << format_double(accuracy(pred, truth)) << ','
                << format_double(meta.embed_time_ms) << '\n';
        }
    }
    if (!out) throw validation_error(p.out + ": write failed");

    json m = manifest_head("knn-eval", p.seed);
    m["config"] = {{"k", p.ks}, {"train_frac", p.train_frac}};
    m["inputs"] = {{"embeddings", p.embeddings}, {"labels", p.labels}};
    m["outputs"] = {{"report", p.out}};
    write_manifest(manifest_path(p.out), m);
    return 0;
}

// -------------------------------------------------------- convergence-grid

struct GridParams {
    std::string in;
    std::size_t dims = 0;
    std::vector<double> p_init_grid;
    std::vector<double> p_th_grid;
    double p_a = 0.05;
    double r0 = 5.0;
    double eps = 1e-4;
    double delta = 1e-3;
    std::size_t max_epochs = 10000;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct GridCell {
    Variant variant;
    double p_init;  // 1 for FS
    double p_th;    // 0 for FS/RN
    std::uint64_t tag;
    std::string trace_name;
};

std::size_t worker_count(std::size_t jobs) {
    std::size_t workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("CSMDS_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw config_error("CSMDS_WORKERS must be a positive integer");
        workers = std::size_t(v);
    }
    if (workers == 0) workers = 1;
    return std::min(workers, jobs);
}

int run_convergence_grid(const GridParams& p) {
    if (p.p_init_grid.empty() || p.p_th_grid.empty())
        throw config_error("--p-init-grid and --p-th-grid must not be empty");
    const TargetMatrix target = read_target(p.in);
    if (target.size() < 2) throw validation_error(p.in + ": need at least two points");
    fs::create_directories(p.out_dir);

    // Cell tags (seed-stream identifiers) are positional: FS = 0, RN cell i =
    // 1 + i, BS cell (i, j) = 1 + |P| + i*|T| + j. Recorded in the manifest.
    std::vector<GridCell> cells;
    std::vector<json> skipped;
    cells.push_back({Variant::full_search, 1.0, 0.0, 0, "trace_fs.csv"});
    for (std::size_t i = 0; i < p.p_init_grid.size(); ++i)
        cells.push_back({Variant::randomized, p.p_init_grid[i], 0.0, 1 + i,
                         "trace_rn_pinit" + fmt_g(p.p_init_grid[i]) + ".csv"});
    for (std::size_t i = 0; i < p.p_init_grid.size(); ++i)
        for (std::size_t j = 0; j < p.p_th_grid.size(); ++j) {
            const double pi = p.p_init_grid[i], pt = p.p_th_grid[j];
            const std::uint64_t tag = 1 + p.p_init_grid.size() + i * p.p_th_grid.size() + j;
            if (!(pt < pi)) {  // infeasible: BS requires p_th < p_init
                std::cerr << "warning: skipping BS cell p_init=" << fmt_g(pi)
                          << " p_th=" << fmt_g(pt) << " (requires p_th < p_init)\n";
                skipped.push_back({{"p_init", pi}, {"p_th", pt}});
                continue;
            }
            cells.push_back({Variant::bootstrapped, pi, pt, tag,
                             "trace_bs_pinit" + fmt_g(pi) + "_pth" + fmt_g(pt) + ".csv"});
        }

    std::vector<RunConfig> configs;
    configs.reserve(cells.size());
    for (const GridCell& c : cells) {
        VariantOverrides o;
        o.r0 = p.r0;
        o.epsilon = p.eps;
        o.delta = p.delta;
        o.max_epochs = p.max_epochs;
        o.seed = derive_stream(p.seed, c.tag);
        if (c.variant != Variant::full_search) o.p_init = c.p_init;
        if (c.variant == Variant::bootstrapped) {
            o.p_a = p.p_a;
            o.p_th = c.p_th;
        }
        configs.push_back(config_for_variant(c.variant, p.dims, o));
    }

    std::vector<std::optional<RunResult>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = worker_count(cells.size());
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t idx; (idx = next.fetch_add(1)) < cells.size();)
                results[idx].emplace(run_csmds(target, configs[idx]));
        });
    for (std::thread& t : pool) t.join();

    const fs::path dir(p.out_dir);
    std::ofstream combined(dir / "combined.csv");
    if (!combined) throw validation_error((dir / "combined.csv").string() + ": cannot open");
    // No elapsed_ms column here: the combined file is the deterministic
    // plotting artifact and reproduces bit-for-bit under a fixed seed; wall
    // times live in the per-cell trace files.
    combined << "variant,p_init,p_th,epoch,stress,radius,evals\n";
    bool all_converged = true;
    json cell_manifest = json::array();
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const GridCell& c = cells[idx];
        const RunResult& r = *results[idx];
        write_trace_csv(dir / c.trace_name, r.trace);
        for (const TraceRecord& rec : r.trace)
            combined << variant_name(c.variant) << ',' << format_double(c.p_init) << ','
                     << format_double(c.p_th) << ',' << rec.epoch << ','
                     << format_double(rec.stress) << ',' << format_double(rec.radius) << ','
                     << rec.evals << '\n';
        if (!r.converged) {
            all_converged = false;
            std::cerr << "warning: cell " << c.trace_name << " hit the epoch cap\n";
        }
        cell_manifest.push_back({{"variant", variant_name(c.variant)},
                                 {"p_init", c.p_init},
                                 {"p_th", c.p_th},
                                 {"tag", c.tag},
                                 {"seed", configs[idx].seed},
                                 {"trace", (dir / c.trace_name).string()}});
    }
    if (!combined) throw validation_error((dir / "combined.csv").string() + ": write failed");

    json m = manifest_head("convergence-grid", p.seed);
    m["config"] = {{"dims", p.dims},
                   {"p_init_grid", p.p_init_grid},
                   {"p_th_grid", p.p_th_grid},
                   {"p_a", p.p_a},
                   {"r0", p.r0},
                   {"eps", p.eps},
                   {"delta", p.delta},
                   {"max_epochs", p.max_epochs}};
    m["inputs"] = {{"target", p.in}};
    m["outputs"] = {{"dir", p.out_dir}, {"combined", (dir / "combined.csv").string()}};
    m["cells"] = cell_manifest;
    if (!skipped.empty()) m["skipped_cells"] = skipped;
    write_manifest(dir / "manifest.json", m);
    return all_converged ? 0 : 4;
}

// ------------------------------------------------------------------- rerun

int run_from_manifest(const fs::path& path) {
    const json m = load_manifest(path);
    const std::string command = m.at("command").get<std::string>();
    const json& cfg = m.at("config");
    const json& in = m.at("inputs");
    const json& out = m.at("outputs");

    if (command == "generate-swissroll") {
        SwissrollParams p;
        p.n = cfg.at("n").get<std::size_t>();
        p.noise = cfg.at("noise").get<double>();
        p.seed = m.at("seed").get<std::uint64_t>();
        p.out = out.at("points").get<std::string>();
        return run_generate_swissroll(p);
    }
    if (command == "generate-mnist") {
        MnistParams p;
        p.images = in.at("images").get<std::string>();
        p.labels = in.at("labels").get<std::string>();
        p.classes = cfg.at("classes").get<std::vector<int>>();
        p.count = cfg.at("count").get<std::size_t>();
        p.seed = m.at("seed").get<std::uint64_t>();
        p.out = out.at("vectors").get<std::string>();
        p.labels_out = out.at("labels").get<std::string>();
        return run_generate_mnist(p);
    }
    if (command == "distances") {
        DistancesParams p;
        p.in = in.at("points").get<std::string>();
        p.metric = cfg.at("metric").get<std::string>();
        if (cfg.contains("knn")) p.knn = cfg.at("knn").get<std::size_t>();
        p.out = out.at("distances").get<std::string>();
        return run_distances(p);
    }
    if (command == "embed") {
        EmbedParams p;
        p.in = in.at("target").get<std::string>();
        p.method = cfg.at("method").get<std::string>();
        p.dims = cfg.at("dims").get<std::size_t>();
        p.seed = m.at("seed").get<std::uint64_t>();
        p.out = out.at("embedding").get<std::string>();
        p.trace = out.at("trace").get<std::string>();
        if (p.method == "fs" || p.method == "rn" || p.method == "bs") {
            p.r0 = cfg.at("r0").get<double>();
            p.eps = cfg.at("eps").get<double>();
            p.delta = cfg.at("delta").get<double>();
            p.p_init = cfg.at("p_init").get<double>();
            p.p_a = cfg.at("p_a").get<double>();
            p.p_th = cfg.at("p_th").get<double>();
            p.max_epochs = cfg.at("max_epochs").get<std::size_t>();
        } else if (p.method == "smacof") {
            p.smacof_tol = cfg.at("tol").get<double>();
            p.smacof_max_iter = cfg.at("max_iter").get<std::size_t>();
        }
        return run_embed(p);
    }
    if (command == "knn-eval") {
        KnnEvalParams p;
        p.embeddings = in.at("embeddings").get<std::vector<std::string>>();
        p.labels = in.at("labels").get<std::string>();
        p.ks = cfg.at("k").get<std::vector<std::size_t>>();
        p.train_frac = cfg.at("train_frac").get<double>();
        p.seed = m.at("seed").get<std::uint64_t>();
        p.out = out.at("report").get<std::string>();
        return run_knn_eval(p);
    }
    if (command == "convergence-grid") {
        GridParams p;
        p.in = in.at("target").get<std::string>();
        p.dims = cfg.at("dims").get<std::size_t>();
        p.p_init_grid = cfg.at("p_init_grid").get<std::vector<double>>();
        p.p_th_grid = cfg.at("p_th_grid").get<std::vector<double>>();
        p.p_a = cfg.at("p_a").get<double>();
        p.r0 = cfg.at("r0").get<double>();
        p.eps = cfg.at("eps").get<double>();
        p.delta = cfg.at("delta").get<double>();
        p.max_epochs = cfg.at("max_epochs").get<std::size_t>();
        p.seed = m.at("seed").get<std::uint64_t>();
        p.out_dir = out.at("dir").get<std::string>();
        return run_convergence_grid(p);
    }
    throw format_error(path.string() + ": unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordinate-search MDS toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    int rc = 0;

    // generate
    CLI::App* generate = app.add_subcommand("generate", "Generate datasets");
    generate->require_subcommand(1);

    SwissrollParams sp;
    CLI::App* swissroll = generate->add_subcommand("swissroll", "Sample a 3D swissroll");
    swissroll->add_option("--n", sp.n, "Number of points")
        ->required()
        ->check(CLI::PositiveNumber);
    swissroll->add_option("--noise", sp.noise, "Gaussian noise stddev")
        ->check(CLI::NonNegativeNumber);
    swissroll->add_option("--seed", sp.seed, "Random seed");
    swissroll->add_option("--out", sp.out, "Output point-cloud CSV")->required();
    swissroll->callback([&] { rc = run_generate_swissroll(sp); });

    MnistParams mp;
    CLI::App* mnist = generate->add_subcommand("mnist", "Subsample an MNIST IDX pair");
    mnist->add_option("--images", mp.images, "IDX image file")->required();
    mnist->add_option("--labels", mp.labels, "IDX label file")->required();
    mnist->add_option("--classes", mp.classes, "Digit classes to keep (default all)")
        ->delimiter(',');
    mnist->add_option("--count", mp.count, "Subset size")->required()->check(CLI::PositiveNumber);
    mnist->add_option("--seed", mp.seed, "Random seed");
    mnist->add_option("--out", mp.out, "Output vector CSV")->required();
    mnist->add_option("--labels-out", mp.labels_out, "Output label CSV (default <out>_labels.csv)");
    mnist->callback([&] {
        if (mp.classes.empty()) mp.classes = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        if (mp.labels_out.empty()) mp.labels_out = derived_path(mp.out, "_labels.csv").string();
        rc = run_generate_mnist(mp);
    });

    // distances
    DistancesParams dp;
    CLI::App* distances = app.add_subcommand("distances", "Build a target dissimilarity matrix");
    distances->add_option("--in", dp.in, "Input points CSV (point cloud or matrix)")->required();
    distances->add_option("--metric", dp.metric, "euclidean | geodesic");
    distances->add_option("--knn", dp.knn, "Neighbors for the geodesic graph")
        ->check(CLI::PositiveNumber);
    distances->add_option("--out", dp.out, "Output matrix CSV")->required();
    distances->callback([&] { rc = run_distances(dp); });

    // embed
    EmbedParams ep;
    CLI::App* embed = app.add_subcommand("embed", "Embed a target matrix");
    embed->add_option("--in", ep.in, "Target matrix CSV")->required();
    embed->add_option("--method", ep.method, "fs | rn | bs | smacof | classical")->required();
    embed->add_option("--dims", ep.dims, "Embedding dimension L")
        ->required()
        ->check(CLI::PositiveNumber);
    embed->add_option("--r0", ep.r0, "Initial search radius");
    embed->add_option("--eps", ep.eps, "Relative-improvement threshold");
    embed->add_option("--delta", ep.delta, "Radius stopping threshold");
    CLI::Option* opt_pinit = embed->add_option("--p-init", "Initial probability");
    CLI::Option* opt_pa = embed->add_option("--p-a", "Probability update step");
    CLI::Option* opt_pth = embed->add_option("--p-th", "Probability floor");
    embed->add_option("--seed", ep.seed, "Random seed");
    embed->add_option("--max-epochs", ep.max_epochs, "Epoch cap")->check(CLI::PositiveNumber);
    embed->add_option("--smacof-tol", ep.smacof_tol, "SMACOF stress-decrease tolerance");
    embed->add_option("--smacof-max-iter", ep.smacof_max_iter, "SMACOF iteration cap");
    embed->add_option("--out", ep.out, "Output embedding CSV")->required();
    embed->add_option("--trace", ep.trace, "Output trace CSV (default <out>_trace.csv)");
    embed->callback([&] {
        if (opt_pinit->count()) ep.p_init = opt_pinit->as<double>();
        if (opt_pa->count()) ep.p_a = opt_pa->as<double>();
        if (opt_pth->count()) ep.p_th = opt_pth->as<double>();
        rc = run_embed(ep);
    });

    // knn-eval
    KnnEvalParams kp;
    CLI::App* knn = app.add_subcommand("knn-eval", "KNN accuracy over embeddings");
    knn->add_option("--embedding", kp.embeddings, "Embedding CSV (repeatable)")->required();
    knn->add_option("--labels", kp.labels, "Label CSV")->required();
    knn->add_option("--k", kp.ks, "Comma-separated K list")->required()->delimiter(',');
    knn->add_option("--train-frac", kp.train_frac, "Training fraction");
    knn->add_option("--seed", kp.seed, "Split seed");
    knn->add_option("--out", kp.out, "Output report CSV")->required();
    knn->callback([&] { rc = run_knn_eval(kp); });

    // convergence-grid
    GridParams gp;
    CLI::App* grid = app.add_subcommand("convergence-grid",
                                        "FS/RN/BS traces over a parameter grid");
    grid->add_option("--in", gp.in, "Target matrix CSV")->required();
    grid->add_option("--dims", gp.dims, "Embedding dimension L")
        ->required()
        ->check(CLI::PositiveNumber);
    grid->add_option("--p-init-grid", gp.p_init_grid, "p_init values")->required()->delimiter(',');
    grid->add_option("--p-th-grid", gp.p_th_grid, "p_th values")->required()->delimiter(',');
    grid->add_option("--p-a", gp.p_a, "BS probability update step");
    grid->add_option("--r0", gp.r0, "Initial search radius");
    grid->add_option("--eps", gp.eps, "Relative-improvement threshold");
    grid->add_option("--delta", gp.delta, "Radius stopping threshold");
    grid->add_option("--max-epochs", gp.max_epochs, "Epoch cap")->check(CLI::PositiveNumber);
    grid->add_option("--seed", gp.seed, "Base seed (cells derive their own streams)");
    grid->add_option("--out-dir", gp.out_dir, "Output directory")->required();
    grid->callback([&] { rc = run_convergence_grid(gp); });

    // rerun
    std::string manifest_file;
    CLI::App* rerun = app.add_subcommand("rerun", "Re-execute a recorded manifest");
    rerun->add_option("--manifest", manifest_file, "Manifest JSON")->required();
    rerun->callback([&] { rc = run_from_manifest(manifest_file); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
