#include "genlab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "genlab/experiments.hpp"
#include "genlab/format.hpp"
#include "genlab/svg.hpp"

namespace genlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON helpers with config-path error messages

const json& jrequire(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError("config error at " + path + ": missing key '" + key + "'");
    return obj.at(key);
}

double jnumber(const json& obj, const std::string& key, const std::string& path) {
    const json& v = jrequire(obj, key, path);
    if (!v.is_number())
        throw ConfigError("config error at " + path + "." + key + ": expected a number");
    return v.get<double>();
}

int jint(const json& obj, const std::string& key, const std::string& path) {
    const json& v = jrequire(obj, key, path);
    if (!v.is_number_integer())
        throw ConfigError("config error at " + path + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string jstring(const json& obj, const std::string& key, const std::string& path) {
    const json& v = jrequire(obj, key, path);
    if (!v.is_string())
        throw ConfigError("config error at " + path + "." + key + ": expected a string");
    return v.get<std::string>();
}

Matrix jmatrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty() || !v.front().is_array())
        throw ConfigError("config error at " + path + ": expected a nested array of rows");
    const std::size_t rows = v.size();
    const std::size_t cols = v.front().size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols)
            throw ConfigError("config error at " + path + ": ragged rows");
        for (std::size_t j = 0; j < cols; ++j) {
            if (!v[i][j].is_number())
                throw ConfigError("config error at " + path + ": non-numeric entry");
            m(i, j) = v[i][j].get<double>();
        }
    }
    return m;
}

std::vector<double> jdoubles(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty())
        throw ConfigError("config error at " + path + ": expected a non-empty array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError("config error at " + path + ": non-numeric entry");
        out.push_back(e.get<double>());
    }
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config error in " + path + ": " + e.what());
    }
    return j;
}

// A manifest carries its config under resolved_config; plain configs load
// as-is. This is what makes "re-run from the manifest" work.
json load_config(const std::string& path) {
    json j = load_json_file(path);
    if (j.is_object() && j.contains("resolved_config")) return j.at("resolved_config");
    return j;
}

std::uint64_t resolve_seed(const CommonOptions& opts, const json& config) {
    if (opts.seed) return *opts.seed;
    if (config.is_object() && config.contains("seed")) {
        const json& s = config.at("seed");
        if (!s.is_number_integer() && !s.is_number_unsigned())
            throw ConfigError("config error at $.seed: expected an integer");
        return s.get<std::uint64_t>();
    }
    return 42;
}

// ---------------------------------------------------------------------------
// Serialization helpers

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

// Frames are serialized as k column vectors, each of length d.
json frame_to_json(const Matrix& w) {
    json cols = json::array();
    for (int j = 0; j < w.cols(); ++j) {
        json col = json::array();
        for (int i = 0; i < w.rows(); ++i) col.push_back(w(i, j));
        cols.push_back(col);
    }
    return cols;
}

struct OutputSet {
    std::vector<std::pair<std::string, std::string>> files;  // name -> content

    void add(std::string name, std::string content) {
        files.emplace_back(std::move(name), std::move(content));
    }
};

// All-or-nothing commit: write every file to <name>.tmp, then rename. Any
// failure removes the temporaries and leaves the directory untouched.
void commit_outputs(const fs::path& out_dir, const OutputSet& outputs) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec && !fs::is_directory(out_dir))
        throw IoError("cannot create output directory " + out_dir.string());
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        for (const auto& t : temps) {
            std::error_code rm;
            fs::remove(t, rm);
        }
    };
    for (const auto& [name, content] : outputs.files) {
        const fs::path tmp = out_dir / (name + ".tmp");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !(out << content) || !out.flush()) {
            cleanup();
            throw IoError("cannot write " + tmp.string());
        }
        out.close();
        temps.push_back(tmp);
    }
    for (std::size_t i = 0; i < outputs.files.size(); ++i) {
        fs::rename(temps[i], out_dir / outputs.files[i].first, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot finalize " + outputs.files[i].first);
        }
    }
}

json make_manifest(const std::string& subcommand, std::uint64_t seed,
                   const json& resolved_config, const OutputSet& outputs,
                   double duration_seconds) {
    json names = json::array();
    for (const auto& [name, content] : outputs.files) names.push_back(name);
    return json{{"subcommand", subcommand},
                {"artifact_version", kVersion},
                {"base_seed", seed},
                {"resolved_config", resolved_config},
                {"outputs", names},
                {"duration_seconds", duration_seconds}};
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Domain parsing

NoiseSpec parse_noise(const json& v, const std::string& path) {
    const std::string type = jstring(v, "type", path);
    if (type == "isotropic") return NoiseSpec::isotropic(jnumber(v, "scale", path));
    if (type == "orthogonal")
        return NoiseSpec::orthogonal_complement(jnumber(v, "level", path));
    if (type == "custom")
        return NoiseSpec::custom(SymMatrix(jmatrix(jrequire(v, "cov", path), path + ".cov")));
    throw ConfigError("config error at " + path +
                      ".type: expected isotropic, orthogonal, or custom");
}

LatentSpec parse_latent(const json& v, int k, const std::string& path) {
    const std::string type = jstring(v, "type", path);
    if (type == "gaussian") return LatentSpec::standard_gaussian(k);
    if (type == "mixture") {
        const json& comps = jrequire(v, "components", path);
        if (!comps.is_array() || comps.empty())
            throw ConfigError("config error at " + path +
                              ".components: expected a non-empty array");
        std::vector<MixtureComponent> parsed;
        int idx = 0;
        for (const auto& c : comps) {
            const std::string cpath = path + ".components[" + std::to_string(idx++) + "]";
            const std::vector<double> mean = jdoubles(jrequire(c, "mean", cpath), cpath + ".mean");
            Vector mu(mean.size());
            for (std::size_t i = 0; i < mean.size(); ++i) mu[i] = mean[i];
            parsed.push_back(MixtureComponent{
                jnumber(c, "weight", cpath), mu,
                SymMatrix(jmatrix(jrequire(c, "cov", cpath), cpath + ".cov"))});
        }
        LatentSpec spec = LatentSpec::mixture(std::move(parsed));
        if (spec.k() != k)
            throw ConfigError("config error at " + path +
                              ": mixture dimension does not match k");
        return spec;
    }
    throw ConfigError("config error at " + path + ".type: expected gaussian or mixture");
}

struct SampleConfig {
    int d, k, n;
    std::uint64_t seed;
    NoiseSpec noise_a, noise_b;
    LatentSpec latent;
    json resolved;
};

SampleConfig parse_sample_config(const json& j, const CommonOptions& opts) {
    const int d = jint(j, "d", "$");
    const int k = jint(j, "k", "$");
    const int n = jint(j, "n", "$");
    if (k < 1 || k > d) throw ConfigError("config error at $.k: requires 1 <= k <= d");
    if (n < 1) throw ConfigError("config error at $.n: requires n >= 1");
    const std::uint64_t seed = resolve_seed(opts, j);
    NoiseSpec a = parse_noise(jrequire(j, "noise_a", "$"), "$.noise_a");
    NoiseSpec b = parse_noise(jrequire(j, "noise_b", "$"), "$.noise_b");
    LatentSpec latent = parse_latent(jrequire(j, "latent", "$"), k, "$.latent");
    json resolved = j;
    resolved["seed"] = seed;
    return SampleConfig{d, k, n, seed, std::move(a), std::move(b), std::move(latent),
                        std::move(resolved)};
}

// ---------------------------------------------------------------------------
// Dataset CSV

std::string dataset_csv(const PairedDataset& data) {
    const int k = static_cast<int>(data.z.cols());
    const int d = static_cast<int>(data.x.cols());
    std::string out = "index";
    for (int j = 0; j < k; ++j) out += ",z" + std::to_string(j);
    for (int j = 0; j < d; ++j) out += ",x" + std::to_string(j);
    for (int j = 0; j < d; ++j) out += ",xplus" + std::to_string(j);
    out += "\n";
    for (int i = 0; i < data.n(); ++i) {
        out += std::to_string(i);
        for (int j = 0; j < k; ++j) out += "," + fmt17(data.z(i, j));
        for (int j = 0; j < d; ++j) out += "," + fmt17(data.x(i, j));
        for (int j = 0; j < d; ++j) out += "," + fmt17(data.xplus(i, j));
        out += "\n";
    }
    return out;
}

struct LoadedDataset {
    Matrix z;      // n x k, k may be 0 when no latent columns are present
    Matrix x;      // n x d
    Matrix xplus;  // n x d
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_field(const std::string& field, long line_no, const std::string& path) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("data error in " + path + " at line " + std::to_string(line_no) +
                          ": bad numeric field '" + field + "'");
    return value;
}

LoadedDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("data error in " + path + " at line 1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "index")
        throw ConfigError("data error in " + path + " at line 1: first column must be index");
    int k = 0, d = 0, dplus = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string& h = header[i];
        if (h.rfind("xplus", 0) == 0)
            ++dplus;
        else if (h.rfind("x", 0) == 0)
            ++d;
        else if (h.rfind("z", 0) == 0)
            ++k;
        else
            throw ConfigError("data error in " + path + " at line 1: unknown column '" + h +
                              "'");
    }
    if (d < 1 || d != dplus)
        throw ConfigError("data error in " + path +
                          " at line 1: need matching x and xplus column blocks");

    std::vector<double> zbuf, xbuf, pbuf;
    long n = 0;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ConfigError("data error in " + path + " at line " +
                              std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        for (int j = 0; j < k; ++j)
            zbuf.push_back(parse_field(fields[1 + j], line_no, path));
        for (int j = 0; j < d; ++j)
            xbuf.push_back(parse_field(fields[1 + k + j], line_no, path));
        for (int j = 0; j < d; ++j)
            pbuf.push_back(parse_field(fields[1 + k + d + j], line_no, path));
        ++n;
    }
    if (n < 1) throw ConfigError("data error in " + path + ": no data rows");

    LoadedDataset out;
    out.z = Matrix(n, k);
    out.x = Matrix(n, d);
    out.xplus = Matrix(n, d);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) out.z(i, j) = zbuf[i * k + j];
        for (int j = 0; j < d; ++j) out.x(i, j) = xbuf[i * d + j];
        for (int j = 0; j < d; ++j) out.xplus(i, j) = pbuf[i * d + j];
    }
    return out;
}

SufficientStats stats_from_loaded(const LoadedDataset& data) {
    PairedDataset tmp;
    tmp.z = data.z.cols() > 0 ? data.z : Matrix::Zero(data.x.rows(), 1);
    tmp.x = data.x;
    tmp.xplus = data.xplus;
    return sufficient_stats(tmp);
}

// Model files supply the known noise structure for numeric/map fits and the
// posterior sampler. Accepted forms, in order of preference: a sample-run
// manifest (the resolved_config noise specs are reused), a JSON with
// top-level noise_a/noise_b spec objects, or explicit {"a": [[...]],
// "b": [[...]]} covariance matrices treated as fixed custom noise.
struct LoadedModel {
    NoiseSpec a;
    NoiseSpec b;
    std::optional<PriorSpec> prior;
};

PriorSpec parse_prior(const json& v, const std::string& path) {
    const std::string type = jstring(v, "type", path);
    if (type == "uniform") return PriorSpec::uniform();
    if (type == "concentration") {
        const double kappa = jnumber(v, "kappa", path);
        const Matrix w0 = jmatrix(jrequire(v, "w0", path), path + ".w0");
        return PriorSpec::concentration(OrthonormalFrame(w0), kappa);
    }
    throw ConfigError("config error at " + path +
                      ".type: expected uniform or concentration");
}

LoadedModel load_model(const std::string& path) {
    json j = load_json_file(path);
    const json* spec_src = nullptr;
    if (j.contains("resolved_config") && j.at("resolved_config").contains("noise_a"))
        spec_src = &j.at("resolved_config");
    else if (j.contains("noise_a"))
        spec_src = &j;

    std::optional<LoadedModel> out;
    if (spec_src) {
        out = LoadedModel{parse_noise(jrequire(*spec_src, "noise_a", "$"), "$.noise_a"),
                          parse_noise(jrequire(*spec_src, "noise_b", "$"), "$.noise_b"),
                          std::nullopt};
    } else {
        const json* src = j.contains("realized_model") ? &j.at("realized_model") : &j;
        if (!src->contains("a") || !src->contains("b"))
            throw ConfigError("config error in " + path +
                              ": model requires noise_a/noise_b specs or 'a' and 'b' "
                              "covariance matrices");
        out = LoadedModel{
            NoiseSpec::custom(SymMatrix(jmatrix(src->at("a"), "$.a"))),
            NoiseSpec::custom(SymMatrix(jmatrix(src->at("b"), "$.b"))), std::nullopt};
    }
    if (j.contains("prior")) out->prior = parse_prior(j.at("prior"), "$.prior");
    return *out;
}

// Least-squares estimate of the signal frame from latent columns: X ~ Z W^T,
// re-orthonormalized. Used only for the alignment diagnostic.
std::optional<OrthonormalFrame> frame_from_latents(const LoadedDataset& data) {
    if (data.z.cols() < 1) return std::nullopt;
    const Matrix ztz = data.z.transpose() * data.z;
    Eigen::LLT<Matrix> llt(ztz);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix w_ls = data.x.transpose() * data.z * llt.solve(
                            Matrix::Identity(data.z.cols(), data.z.cols()));
    try {
        return OrthonormalFrame(gram_schmidt(w_ls));
    } catch (const InvalidMatrix&) {
        return std::nullopt;
    }
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        // Domain validation: DimensionError, InvalidNoise, SingularModel,
        // NotPSD, InvalidPrior, DegenerateData, InvalidMatrix.
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int resolve_threads(const std::optional<int>& flag) {
    if (flag && *flag >= 1) return *flag;
    if (const char* env = std::getenv("SSL_GENLAB_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_sample(const std::string& config_path, const CommonOptions& opts) {
    return guarded([&] {
        const Stopwatch timer;
        const SampleConfig cfg = parse_sample_config(load_config(config_path), opts);

        Rng rng(hash_combine(cfg.seed, 0x736d70ULL));  // sample stream tag
        const OrthonormalFrame w = sample_orthonormal(cfg.d, cfg.k, rng);
        const ModelParams params =
            make_params(cfg.d, cfg.k, w, cfg.noise_a, cfg.noise_b);
        const PairedDataset data =
            sample_dataset(params, cfg.latent, cfg.n, rng, cfg.seed);

        OutputSet outputs;
        outputs.add("dataset.csv", dataset_csv(data));
        json manifest =
            make_manifest("sample", cfg.seed, cfg.resolved, outputs, timer.seconds());
        manifest["realized_model"] = json{{"w", frame_to_json(w.mat())},
                                          {"a", matrix_to_json(params.a.mat())},
                                          {"b", matrix_to_json(params.b.mat())}};
        manifest["provenance"] = json{{"params_hash", data.params_hash},
                                      {"latent_hash", data.latent_hash},
                                      {"seed", data.seed}};
        outputs.add("manifest.json", manifest.dump(2) + "\n");
        commit_outputs(opts.out_dir, outputs);
        return 0;
    });
}

int cmd_fit(const std::string& data_path, const std::string& method, int k,
            const std::optional<std::string>& model_path, const CommonOptions& opts) {
    return guarded([&] {
        const Stopwatch timer;
        if (method != "pca" && method != "ssl" && method != "numeric" && method != "map")
            throw ConfigError("config error: method must be pca, ssl, numeric, or map");
        const LoadedDataset data = load_dataset_csv(data_path);
        const int d = static_cast<int>(data.x.cols());
        if (k < 1 || k > d)
            throw ConfigError("config error: k must satisfy 1 <= k <= d (d = " +
                              std::to_string(d) + ")");
        const SufficientStats stats = stats_from_loaded(data);
        const std::uint64_t seed = opts.seed.value_or(42);

        SubspaceEstimate estimate = [&] {
            if (method == "pca") return fit_pca(stats, k);
            if (method == "ssl") return fit_ssl(stats, k);
            if (!model_path)
                throw ConfigError("config error: --model is required for method '" +
                                  method + "'");
            const LoadedModel model = load_model(*model_path);
            NumericConfig config;
            config.seed = seed;
            if (method == "numeric") return fit_numeric(stats, model.a, model.b, k, config);
            return fit_map(stats, model.a, model.b, k,
                           model.prior.value_or(PriorSpec::uniform()), config);
        }();

        json result;
        result["method"] = method;
        result["k"] = k;
        result["d"] = d;
        result["n"] = static_cast<long>(stats.n);
        result["w_hat"] = frame_to_json(estimate.w_hat.mat());
        json criterion = json::array();
        for (int i = 0; i < estimate.criterion_values.size(); ++i)
            criterion.push_back(estimate.criterion_values[i]);
        result["criterion_values"] = criterion;
        result["degenerate_spectrum"] = estimate.degenerate_spectrum;
        if (method == "numeric" || method == "map") {
            result["converged"] = estimate.converged;
            result["objective"] = estimate.objective;
        }
        if (const auto w_true = frame_from_latents(data)) {
            const Vector cosines = subspace_alignment(*w_true, estimate.w_hat);
            json alignment = json::array();
            for (int i = 0; i < cosines.size(); ++i) alignment.push_back(cosines[i]);
            result["alignment"] = alignment;
        }

        OutputSet outputs;
        outputs.add("fit.json", result.dump(2) + "\n");
        json manifest = make_manifest(
            "fit", seed,
            json{{"method", method}, {"k", k}, {"seed", seed}}, outputs,
            timer.seconds());
        manifest["inputs"] = json{{"data", data_path},
                                  {"model", model_path ? json(*model_path) : json()}};
        outputs.add("manifest.json", manifest.dump(2) + "\n");
        commit_outputs(opts.out_dir, outputs);
        return 0;
    });
}

int cmd_sweep(const std::string& config_path, const CommonOptions& opts) {
    return guarded([&] {
        const Stopwatch timer;
        const json j = load_config(config_path);
        SweepConfig config;
        const std::string regime = jstring(j, "regime", "$");
        if (regime == "isotropic")
            config.regime = Regime::Isotropic;
        else if (regime == "orthogonal")
            config.regime = Regime::Orthogonal;
        else
            throw ConfigError("config error at $.regime: expected isotropic or orthogonal");
        config.grid_a = jdoubles(jrequire(j, "grid_a", "$"), "$.grid_a");
        config.grid_b = jdoubles(jrequire(j, "grid_b", "$"), "$.grid_b");
        config.d = jint(j, "d", "$");
        config.k = jint(j, "k", "$");
        config.n = jint(j, "n", "$");
        config.reps = jint(j, "reps", "$");
        config.base_seed = resolve_seed(opts, j);

        const SweepResult result = run_sweep(config, resolve_threads(opts.threads));

        json resolved = j;
        resolved["seed"] = config.base_seed;
        OutputSet outputs;
        outputs.add("sweep.csv", result.to_csv());
        if (opts.svg) outputs.add("sweep.svg", svg_heatmap(result));
        outputs.add("manifest.json",
                    make_manifest("sweep", config.base_seed, resolved, outputs,
                                  timer.seconds())
                            .dump(2) +
                        "\n");
        commit_outputs(opts.out_dir, outputs);
        return 0;
    });
}

int cmd_gmm_demo(const std::optional<std::string>& config_path,
                 const CommonOptions& opts) {
    return guarded([&] {
        const Stopwatch timer;
        const json j = config_path ? load_config(*config_path) : json::object();
        GmmDemoConfig config;
        if (j.contains("d")) config.d = jint(j, "d", "$");
        if (j.contains("k")) config.k = jint(j, "k", "$");
        if (j.contains("n")) config.n = jint(j, "n", "$");
        if (j.contains("rho")) config.rho = jnumber(j, "rho", "$");
        if (j.contains("gamma")) config.gamma = jnumber(j, "gamma", "$");
        if (j.contains("weights")) config.weights = jdoubles(j.at("weights"), "$.weights");
        if (j.contains("means")) config.means = jdoubles(j.at("means"), "$.means");
        if (j.contains("component_var"))
            config.component_var = jnumber(j, "component_var", "$");
        if (j.contains("kde_points")) config.kde_points = jint(j, "kde_points", "$");
        config.seed = resolve_seed(opts, j);

        const GmmDemoResult result = run_gmm_demo(config);

        auto embeddings_csv = [&] {
            std::string out = "index,z_true,z_pca,z_ssl\n";
            for (int i = 0; i < result.z_true.size(); ++i)
                out += std::to_string(i) + "," + fmt17(result.z_true[i]) + "," +
                       fmt17(result.z_pca[i]) + "," + fmt17(result.z_ssl[i]) + "\n";
            return out;
        };
        auto points_csv = [&] {
            std::string out = "index";
            for (int jcol = 1; jcol <= config.d; ++jcol) out += ",x" + std::to_string(jcol);
            for (int jcol = 1; jcol <= config.d; ++jcol)
                out += ",xplus" + std::to_string(jcol);
            out += "\n";
            for (int i = 0; i < result.x.rows(); ++i) {
                out += std::to_string(i);
                for (int jcol = 0; jcol < config.d; ++jcol)
                    out += "," + fmt17(result.x(i, jcol));
                for (int jcol = 0; jcol < config.d; ++jcol)
                    out += "," + fmt17(result.xplus(i, jcol));
                out += "\n";
            }
            return out;
        };
        auto kde_csv = [](const KdeCurve& curve) {
            std::string out = "eval_point,density\n";
            for (int i = 0; i < curve.eval_points.size(); ++i)
                out += fmt17(curve.eval_points[i]) + "," + fmt17(curve.densities[i]) + "\n";
            return out;
        };

        json model;
        model["w_true"] = frame_to_json(result.w_true.mat());
        model["w_pca"] = frame_to_json(result.w_pca.mat());
        model["w_ssl"] = frame_to_json(result.w_ssl.mat());
        model["alignment"] = json{{"pca", result.align_pca}, {"ssl", result.align_ssl}};
        model["kde_bandwidths"] = json{{"true", result.kde_true.bandwidth},
                                       {"pca", result.kde_pca.bandwidth},
                                       {"ssl", result.kde_ssl.bandwidth}};
        model["kde_mode_counts"] = json{{"true", count_local_maxima(result.kde_true)},
                                        {"pca", count_local_maxima(result.kde_pca)},
                                        {"ssl", count_local_maxima(result.kde_ssl)}};
        model["provenance"] = json{{"params_hash", result.params_hash},
                                   {"latent_hash", result.latent_hash},
                                   {"seed", config.seed}};

        json resolved = json{{"d", config.d},
                             {"k", config.k},
                             {"n", config.n},
                             {"rho", config.rho},
                             {"gamma", config.gamma},
                             {"weights", config.weights},
                             {"means", config.means},
                             {"component_var", config.component_var},
                             {"kde_points", config.kde_points},
                             {"seed", config.seed}};

        OutputSet outputs;
        outputs.add("embeddings.csv", embeddings_csv());
        outputs.add("points.csv", points_csv());
        outputs.add("model.json", model.dump(2) + "\n");
        outputs.add("kde_true.csv", kde_csv(result.kde_true));
        outputs.add("kde_pca.csv", kde_csv(result.kde_pca));
        outputs.add("kde_ssl.csv", kde_csv(result.kde_ssl));
        if (opts.svg)
            outputs.add("kde.svg",
                        svg_kde_overlay({{"true", &result.kde_true},
                                         {"pca", &result.kde_pca},
                                         {"ssl", &result.kde_ssl}},
                                        {"#2ca02c", "#1f77b4", "#d62728"}));
        outputs.add("manifest.json",
                    make_manifest("gmm-demo", config.seed, resolved, outputs,
                                  timer.seconds())
                            .dump(2) +
                        "\n");
        commit_outputs(opts.out_dir, outputs);
        return 0;
    });
}

int cmd_posterior(const std::string& data_path, const std::string& model_path,
                  const std::optional<std::string>& config_path,
                  const CommonOptions& opts) {
    return guarded([&] {
        const Stopwatch timer;
        const json j = config_path ? load_config(*config_path) : json::object();
        const LoadedDataset data = load_dataset_csv(data_path);
        const LoadedModel model = load_model(model_path);
        const SufficientStats stats = stats_from_loaded(data);
        const int d = static_cast<int>(data.x.cols());

        const int k = j.contains("k") ? jint(j, "k", "$") : 1;
        if (k < 1 || k > d)
            throw ConfigError("config error at $.k: requires 1 <= k <= d");
        const int n_samples = j.contains("n_samples") ? jint(j, "n_samples", "$") : 5000;
        MhConfig mh;
        if (j.contains("step")) mh.step = jnumber(j, "step", "$");
        if (j.contains("burn_in")) mh.burn_in = jint(j, "burn_in", "$");
        if (j.contains("thin")) mh.thin = jint(j, "thin", "$");
        PriorSpec prior = model.prior.value_or(PriorSpec::uniform());
        if (j.contains("prior")) prior = parse_prior(j.at("prior"), "$.prior");
        const std::uint64_t seed = resolve_seed(opts, j);

        Rng rng(hash_combine(seed, 0x706f73ULL));  // posterior stream tag
        const PosteriorChain chain =
            sample_posterior_mh(stats, model.a, model.b, prior, k, n_samples, mh, rng);

        std::string csv = "index";
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < k; ++c)
                csv += ",w" + std::to_string(r) + "_" + std::to_string(c);
        csv += "\n";
        for (std::size_t s = 0; s < chain.samples.size(); ++s) {
            csv += std::to_string(s);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < k; ++c) csv += "," + fmt17(chain.samples[s](r, c));
            csv += "\n";
        }

        json summary;
        summary["acceptance_rate"] = chain.acceptance_rate;
        summary["acceptance_warning"] = chain.acceptance_warning;
        summary["n_samples"] = n_samples;
        summary["burn_in"] = mh.burn_in;
        summary["thin"] = mh.thin;
        summary["step"] = mh.step;
        summary["k"] = k;
        summary["d"] = d;

        json resolved = json{{"k", k},          {"n_samples", n_samples},
                             {"step", mh.step}, {"burn_in", mh.burn_in},
                             {"thin", mh.thin}, {"seed", seed}};

        OutputSet outputs;
        outputs.add("chain.csv", std::move(csv));
        outputs.add("posterior.json", summary.dump(2) + "\n");
        json manifest =
            make_manifest("posterior", seed, resolved, outputs, timer.seconds());
        manifest["inputs"] = json{{"data", data_path}, {"model", model_path}};
        outputs.add("manifest.json", manifest.dump(2) + "\n");
        commit_outputs(opts.out_dir, outputs);
        return 0;
    });
}

}  // namespace genlab::cli
