#include <optional>
#include <string>

#include <CLI11.hpp>

#include "genlab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Latent-variable generative model for non-contrastive "
                 "self-supervised learning: sampling, closed-form and numeric "
                 "maximum-likelihood fits, posterior sampling, and experiment "
                 "sweeps"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --seed/--out/... before or after the subcommand
    app.set_version_flag("--version", genlab::cli::kVersion);

    genlab::cli::CommonOptions opts;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    app.add_option("--seed", seed, "Base seed for all randomness (default 42)");
    app.add_option("--threads", threads,
                   "Worker cap; SSL_GENLAB_THREADS is the fallback");
    app.add_flag("--svg", opts.svg, "Also emit SVG plots where available");
    app.add_option("--out", opts.out_dir, "Output directory (default .)");

    std::string config_path, data_path, method = "pca", model_path;
    int k = 1;

    CLI::App* sample = app.add_subcommand("sample", "Sample a paired dataset");
    sample->add_option("--config", config_path, "Dataset config JSON")->required();

    CLI::App* fit = app.add_subcommand("fit", "Fit a subspace estimate to a dataset");
    fit->add_option("--data", data_path, "Dataset CSV")->required();
    fit->add_option("--method", method, "pca | ssl | numeric | map")->required();
    fit->add_option("-k,--k", k, "Latent dimension of the fit")->required();
    fit->add_option("--model", model_path,
                    "Model JSON with covariances a, b (required for numeric/map)");

    CLI::App* sweep = app.add_subcommand("sweep", "Parameter-grid Monte Carlo sweep");
    sweep->add_option("--config", config_path, "Sweep config JSON")->required();

    CLI::App* gmm = app.add_subcommand("gmm-demo",
                                       "Gaussian-mixture latent demo (paper defaults "
                                       "when no config is given)");
    gmm->add_option("--config", config_path, "Demo config JSON");

    CLI::App* posterior =
        app.add_subcommand("posterior", "Metropolis-Hastings posterior chain over W");
    posterior->add_option("--data", data_path, "Dataset CSV")->required();
    posterior->add_option("--model", model_path, "Model JSON with covariances a, b")
        ->required();
    posterior->add_option("--config", config_path, "Chain config JSON");

    CLI11_PARSE(app, argc, argv);
    opts.seed = seed;
    opts.threads = threads;

    if (sample->parsed()) return genlab::cli::cmd_sample(config_path, opts);
    if (fit->parsed())
        return genlab::cli::cmd_fit(
            data_path, method, k,
            model_path.empty() ? std::nullopt : std::make_optional(model_path), opts);
    if (sweep->parsed()) return genlab::cli::cmd_sweep(config_path, opts);
    if (gmm->parsed())
        return genlab::cli::cmd_gmm_demo(
            config_path.empty() ? std::nullopt : std::make_optional(config_path), opts);
    if (posterior->parsed())
        return genlab::cli::cmd_posterior(
            data_path, model_path,
            config_path.empty() ? std::nullopt : std::make_optional(config_path), opts);
    return 1;
}
