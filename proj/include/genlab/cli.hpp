#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace genlab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
    std::optional<std::uint64_t> seed;  // --seed; overrides config, default 42
    std::optional<int> threads;         // --threads; SSL_GENLAB_THREADS fallback
    bool svg = false;
    std::string out_dir = ".";
};

// Subcommand entry points. Return process exit codes: 0 success, 2 invalid
// config or input, 3 I/O failure. A nonzero return leaves no partial
// outputs (write-to-temp, rename-on-success).
int cmd_sample(const std::string& config_path, const CommonOptions& opts);
int cmd_fit(const std::string& data_path, const std::string& method, int k,
            const std::optional<std::string>& model_path, const CommonOptions& opts);
int cmd_sweep(const std::string& config_path, const CommonOptions& opts);
int cmd_gmm_demo(const std::optional<std::string>& config_path,
                 const CommonOptions& opts);
int cmd_posterior(const std::string& data_path, const std::string& model_path,
                  const std::optional<std::string>& config_path,
                  const CommonOptions& opts);

// --threads flag if set, else SSL_GENLAB_THREADS, else hardware concurrency.
int resolve_threads(const std::optional<int>& flag);

}  // namespace genlab::cli
