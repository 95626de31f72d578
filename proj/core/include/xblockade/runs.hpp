// runs.hpp — Subcommand drivers: self-energy, spectra, g2 and oracle checks
//
// Every run writes its products into one directory together with
// resolved_config.ini and, last, manifest.tsv.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xblockade/config.hpp"
#include "xblockade/output.hpp"

namespace xblockade::harness {

struct RunOptions {
    std::filesystem::path out_dir;
    std::optional<std::string> preset;  ///< "fig2" | "fig3": sweep over the [sweep] section
    int jobs = 1;                       ///< worker threads for sweep points
    bool with_oracle = false;
};

struct RunOutput {
    std::vector<ManifestEntry> files;  ///< in manifest order
    std::string summary_json;          ///< machine-readable run summary
};

/// Loads `config_path` if given, else the preset's built-in configuration.
RunConfig resolve_config(const std::optional<std::filesystem::path>& config_path,
                         const std::optional<std::string>& preset);

RunOutput run_selfenergy(const RunConfig& cfg, const RunOptions& opts);
RunOutput run_spectrum(const RunConfig& cfg, const RunOptions& opts);
RunOutput run_g2(const RunConfig& cfg, const RunOptions& opts);
RunOutput run_oracle_check(const RunConfig& cfg, const RunOptions& opts);

} // namespace xblockade::harness
