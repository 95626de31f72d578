// config.hpp — INI run configuration for the command line harness
//
//   [system]    g_c_meV kappa_c_meV delta_c_meV gamma_d_meV u_meV
//   [disorder]  delta_dis_meV | sigma_meV, e_c_meV, ec_equals_sigma,
//               omega_min_meV omega_max_meV n_points, tol_meV max_iter mixing,
//               calibration_tol_meV
//   [drive]     omega_L_meV = <number> | auto-lp | ideal-lp
//   [g2]        tau_max_hbar_per_meV n_tau half_window_meV
//   [spectrum]  omega_min_meV omega_max_meV n_points gamma_markov_meV
//   [oracle]    n_modes
//   [output]    directory
//   [sweep]     g_c_meV u_meV (comma lists), markov_gamma_meV markov_u_meV lossless_g_c_meV
//
// Unknown sections or keys are rejected. Full-line comments start with # or ;.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xblockade/frequency_grid.hpp"
#include "xblockade/polariton.hpp"
#include "xblockade/two_photon.hpp"

namespace xblockade::harness {

struct DisorderSection {
    std::optional<double> delta_dis;  ///< calibration target (meV)
    std::optional<double> sigma;      ///< explicit sigma (meV); 0 disables disorder
    std::optional<double> e_c;        ///< only with ec_equals_sigma = false
    bool ec_equals_sigma = true;
    std::optional<FrequencyGrid> grid;
    double tol = 1e-6;
    int max_iter = 20000;
    double mixing = 0.5;
    double calibration_tol = 1e-6;

    bool enabled() const { return delta_dis.has_value() || (sigma.has_value() && *sigma > 0.0); }
};

struct DriveSection {
    two_photon::DriveMode mode = two_photon::DriveMode::lp_shifted;
    std::optional<double> omega_l;
};

struct G2Section {
    std::optional<double> tau_max;
    std::size_t n_tau = 2048;
    std::optional<double> half_window;
};

struct SpectrumSection {
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::size_t n_points = 20001;
    std::optional<double> gamma_markov;
};

struct SweepSection {
    std::vector<double> g_c;
    std::vector<double> u;
    std::optional<double> markov_gamma;
    std::optional<double> markov_u;
    std::optional<double> lossless_g_c;
};

struct RunConfig {
    model::SystemParams system;
    DisorderSection disorder;
    DriveSection drive;
    G2Section g2;
    SpectrumSection spectrum;
    std::size_t oracle_modes = 300;
    std::optional<std::string> output_directory;
    SweepSection sweep;

    /// Every field with defaults filled in, as INI text that parses back to
    /// an identical configuration.
    std::string to_ini() const;
};

/// Throws ConfigError on syntax errors, unknown keys or invalid values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Built-in presets ("fig2", "fig3"); empty when the name is unknown.
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string> preset_names();

/// %.17g
std::string format_double(double v);

} // namespace xblockade::harness
