// output.hpp — CSV emitters, file checksums and run manifests

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xblockade/linear_response.hpp"
#include "xblockade/self_energy.hpp"
#include "xblockade/two_photon.hpp"

namespace xblockade::harness {

/// omega_meV,re_sigma_meV,im_sigma_meV
std::string selfenergy_csv(const disorder::SelfEnergyTable& tbl);
/// omega_meV,iterations
std::string convergence_csv(const disorder::SelfEnergyTable& tbl);
/// omega_meV,re_t,im_t,T,R
std::string spectrum_csv(const response::SpectrumTable& spec);
/// tau_hbar_per_meV,tau_ps,g2
std::string g2_csv(const two_photon::TwoPhotonResult& res);

void write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string name;
    std::string path;  ///< relative to the output directory
    std::string sha256;
};

/// One `name<TAB>path<TAB>sha256` line per entry.
std::string manifest_tsv(const std::vector<ManifestEntry>& entries);

} // namespace xblockade::harness
