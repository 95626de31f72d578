// band_quadrature.hpp — Quadrature reference for the exponential band transform

#pragma once

#include <complex>
#include <filesystem>
#include <string>

namespace xblockade::testing {

/// int_0^inf exp(-E / scale) / (z - E) dE for Im z >= 0 by adaptive
/// Gauss-Kronrod with the pole subtracted analytically; real z is z + i0.
std::complex<double> band_transform_quadrature(std::complex<double> z, double scale);

/// Fresh empty directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& tag);

/// Whole file as a string.
std::string slurp(const std::filesystem::path& path);

} // namespace xblockade::testing
