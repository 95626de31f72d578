// frequency_grid.hpp — Uniform frequency grids

#pragma once

#include <cstddef>
#include <vector>

namespace xblockade {

/// Uniform grid {omega_min + i * step}, i = 0 .. n_points - 1, in meV.
struct FrequencyGrid {
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t n_points = 0;

    double step() const noexcept { return (omega_max - omega_min) / static_cast<double>(n_points - 1); }
    double at(std::size_t i) const noexcept
    {
        return i + 1 == n_points ? omega_max : omega_min + static_cast<double>(i) * step();
    }
    std::vector<double> nodes() const;

    /// Requires n_points >= 2 and omega_min < omega_max; throws ConfigError otherwise.
    void validate() const;

    /// Grid with the given step whose nodes straddle `avoid` symmetrically
    /// (no node lands on it) and that covers [lo, hi].
    static FrequencyGrid covering(double lo, double hi, double step, double avoid);
};

} // namespace xblockade
