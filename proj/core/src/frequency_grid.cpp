// frequency_grid.cpp — Uniform frequency grids

#include "xblockade/frequency_grid.hpp"

#include <cmath>

#include "xblockade/errors.hpp"

namespace xblockade {

std::vector<double> FrequencyGrid::nodes() const
{
    std::vector<double> out(n_points);
    for (std::size_t i = 0; i < n_points; ++i) out[i] = at(i);
    return out;
}

void FrequencyGrid::validate() const
{
    if (n_points < 2) throw ConfigError("frequency grid needs at least 2 points");
    if (!std::isfinite(omega_min) || !std::isfinite(omega_max) || !(omega_min < omega_max)) {
        throw ConfigError("frequency grid requires finite omega_min < omega_max");
    }
}

FrequencyGrid FrequencyGrid::covering(double lo, double hi, double step, double avoid)
{
    if (!(step > 0.0) || !(lo < hi)) throw ConfigError("invalid grid request");
    if (!(lo < avoid && avoid < hi)) {
        FrequencyGrid g;
        g.n_points = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
        g.omega_min = lo;
        g.omega_max = lo + static_cast<double>(g.n_points - 1) * step;
        return g;
    }
    const double below = std::ceil((avoid - lo) / step - 0.5);
    const double above = std::ceil((hi - avoid) / step - 0.5);
    FrequencyGrid g;
    g.omega_min = avoid - (below + 0.5) * step;
    g.omega_max = avoid + (above + 0.5) * step;
    g.n_points = static_cast<std::size_t>(below + above) + 2;
    return g;
}

} // namespace xblockade
