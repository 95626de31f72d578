// polariton.cpp — Closed-form two-mode polariton algebra

#include "xblockade/polariton.hpp"

#include <cmath>
#include <string>

#include "xblockade/errors.hpp"
#include "xblockade/units.hpp"

namespace xblockade::model {

void SystemParams::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(g_c) || !finite(kappa_c) || !finite(delta_c) || !finite(gamma_d) ||
        !finite(u_xx) || !finite(omega_l)) {
        throw ConfigError("system parameters must be finite");
    }
    if (!(kappa_c > 0.0)) throw ConfigError("kappa_c must be > 0, got " + std::to_string(kappa_c));
    if (g_c < 0.0) throw ConfigError("g_c must be >= 0, got " + std::to_string(g_c));
    if (gamma_d < 0.0) throw ConfigError("gamma_d must be >= 0, got " + std::to_string(gamma_d));
    if (u_xx < 0.0) throw ConfigError("u_xx must be >= 0, got " + std::to_string(u_xx));
}

PolaritonData polariton_data(const SystemParams& params)
{
    params.validate();
    const double g = std::abs(params.g_c);
    const double d = params.delta_c;
    const double split = std::hypot(d, 2.0 * g);

    PolaritonData out;
    // Eigenvalues of [[d, g], [g, 0]]. The lower root is written in the
    // cancellation-free form -2g^2 / (d + split) when d > 0.
    if (d > 0.0) {
        out.omega_lp = -2.0 * g * g / (d + split);
        out.omega_up = out.omega_lp + split;
    } else {
        out.omega_up = 2.0 * g * g / (split - d);
        if (split == 0.0) out.omega_up = 0.0;
        out.omega_lp = out.omega_up - split;
    }
    if (split == 0.0) {
        out.x2_lp = 1.0;
    } else {
        out.x2_lp = 0.5 * (1.0 + d / split);
    }
    out.c2_lp = 1.0 - out.x2_lp;
    if (d != 0.0) {
        out.gamma_lp_pert = params.kappa_c * g * g / (d * d);
    }
    return out;
}

double lp_linewidth(const SystemParams& params)
{
    const auto pol = polariton_data(params);
    return pol.c2_lp * params.kappa_c + pol.x2_lp * params.gamma_d;
}

double g_c_from_radiative(double gamma_rad_mev, double cavity_length_m)
{
    if (!(gamma_rad_mev > 0.0) || !std::isfinite(gamma_rad_mev)) {
        throw ConfigError("gamma_rad must be > 0");
    }
    if (!(cavity_length_m > 0.0) || !std::isfinite(cavity_length_m)) {
        throw ConfigError("cavity length must be > 0");
    }
    // g = hbar sqrt(Gamma c / L) = sqrt((hbar Gamma) (hbar c) / L)
    return std::sqrt(gamma_rad_mev * units::kHbarCInMeVMetre / cavity_length_m);
}

} // namespace xblockade::model
