// polariton.hpp — System parameters and closed-form polariton algebra
//
// Two-mode model: a 0D cavity mode at detuning delta_c from the k=0 exciton,
// coupled with strength g_c. The bare exciton defines the zero of energy.

#pragma once

#include <optional>

namespace xblockade::model {

struct SystemParams {
    double g_c = 0.0;      ///< exciton-cavity coupling (meV)
    double kappa_c = 0.0;  ///< cavity decay rate (meV)
    double delta_c = 0.0;  ///< omega_c - omega_exc(0) (meV)
    double gamma_d = 0.0;  ///< Markovian exciton broadening (meV)
    double u_xx = 0.0;     ///< contact interaction (meV)
    double omega_l = 0.0;  ///< drive frequency relative to the bare exciton (meV)

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct PolaritonData {
    double omega_lp = 0.0;
    double omega_up = 0.0;
    double x2_lp = 1.0;  ///< exciton Hopfield weight of the lower polariton
    double c2_lp = 0.0;  ///< photon weight, 1 - x2_lp
    /// kappa_c g_c^2 / delta_c^2; absent when delta_c == 0.
    std::optional<double> gamma_lp_pert;
};

PolaritonData polariton_data(const SystemParams& params);

/// Markovian lower-polariton linewidth (FWHM) weighted by the Hopfield
/// fractions: c2 * kappa_c + x2 * gamma_d.
double lp_linewidth(const SystemParams& params);

/// Exciton-cavity coupling of a 2D exciton with free-space radiative rate
/// gamma_rad_mev inside a planar cavity of length cavity_length_m.
double g_c_from_radiative(double gamma_rad_mev, double cavity_length_m);

} // namespace xblockade::model
