// linear_response.hpp — Single-excitation Green's functions and cavity transmission
//
// Symmetric two-port cavity: each mirror carries kappa_c / 2, so
// t(w) = i (kappa_c / 2) G_cc(w) and r(w) = t(w) - 1.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "xblockade/polariton.hpp"
#include "xblockade/self_energy.hpp"

namespace xblockade::response {

using cplx = std::complex<double>;
using disorder::SelfEnergyTable;
using model::SystemParams;

/// Inverse of M(w) = [[w - delta_c + i kappa_c/2, -g_c], [-g_c, w - Sigma(w) + i gamma_d/2]].
struct GreenMatrix {
    cplx cc, cx, xc, xx;
};

/// `sigma_tbl == nullptr` means Sigma_dis == 0.
GreenMatrix green(double omega, const SystemParams& params, const SelfEnergyTable* sigma_tbl);
GreenMatrix green(double omega, const SystemParams& params, cplx exciton_self_energy);

cplx transmission(double omega, const SystemParams& params, const SelfEnergyTable* sigma_tbl);

struct Resonance {
    double omega = 0.0;   ///< position of the extremum (meV)
    double value = 0.0;   ///< |t|^2 at the extremum
    double fwhm = 0.0;    ///< full width at the half level (meV); NaN if a crossing is missing
    double level = 0.0;   ///< |t|^2 level used for the width
    bool is_dip = false;
};

struct SpectrumTable {
    std::vector<double> omega;
    std::vector<cplx> t;
    std::vector<double> T;  ///< |t|^2
    std::vector<double> R;  ///< |t - 1|^2
    std::vector<Resonance> peaks;
    std::vector<Resonance> dips;
    std::vector<std::string> warnings;  ///< per-window extraction failures

    /// Tallest peak, if any.
    const Resonance* main_peak() const;
};

/// Transmission on a strictly increasing grid. With `gamma_markov_override`
/// the table is ignored and gamma_d replaced by the override. Extrema are
/// located on the grid, polished by Brent's method on the exact |t|^2 and
/// their widths found by bisection on the exact |t|^2: half maximum for
/// peaks, half depth relative to the lower neighbouring maximum for dips.
SpectrumTable spectrum(const std::vector<double>& grid, const SystemParams& params,
                       const SelfEnergyTable* sigma_tbl,
                       std::optional<double> gamma_markov_override = std::nullopt);

struct DarkResonance {
    bool present = false;
    double dip_omega = 0.0;
    double dip_T = 0.0;
    double dip_fwhm = 0.0;
    /// kappa_c <= 4 g_c: outside the narrow-dip regime kappa_c > 4 g_c.
    bool outside_regime = false;
};

/// Requires delta_c == 0. Reports absence when g_c == 0.
DarkResonance dark_resonance_metrics(const SystemParams& params, const SelfEnergyTable* sigma_tbl);

/// Real solution of (w - delta_c)(w - Re Sigma(w)) = g_c^2 on the lower
/// branch, by fixed-point iteration from the bare lower polariton.
double dressed_lp_estimate(const SystemParams& params, const SelfEnergyTable* sigma_tbl);

/// Lower-polariton transmission maximum located around dressed_lp_estimate.
Resonance find_lp_peak(const SystemParams& params, const SelfEnergyTable* sigma_tbl);

/// Peak transmission (Gamma / (Gamma + gamma))^2 of a line of radiative
/// width Gamma with additional broadening gamma.
double peak_transmission_formula(double gamma_radiative, double gamma_extra);

} // namespace xblockade::response
