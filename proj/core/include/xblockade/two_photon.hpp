// two_photon.hpp — Weak-drive two-photon scattering and g2(tau)
//
// A contact interaction U x^dag x^dag x x on one mode (the "Kerr" mode) that
// is dressed by quadratic couplings. The ladder sum for two excitations is
// exact for this model class:
//
//   chi(E) = (i/pi) int dnu G_kk(nu) G_kk(E - nu)       pair bubble
//   T(E)   = U / (1 - U chi(E))                         T-matrix
//   A(nu)  = sqrt(rate) G_pk(nu)                        port -> Kerr amplitude
//   S_c(nu)= -i C T(2 wL) A(wL)^2 A(nu) A(2 wL - nu)    connected amplitude
//   psi_c(tau) = (1/2pi) int dnu e^{-i (nu - wL) tau} S_c(nu)
//   g2(tau) = |t(wL)^2 + psi_c(tau)|^2 / |t(wL)|^4
//
// with t(w) = i rate G_pp(w). C = 2 (see docs/two_photon_normalization.md).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "xblockade/polariton.hpp"
#include "xblockade/self_energy.hpp"

namespace xblockade::two_photon {

using cplx = std::complex<double>;
using disorder::SelfEnergyTable;
using model::SystemParams;

/// Normalization of the connected amplitude, fixed by the single-mode Kerr
/// anchor. Frozen; never refit.
inline constexpr double kConnectedNormalization = 2.0;

struct Feature {
    double omega;  ///< resonance position (meV)
    double width;  ///< rough linewidth (meV), > 0
};

/// Retarded single-excitation propagators of a linear network with one
/// input/output port mode and one Kerr mode.
class DressedModes {
public:
    virtual ~DressedModes() = default;
    virtual cplx port_port(double omega) const = 0;
    virtual cplx port_kerr(double omega) const = 0;
    virtual cplx kerr_kerr(double omega) const = 0;
    /// Decay rate of one port: t = i rate G_pp.
    virtual double port_rate() const = 0;
    /// Resonances and kinks, used as quadrature breakpoints.
    virtual std::vector<Feature> features() const = 0;
    /// Largest energy scale of the network (meV).
    virtual double bandwidth_scale() const = 0;
    /// Initial half window of the Fourier synthesis (meV).
    virtual double fft_scale() const = 0;

    cplx transmission(double omega) const { return cplx(0.0, port_rate()) * port_port(omega); }
};

/// Cavity (port) coupled to the exciton (Kerr mode) with self-energy.
class CavityExcitonModes final : public DressedModes {
public:
    CavityExcitonModes(const SystemParams& params, const SelfEnergyTable* sigma_tbl);

    cplx port_port(double omega) const override;
    cplx port_kerr(double omega) const override;
    cplx kerr_kerr(double omega) const override;
    double port_rate() const override { return params_.kappa_c / 2.0; }
    std::vector<Feature> features() const override { return features_; }
    double bandwidth_scale() const override { return scale_; }
    double fft_scale() const override { return fft_scale_; }

private:
    SystemParams params_;
    std::optional<SelfEnergyTable> table_;
    std::vector<Feature> features_;
    double scale_ = 0.0;
    double fft_scale_ = 0.0;
};

/// One mode at omega_mode with total width gamma, radiating equally into two
/// ports; it is both the port and the Kerr mode.
class SingleKerrMode final : public DressedModes {
public:
    SingleKerrMode(double omega_mode, double gamma);

    cplx port_port(double omega) const override;
    cplx port_kerr(double omega) const override { return port_port(omega); }
    cplx kerr_kerr(double omega) const override { return port_port(omega); }
    double port_rate() const override { return gamma_ / 2.0; }
    std::vector<Feature> features() const override { return {{omega_, gamma_}}; }
    double bandwidth_scale() const override { return std::max(std::abs(omega_), gamma_); }
    double fft_scale() const override { return gamma_; }

private:
    double omega_;
    double gamma_;
};

struct PairBubble {
    double energy = 0.0;   ///< total two-photon energy E (meV)
    cplx chi;              ///< chi(E) (1/meV)
    cplx tail;             ///< analytic contribution beyond the window
    double half_window = 0.0;
};

PairBubble pair_bubble(double energy, const DressedModes& modes);
cplx pair_bubble(double energy, const SystemParams& params, const SelfEnergyTable* sigma_tbl);

cplx t_matrix(double energy, double u, const DressedModes& modes);
cplx t_matrix(double energy, const SystemParams& params, const SelfEnergyTable* sigma_tbl);

enum class DriveMode {
    fixed,       ///< use params.omega_l
    lp_shifted,  ///< numerically located lower-polariton transmission maximum
    lp_ideal,    ///< bare two-mode lower polariton
};

struct G2Options {
    DriveMode drive = DriveMode::lp_shifted;
    /// Initial FFT half window (meV); default 40 * fft_scale().
    std::optional<double> half_window;
    /// Accept the window when |S_c(edge)| * edge / |psi_c(0)| is below this.
    double tail_tol = 1e-6;
    int max_doublings = 12;
};

struct TwoPhotonResult {
    std::vector<double> tau;    ///< hbar/meV
    std::vector<double> g2;
    std::vector<cplx> psi_c;
    double omega_l = 0.0;
    cplx t_at_drive;
    cplx chi_at_2wl;
    cplx t_matrix_at_2wl;
    double normalization = kConnectedNormalization;
    double half_window = 0.0;   ///< final FFT half window (meV)
    std::size_t fft_size = 0;
    int window_doublings = 0;
};

/// Uniform grid of n points over [0, tau_max].
std::vector<double> uniform_tau_grid(double tau_max, std::size_t n);
/// 2048 points over [0, 20 / gamma_lp].
std::vector<double> default_tau_grid(double gamma_lp);

/// Drive frequency selected by `mode`.
double select_drive(const SystemParams& params, const SelfEnergyTable* sigma_tbl, DriveMode mode);

TwoPhotonResult g2_curve(const std::vector<double>& tau, const DressedModes& modes, double u,
                         double omega_l, const G2Options& opts = {});
TwoPhotonResult g2_curve(const std::vector<double>& tau, const SystemParams& params,
                         const SelfEnergyTable* sigma_tbl, const G2Options& opts = {});

/// Single Kerr mode: (delta^2 + gamma^2/4) / ((delta + u)^2 + gamma^2/4),
/// delta = mode - drive.
double g2_markovian_kerr(double delta, double gamma, double u);

} // namespace xblockade::two_photon
