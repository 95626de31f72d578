// self_energy.hpp — Disorder self-energy of the k=0 exciton
//
// Gaussian-correlated disorder <V(r)V(r')> = sigma^2 exp(-|r-r'|^2 / 2 eta^2)
// on a parabolic 2D exciton band. The momentum integral collapses onto the
// band energy E = q^2 / 2m, giving the kernel
//
//   Sigma(w) = (sigma^2 / 2 E_c) int_0^inf dE exp(-E / 2 E_c) / (w - E - Sigma(w))
//
// with E_c = 1 / (2 m eta^2). Dropping Sigma on the right gives the first Born
// self-energy; iterating it is the self-consistent Born approximation (SCBA).

#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "xblockade/frequency_grid.hpp"

namespace xblockade::disorder {

using cplx = std::complex<double>;

struct DisorderParams {
    double sigma = 0.0;            ///< disorder standard deviation (meV)
    double e_c = 0.0;              ///< correlation energy 1 / (2 m eta^2) (meV)
    bool e_c_equals_sigma = true;  ///< enforce e_c == sigma
    FrequencyGrid grid;            ///< uniform evaluation grid (meV)

    void validate() const;

    /// Parameters on the default grid: [-10 sigma, 20 E_c] with step
    /// min(0.01 meV, E_c / 64), offset so that no node sits on the band edge.
    static DisorderParams with_default_grid(double sigma, std::optional<double> e_c = std::nullopt);
};

FrequencyGrid default_grid(double sigma, double e_c);

struct ScbaOptions {
    double tol = 1e-6;      ///< meV, on the undamped residual |RHS(Sigma) - Sigma|
    int max_iter = 20000;
    double mixing = 0.5;    ///< Sigma <- (1 - mixing) Sigma + mixing RHS
};

/// Hard lower spectral edge: Im Sigma vanishes identically below `omega`.
/// A `jump` edge steps to `im_sigma_above` (Born); a `square_root` edge rises
/// as sqrt(w - omega) from zero (self-consistent Born).
struct BandEdge {
    enum class Onset { jump, square_root };
    double omega = 0.0;
    double im_sigma_above = 0.0;
    Onset onset = Onset::jump;
};

/// Locates a square-root onset from the first two nodes with nonzero
/// Im Sigma, where Im Sigma^2 is close to linear in w. Empty if Im Sigma
/// never switches on above a zero node.
std::optional<BandEdge> locate_square_root_edge(const FrequencyGrid& grid, const std::vector<cplx>& values);

/// Sampled retarded self-energy with cubic interpolation inside the grid.
/// Outside the grid Im Sigma = 0 and Re Sigma follows the high-frequency
/// expansion tail_weight / w + c2 / w^2, with c2 fixed per side so the
/// continuation is continuous.
class SelfEnergyTable {
public:
    SelfEnergyTable(FrequencyGrid grid, std::vector<cplx> values, double tail_weight,
                    std::optional<BandEdge> band_edge = std::nullopt,
                    std::vector<int> iterations = {});

    static SelfEnergyTable zeros(FrequencyGrid grid);

    const FrequencyGrid& grid() const noexcept { return grid_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    /// max |Im Sigma| over the grid and the band-edge limit.
    double delta_dis() const noexcept { return delta_dis_; }
    double tail_weight() const noexcept { return tail_weight_; }
    std::optional<BandEdge> band_edge() const noexcept { return band_edge_; }
    const std::vector<int>& iterations() const noexcept { return iterations_; }

    cplx operator()(double omega) const;

private:
    struct Splines;

    FrequencyGrid grid_;
    std::vector<cplx> values_;
    double tail_weight_ = 0.0;
    std::optional<BandEdge> band_edge_;
    std::vector<int> iterations_;
    double delta_dis_ = 0.0;
    double tail_lo_ = 0.0;
    double tail_hi_ = 0.0;
    std::shared_ptr<const Splines> splines_;
};

/// e^w E1(w) on the principal branch; Im w = -0.0 selects the lower lip of the cut.
cplx scaled_exp_integral(cplx w);

/// int_0^inf exp(-E / scale) / (z - E) dE for Im z >= 0; real z is read as z + i0.
/// Evaluated in closed form as -e^{-z/scale} E1(-z/scale).
cplx exponential_band_transform(cplx z, double scale);

/// d/dz of exponential_band_transform, given its value at z.
cplx exponential_band_transform_derivative(cplx z, double scale, cplx value);

/// sigma^2 / (2 e_c) * exponential_band_transform(omega - self_energy, 2 e_c).
cplx disorder_kernel(double omega, cplx self_energy, double sigma, double e_c);

/// First Born self-energy at a single frequency.
cplx born_self_energy_at(double omega, double sigma, double e_c);

SelfEnergyTable born_self_energy(const DisorderParams& dp);

SelfEnergyTable scba_self_energy(const DisorderParams& dp, const ScbaOptions& opts = {});

/// max over grid of |kernel(Sigma) - Sigma| for a stored table.
double resubstitution_residual(const SelfEnergyTable& tbl, const DisorderParams& dp);

struct Calibration {
    DisorderParams params;
    SelfEnergyTable table;
    double bracket_lo = 0.0;  ///< final sigma bracket (meV)
    double bracket_hi = 0.0;
    int evaluations = 0;
};

/// Root-find sigma (E_c = sigma, default grid) so that the converged SCBA
/// table has delta_dis == target within tol.
Calibration calibrate_sigma(double target_delta_dis, double tol, const ScbaOptions& opts = {});

/// max_w |Re Sigma(w) - H[Im Sigma](w)| over nodes where the principal value
/// is finite, H being the Hilbert transform of the piecewise-linear spectral
/// density with an exponential tail correction at the grid ends.
double kk_residual(const SelfEnergyTable& tbl);

} // namespace xblockade::disorder
