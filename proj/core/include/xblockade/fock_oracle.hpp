// fock_oracle.hpp — Brute-force weak-drive reference in a truncated Fock space
//
// The self-energy is replaced by a star of discrete bath modes coupled to the
// exciton. Amplitudes are tracked order by order in the drive: vacuum (1),
// one excitation (psi1) and symmetric two-excitation pairs (psi2).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "xblockade/polariton.hpp"
#include "xblockade/self_energy.hpp"
#include "xblockade/two_photon.hpp"

namespace xblockade::oracle {

using cplx = std::complex<double>;
using disorder::SelfEnergyTable;
using model::SystemParams;

struct BathDiscretization {
    std::vector<double> energies;   ///< cell midpoints (meV)
    std::vector<double> couplings;  ///< h_j >= 0 (meV)
    double spacing = 0.0;           ///< uniform cell width (meV)
    double eta_broad = 0.0;         ///< broadening used for the reconstruction check (= spacing)
    /// max_w |Sigma_bath(w + i eta) - Sigma_ref(w + i eta)| / delta_dis on the table grid.
    double reconstruction_error = 0.0;

    std::size_t n_modes() const noexcept { return energies.size(); }
};

/// Uniform star discretization over the support of Im Sigma (where
/// -Im Sigma > 1e-4 delta_dis, extended one grid node below). Couplings carry
/// the exact spectral mass of each cell. Throws ConvergenceError when the
/// reconstruction error exceeds 2% of delta_dis.
BathDiscretization fit_bath(const SelfEnergyTable& tbl, std::size_t n_modes);

/// sum_j h_j^2 / (z - e_j)
cplx bath_self_energy(const BathDiscretization& bath, cplx z);

/// One-excitation network with a driven port mode and a Kerr mode.
struct Network {
    Eigen::MatrixXcd h1;     ///< non-Hermitian one-excitation Hamiltonian (complex symmetric)
    std::size_t port = 0;
    std::size_t kerr = 0;
    double port_rate = 0.0;  ///< t = i port_rate psi_port
    double u = 0.0;          ///< U on the Kerr mode: 2U on its double occupancy
};

/// Ordering [cavity, exciton, bath_0 ... bath_{N-1}].
Network cavity_exciton_network(const SystemParams& params, const BathDiscretization& bath);
/// Single mode at omega_mode with total width gamma and interaction u.
Network single_mode_network(double omega_mode, double gamma, double u);

/// Index of the symmetric pair |i j>, i <= j, among n single-particle modes.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);
std::size_t pair_dimension(std::size_t n);

/// Two-excitation Hamiltonian on normalized symmetric pairs
/// (|ii> = a_i^dag a_i^dag |0> / sqrt(2)), including 2U on |kerr kerr>.
Eigen::SparseMatrix<cplx> two_excitation_hamiltonian(const Network& net);

struct TruncatedState {
    cplx vacuum{1.0, 0.0};
    Eigen::VectorXcd one;  ///< first order in the drive
    Eigen::VectorXcd two;  ///< second order in the drive
};

/// Weak-drive steady state at drive frequency omega_l (unit drive amplitude).
/// The two-excitation block is solved as the matrix equation
/// K1 Psi + Psi K1^T + 2U Psi_kk E_kk = B on the symmetric amplitude matrix
/// (Schur form of K1 plus a rank-one correction), O(n^3) in the mode count.
TruncatedState steady_state(const Network& net, double omega_l);

/// Same state from a sparse LU of the explicit pair-basis Hamiltonian. Fill-in
/// grows quickly with a star-shaped bath; intended for small networks.
TruncatedState steady_state_direct(const Network& net, double omega_l);

cplx oracle_transmission(double omega, const Network& net);
cplx oracle_transmission(double omega, const SystemParams& params, const BathDiscretization& bath);

two_photon::TwoPhotonResult g2_oracle(const std::vector<double>& tau, const Network& net, double omega_l);
two_photon::TwoPhotonResult g2_oracle(const std::vector<double>& tau, const SystemParams& params,
                                      const BathDiscretization& bath, double omega_l);

/// g2(0) from the slowest-decaying eigenvector of the full truncated
/// (0 + 1 + 2 excitation) Hamiltonian at finite drive amplitude. Dense; meant
/// for small networks.
double finite_drive_g2_zero(const Network& net, double omega_l, double drive);

} // namespace xblockade::oracle
