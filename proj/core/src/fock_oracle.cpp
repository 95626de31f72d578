// fock_oracle.cpp — Star bath surrogate and truncated Fock-space solves

#include "xblockade/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "xblockade/errors.hpp"
#include "xblockade/spectral.hpp"

namespace xblockade::oracle {

namespace {

constexpr double kSupportThreshold = 1e-4;  // of delta_dis
constexpr double kMaxReconstruction = 0.02;
constexpr std::size_t kMinModes = 50;
const double kSqrt2 = std::sqrt(2.0);

double pair_norm(std::size_t i, std::size_t j) { return i == j ? 1.0 / kSqrt2 : 1.0; }

} // namespace

// ---------------------------------------------------------------------------
// Bath

BathDiscretization fit_bath(const SelfEnergyTable& tbl, std::size_t n_modes)
{
    if (n_modes < kMinModes) {
        throw ConfigError("fit_bath needs n_modes >= " + std::to_string(kMinModes));
    }
    const auto nodes = tbl.grid().nodes();
    const auto& v = tbl.values();
    const double delta = tbl.delta_dis();

    BathDiscretization bath;
    double lo = nodes.front(), hi = nodes.back();
    if (delta > 0.0) {
        const double thr = kSupportThreshold * delta;
        std::size_t first = nodes.size(), last = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (-v[i].imag() > thr) {
                first = std::min(first, i);
                last = i;
            }
        }
        if (first == nodes.size()) {
            // Only the band-edge limit carries weight.
            first = last = std::min<std::size_t>(nodes.size() - 1, 1);
        }
        lo = nodes[first > 0 ? first - 1 : 0];
        hi = nodes[std::max(last, first + 1)];
    }

    const double de = (hi - lo) / static_cast<double>(n_modes);
    bath.spacing = de;
    bath.eta_broad = de;
    bath.energies.resize(n_modes);
    bath.couplings.assign(n_modes, 0.0);
    const spectral::PiecewiseDensity rho(tbl);
    for (std::size_t j = 0; j < n_modes; ++j) {
        const double a = lo + static_cast<double>(j) * de;
        const double b = (j + 1 == n_modes) ? hi : a + de;
        bath.energies[j] = 0.5 * (a + b);
        if (delta > 0.0) bath.couplings[j] = std::sqrt(std::max(rho.mass(a, b), 0.0));
    }

    if (delta > 0.0) {
        double worst = 0.0;
        const cplx ieta(0.0, bath.eta_broad);
        for (double w : nodes) {
            const cplx z = w + ieta;
            worst = std::max(worst, std::abs(bath_self_energy(bath, z) - rho.transform(z)));
        }
        bath.reconstruction_error = worst / delta;
        if (bath.reconstruction_error > kMaxReconstruction) {
            throw ConvergenceError("bath reconstruction error " + std::to_string(bath.reconstruction_error) +
                                   " of delta_dis exceeds 2% with " + std::to_string(n_modes) +
                                   " modes; increase n_modes");
        }
    }
    return bath;
}

cplx bath_self_energy(const BathDiscretization& bath, cplx z)
{
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < bath.energies.size(); ++j) {
        acc += bath.couplings[j] * bath.couplings[j] / (z - bath.energies[j]);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Networks

Network cavity_exciton_network(const SystemParams& p, const BathDiscretization& bath)
{
    const std::size_t n = 2 + bath.n_modes();
    Network net;
    net.h1 = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    net.h1(0, 0) = cplx(p.delta_c, -p.kappa_c / 2.0);
    net.h1(1, 1) = cplx(0.0, -p.gamma_d / 2.0);
    net.h1(0, 1) = net.h1(1, 0) = p.g_c;
    for (std::size_t j = 0; j < bath.n_modes(); ++j) {
        const auto k = static_cast<Eigen::Index>(2 + j);
        net.h1(k, k) = bath.energies[j];
        net.h1(1, k) = net.h1(k, 1) = bath.couplings[j];
    }
    net.port = 0;
    net.kerr = 1;
    net.port_rate = p.kappa_c / 2.0;
    net.u = p.u_xx;
    return net;
}

Network single_mode_network(double omega_mode, double gamma, double u)
{
    Network net;
    net.h1 = Eigen::MatrixXcd::Constant(1, 1, cplx(omega_mode, -gamma / 2.0));
    net.port = net.kerr = 0;
    net.port_rate = gamma / 2.0;
    net.u = u;
    return net;
}

std::size_t pair_dimension(std::size_t n) { return n * (n + 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n)
{
    if (i > j) std::swap(i, j);
    return i * (2 * n - i + 1) / 2 + (j - i);
}

Eigen::SparseMatrix<cplx> two_excitation_hamiltonian(const Network& net)
{
    const auto n = static_cast<std::size_t>(net.h1.rows());
    const std::size_t dim = pair_dimension(n);

    // Column-wise nonzeros of h1.
    std::vector<std::vector<std::pair<std::size_t, cplx>>> cols(n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx h = net.h1(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
            if (h != cplx(0.0, 0.0)) cols[l].emplace_back(k, h);
        }
    }

    // a_k^dag a_l acting on c_p a_i^dag a_j^dag |0>.
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const auto col = static_cast<Eigen::Index>(pair_index(i, j, n));
            const double cp = pair_norm(i, j);
            for (const auto& [k, h] : cols[i]) {
                trip.emplace_back(static_cast<Eigen::Index>(pair_index(k, j, n)), col, h * cp / pair_norm(k, j));
            }
            for (const auto& [k, h] : cols[j]) {
                trip.emplace_back(static_cast<Eigen::Index>(pair_index(i, k, n)), col, h * cp / pair_norm(i, k));
            }
        }
    }
    if (net.u != 0.0) {
        const auto kk = static_cast<Eigen::Index>(pair_index(net.kerr, net.kerr, n));
        trip.emplace_back(kk, kk, cplx(2.0 * net.u, 0.0));
    }
    Eigen::SparseMatrix<cplx> h2(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    h2.setFromTriplets(trip.begin(), trip.end());
    return h2;
}

// ---------------------------------------------------------------------------
// Steady state and observables

namespace {

Eigen::MatrixXcd shifted_one(const Network& net, double omega)
{
    Eigen::MatrixXcd k1 = net.h1;
    k1.diagonal().array() -= omega;
    return k1;
}

/// a_port^dag acting on a one-excitation vector.
Eigen::VectorXcd create_port(const Network& net, const Eigen::VectorXcd& one)
{
    const auto n = static_cast<std::size_t>(one.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pair_dimension(n)));
    for (std::size_t l = 0; l < n; ++l) {
        const auto idx = static_cast<Eigen::Index>(pair_index(net.port, l, n));
        out(idx) += one(static_cast<Eigen::Index>(l)) / pair_norm(net.port, l);
    }
    return out;
}

/// a_port acting on a two-excitation vector.
Eigen::VectorXcd annihilate_port(const Network& net, const Eigen::VectorXcd& two, std::size_t n)
{
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l) {
        const auto idx = static_cast<Eigen::Index>(pair_index(net.port, l, n));
        const double factor = l == net.port ? 2.0 * pair_norm(l, l) : 1.0;
        out(static_cast<Eigen::Index>(l)) += factor * two(idx);
    }
    return out;
}

} // namespace

namespace {

Eigen::VectorXcd one_excitation(const Network& net, double omega_l)
{
    const auto n = net.h1.rows();
    Eigen::VectorXcd src = Eigen::VectorXcd::Zero(n);
    src(static_cast<Eigen::Index>(net.port)) = 1.0;
    // i d/dt psi1 = K1 psi1 + a_p^dag |0>  =>  psi1 = -K1^{-1} e_p
    return -shifted_one(net, omega_l).partialPivLu().solve(src);
}

/// Solves T Y + Y T^T = C for upper-triangular T, back to front.
Eigen::MatrixXcd triangular_sylvester(const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& c)
{
    const Eigen::Index n = t.rows();
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        for (Eigen::Index j = n - 1; j >= 0; --j) {
            cplx acc = c(i, j);
            for (Eigen::Index k = i + 1; k < n; ++k) acc -= t(i, k) * y(k, j);
            for (Eigen::Index k = j + 1; k < n; ++k) acc -= y(i, k) * t(j, k);
            const cplx d = t(i, i) + t(j, j);
            if (d == cplx(0.0, 0.0)) throw ConvergenceError("two-excitation system is singular");
            y(i, j) = acc / d;
        }
    }
    return y;
}

} // namespace

TruncatedState steady_state(const Network& net, double omega_l)
{
    const auto n = static_cast<std::size_t>(net.h1.rows());
    const auto ni = static_cast<Eigen::Index>(n);
    TruncatedState st;
    st.one = one_excitation(net, omega_l);

    // psi2 = (1/2) sum_ij Psi_ij a_i^dag a_j^dag |0>, Psi symmetric. The pair
    // operator with both excitations counted at 2 omega_l is
    // Psi -> K1 Psi + Psi K1^T + 2U Psi_kk E_kk, and the source a_p^dag psi1
    // is B = e_p psi1^T + psi1 e_p^T, entering as L(Psi) = -B.
    const Eigen::MatrixXcd k1 = shifted_one(net, omega_l);
    const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(k1);
    if (schur.info() != Eigen::Success) throw ConvergenceError("Schur decomposition of K1 failed");
    const Eigen::MatrixXcd& q = schur.matrixU();
    const Eigen::MatrixXcd& tri = schur.matrixT();
    // With Psi = Q Y Q^T the equation becomes T Y + Y T^T = Q^H B conj(Q).
    auto solve = [&](const Eigen::MatrixXcd& rhs) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd c = q.adjoint() * rhs * q.conjugate();
        return q * triangular_sylvester(tri, c) * q.transpose();
    };

    const auto p = static_cast<Eigen::Index>(net.port);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(ni, ni);
    b.row(p) += st.one.transpose();
    b.col(p) += st.one;
    Eigen::MatrixXcd psi = solve(-b);
    if (net.u != 0.0) {
        // Rank-one interaction on the (k, k) entry, eliminated exactly.
        const auto k = static_cast<Eigen::Index>(net.kerr);
        Eigen::MatrixXcd ekk = Eigen::MatrixXcd::Zero(ni, ni);
        ekk(k, k) = 1.0;
        const Eigen::MatrixXcd y = solve(ekk);
        const cplx psi_kk = psi(k, k) / (1.0 + 2.0 * net.u * y(k, k));
        psi -= (2.0 * net.u * psi_kk) * y;
    }

    st.two.resize(static_cast<Eigen::Index>(pair_dimension(n)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx v = psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            st.two(static_cast<Eigen::Index>(pair_index(i, j, n))) = i == j ? v / kSqrt2 : v;
        }
    }
    return st;
}

TruncatedState steady_state_direct(const Network& net, double omega_l)
{
    TruncatedState st;
    st.one = one_excitation(net, omega_l);

    Eigen::SparseMatrix<cplx> k2 = two_excitation_hamiltonian(net);
    Eigen::SparseMatrix<cplx> id(k2.rows(), k2.cols());
    id.setIdentity();
    k2 -= cplx(2.0 * omega_l, 0.0) * id;
    k2.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(k2);
    if (lu.info() != Eigen::Success) throw ConvergenceError("two-excitation system is singular");
    st.two = -lu.solve(create_port(net, st.one));
    if (lu.info() != Eigen::Success) throw ConvergenceError("two-excitation solve failed");
    return st;
}

cplx oracle_transmission(double omega, const Network& net)
{
    const auto n = net.h1.rows();
    Eigen::VectorXcd src = Eigen::VectorXcd::Zero(n);
    src(static_cast<Eigen::Index>(net.port)) = 1.0;
    Eigen::MatrixXcd m = -shifted_one(net, omega);  // omega - H1
    const Eigen::VectorXcd psi = m.partialPivLu().solve(src);
    return cplx(0.0, net.port_rate) * psi(static_cast<Eigen::Index>(net.port));
}

cplx oracle_transmission(double omega, const SystemParams& params, const BathDiscretization& bath)
{
    params.validate();
    return oracle_transmission(omega, cavity_exciton_network(params, bath));
}

two_photon::TwoPhotonResult g2_oracle(const std::vector<double>& tau, const Network& net, double omega_l)
{
    if (tau.size() < 2 || tau.front() != 0.0) throw ConfigError("tau grid must start at 0 with >= 2 points");
    const double dtau = tau[1] - tau[0];
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (std::abs(tau[i] - static_cast<double>(i) * dtau) > 1e-9 * tau.back()) {
            throw ConfigError("tau grid must be uniform");
        }
    }
    const auto n = static_cast<std::size_t>(net.h1.rows());
    const auto p = static_cast<Eigen::Index>(net.port);
    const TruncatedState st = steady_state(net, omega_l);
    const cplx psi1_p = st.one(p);
    if (std::norm(net.port_rate * psi1_p) < 1e-6) {
        throw ConfigError("|t(omega_L)|^2 < 1e-6: driving a dark point, g2 is ill-conditioned");
    }

    two_photon::TwoPhotonResult res;
    res.tau = tau;
    res.omega_l = omega_l;
    res.t_at_drive = cplx(0.0, net.port_rate) * psi1_p;
    res.normalization = 0.0;

    // Conditional state after one detection, normalized to unit vacuum:
    // phi = a_p psi2 / psi1_p, relaxing back to psi1 under
    // i d/dtau phi = K1 phi + e_p.
    const Eigen::MatrixXcd k1 = shifted_one(net, omega_l);
    Eigen::VectorXcd phi = annihilate_port(net, st.two, n) / psi1_p;
    const Eigen::MatrixXcd prop = (cplx(0.0, -dtau) * k1).exp();
    const cplx t2 = res.t_at_drive * res.t_at_drive;

    res.g2.resize(tau.size());
    res.psi_c.resize(tau.size());
    Eigen::VectorXcd dev = phi - st.one;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (i > 0) dev = prop * dev;
        const cplx ratio = (st.one(p) + dev(p)) / psi1_p;
        res.g2[i] = std::norm(ratio);
        res.psi_c[i] = t2 * (ratio - 1.0);
    }
    return res;
}

two_photon::TwoPhotonResult g2_oracle(const std::vector<double>& tau, const SystemParams& params,
                                      const BathDiscretization& bath, double omega_l)
{
    params.validate();
    return g2_oracle(tau, cavity_exciton_network(params, bath), omega_l);
}

double finite_drive_g2_zero(const Network& net, double omega_l, double drive)
{
    const auto n = static_cast<std::size_t>(net.h1.rows());
    const std::size_t d2 = pair_dimension(n);
    const auto dim = static_cast<Eigen::Index>(1 + n + d2);
    const auto off1 = Eigen::Index{1};
    const auto off2 = static_cast<Eigen::Index>(1 + n);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    h.block(off1, off1, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = shifted_one(net, omega_l);
    Eigen::SparseMatrix<cplx> h2 = two_excitation_hamiltonian(net);
    Eigen::MatrixXcd h2d = Eigen::MatrixXcd(h2);
    h2d.diagonal().array() -= 2.0 * omega_l;
    h.block(off2, off2, static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2)) = h2d;

    // drive (a_p + a_p^dag)
    const auto p = static_cast<Eigen::Index>(net.port);
    h(off1 + p, 0) += drive;
    h(0, off1 + p) += drive;
    for (std::size_t l = 0; l < n; ++l) {
        const auto row = off2 + static_cast<Eigen::Index>(pair_index(net.port, l, n));
        const double c = 1.0 / pair_norm(net.port, l);  // a_p^dag |l> = c |p l>
        h(row, off1 + static_cast<Eigen::Index>(l)) += drive * c;
        h(off1 + static_cast<Eigen::Index>(l), row) += drive * c;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw ConvergenceError("finite-drive eigensolve failed");
    // The driven steady state is the eigenvector continuously connected to
    // the vacuum: pick the largest vacuum weight.
    Eigen::Index best = 0;
    double best_weight = -1.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto col = es.eigenvectors().col(i);
        const double w = std::norm(col(0)) / col.squaredNorm();
        if (w > best_weight) {
            best_weight = w;
            best = i;
        }
    }
    const Eigen::VectorXcd v = es.eigenvectors().col(best);

    const Eigen::VectorXcd one = v.segment(off1, static_cast<Eigen::Index>(n));
    const Eigen::VectorXcd two = v.segment(off2, static_cast<Eigen::Index>(d2));
    // <a^dag a> = |a v|^2 with a v = psi1_p |0> + a_p psi2
    const Eigen::VectorXcd a_two = annihilate_port(net, two, n);
    const double n_p = std::norm(one(p)) + a_two.squaredNorm();
    const double g2_num = 2.0 * std::norm(two(static_cast<Eigen::Index>(pair_index(net.port, net.port, n))));
    return g2_num * v.squaredNorm() / (n_p * n_p);
}

} // namespace xblockade::oracle
