// test_fock_oracle.cpp — Truncated Fock-space reference and its star bath

#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "xblockade/errors.hpp"
#include "xblockade/fock_oracle.hpp"
#include "xblockade/linear_response.hpp"
#include "xblockade/two_photon.hpp"

namespace {

using namespace xblockade;
using oracle::cplx;

const disorder::SelfEnergyTable& scba_unit()
{
    static const auto tbl = disorder::scba_self_energy(disorder::DisorderParams::with_default_grid(1.0));
    return tbl;
}

model::SystemParams cavity(double g, double kappa, double delta, double gamma, double u)
{
    model::SystemParams p;
    p.g_c = g;
    p.kappa_c = kappa;
    p.delta_c = delta;
    p.gamma_d = gamma;
    p.u_xx = u;
    return p;
}

oracle::Network random_network(std::size_t n, bool lossless, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    oracle::Network net;
    net.h1 = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < net.h1.rows(); ++i) {
        net.h1(i, i) = cplx(d(rng), lossless ? 0.0 : -0.05 - 0.05 * std::abs(d(rng)));
        for (Eigen::Index j = 0; j < i; ++j) net.h1(i, j) = net.h1(j, i) = 0.3 * d(rng);
    }
    net.port = 0;
    net.kerr = n > 1 ? 1 : 0;
    net.port_rate = lossless ? 0.0 : 0.05;
    net.u = 0.2;
    return net;
}

TEST(PairIndex, IsABijectionOntoThePairSpace)
{
    for (std::size_t n : {1u, 2u, 7u, 30u}) {
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const auto k = oracle::pair_index(i, j, n);
                EXPECT_EQ(k, oracle::pair_index(j, i, n));
                EXPECT_LT(k, oracle::pair_dimension(n));
                seen.insert(k);
            }
        }
        EXPECT_EQ(seen.size(), oracle::pair_dimension(n));
    }
}

TEST(TwoExcitation, LosslessHamiltonianIsHermitian)
{
    const auto net = random_network(9, true, 3);
    const Eigen::MatrixXcd h2 = Eigen::MatrixXcd(oracle::two_excitation_hamiltonian(net));
    EXPECT_LT((h2 - h2.adjoint()).norm(), 1e-13);
}

TEST(TwoExcitation, NonInteractingSpectrumIsPairSums)
{
    auto net = random_network(6, false, 5);
    net.u = 0.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e1(net.h1), e2(Eigen::MatrixXcd(oracle::two_excitation_hamiltonian(net)));
    std::vector<cplx> sums;
    for (Eigen::Index a = 0; a < 6; ++a)
        for (Eigen::Index b = a; b < 6; ++b) sums.push_back(e1.eigenvalues()(a) + e1.eigenvalues()(b));
    for (Eigen::Index k = 0; k < e2.eigenvalues().size(); ++k) {
        double best = 1e9;
        for (const cplx s : sums) best = std::min(best, std::abs(s - e2.eigenvalues()(k)));
        EXPECT_LT(best, 1e-10);
    }
}

TEST(TwoExcitation, SingleModeInteractionShift)
{
    const auto net = oracle::single_mode_network(0.3, 0.04, 0.05);
    const Eigen::MatrixXcd h2 = Eigen::MatrixXcd(oracle::two_excitation_hamiltonian(net));
    ASSERT_EQ(h2.rows(), 1);
    EXPECT_LT(std::abs(h2(0, 0) - cplx(0.6 + 0.1, -0.04)), 1e-15);
}

TEST(SteadyState, SchurRouteMatchesSparseLu)
{
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto net = random_network(12, false, seed);
        const auto a = oracle::steady_state(net, 0.1);
        const auto b = oracle::steady_state_direct(net, 0.1);
        EXPECT_LT((a.one - b.one).norm(), 1e-12 * b.one.norm());
        EXPECT_LT((a.two - b.two).norm(), 1e-11 * b.two.norm());
    }
}

TEST(SteadyState, SingleModeKerrAnchor)
{
    const double gamma = 0.01;
    for (double delta : {-0.01, 0.0, 0.004}) {
        for (double u : {0.001, 0.01, 0.05}) {
            const auto net = oracle::single_mode_network(0.0, gamma, u);
            const auto r = oracle::g2_oracle({0.0, 1.0}, net, -delta);
            const double ref = two_photon::g2_markovian_kerr(delta, gamma, u);
            EXPECT_NEAR(r.g2.front(), ref, 1e-10 * std::max(1.0, ref));
        }
    }
}

TEST(SteadyState, FiniteDriveLimit)
{
    const auto net = random_network(5, false, 11);
    const double w = 0.05;
    const double weak = oracle::g2_oracle({0.0, 1.0}, net, w).g2.front();
    const double finite = oracle::finite_drive_g2_zero(net, w, 1e-4);
    EXPECT_NEAR(finite, weak, 1e-5 * weak);
}

TEST(Propagation, SingleModeMatchesFrequencyRoute)
{
    const double gamma = 0.02, u = 0.01, w0 = 0.0, wl = -0.005;
    const auto tau = two_photon::uniform_tau_grid(600.0, 256);
    const auto o = oracle::g2_oracle(tau, oracle::single_mode_network(w0, gamma, u), wl);
    const auto f = two_photon::g2_curve(tau, two_photon::SingleKerrMode(w0, gamma), u, wl);
    for (std::size_t i = 0; i < tau.size(); ++i) EXPECT_NEAR(o.g2[i], f.g2[i], 1e-4) << tau[i];
}

TEST(Propagation, MarkovCavityMatchesFrequencyRoute)
{
    const auto p = cavity(0.3, 0.04, 1.0, 0.003, 0.02);
    const double gamma_lp = model::lp_linewidth(p);
    const auto tau = two_photon::uniform_tau_grid(10.0 / gamma_lp, 200);
    two_photon::G2Options opts;
    opts.drive = two_photon::DriveMode::lp_ideal;
    const auto f = two_photon::g2_curve(tau, p, nullptr, opts);
    const auto o = oracle::g2_oracle(tau, p, oracle::BathDiscretization{}, f.omega_l);
    for (std::size_t i = 0; i < tau.size(); ++i) EXPECT_NEAR(o.g2[i], f.g2[i], 1e-3) << tau[i];
}

TEST(Bath, ReconstructsTheSelfEnergy)
{
    const auto bath = oracle::fit_bath(scba_unit(), 200);
    EXPECT_EQ(bath.n_modes(), 200u);
    EXPECT_LT(bath.reconstruction_error, 0.02);
    double m = 0.0;
    for (double h : bath.couplings) m += h * h;
    EXPECT_NEAR(m, 1.0, 2e-3);  // total weight sigma^2
    EXPECT_THROW(oracle::fit_bath(scba_unit(), 49), ConfigError);
}

TEST(Bath, ReconstructionImprovesWithModes)
{
    const auto a = oracle::fit_bath(scba_unit(), 200);
    const auto b = oracle::fit_bath(scba_unit(), 400);
    EXPECT_LT(b.reconstruction_error, a.reconstruction_error);
}

TEST(Bath, TransmissionIsExactForTheDiscreteBath)
{
    const auto bath = oracle::fit_bath(scba_unit(), 120);
    const auto p = cavity(0.5, 0.05, -1.0, 0.0, 0.0);
    for (double w : {-2.3, -1.7, -0.4013, 0.77, 3.2}) {
        const cplx sig = oracle::bath_self_energy(bath, cplx(w, 0.0));
        const cplx ref = cplx(0.0, p.kappa_c / 2.0) * response::green(w, p, sig).cc;
        EXPECT_LT(std::abs(oracle::oracle_transmission(w, p, bath) - ref), 1e-10) << w;
    }
}

TEST(Bath, TransmissionBelowBandEdgeConvergesToContinuum)
{
    // Bath modes are lossless poles, so agreement is only expected where the
    // continuum has no spectral weight.
    const auto& tbl = scba_unit();
    const auto p = cavity(0.5, 0.05, -1.0, 0.0, 0.0);
    const auto a = oracle::fit_bath(tbl, 200);
    const auto b = oracle::fit_bath(tbl, 400);
    for (double w : {-3.0, -2.0, -1.6, -1.35}) {
        const cplx ref = response::transmission(w, p, &tbl);
        const double ea = std::abs(oracle::oracle_transmission(w, p, a) - ref);
        const double eb = std::abs(oracle::oracle_transmission(w, p, b) - ref);
        EXPECT_LT(eb, 1e-2 * std::abs(ref)) << w;
        EXPECT_LE(eb, ea + 1e-12) << w;
    }
}

TEST(G2Oracle, RefusesDarkDrive)
{
    const auto p = cavity(0.1, 2.0, 0.0, 0.0, 0.01);
    EXPECT_THROW(oracle::g2_oracle({0.0, 1.0}, p, oracle::BathDiscretization{}, 0.0), ConfigError);
}

} // namespace
