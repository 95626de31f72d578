// test_linear_response.cpp — Green's functions, transmission and resonance extraction

#include <cmath>

#include <gtest/gtest.h>

#include "xblockade/errors.hpp"
#include "xblockade/linear_response.hpp"
#include "xblockade/polariton.hpp"

namespace {

using namespace xblockade;
using response::cplx;

model::SystemParams base(double g, double kappa, double delta = 0.0, double gamma = 0.0)
{
    model::SystemParams p;
    p.g_c = g;
    p.kappa_c = kappa;
    p.delta_c = delta;
    p.gamma_d = gamma;
    return p;
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

TEST(Green, InvertsTheDynamicalMatrix)
{
    const auto p = base(0.4, 0.1, -0.3, 0.02);
    const cplx sigma(-0.2, -0.05);
    for (double w : {-1.0, -0.37, 0.0, 0.6}) {
        const auto g = response::green(w, p, sigma);
        const cplx i(0.0, 1.0);
        const cplx m00 = w - p.delta_c + i * p.kappa_c / 2.0, m01 = -p.g_c;
        const cplx m10 = -p.g_c, m11 = w - sigma + i * p.gamma_d / 2.0;
        EXPECT_LT(std::abs(m00 * g.cc + m01 * g.xc - 1.0), 1e-12);
        EXPECT_LT(std::abs(m00 * g.cx + m01 * g.xx), 1e-12);
        EXPECT_LT(std::abs(m10 * g.cc + m11 * g.xc), 1e-12);
        EXPECT_LT(std::abs(m10 * g.cx + m11 * g.xx - 1.0), 1e-12);
        // Reciprocity.
        EXPECT_LT(std::abs(g.cx - g.xc), 1e-14);
    }
}

TEST(Transmission, FluxConservedWithoutAbsorption)
{
    const auto p = base(0.7, 0.25, 0.4);
    for (double w = -3.0; w <= 3.0; w += 0.0137) {
        const cplx t = response::transmission(w, p, nullptr);
        EXPECT_NEAR(std::norm(t) + std::norm(t - 1.0), 1.0, 1e-12) << w;
    }
}

TEST(Transmission, AbsorptionOnlyRemovesFlux)
{
    const auto p = base(0.7, 0.25, 0.4, 0.05);
    for (double w = -3.0; w <= 3.0; w += 0.0137) {
        const cplx t = response::transmission(w, p, nullptr);
        EXPECT_LE(std::norm(t) + std::norm(t - 1.0), 1.0 + 1e-12);
    }
}

TEST(Transmission, EmptyCavityIsLorentzian)
{
    const double kappa = 0.2, delta = 0.3;
    const auto p = base(0.0, kappa, delta);
    const auto spec = response::spectrum(linspace(-1.0, 1.5, 2001), p, nullptr);
    const auto* pk = spec.main_peak();
    ASSERT_NE(pk, nullptr);
    EXPECT_NEAR(pk->omega, delta, 1e-9);
    EXPECT_NEAR(pk->value, 1.0, 1e-12);
    EXPECT_NEAR(pk->fwhm, kappa, 1e-9);
    for (std::size_t i = 0; i < spec.omega.size(); i += 50) {
        const double x = 2.0 * (spec.omega[i] - delta) / kappa;
        EXPECT_NEAR(spec.T[i], 1.0 / (1.0 + x * x), 1e-12);
    }
}

TEST(Transmission, DarkStateZeroAtExcitonFrequency)
{
    const auto p = base(0.1, 2.0);
    EXPECT_LT(std::abs(response::transmission(0.0, p, nullptr)), 1e-15);
}

class DarkWidth : public ::testing::TestWithParam<double> {};

TEST_P(DarkWidth, MatchesHalfDepthRoots)
{
    const double g = 0.05, kappa = GetParam() * g;
    const auto m = response::dark_resonance_metrics(base(g, kappa), nullptr);
    ASSERT_TRUE(m.present);
    EXPECT_NEAR(m.dip_omega, 0.0, 1e-9);
    EXPECT_LT(m.dip_T, 1e-14);
    const double exact = std::sqrt(kappa * kappa / 4.0 + 4.0 * g * g) - kappa / 2.0;
    EXPECT_NEAR(m.dip_fwhm, exact, 1e-7 * exact);
    EXPECT_FALSE(m.outside_regime);
}

INSTANTIATE_TEST_SUITE_P(KappaOverG, DarkWidth, ::testing::Values(10.0, 20.0, 40.0, 100.0));

TEST(DarkResonance, RegimeAndPreconditions)
{
    EXPECT_TRUE(response::dark_resonance_metrics(base(0.1, 0.3), nullptr).outside_regime);
    EXPECT_FALSE(response::dark_resonance_metrics(base(0.0, 0.3), nullptr).present);
    EXPECT_THROW(response::dark_resonance_metrics(base(0.1, 1.0, 0.2), nullptr), ConfigError);
}

TEST(LowerPolariton, LosslessExcitonWidthIsPhotonFraction)
{
    const auto p = base(0.5, 0.01, 2.0);
    const auto pol = model::polariton_data(p);
    const auto pk = response::find_lp_peak(p, nullptr);
    EXPECT_NEAR(pk.omega, pol.omega_lp, 1e-4 * p.kappa_c);
    EXPECT_NEAR(pk.value, 1.0, 1e-9);
    EXPECT_NEAR(pk.fwhm, pol.c2_lp * p.kappa_c, 0.01 * pol.c2_lp * p.kappa_c);
}

TEST(LowerPolariton, MarkovPeakFollowsBroadeningFormula)
{
    const auto p = base(0.5, 0.01, 2.0, 0.002);
    const auto pol = model::polariton_data(p);
    const auto pk = response::find_lp_peak(p, nullptr);
    const double expect = response::peak_transmission_formula(pol.c2_lp * p.kappa_c, pol.x2_lp * p.gamma_d);
    EXPECT_NEAR(pk.value, expect, 0.02 * expect);
    EXPECT_NEAR(pk.fwhm, model::lp_linewidth(p), 0.02 * model::lp_linewidth(p));
}

TEST(LowerPolariton, BelowBandEdgeWithoutLosses)
{
    // A self-energy with no spectral weight at the dressed LP leaves T = 1.
    const auto grid = FrequencyGrid::covering(-10.0, 20.0, 0.01, 0.0);
    std::vector<cplx> v(grid.n_points);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = grid.at(i);
        v[i] = cplx(-0.1, w > 0.0 ? -0.2 : 0.0);
    }
    const disorder::SelfEnergyTable tbl(grid, v, 0.0, disorder::BandEdge{0.0, -0.2});
    const auto p = base(0.5, 0.01, 2.0);
    const double w_lp = response::dressed_lp_estimate(p, &tbl);
    EXPECT_NEAR((w_lp - p.delta_c) * (w_lp + 0.1), p.g_c * p.g_c, 1e-10);
    const auto pk = response::find_lp_peak(p, &tbl);
    EXPECT_NEAR(pk.omega, w_lp, 1e-4 * p.kappa_c);
    EXPECT_NEAR(pk.value, 1.0, 1e-9);
}

TEST(Spectrum, RejectsNonIncreasingGrid)
{
    EXPECT_THROW(response::spectrum({0.0, 1.0, 0.5}, base(0.1, 0.1), nullptr), ConfigError);
}

TEST(PeakFormula, Limits)
{
    EXPECT_DOUBLE_EQ(response::peak_transmission_formula(1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(response::peak_transmission_formula(1.0, 1.0), 0.25);
}

} // namespace
