// test_polariton.cpp — Closed-form polariton algebra and unit conversions

#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "xblockade/errors.hpp"
#include "xblockade/frequency_grid.hpp"
#include "xblockade/polariton.hpp"
#include "xblockade/units.hpp"

namespace {

using namespace xblockade;
using model::SystemParams;

SystemParams params(double g, double kappa, double delta, double gamma = 0.0)
{
    SystemParams p;
    p.g_c = g;
    p.kappa_c = kappa;
    p.delta_c = delta;
    p.gamma_d = gamma;
    return p;
}

TEST(Polariton, LosslessLowerBranchMatchesQuadraticRoot)
{
    const auto pol = model::polariton_data(params(14.5, 0.2, 100.0));
    EXPECT_NEAR(pol.omega_lp, (100.0 - std::sqrt(10841.0)) / 2.0, 1e-12);
}

TEST(Polariton, EigenvaluesAndHopfieldWeightsAgreeWithDenseSolver)
{
    for (double g : {0.5, 3.0, 14.5, 20.0}) {
        for (double d : {-50.0, -2.0, 0.0, 1.0, 100.0}) {
            const auto pol = model::polariton_data(params(g, 0.1, d));
            Eigen::Matrix2d h;
            h << d, g, g, 0.0;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
            EXPECT_NEAR(pol.omega_lp, es.eigenvalues()(0), 1e-10 * (1.0 + std::abs(d)));
            EXPECT_NEAR(pol.omega_up, es.eigenvalues()(1), 1e-10 * (1.0 + std::abs(d)));
            const double x2 = es.eigenvectors()(1, 0) * es.eigenvectors()(1, 0);
            EXPECT_NEAR(pol.x2_lp, x2, 1e-12);
            EXPECT_NEAR(pol.x2_lp + pol.c2_lp, 1.0, 1e-15);
        }
    }
}

TEST(Polariton, PerturbativeWidthOnlyWithDetuning)
{
    const auto pol = model::polariton_data(params(14.5, 0.2, 100.0));
    ASSERT_TRUE(pol.gamma_lp_pert.has_value());
    EXPECT_NEAR(*pol.gamma_lp_pert, 0.2 * 14.5 * 14.5 / 1e4, 1e-15);
    EXPECT_FALSE(model::polariton_data(params(1.0, 0.2, 0.0)).gamma_lp_pert.has_value());
}

TEST(Polariton, LinewidthWeightsLossChannels)
{
    const auto p = params(14.5, 0.2, 100.0, 0.01);
    const auto pol = model::polariton_data(p);
    EXPECT_NEAR(model::lp_linewidth(p), pol.c2_lp * 0.2 + pol.x2_lp * 0.01, 1e-15);
}

TEST(Polariton, RejectsInvalidParameters)
{
    EXPECT_THROW(params(1.0, 0.0, 0.0).validate(), ConfigError);
    EXPECT_THROW(params(-1.0, 0.1, 0.0).validate(), ConfigError);
    EXPECT_THROW(params(1.0, 0.1, 0.0, -0.1).validate(), ConfigError);
    auto p = params(1.0, 0.1, 0.0);
    p.u_xx = -1.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = params(1.0, 0.1, std::nan(""));
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Units, RadiativeCouplingScaling)
{
    const double g = model::g_c_from_radiative(0.002, 1e-6);
    EXPECT_NEAR(model::g_c_from_radiative(0.008, 1e-6), 2.0 * g, 1e-14);
    EXPECT_NEAR(model::g_c_from_radiative(0.002, 4e-6), 0.5 * g, 1e-14);
    EXPECT_THROW(model::g_c_from_radiative(0.0, 1e-6), ConfigError);
    EXPECT_THROW(model::g_c_from_radiative(0.002, -1.0), ConfigError);
}

TEST(Units, RadiativeCouplingMatchesDimensionalAnalysisScript)
{
    // Frozen output of tests/oracles/g_c_units.py (SI route via scipy.constants).
    EXPECT_NEAR(model::g_c_from_radiative(0.002, 1e-6), 0.628214900267898, 1e-12);
}

TEST(Units, PicosecondConversion)
{
    EXPECT_NEAR(units::to_picoseconds(1.0), 0.6582119569, 1e-12);
}

TEST(FrequencyGrid, CoveringStraddlesAvoidedPoint)
{
    const auto g = FrequencyGrid::covering(-10.0, 20.0, 0.01, 0.0);
    EXPECT_LE(g.omega_min, -10.0);
    EXPECT_GE(g.omega_max, 20.0);
    EXPECT_NEAR(g.step(), 0.01, 1e-12);
    double closest = 1.0;
    for (double w : g.nodes()) closest = std::min(closest, std::abs(w));
    EXPECT_NEAR(closest, 0.005, 1e-9);
}

TEST(FrequencyGrid, RejectsDegenerateGrids)
{
    EXPECT_THROW((FrequencyGrid{1.0, 1.0, 10}.validate()), ConfigError);
    EXPECT_THROW((FrequencyGrid{0.0, 1.0, 1}.validate()), ConfigError);
}

} // namespace
