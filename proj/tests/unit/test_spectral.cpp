// test_spectral.cpp — Piecewise-linear densities: transforms, principal values, sum rules

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "xblockade/self_energy.hpp"
#include "xblockade/spectral.hpp"

namespace {

using namespace xblockade;
using spectral::cplx;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kPi = std::numbers::pi;

double triangle(double e) { return std::max(0.0, 1.0 - std::abs(e)); }

disorder::SelfEnergyTable triangle_table()
{
    const FrequencyGrid g{-2.0, 2.0, 401};
    std::vector<cplx> v(g.n_points);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(0.0, -kPi * triangle(g.at(i)));
    return {g, v, 1.0};
}

TEST(PiecewiseDensity, TransformMatchesQuadrature)
{
    const spectral::PiecewiseDensity pd(triangle_table());
    for (const cplx z : {cplx(0.3, 0.05), cplx(-1.2, 0.4), cplx(2.5, 1e-2), cplx(0.0, 3.0)}) {
        double err = 0.0;
        auto part = [&](auto f) {
            return GK::integrate(f, -1.0, 0.0, 20, 1e-13, &err) + GK::integrate(f, 0.0, 1.0, 20, 1e-13, &err);
        };
        const double re = part([&](double e) { return (triangle(e) / (z - e)).real(); });
        const double im = part([&](double e) { return (triangle(e) / (z - e)).imag(); });
        EXPECT_LT(std::abs(pd.transform(z) - cplx(re, im)), 1e-9) << z;
    }
}

TEST(PiecewiseDensity, PrincipalValueMatchesSubtractedQuadrature)
{
    const spectral::PiecewiseDensity pd(triangle_table());
    const auto nodes = pd.nodes();
    for (std::size_t k : {50u, 120u, 200u, 263u, 330u}) {
        const double w = nodes[k];
        double err = 0.0;
        auto f = [&](double e) { return e == w ? 0.0 : (triangle(e) - triangle(w)) / (w - e); };
        double ref = 0.0;
        if (triangle(w) > 0.0) {
            ref = GK::integrate(f, -1.0, w, 20, 1e-12, &err) + GK::integrate(f, w, 1.0, 20, 1e-12, &err) +
                  triangle(w) * std::log((w + 1.0) / (1.0 - w));
        } else {
            ref = GK::integrate([&](double e) { return triangle(e) / (w - e); }, -1.0, 1.0, 20, 1e-12, &err);
        }
        const auto pv = pd.principal_value_at_node(k);
        ASSERT_TRUE(pv.has_value());
        EXPECT_NEAR(*pv, ref, 1e-9) << w;
    }
}

TEST(PiecewiseDensity, MassIsExactForLinearPieces)
{
    const spectral::PiecewiseDensity pd(triangle_table());
    EXPECT_NEAR(pd.mass(-5.0, 5.0), 1.0, 1e-12);
    EXPECT_NEAR(pd.mass(0.0, 0.5), 0.375, 1e-12);
    EXPECT_EQ(pd.mass(1.5, 2.0), 0.0);
}

TEST(PiecewiseDensity, ScbaSumRule)
{
    // Sigma ~ sigma^2 / w at large w: total spectral weight equals sigma^2.
    const auto tbl = disorder::scba_self_energy(disorder::DisorderParams::with_default_grid(1.0));
    const spectral::PiecewiseDensity pd(tbl);
    EXPECT_NEAR(pd.mass(-100.0, 100.0), 1.0, 1e-3);
    // Far from the real axis the transform reproduces the asymptote.
    const cplx z(0.0, 1e4);
    EXPECT_LT(std::abs(pd.transform(z) - 1.0 / z), 1e-3 / std::abs(z));
}

TEST(ScaledExpIntegral, RealMatchesBoost)
{
    for (double y : {1e-6, 0.01, 0.5, 1.0, 7.0, 40.0, 300.0}) {
        const double ref = std::exp(y) * boost::math::expint(1, y);
        EXPECT_NEAR(spectral::scaled_exp_integral(y), ref, 1e-12 * ref) << y;
    }
    for (double y : {800.0, 1e4, 1e7}) {
        const double v = spectral::scaled_exp_integral(y);
        EXPECT_GT(v, 1.0 / (y + 1.0));
        EXPECT_LT(v, 1.0 / y);
    }
}

TEST(ScaledExpIntegral, ComplexAgreesWithRealOnPositiveAxis)
{
    for (double y : {0.2, 3.0, 12.0, 75.0}) {
        const cplx c = disorder::scaled_exp_integral(cplx(y, 0.0));
        EXPECT_NEAR(c.real(), spectral::scaled_exp_integral(y), 1e-12);
        EXPECT_NEAR(c.imag(), 0.0, 1e-14);
    }
}

TEST(ScaledExpIntegral, BranchCutLips)
{
    // Across the negative real axis e^w E1(w) jumps by 2 pi i e^w.
    for (double x : {-0.5, -3.0, -20.0}) {
        const cplx below = disorder::scaled_exp_integral(cplx(x, -0.0));
        const cplx above = disorder::scaled_exp_integral(cplx(x, 0.0));
        EXPECT_NEAR((below - above).imag(), 2.0 * kPi * std::exp(x), 1e-10 * std::max(1.0, std::exp(x)));
        EXPECT_NEAR(below.real(), -std::exp(x) * boost::math::expint(-x), 1e-10);
    }
}

} // namespace
