// test_config.cpp — INI parsing, validation and round trips

#include <gtest/gtest.h>

#include "xblockade/config.hpp"
#include "xblockade/errors.hpp"

namespace {

using namespace xblockade;
using namespace xblockade::harness;

constexpr const char* kMinimal = R"(
[system]
g_c_meV = 0.5
kappa_c_meV = 0.1
delta_c_meV = 1
)";

TEST(Config, MinimalFillsDefaults)
{
    const auto cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.system.g_c, 0.5);
    EXPECT_EQ(cfg.system.gamma_d, 0.0);
    EXPECT_FALSE(cfg.disorder.enabled());
    EXPECT_EQ(cfg.drive.mode, two_photon::DriveMode::lp_shifted);
    EXPECT_EQ(cfg.g2.n_tau, 2048u);
    EXPECT_EQ(cfg.spectrum.n_points, 20001u);
    EXPECT_EQ(cfg.oracle_modes, 300u);
}

TEST(Config, RoundTripIsExact)
{
    for (const auto& name : preset_names()) {
        const auto cfg = parse_config(*preset_text(name));
        const auto text = cfg.to_ini();
        EXPECT_EQ(parse_config(text).to_ini(), text) << name;
    }
    auto cfg = parse_config(std::string(kMinimal) + "[drive]\nomega_L_meV = -0.123456789012345678\n");
    EXPECT_EQ(cfg.drive.mode, two_photon::DriveMode::fixed);
    EXPECT_EQ(parse_config(cfg.to_ini()).system.omega_l, cfg.system.omega_l);
}

TEST(Config, PresetsParse)
{
    const auto names = preset_names();
    ASSERT_EQ(names.size(), 2u);
    const auto f2 = parse_config(*preset_text("fig2"));
    EXPECT_EQ(f2.sweep.g_c.size(), 3u);
    EXPECT_EQ(*f2.disorder.delta_dis, 1.0);
    const auto f3 = parse_config(*preset_text("fig3"));
    EXPECT_EQ(f3.sweep.u.size(), 2u);
    EXPECT_FALSE(preset_text("nosuch").has_value());
}

TEST(Config, RejectsUnknownSectionsAndKeys)
{
    EXPECT_THROW(parse_config(std::string(kMinimal) + "[extra]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse_config(std::string(kMinimal) + "[g2]\nn_taus = 4\n"), ConfigError);
    EXPECT_THROW(parse_config("g_c_meV = 1\n"), ConfigError);
}

TEST(Config, RejectsInvalidValues)
{
    const std::string base = kMinimal;
    EXPECT_THROW(parse_config("[system]\ng_c_meV = 0.5\nkappa_c_meV = 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config("[system]\ng_c_meV = x\nkappa_c_meV = 0.1\ndelta_c_meV = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("[system]\ng_c_meV = 1\nkappa_c_meV = 0\ndelta_c_meV = 0\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[disorder]\ndelta_dis_meV = 1\nsigma_meV = 1\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[disorder]\nsigma_meV = 1\ne_c_meV = 2\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[disorder]\nsigma_meV = 1\nomega_min_meV = -10\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[disorder]\nsigma_meV = 1\nmixing = 0\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[g2]\nn_tau = 1\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[g2]\nn_tau = -5\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[sweep]\ng_c_meV =\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "[disorder]\nec_equals_sigma = maybe\n"), ConfigError);
}

TEST(Config, ExplicitDisorderGrid)
{
    const auto cfg = parse_config(std::string(kMinimal) +
                                  "[disorder]\nsigma_meV = 1\nomega_min_meV = -10\nomega_max_meV = 20\nn_points = 3001\n");
    ASSERT_TRUE(cfg.disorder.grid.has_value());
    EXPECT_EQ(cfg.disorder.grid->n_points, 3001u);
    EXPECT_TRUE(cfg.disorder.enabled());
    EXPECT_FALSE(parse_config(std::string(kMinimal) + "[disorder]\nsigma_meV = 0\n").disorder.enabled());
}

TEST(FormatDouble, SeventeenSignificantDigits)
{
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(-2.0), "-2");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

} // namespace
