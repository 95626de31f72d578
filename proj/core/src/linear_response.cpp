// linear_response.cpp — Transmission spectra and line-shape extraction

#include "xblockade/linear_response.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "xblockade/errors.hpp"
#include "parallel.hpp"

namespace xblockade::response {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using RealFn = std::function<double(double)>;

double polish_extremum(const RealFn& T, double a, double b, bool is_dip, double& value)
{
    auto f = [&](double w) { return is_dip ? T(w) : -T(w); };
    const auto r = boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits);
    value = is_dip ? r.second : -r.second;
    return r.first;
}

double crossing(const RealFn& T, double a, double b, double level)
{
    auto f = [&](double w) { return T(w) - level; };
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::bisect(f, a, b, tol, it);
    return 0.5 * (r.first + r.second);
}

/// Half-level crossings around index i (the extremum) on the sampled curve.
/// `above` is true when the curve lies above `level` at the extremum.
double width_at_level(const RealFn& T, const std::vector<double>& x, const std::vector<double>& y,
                      std::size_t i, double center, double level, bool above)
{
    auto inside = [&](double v) { return above ? v > level : v < level; };
    std::size_t l = i;
    while (l > 0 && inside(y[l - 1])) --l;
    std::size_t r = i;
    while (r + 1 < y.size() && inside(y[r + 1])) ++r;
    if (l == 0 || r + 1 == y.size()) return kNaN;
    const double left = crossing(T, x[l - 1], std::min(x[l], center), level);
    const double right = crossing(T, std::max(x[r], center), x[r + 1], level);
    return right - left;
}

} // namespace

GreenMatrix green(double omega, const SystemParams& p, cplx sigma)
{
    const cplx i(0.0, 1.0);
    const cplx a = omega - p.delta_c + i * (p.kappa_c / 2.0);
    const cplx d = omega - sigma + i * (p.gamma_d / 2.0);
    const double g = p.g_c;
    // Decoupled cavity: a lossless exciton pole must not leak into G_cc.
    if (g == 0.0) return GreenMatrix{1.0 / a, 0.0, 0.0, 1.0 / d};
    const cplx det = a * d - g * g;
    return GreenMatrix{d / det, g / det, g / det, a / det};
}

GreenMatrix green(double omega, const SystemParams& p, const SelfEnergyTable* tbl)
{
    return green(omega, p, tbl ? (*tbl)(omega) : cplx(0.0, 0.0));
}

cplx transmission(double omega, const SystemParams& p, const SelfEnergyTable* tbl)
{
    return cplx(0.0, p.kappa_c / 2.0) * green(omega, p, tbl).cc;
}

const Resonance* SpectrumTable::main_peak() const
{
    const Resonance* best = nullptr;
    for (const auto& r : peaks) {
        if (!best || r.value > best->value) best = &r;
    }
    return best;
}

SpectrumTable spectrum(const std::vector<double>& grid, const SystemParams& params,
                       const SelfEnergyTable* tbl, std::optional<double> gamma_markov_override)
{
    params.validate();
    if (grid.size() < 3) throw ConfigError("spectrum grid needs at least 3 points");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1])) throw ConfigError("spectrum grid must be strictly increasing");
    }
    SystemParams p = params;
    if (gamma_markov_override) {
        if (*gamma_markov_override < 0.0) throw ConfigError("Markovian gamma override must be >= 0");
        p.gamma_d = *gamma_markov_override;
        tbl = nullptr;
    }

    const std::size_t n = grid.size();
    SpectrumTable out;
    out.omega = grid;
    out.t.resize(n);
    out.T.resize(n);
    out.R.resize(n);
    detail::parallel_for(n, [&](std::size_t k) {
        const cplx t = transmission(grid[k], p, tbl);
        out.t[k] = t;
        out.T[k] = std::norm(t);
        out.R[k] = std::norm(t - 1.0);
    });

    const RealFn T = [&](double w) { return std::norm(transmission(w, p, tbl)); };
    const auto& y = out.T;
    std::vector<std::size_t> peak_idx, dip_idx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) peak_idx.push_back(i);
        if (y[i] < y[i - 1] && y[i] <= y[i + 1]) dip_idx.push_back(i);
    }

    for (std::size_t i : peak_idx) {
        Resonance r;
        r.omega = polish_extremum(T, grid[i - 1], grid[i + 1], false, r.value);
        r.level = 0.5 * r.value;
        r.fwhm = width_at_level(T, grid, y, i, r.omega, r.level, true);
        if (std::isnan(r.fwhm)) {
            out.warnings.push_back("peak near " + std::to_string(grid[i]) +
                                   " meV: half-maximum crossing outside the grid");
        }
        out.peaks.push_back(r);
    }
    for (std::size_t i : dip_idx) {
        Resonance r;
        r.is_dip = true;
        r.omega = polish_extremum(T, grid[i - 1], grid[i + 1], true, r.value);
        // Reference level: lower of the nearest maxima on either side.
        double left = *std::max_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(i));
        double right = *std::max_element(y.begin() + static_cast<std::ptrdiff_t>(i) + 1, y.end());
        for (const auto& pk : out.peaks) {
            if (pk.omega < r.omega) left = pk.value;
        }
        for (auto it = out.peaks.rbegin(); it != out.peaks.rend(); ++it) {
            if (it->omega > r.omega) right = it->value;
        }
        r.level = 0.5 * (r.value + std::min(left, right));
        r.fwhm = width_at_level(T, grid, y, i, r.omega, r.level, false);
        if (std::isnan(r.fwhm)) {
            out.warnings.push_back("dip near " + std::to_string(grid[i]) +
                                   " meV: half-depth crossing outside the grid");
        }
        out.dips.push_back(r);
    }
    if (peak_idx.empty() && dip_idx.empty()) out.warnings.push_back("no extremum inside the grid");
    return out;
}

DarkResonance dark_resonance_metrics(const SystemParams& params, const SelfEnergyTable* tbl)
{
    params.validate();
    if (params.delta_c != 0.0) throw ConfigError("dark_resonance_metrics requires delta_c == 0");
    DarkResonance out;
    out.outside_regime = params.kappa_c <= 4.0 * params.g_c;
    if (params.g_c == 0.0) return out;

    // Without losses the polariton maxima sit at +-g_c for every kappa_c.
    const double half = 3.0 * params.g_c;
    constexpr std::size_t kPoints = 8001;
    std::vector<double> grid(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) {
        grid[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(kPoints - 1);
    }
    const auto spec = spectrum(grid, params, tbl);
    const Resonance* dip = nullptr;
    for (const auto& d : spec.dips) {
        if (!dip || std::abs(d.omega) < std::abs(dip->omega)) dip = &d;
    }
    if (!dip) return out;
    out.present = true;
    out.dip_omega = dip->omega;
    out.dip_T = dip->value;
    out.dip_fwhm = dip->fwhm;
    return out;
}

double dressed_lp_estimate(const SystemParams& params, const SelfEnergyTable* tbl)
{
    const auto pol = model::polariton_data(params);
    double w = pol.omega_lp;
    if (!tbl || params.g_c == 0.0) return w;
    const double g2 = params.g_c * params.g_c;
    for (int it = 0; it < 200; ++it) {
        const double next = (*tbl)(w).real() + g2 / (w - params.delta_c);
        if (std::abs(next - w) < 1e-13 * std::max(1.0, std::abs(w))) return next;
        w = next;
    }
    return w;
}

Resonance find_lp_peak(const SystemParams& params, const SelfEnergyTable* tbl)
{
    const auto pol = model::polariton_data(params);
    const double center = dressed_lp_estimate(params, tbl);
    const double loss = tbl ? -2.0 * (*tbl)(center).imag() : 0.0;
    const double width = pol.c2_lp * params.kappa_c + pol.x2_lp * (params.gamma_d + loss);
    double half = 20.0 * std::max(width, 1e-9);
    if (params.g_c > 0.0) half = std::min(half, 0.5 * (pol.omega_up - pol.omega_lp));

    constexpr std::size_t kPoints = 4001;
    std::vector<double> grid(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i) {
        grid[i] = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(kPoints - 1);
    }
    const auto spec = spectrum(grid, params, tbl);
    const Resonance* pk = spec.main_peak();
    if (!pk) {
        throw ConvergenceError("no lower-polariton transmission maximum within " + std::to_string(half) +
                               " meV of " + std::to_string(center) + " meV");
    }
    return *pk;
}

double peak_transmission_formula(double gamma_radiative, double gamma_extra)
{
    const double r = gamma_radiative / (gamma_radiative + gamma_extra);
    return r * r;
}

} // namespace xblockade::response
