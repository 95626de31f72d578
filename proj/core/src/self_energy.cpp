// self_energy.cpp — Born and self-consistent Born disorder self-energies

#include "xblockade/self_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "xblockade/errors.hpp"
#include "parallel.hpp"
#include "xblockade/spectral.hpp"

namespace xblockade::disorder {

namespace {

constexpr double kPi = std::numbers::pi;
std::string describe(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// Parameters

FrequencyGrid default_grid(double sigma, double e_c)
{
    const double step = std::min(0.01, e_c / 64.0);
    return FrequencyGrid::covering(-10.0 * sigma, 20.0 * e_c, step, 0.0);
}

DisorderParams DisorderParams::with_default_grid(double sigma, std::optional<double> e_c)
{
    DisorderParams dp;
    dp.sigma = sigma;
    dp.e_c = e_c.value_or(sigma);
    dp.e_c_equals_sigma = !e_c.has_value() || *e_c == sigma;
    if (!(dp.sigma > 0.0) || !(dp.e_c > 0.0)) throw ConfigError("sigma and e_c must be > 0");
    dp.grid = default_grid(dp.sigma, dp.e_c);
    return dp;
}

void DisorderParams::validate() const
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
    if (!(e_c > 0.0) || !std::isfinite(e_c)) throw ConfigError("e_c must be > 0");
    if (e_c_equals_sigma && e_c != sigma) {
        throw ConfigError("e_c_equals_sigma is set but e_c (" + describe(e_c) + ") != sigma (" +
                          describe(sigma) + ")");
    }
    grid.validate();
    const double slack = 1e-9 * (std::abs(sigma) + std::abs(e_c));
    if (grid.omega_min > -10.0 * sigma + slack || grid.omega_max < 20.0 * e_c - slack) {
        throw ConfigError("frequency grid must span at least [-10 sigma, 20 e_c] = [" +
                          describe(-10.0 * sigma) + ", " + describe(20.0 * e_c) + "] meV");
    }
    if (grid.step() > e_c / 8.0) {
        throw ConfigError("frequency grid too coarse: needs at least 8 points per e_c");
    }
}

// ---------------------------------------------------------------------------
// Table

struct SelfEnergyTable::Splines {
    boost::math::interpolators::cardinal_cubic_b_spline<double> re;
    boost::math::interpolators::cardinal_cubic_b_spline<double> im;
};

SelfEnergyTable::SelfEnergyTable(FrequencyGrid grid, std::vector<cplx> values, double tail_weight,
                                 std::optional<BandEdge> band_edge, std::vector<int> iterations)
    : grid_(grid), values_(std::move(values)), tail_weight_(tail_weight), band_edge_(band_edge),
      iterations_(std::move(iterations))
{
    grid_.validate();
    if (values_.size() != grid_.n_points) throw ConfigError("self-energy table size does not match grid");
    if (grid_.n_points < 5) throw ConfigError("self-energy table needs at least 5 grid points");

    std::vector<double> re(values_.size()), im(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        re[i] = values_[i].real();
        im[i] = values_[i].imag();
        delta_dis_ = std::max(delta_dis_, std::abs(im[i]));
    }
    if (band_edge_) delta_dis_ = std::max(delta_dis_, std::abs(band_edge_->im_sigma_above));

    const double lo = grid_.omega_min, hi = grid_.omega_max;
    tail_lo_ = (re.front() - tail_weight_ / lo) * lo * lo;
    tail_hi_ = (re.back() - tail_weight_ / hi) * hi * hi;

    splines_ = std::make_shared<const Splines>(Splines{
        {re.data(), re.size(), lo, grid_.step()},
        {im.data(), im.size(), lo, grid_.step()},
    });
}

SelfEnergyTable SelfEnergyTable::zeros(FrequencyGrid grid)
{
    std::vector<cplx> values(grid.n_points, cplx(0.0, 0.0));
    return SelfEnergyTable(grid, std::move(values), 0.0, std::nullopt,
                           std::vector<int>(grid.n_points, 0));
}

cplx SelfEnergyTable::operator()(double omega) const
{
    const double lo = grid_.omega_min, hi = grid_.omega_max;
    if (omega < lo) return {tail_weight_ / omega + tail_lo_ / (omega * omega), 0.0};
    if (omega > hi) return {tail_weight_ / omega + tail_hi_ / (omega * omega), 0.0};

    const double re = splines_->re(omega);
    double im = 0.0;
    if (band_edge_ && omega < band_edge_->omega) {
        im = 0.0;
    } else if (band_edge_ && omega < band_edge_->omega + grid_.step()) {
        // The spline rings across the edge; between the edge and the first
        // node above it use the onset shape instead.
        const double h = grid_.step();
        const auto k = static_cast<std::size_t>(std::ceil((band_edge_->omega - lo) / h));
        const double xk = grid_.at(std::min(k, grid_.n_points - 1));
        if (omega >= xk) {
            im = splines_->im(omega);
        } else {
            const double w = (omega - band_edge_->omega) / (xk - band_edge_->omega);
            const double above = values_[std::min(k, grid_.n_points - 1)].imag();
            im = band_edge_->onset == BandEdge::Onset::square_root
                     ? std::sqrt(std::max(w, 0.0)) * above
                     : (1.0 - w) * band_edge_->im_sigma_above + w * above;
        }
    } else {
        im = splines_->im(omega);
    }
    return {re, std::min(im, 0.0)};
}

// ---------------------------------------------------------------------------
// Kernel

cplx scaled_exp_integral(cplx w)
{
    if (w == cplx(0.0, 0.0)) throw std::invalid_argument("scaled_exp_integral: E1 diverges at w = 0");
    const double a = std::abs(w);
    if (a > 50.0) {
        // Asymptotic series; the smallest term is ~e^-50, far below rounding.
        // The e^w (+-i pi) piece is beyond all orders but fixes the sign of Im
        // on the cut, so it is kept for Re w < 0.
        cplx sum = 1.0, term = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= -static_cast<double>(k) / w;
            sum += term;
            if (std::abs(term) <= 1e-17) break;
        }
        cplx out = sum / w;
        if (w.real() < 0.0) {
            const double jump = std::signbit(w.imag()) ? kPi : -kPi;
            out += std::exp(w) * cplx(0.0, jump);
        }
        return out;
    }
    if (w.real() > 0.0 ? a > 5.0 : std::abs(w.imag()) > 5.0) {
        // Modified Lentz evaluation of the continued fraction for e^w E1(w).
        constexpr double tiny = 1e-300;
        cplx b = w + 1.0;
        cplx c = 1.0 / tiny;
        cplx d = 1.0 / b;
        cplx h = d;
        for (int i = 1; i < 100000; ++i) {
            const double an = -static_cast<double>(i) * static_cast<double>(i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const cplx del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) return h;
        }
        throw ConvergenceError("scaled_exp_integral: continued fraction did not converge");
    }
    // Power series; in this region the terms never outgrow e^|w| by much
    // more than |w|, so cancellation stays mild.
    cplx sum = 0.0, term = 1.0;
    for (int k = 1; k < 100000; ++k) {
        term *= -w / static_cast<double>(k);
        const cplx add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return std::exp(w) * (-std::numbers::egamma - std::log(w) - sum);
}

cplx exponential_band_transform(cplx z, double scale)
{
    if (!(scale > 0.0)) throw std::invalid_argument("exponential_band_transform: scale must be > 0");
    if (z.imag() < 0.0) throw std::invalid_argument("exponential_band_transform: Im z must be >= 0");
    // F(z) = -e^{-z/s} E1(-z/s). A real z sits on the upper lip, so w = -z/s
    // carries Im w = -0.0 and the logarithm picks the lower lip of its cut.
    const cplx w(-z.real() / scale, -(z.imag() == 0.0 ? 0.0 : z.imag()) / scale);
    return -scaled_exp_integral(w);
}

cplx exponential_band_transform_derivative(cplx z, double scale, cplx value)
{
    return 1.0 / z - value / scale;
}

cplx disorder_kernel(double omega, cplx self_energy, double sigma, double e_c)
{
    const double amp = sigma * sigma / (2.0 * e_c);
    cplx z = omega - self_energy;
    return amp * exponential_band_transform(z, 2.0 * e_c);
}

cplx born_self_energy_at(double omega, double sigma, double e_c)
{
    if (omega == 0.0) throw std::invalid_argument("Born self-energy diverges logarithmically at omega = 0");
    cplx out = disorder_kernel(omega, cplx(0.0, 0.0), sigma, e_c);
    if (omega < 0.0) out = cplx(out.real(), 0.0);
    return out;
}

SelfEnergyTable born_self_energy(const DisorderParams& dp)
{
    dp.validate();
    const std::size_t n = dp.grid.n_points;
    for (std::size_t i = 0; i < n; ++i) {
        if (dp.grid.at(i) == 0.0) throw ConfigError("Born grid has a node on the band edge omega = 0");
    }
    std::vector<cplx> values(n);
    detail::parallel_for(n, [&](std::size_t i) {
        values[i] = born_self_energy_at(dp.grid.at(static_cast<std::size_t>(i)), dp.sigma, dp.e_c);
    });
    const double amp = dp.sigma * dp.sigma / (2.0 * dp.e_c);
    return SelfEnergyTable(dp.grid, std::move(values), dp.sigma * dp.sigma, BandEdge{0.0, -kPi * amp},
                           std::vector<int>(n, 0));
}

// ---------------------------------------------------------------------------
// SCBA

namespace {

struct NodeResult {
    cplx value;
    int iterations = 0;
    double residual = 0.0;
    enum class Status { ok, not_converged, causality } status = Status::ok;
};

NodeResult solve_node(double omega, const DisorderParams& dp, const ScbaOptions& opts)
{
    const double amp = dp.sigma * dp.sigma / (2.0 * dp.e_c);
    const double scale = 2.0 * dp.e_c;
    NodeResult r;
    cplx s = omega == 0.0 ? cplx(0.0, 0.0) : born_self_energy_at(omega, dp.sigma, dp.e_c);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) s = cplx(0.0, -kPi * amp);

    struct Eval {
        cplx f, rhs;
        double residual;
    };
    auto evaluate = [&](cplx x) {
        const cplx z(omega - x.real(), std::max(-x.imag(), 0.0));
        const cplx f = exponential_band_transform(z, scale);
        return Eval{f, amp * f, std::abs(amp * f - x)};
    };

    // The damped map selects the causal root; Newton on s - A F(omega - s)
    // only polishes once the iterate sits in its basin, and a Newton step is
    // kept only if it lowers the undamped residual.
    const double polish_below = std::max(1e3 * opts.tol, 1e-4 * amp);
    Eval cur = evaluate(s);
    for (int it = 1; it <= opts.max_iter; ++it) {
        r.iterations = it;
        r.residual = cur.residual;
        if (cur.rhs.imag() > opts.tol) {
            r.status = NodeResult::Status::causality;
            r.value = cur.rhs;
            return r;
        }
        if (cur.residual < 1e-6 * opts.tol) break;

        bool improved = false;
        if (cur.residual < polish_below) {
            const cplx z(omega - s.real(), std::max(-s.imag(), 0.0));
            const cplx jac = 1.0 + amp * exponential_band_transform_derivative(z, scale, cur.f);
            const cplx next = s - (s - cur.rhs) / jac;
            if (std::isfinite(next.real()) && std::isfinite(next.imag()) && next.imag() <= 0.0) {
                const Eval trial = evaluate(next);
                if (trial.residual < cur.residual) {
                    s = next;
                    cur = trial;
                    improved = true;
                }
            }
            if (!improved && cur.residual < opts.tol) break;
        }
        if (!improved) {
            s = (1.0 - opts.mixing) * s + opts.mixing * cur.rhs;
            if (s.imag() > opts.tol) {
                r.status = NodeResult::Status::causality;
                r.value = s;
                return r;
            }
            cur = evaluate(s);
        }
    }
    r.residual = cur.residual;
    r.value = cplx(s.real(), std::min(s.imag(), 0.0));
    if (cur.residual >= opts.tol) r.status = NodeResult::Status::not_converged;
    return r;
}

} // namespace

SelfEnergyTable scba_self_energy(const DisorderParams& dp, const ScbaOptions& opts)
{
    dp.validate();
    if (!(opts.mixing > 0.0 && opts.mixing <= 1.0)) throw ConfigError("mixing must lie in (0, 1]");
    if (!(opts.tol > 0.0)) throw ConfigError("tol must be > 0");
    if (opts.max_iter < 1) throw ConfigError("max_iter must be >= 1");

    const std::size_t n = dp.grid.n_points;
    std::vector<NodeResult> results(n);
    detail::parallel_for(n, [&](std::size_t i) {
        results[i] = solve_node(dp.grid.at(static_cast<std::size_t>(i)), dp, opts);
    });

    std::vector<cplx> values(n);
    std::vector<int> iterations(n);
    std::size_t worst = n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = results[i];
        if (r.status == NodeResult::Status::causality) {
            throw ConvergenceError("SCBA causality violation at omega = " + describe(dp.grid.at(i)) +
                                   " meV: Im Sigma = " + describe(r.value.imag()) + " meV");
        }
        if (r.status == NodeResult::Status::not_converged &&
            (worst == n || r.residual > results[worst].residual)) {
            worst = i;
        }
        values[i] = r.value;
        iterations[i] = r.iterations;
    }
    if (worst != n) {
        throw ConvergenceError("SCBA did not converge within " + std::to_string(opts.max_iter) +
                               " iterations; worst omega = " + describe(dp.grid.at(worst)) +
                               " meV, residual = " + describe(results[worst].residual) + " meV");
    }
    const auto edge = locate_square_root_edge(dp.grid, values);
    return SelfEnergyTable(dp.grid, std::move(values), dp.sigma * dp.sigma, edge, std::move(iterations));
}

std::optional<BandEdge> locate_square_root_edge(const FrequencyGrid& grid, const std::vector<cplx>& values)
{
    const std::size_t n = values.size();
    std::size_t k = 0;
    while (k < n && values[k].imag() == 0.0) ++k;
    if (k == 0 || k + 1 >= n) return std::nullopt;
    const double q0 = values[k].imag() * values[k].imag();
    const double q1 = values[k + 1].imag() * values[k + 1].imag();
    if (!(q1 > q0)) return std::nullopt;
    const double h = grid.step();
    // Zero of the line through (x_k, q0), (x_k+1, q1), kept inside the gap cell.
    const double edge = std::clamp(grid.at(k) - q0 * h / (q1 - q0), grid.at(k - 1), grid.at(k));
    return BandEdge{edge, 0.0, BandEdge::Onset::square_root};
}

double resubstitution_residual(const SelfEnergyTable& tbl, const DisorderParams& dp)
{
    const auto& v = tbl.values();
    const std::size_t n = v.size();
    std::vector<double> res(n);
    detail::parallel_for(n, [&](std::size_t i) {
        const auto k = static_cast<std::size_t>(i);
        res[k] = std::abs(disorder_kernel(tbl.grid().at(k), v[k], dp.sigma, dp.e_c) - v[k]);
    });
    return *std::max_element(res.begin(), res.end());
}

// ---------------------------------------------------------------------------
// Calibration

Calibration calibrate_sigma(double target, double tol, const ScbaOptions& opts)
{
    if (!(target > 0.0) || !std::isfinite(target)) throw ConfigError("target delta_dis must be > 0");
    if (!(tol > 0.0)) throw ConfigError("calibration tol must be > 0");

    struct Sample {
        double sigma;
        double f;
        std::optional<SelfEnergyTable> table;
    };
    std::optional<Sample> best;
    int evaluations = 0;

    auto eval = [&](double sigma) {
        const auto dp = DisorderParams::with_default_grid(sigma);
        auto table = scba_self_energy(dp, opts);
        ++evaluations;
        const double f = table.delta_dis() - target;
        if (!best || std::abs(f) < std::abs(best->f)) best = Sample{sigma, f, std::move(table)};
        return f;
    };

    // Born seed: delta_dis = pi sigma / 2 at E_c = sigma.
    const double seed = 2.0 * target / kPi;
    double lo = seed, hi = seed;
    double flo = eval(seed), fhi = flo;
    constexpr double kExpand = 1.5;
    constexpr int kMaxExpand = 30;
    int expansions = 0;
    if (flo < 0.0) {
        while (fhi < 0.0) {
            if (++expansions > kMaxExpand) {
                throw ConvergenceError("calibrate_sigma: no bracket in sigma = [" + describe(seed) + ", " +
                                       describe(hi) + "] meV");
            }
            lo = hi;
            flo = fhi;
            hi *= kExpand;
            fhi = eval(hi);
        }
    } else {
        while (flo > 0.0) {
            if (++expansions > kMaxExpand) {
                throw ConvergenceError("calibrate_sigma: no bracket in sigma = [" + describe(lo) + ", " +
                                       describe(seed) + "] meV");
            }
            hi = lo;
            fhi = flo;
            lo /= kExpand;
            flo = eval(lo);
        }
    }

    if (std::abs(best->f) > tol) {
        auto done = [&](double a, double b) {
            return std::abs(best->f) <= tol || std::abs(b - a) <= 1e-14 * std::abs(b);
        };
        std::uintmax_t max_iter = 100;
        const auto bracket = boost::math::tools::toms748_solve(eval, lo, hi, flo, fhi, done, max_iter);
        lo = bracket.first;
        hi = bracket.second;
    }
    if (std::abs(best->f) > tol) {
        throw ConvergenceError("calibrate_sigma: |delta_dis - target| = " + describe(std::abs(best->f)) +
                               " meV exceeds tol in bracket [" + describe(lo) + ", " + describe(hi) + "] meV");
    }

    return Calibration{DisorderParams::with_default_grid(best->sigma), std::move(*best->table), lo, hi, evaluations};
}

// ---------------------------------------------------------------------------
// Kramers-Kronig

double kk_residual(const SelfEnergyTable& tbl)
{
    const spectral::PiecewiseDensity rho(tbl);
    const auto& v = tbl.values();
    double worst = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto pv = rho.principal_value_at_node(k);
        if (!pv) continue;
        worst = std::max(worst, std::abs(v[k].real() - *pv));
    }
    return worst;
}

} // namespace xblockade::disorder
