// spectral.cpp — Closed-form Hilbert transforms of piecewise-linear densities

#include "xblockade/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/expint.hpp>

namespace xblockade::spectral {

namespace {

double decay_length(double inner, double outer, double h)
{
    // Exponential continuation through the last two samples, if they decay.
    if (!(outer > 0.0) || !(inner > outer)) return 0.0;
    return h / std::log(inner / outer);
}

} // namespace

double scaled_exp_integral(double y)
{
    if (!(y > 0.0)) return std::numeric_limits<double>::infinity();
    if (y < 600.0) return std::exp(y) * boost::math::expint(1, y);
    // Asymptotic series, truncated well before its smallest term.
    double term = 1.0 / y, sum = term;
    for (int k = 1; k < 20; ++k) {
        term *= -static_cast<double>(k) / y;
        sum += term;
    }
    return sum;
}

PiecewiseDensity::PiecewiseDensity(const disorder::SelfEnergyTable& tbl)
    : nodes_(tbl.grid().nodes())
{
    const auto& v = tbl.values();
    rho_.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) rho_[i] = std::max(-v[i].imag() / std::numbers::pi, 0.0);

    const std::size_t n = nodes_.size();
    std::size_t first = 0;
    if (const auto edge = tbl.band_edge(); edge && edge->omega > nodes_.front() && edge->omega < nodes_.back()) {
        first = static_cast<std::size_t>(std::upper_bound(nodes_.begin(), nodes_.end(), edge->omega) - nodes_.begin());
        if (edge->onset == disorder::BandEdge::Onset::square_root) {
            // Near the edge rho = sqrt(w - edge) g(w) with g linear between
            // nodes; quadratic grading in the edge cell makes sqrt linear in
            // the sub-cell index, the next cells are split uniformly.
            constexpr int edge_cells = 32, split_cells = 8, sub = 16;
            const double e0 = edge->omega;
            const double span = nodes_[first] - e0;
            for (int j = 0; j < edge_cells; ++j) {
                const double t0 = static_cast<double>(j) / edge_cells, t1 = static_cast<double>(j + 1) / edge_cells;
                const double x1 = j + 1 == edge_cells ? nodes_[first] : e0 + span * t1 * t1;
                segments_.push_back({e0 + span * t0 * t0, x1, rho_[first] * t0, rho_[first] * t1});
            }
            const std::size_t stop = std::min(first + split_cells, n - 1);
            for (std::size_t i = first; i < stop; ++i) {
                const double g0 = rho_[i] / std::sqrt(nodes_[i] - e0);
                const double g1 = rho_[i + 1] / std::sqrt(nodes_[i + 1] - e0);
                const double dx = nodes_[i + 1] - nodes_[i];
                auto model = [&](int m) {
                    if (m == sub) return rho_[i + 1];
                    const double t = static_cast<double>(m) / sub;
                    return std::sqrt(nodes_[i] + t * dx - e0) * ((1.0 - t) * g0 + t * g1);
                };
                for (int m = 0; m < sub; ++m) {
                    const double x0 = nodes_[i] + dx * m / sub;
                    const double x1 = m + 1 == sub ? nodes_[i + 1] : nodes_[i] + dx * (m + 1) / sub;
                    segments_.push_back({x0, x1, model(m), model(m + 1)});
                }
            }
            first = stop;
        } else {
            const double r0 = std::max(-edge->im_sigma_above / std::numbers::pi, 0.0);
            if (r0 > 0.0 || rho_[first] > 0.0) segments_.push_back({edge->omega, nodes_[first], r0, rho_[first]});
        }
    }
    for (std::size_t i = first; i + 1 < n; ++i) {
        if (rho_[i] == 0.0 && rho_[i + 1] == 0.0) continue;
        segments_.push_back({nodes_[i], nodes_[i + 1], rho_[i], rho_[i + 1]});
    }

    const double h = tbl.grid().step();
    if (n >= 2) {
        lo_decay_ = decay_length(rho_[1], rho_[0], h);
        hi_decay_ = decay_length(rho_[n - 2], rho_[n - 1], h);
    }
}

cplx PiecewiseDensity::transform(cplx z) const
{
    cplx acc(0.0, 0.0);
    for (const auto& s : segments_) {
        const double m = (s.r1 - s.r0) / (s.x1 - s.x0);
        const cplx rz = s.r0 + m * (z - s.x0);
        acc += rz * (std::log(z - s.x0) - std::log(z - s.x1)) - m * (s.x1 - s.x0);
    }
    return acc;
}

std::optional<double> PiecewiseDensity::principal_value_at_node(std::size_t k) const
{
    const std::size_t n = nodes_.size();
    if ((k == 0 && rho_.front() > 0.0) || (k + 1 == n && rho_.back() > 0.0)) return std::nullopt;
    const double w = nodes_[k];

    double acc = 0.0;
    for (const auto& s : segments_) {
        const double m = (s.r1 - s.r0) / (s.x1 - s.x0);
        const double rw = s.r0 + m * (w - s.x0);
        // Log singularities at a shared node cancel between neighbouring cells.
        const double a = w - s.x0, b = w - s.x1;
        double logs = 0.0;
        if (a != 0.0) logs += std::log(std::abs(a));
        if (b != 0.0) logs -= std::log(std::abs(b));
        acc += rw * logs - m * (s.x1 - s.x0);
    }
    if (lo_decay_ > 0.0 && k > 0) {
        acc += rho_.front() * scaled_exp_integral((w - nodes_.front()) / lo_decay_);
    }
    if (hi_decay_ > 0.0 && k + 1 < n) {
        acc -= rho_.back() * scaled_exp_integral((nodes_.back() - w) / hi_decay_);
    }
    return acc;
}

double PiecewiseDensity::mass(double a, double b) const
{
    double acc = 0.0;
    for (const auto& s : segments_) {
        const double lo = std::max(a, s.x0), hi = std::min(b, s.x1);
        if (!(hi > lo)) continue;
        const double m = (s.r1 - s.r0) / (s.x1 - s.x0);
        const double rlo = s.r0 + m * (lo - s.x0), rhi = s.r0 + m * (hi - s.x0);
        acc += 0.5 * (rlo + rhi) * (hi - lo);
    }
    return acc;
}

} // namespace xblockade::spectral
