// spectral.hpp — Piecewise-linear spectral densities and their Hilbert transforms
//
// A retarded self-energy with spectral density rho(E) = -Im Sigma(E) / pi obeys
// Sigma(z) = int rho(E) / (z - E) dE. Here rho is the linear interpolant of
// tabulated samples; every cell is integrated in closed form.

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "xblockade/self_energy.hpp"

namespace xblockade::spectral {

using cplx = std::complex<double>;

struct Segment {
    double x0, x1;  ///< endpoints, x0 < x1
    double r0, r1;  ///< density at the endpoints
};

class PiecewiseDensity {
public:
    explicit PiecewiseDensity(const disorder::SelfEnergyTable& tbl);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& density() const noexcept { return rho_; }

    /// int rho(E) / (z - E) dE for Im z > 0.
    cplx transform(cplx z) const;

    /// Principal value int rho(E) / (w_k - E) dE at grid node k, including an
    /// exponential tail correction beyond the grid. Empty when the principal
    /// value diverges there (nonzero density at a grid end).
    std::optional<double> principal_value_at_node(std::size_t k) const;

    /// int_a^b rho(E) dE.
    double mass(double a, double b) const;

private:
    std::vector<double> nodes_;
    std::vector<double> rho_;
    std::vector<Segment> segments_;
    double lo_decay_ = 0.0;  ///< exponential tail length below the grid (0: none)
    double hi_decay_ = 0.0;
};

/// exp(y) E_1(y) for y > 0, stable for large y.
double scaled_exp_integral(double y);

} // namespace xblockade::spectral
