// two_photon.cpp — Pair bubble, T-matrix and Fourier synthesis of g2(tau)

#include "xblockade/two_photon.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "xblockade/errors.hpp"
#include "parallel.hpp"
#include "xblockade/linear_response.hpp"

namespace xblockade::two_photon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindowFactor = 1e3;      // chi window in units of bandwidth_scale
constexpr double kMaxTailFraction = 0.01;  // of |chi|
constexpr double kChiTol = 1e-10;          // relative, per breakpoint interval
constexpr unsigned kChiDepth = 15;
constexpr std::size_t kMaxFft = std::size_t{1} << 27;

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double min_width(const DressedModes& modes)
{
    double w = std::numeric_limits<double>::infinity();
    for (const auto& f : modes.features()) w = std::min(w, f.width);
    return w;
}

} // namespace

// ---------------------------------------------------------------------------
// Mode networks

CavityExcitonModes::CavityExcitonModes(const SystemParams& params, const SelfEnergyTable* tbl)
    : params_(params)
{
    params_.validate();
    if (tbl) table_ = *tbl;
    const SelfEnergyTable* t = table_ ? &*table_ : nullptr;
    const auto pol = model::polariton_data(params_);
    const double delta_dis = t ? t->delta_dis() : 0.0;
    auto loss = [&](double w) { return t ? -2.0 * (*t)(w).imag() : 0.0; };
    const double floor = 1e-9 * std::max({1.0, std::abs(params_.delta_c), params_.g_c});

    const double lp = response::dressed_lp_estimate(params_, t);
    double up = pol.omega_up;
    if (t && params_.g_c > 0.0) {
        const double g2 = params_.g_c * params_.g_c;
        for (int it = 0; it < 200; ++it) {
            const double next = params_.delta_c + g2 / (up - (*t)(up).real());
            if (std::abs(next - up) < 1e-13 * std::max(1.0, std::abs(up))) break;
            up = next;
        }
    }
    const double x2 = pol.x2_lp, c2 = pol.c2_lp;
    features_.push_back({lp, std::max(c2 * params_.kappa_c + x2 * (params_.gamma_d + loss(lp)), floor)});
    features_.push_back({up, std::max(x2 * params_.kappa_c + c2 * (params_.gamma_d + loss(up)), floor)});
    if (t) {
        const double w = std::max(delta_dis, floor);
        features_.push_back({0.0, w});
        if (const auto edge = t->band_edge()) features_.push_back({edge->omega, w});
        features_.push_back({t->grid().omega_min, w});
        features_.push_back({t->grid().omega_max, w});
    }

    scale_ = std::max({params_.kappa_c, params_.gamma_d, delta_dis, params_.g_c});
    for (const auto& f : features_) scale_ = std::max({scale_, std::abs(f.omega), f.width});

    const double pull = params_.delta_c != 0.0 ? params_.g_c * params_.g_c / std::abs(params_.delta_c)
                                               : params_.g_c;
    fft_scale_ = std::max({params_.kappa_c, pull, delta_dis, params_.gamma_d});
}

cplx CavityExcitonModes::port_port(double omega) const
{
    return response::green(omega, params_, table_ ? &*table_ : nullptr).cc;
}

cplx CavityExcitonModes::port_kerr(double omega) const
{
    return response::green(omega, params_, table_ ? &*table_ : nullptr).xc;
}

cplx CavityExcitonModes::kerr_kerr(double omega) const
{
    return response::green(omega, params_, table_ ? &*table_ : nullptr).xx;
}

SingleKerrMode::SingleKerrMode(double omega_mode, double gamma) : omega_(omega_mode), gamma_(gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma) || !std::isfinite(omega_mode)) {
        throw ConfigError("SingleKerrMode requires a finite mode energy and gamma > 0");
    }
}

cplx SingleKerrMode::port_port(double omega) const
{
    return 1.0 / cplx(omega - omega_, gamma_ / 2.0);
}

// ---------------------------------------------------------------------------
// Pair bubble and T-matrix

PairBubble pair_bubble(double energy, const DressedModes& modes)
{
    // nu = E/2 + x; the integrand is even in x, so integrate x >= 0 twice.
    const double a = energy / 2.0;
    const double half = kWindowFactor * std::max(modes.bandwidth_scale(), std::abs(energy));
    auto f = [&](double x) { return 2.0 * modes.kerr_kerr(a + x) * modes.kerr_kerr(a - x); };

    std::vector<double> pts{0.0, half};
    for (const auto& ft : modes.features()) {
        const double c = std::abs(ft.omega - a);
        for (double k : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
            pts.push_back(c - k * ft.width);
            pts.push_back(c + k * ft.width);
        }
    }
    std::erase_if(pts, [&](double p) { return !(p >= 0.0 && p <= half); });
    std::sort(pts.begin(), pts.end());
    // Geometric breakpoints across the slowly decaying 1/x^2 region.
    for (double p = std::max(pts[pts.size() - 2], 1e-3 * half) * 4.0; p < half; p *= 4.0) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double l, double r) { return r - l <= 1e-14 * half; }),
              pts.end());

    cplx body(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0;
        body += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, pts[i], pts[i + 1], kChiDepth,
                                                                                kChiTol, &err);
    }
    // Beyond the window G(nu) -> 1/nu: int_W^inf 2 dx / (a^2 - x^2).
    const double tail = std::abs(a) > 1e-12 * half ? -std::log1p(2.0 * a / (half - a)) / a : -2.0 / half;

    PairBubble out;
    out.energy = energy;
    out.half_window = half;
    const cplx pref(0.0, 1.0 / kPi);
    out.tail = pref * tail;
    out.chi = pref * (body + tail);
    if (std::abs(out.tail) > kMaxTailFraction * std::abs(out.chi)) {
        throw ConvergenceError("pair bubble tail exceeds 1% of chi at E = " + std::to_string(energy) +
                               " meV; the frequency window must be extended");
    }
    return out;
}

cplx pair_bubble(double energy, const SystemParams& params, const SelfEnergyTable* tbl)
{
    return pair_bubble(energy, CavityExcitonModes(params, tbl)).chi;
}

cplx t_matrix(double energy, double u, const DressedModes& modes)
{
    if (u == 0.0) return {0.0, 0.0};
    return u / (1.0 - u * pair_bubble(energy, modes).chi);
}

cplx t_matrix(double energy, const SystemParams& params, const SelfEnergyTable* tbl)
{
    return t_matrix(energy, params.u_xx, CavityExcitonModes(params, tbl));
}

// ---------------------------------------------------------------------------
// g2(tau)

std::vector<double> uniform_tau_grid(double tau_max, std::size_t n)
{
    if (n < 2 || !(tau_max > 0.0) || !std::isfinite(tau_max)) {
        throw ConfigError("tau grid needs n >= 2 and tau_max > 0");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = tau_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> default_tau_grid(double gamma_lp)
{
    if (!(gamma_lp > 0.0)) throw ConfigError("default tau grid needs gamma_lp > 0");
    return uniform_tau_grid(20.0 / gamma_lp, 2048);
}

double select_drive(const SystemParams& params, const SelfEnergyTable* tbl, DriveMode mode)
{
    switch (mode) {
    case DriveMode::fixed: return params.omega_l;
    case DriveMode::lp_ideal: return model::polariton_data(params).omega_lp;
    case DriveMode::lp_shifted: return response::find_lp_peak(params, tbl).omega;
    }
    return params.omega_l;
}

TwoPhotonResult g2_curve(const std::vector<double>& tau, const DressedModes& modes, double u, double omega_l,
                         const G2Options& opts)
{
    if (tau.size() < 2 || tau.front() != 0.0) throw ConfigError("tau grid must start at 0 with >= 2 points");
    const double dtau_req = tau[1] - tau[0];
    if (!(dtau_req > 0.0)) throw ConfigError("tau grid must be increasing");
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (std::abs(tau[i] - static_cast<double>(i) * dtau_req) > 1e-9 * tau.back()) {
            throw ConfigError("tau grid must be uniform");
        }
    }
    if (!(u >= 0.0)) throw ConfigError("u must be >= 0");

    TwoPhotonResult res;
    res.tau = tau;
    res.omega_l = omega_l;
    res.t_at_drive = modes.transmission(omega_l);
    if (std::norm(res.t_at_drive) < 1e-6) {
        throw ConfigError("|t(omega_L)|^2 = " + std::to_string(std::norm(res.t_at_drive)) +
                          " < 1e-6: driving a dark point, g2 is ill-conditioned");
    }
    res.chi_at_2wl = pair_bubble(2.0 * omega_l, modes).chi;
    if (u == 0.0) {
        res.t_matrix_at_2wl = 0.0;
        res.g2.assign(tau.size(), 1.0);
        res.psi_c.assign(tau.size(), cplx(0.0, 0.0));
        return res;
    }
    res.t_matrix_at_2wl = u / (1.0 - u * res.chi_at_2wl);

    const double rate = modes.port_rate();
    const cplx a_l = std::sqrt(rate) * modes.port_kerr(omega_l);
    const cplx pref = cplx(0.0, -kConnectedNormalization) * res.t_matrix_at_2wl * a_l * a_l * rate;
    const double tau_max = tau.back();
    const double dx_max = 0.1 * min_width(modes);
    const cplx t2 = res.t_at_drive * res.t_at_drive;

    // S_c is even in x = nu - wL and falls off as c / x^2 when the port and
    // Kerr modes coincide. That tail is subtracted as c / (x^2 + b^2) and
    // restored through its exact transform c e^{-b tau} / 2b, leaving an
    // O(1/x^4) remainder for the FFT.
    auto connected = [&](double x) { return pref * modes.port_kerr(omega_l + x) * modes.port_kerr(omega_l - x); };
    const double x_far = 1e4 * std::max({modes.bandwidth_scale(), modes.fft_scale(), std::abs(omega_l)});
    const cplx tail_c = x_far * x_far * connected(x_far);
    const double tail_b = modes.fft_scale();
    auto tail_psi = [&](double t) { return tail_c * std::exp(-tail_b * t) / (2.0 * tail_b); };

    double half = opts.half_window.value_or(40.0 * modes.fft_scale());
    if (!(half > 0.0)) throw ConfigError("FFT half window must be > 0");
    for (int doubling = 0; doubling <= opts.max_doublings; ++doubling) {
        // tau step dividing the requested one, fine enough for the window.
        const auto m = static_cast<std::size_t>(std::ceil(dtau_req * half / kPi));
        const double dtau = dtau_req / static_cast<double>(m);
        const double n_period = std::ceil(4.0 * tau_max / dtau);
        const double n_res = std::ceil(2.0 * kPi / (dtau * dx_max));
        const double n_need = std::max({n_period, n_res, 1024.0});
        if (n_need > static_cast<double>(kMaxFft)) {
            throw ConvergenceError("FFT size " + std::to_string(n_need) + " exceeds the limit");
        }
        const std::size_t n = next_pow2(static_cast<std::size_t>(n_need));
        const double dx = 2.0 * kPi / (static_cast<double>(n) * dtau);
        const double edge = 0.5 * static_cast<double>(n) * dx;

        std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(n));
        if (!buf) throw std::bad_alloc();
        auto* data = reinterpret_cast<cplx*>(buf.get());
        detail::parallel_for(n, [&](std::size_t j) {
            const double x = (static_cast<double>(j) - 0.5 * static_cast<double>(n)) * dx;
            data[j] = connected(x) - tail_c / (x * x + tail_b * tail_b);
        });
        const double edge_weight = std::abs(data[0]) * edge;

        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }

        const double norm = dx / (2.0 * kPi);
        const double psi0 = std::abs(norm * data[0] + tail_psi(0.0));
        const bool last = doubling == opts.max_doublings;
        if (psi0 == 0.0 || edge_weight <= opts.tail_tol * psi0 || last) {
            if (last && psi0 != 0.0 && edge_weight > opts.tail_tol * psi0) {
                throw ConvergenceError("FFT window did not converge after " + std::to_string(doubling) +
                                       " doublings (half window " + std::to_string(edge) + " meV)");
            }
            res.half_window = edge;
            res.fft_size = n;
            res.window_doublings = doubling;
            res.psi_c.resize(tau.size());
            res.g2.resize(tau.size());
            for (std::size_t i = 0; i < tau.size(); ++i) {
                const std::size_t k = i * m;
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                res.psi_c[i] = sign * norm * data[k] + tail_psi(tau[i]);
                res.g2[i] = std::norm(1.0 + res.psi_c[i] / t2);
            }
            return res;
        }
        half = 2.0 * edge;
    }
    throw ConvergenceError("FFT window did not converge");
}

TwoPhotonResult g2_curve(const std::vector<double>& tau, const SystemParams& params,
                         const SelfEnergyTable* tbl, const G2Options& opts)
{
    params.validate();
    const double omega_l = select_drive(params, tbl, opts.drive);
    const CavityExcitonModes modes(params, tbl);
    return g2_curve(tau, modes, params.u_xx, omega_l, opts);
}

double g2_markovian_kerr(double delta, double gamma, double u)
{
    if (!(gamma > 0.0)) throw ConfigError("g2_markovian_kerr requires gamma > 0");
    const double q = gamma * gamma / 4.0;
    return (delta * delta + q) / ((delta + u) * (delta + u) + q);
}

} // namespace xblockade::two_photon
