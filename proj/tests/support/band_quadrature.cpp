// band_quadrature.cpp — Quadrature reference for the exponential band transform

#include "band_quadrature.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace xblockade::testing {

namespace {

using cplx = std::complex<double>;

constexpr double kTailLengths = 40.0;  // e^-40 of the band weight is dropped

template <class F>
cplx integrate(F&& f, double a, double b)
{
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, 1e-13, &err);
}

} // namespace

cplx band_transform_quadrature(cplx z, double scale)
{
    if (!(scale > 0.0) || z.imag() < 0.0) throw std::invalid_argument("band_transform_quadrature: bad input");
    const double s = scale;
    if (z.real() < -0.5 * s) {
        return integrate([&](double e) { return std::exp(-e / s) / (z - e); }, 0.0, kTailLengths * s);
    }
    // int_0^L (e^{-E/s} - e^{-z/s}) / (z - E) dE is smooth; the subtracted
    // piece integrates to e^{-z/s} [log z - log(z - L)].
    const double len = std::max(z.real(), 0.0) + kTailLengths * s;
    const cplx ez = std::exp(-z / s);
    auto smooth = [&](double e) -> cplx {
        const cplx u = z - e;
        const cplx v = u / s;
        if (std::abs(v) < 1e-3) {
            return ez / s * (1.0 + v * (0.5 + v * (1.0 / 6.0 + v * (1.0 / 24.0 + v / 120.0))));
        }
        return (std::exp(-e / s) - ez) / u;
    };
    const double split = z.real();
    const cplx body = split > 0.0 ? integrate(smooth, 0.0, split) + integrate(smooth, split, len)
                                  : integrate(smooth, 0.0, len);
    const cplx zz = z.imag() == 0.0 ? cplx(z.real(), 0.0) : z;
    return body + ez * (std::log(zz) - std::log(zz - len));
}

std::filesystem::path scratch_dir(const std::string& tag)
{
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("xblockade_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace xblockade::testing
