// output.cpp — CSV emitters, SHA-256 checksums and manifests

#include "xblockade/output.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "xblockade/config.hpp"
#include "xblockade/errors.hpp"
#include "xblockade/units.hpp"

namespace xblockade::harness {

std::string selfenergy_csv(const disorder::SelfEnergyTable& tbl)
{
    std::string out = "omega_meV,re_sigma_meV,im_sigma_meV\n";
    const auto& v = tbl.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += format_double(tbl.grid().at(i)) + "," + format_double(v[i].real()) + "," +
               format_double(v[i].imag()) + "\n";
    }
    return out;
}

std::string convergence_csv(const disorder::SelfEnergyTable& tbl)
{
    std::string out = "omega_meV,iterations\n";
    const auto& it = tbl.iterations();
    for (std::size_t i = 0; i < it.size(); ++i) {
        out += format_double(tbl.grid().at(i)) + "," + std::to_string(it[i]) + "\n";
    }
    return out;
}

std::string spectrum_csv(const response::SpectrumTable& spec)
{
    std::string out = "omega_meV,re_t,im_t,T,R\n";
    for (std::size_t i = 0; i < spec.omega.size(); ++i) {
        out += format_double(spec.omega[i]) + "," + format_double(spec.t[i].real()) + "," +
               format_double(spec.t[i].imag()) + "," + format_double(spec.T[i]) + "," + format_double(spec.R[i]) +
               "\n";
    }
    return out;
}

std::string g2_csv(const two_photon::TwoPhotonResult& res)
{
    std::string out = "tau_hbar_per_meV,tau_ps,g2\n";
    for (std::size_t i = 0; i < res.tau.size(); ++i) {
        out += format_double(res.tau[i]) + "," + format_double(units::to_picoseconds(res.tau[i])) + "," +
               format_double(res.g2[i]) + "\n";
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("failed writing " + path.string());
}

namespace {

struct MdCtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

std::string to_hex(const unsigned char* p, unsigned n)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(2 * n, '0');
    for (unsigned i = 0; i < n; ++i) {
        out[2 * i] = digits[p[i] >> 4];
        out[2 * i + 1] = digits[p[i] & 0xf];
    }
    return out;
}

} // namespace

std::string sha256_hex(std::string_view data)
{
    std::unique_ptr<EVP_MD_CTX, MdCtxFree> ctx(EVP_MD_CTX_new());
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    return to_hex(md.data(), len);
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

std::string manifest_tsv(const std::vector<ManifestEntry>& entries)
{
    std::string out;
    for (const auto& e : entries) out += e.name + "\t" + e.path + "\t" + e.sha256 + "\n";
    return out;
}

} // namespace xblockade::harness
