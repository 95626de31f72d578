// config.cpp — INI parsing and validation of run configurations

#include "xblockade/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "xblockade/errors.hpp"

namespace xblockade::harness {

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s{
        {"system", {"g_c_meV", "kappa_c_meV", "delta_c_meV", "gamma_d_meV", "u_meV"}},
        {"disorder",
         {"delta_dis_meV", "sigma_meV", "e_c_meV", "ec_equals_sigma", "omega_min_meV", "omega_max_meV", "n_points",
          "tol_meV", "max_iter", "mixing", "calibration_tol_meV"}},
        {"drive", {"omega_L_meV"}},
        {"g2", {"tau_max_hbar_per_meV", "n_tau", "half_window_meV"}},
        {"spectrum", {"omega_min_meV", "omega_max_meV", "n_points", "gamma_markov_meV"}},
        {"oracle", {"n_modes"}},
        {"output", {"directory"}},
        {"sweep", {"g_c_meV", "u_meV", "markov_gamma_meV", "markov_u_meV", "lossless_g_c_meV"}},
    };
    return s;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double to_double(const std::string& section, const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ConfigError(where(section, key) + ": expected a finite number, got '" + s + "'");
    }
    return v;
}

std::size_t to_count(const std::string& section, const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(where(section, key) + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(where(section, key) + ": expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& section, const std::string& key, const std::string& raw)
{
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(section, key, item));
    if (out.empty()) throw ConfigError(where(section, key) + ": empty list");
    return out;
}

class Reader {
public:
    explicit Reader(const ptree& root) : root_(root) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const
    {
        const auto sec = root_.get_child_optional(ptree::path_type(section, '\0'));
        if (!sec) return std::nullopt;
        const auto val = sec->get_child_optional(ptree::path_type(key, '\0'));
        if (!val) return std::nullopt;
        return val->data();
    }
    std::optional<double> number(const std::string& section, const std::string& key) const
    {
        const auto r = raw(section, key);
        return r ? std::optional<double>(to_double(section, key, *r)) : std::nullopt;
    }
    std::optional<std::size_t> count(const std::string& section, const std::string& key) const
    {
        const auto r = raw(section, key);
        return r ? std::optional<std::size_t>(to_count(section, key, *r)) : std::nullopt;
    }
    std::optional<bool> flag(const std::string& section, const std::string& key) const
    {
        const auto r = raw(section, key);
        return r ? std::optional<bool>(to_bool(section, key, *r)) : std::nullopt;
    }
    std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const
    {
        const auto r = raw(section, key);
        return r ? std::optional<std::vector<double>>(to_list(section, key, *r)) : std::nullopt;
    }

private:
    const ptree& root_;
};

void check_schema(const ptree& root)
{
    const auto& s = schema();
    for (const auto& [section, node] : root) {
        // An empty section and a bare top-level key look alike in the tree.
        if (node.empty() && !node.data().empty()) {
            throw ConfigError("key '" + section + "' appears outside a section");
        }
        const auto it = s.find(section);
        if (it == s.end()) throw ConfigError("unknown section [" + section + "]");
        for (const auto& [key, value] : node) {
            if (!it->second.count(key)) throw ConfigError("unknown key " + where(section, key));
            if (!value.empty()) throw ConfigError("nested key " + where(section, key));
        }
    }
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig parse_config(std::string_view text)
{
    ptree root;
    try {
        std::istringstream is{std::string(text)};
        boost::property_tree::ini_parser::read_ini(is, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    check_schema(root);
    const Reader r(root);
    RunConfig cfg;

    // [system]
    auto require = [&](const char* key) {
        const auto v = r.number("system", key);
        if (!v) throw ConfigError(where("system", key) + " is required");
        return *v;
    };
    cfg.system.g_c = require("g_c_meV");
    cfg.system.kappa_c = require("kappa_c_meV");
    cfg.system.delta_c = require("delta_c_meV");
    cfg.system.gamma_d = r.number("system", "gamma_d_meV").value_or(0.0);
    cfg.system.u_xx = r.number("system", "u_meV").value_or(0.0);

    // [disorder]
    auto& d = cfg.disorder;
    d.delta_dis = r.number("disorder", "delta_dis_meV");
    d.sigma = r.number("disorder", "sigma_meV");
    d.e_c = r.number("disorder", "e_c_meV");
    d.ec_equals_sigma = r.flag("disorder", "ec_equals_sigma").value_or(true);
    d.tol = r.number("disorder", "tol_meV").value_or(d.tol);
    d.max_iter = static_cast<int>(r.count("disorder", "max_iter").value_or(static_cast<std::size_t>(d.max_iter)));
    d.mixing = r.number("disorder", "mixing").value_or(d.mixing);
    d.calibration_tol = r.number("disorder", "calibration_tol_meV").value_or(d.calibration_tol);
    if (d.delta_dis && d.sigma) throw ConfigError("[disorder] delta_dis_meV and sigma_meV are mutually exclusive");
    if (d.delta_dis && !(*d.delta_dis > 0.0)) throw ConfigError("[disorder] delta_dis_meV must be > 0");
    if (d.sigma && *d.sigma < 0.0) throw ConfigError("[disorder] sigma_meV must be >= 0");
    if (d.ec_equals_sigma && d.e_c) throw ConfigError("[disorder] e_c_meV requires ec_equals_sigma = false");
    if (!d.ec_equals_sigma) {
        if (!d.e_c || !(*d.e_c > 0.0)) throw ConfigError("[disorder] ec_equals_sigma = false needs e_c_meV > 0");
        if (d.delta_dis) throw ConfigError("[disorder] calibration (delta_dis_meV) enforces e_c = sigma");
    }
    {
        const auto lo = r.number("disorder", "omega_min_meV");
        const auto hi = r.number("disorder", "omega_max_meV");
        const auto n = r.count("disorder", "n_points");
        if (lo || hi || n) {
            if (!(lo && hi && n)) {
                throw ConfigError("[disorder] grid needs omega_min_meV, omega_max_meV and n_points together");
            }
            if (d.delta_dis) throw ConfigError("[disorder] an explicit grid cannot be combined with delta_dis_meV");
            FrequencyGrid g{*lo, *hi, *n};
            g.validate();
            d.grid = g;
        }
    }
    if (!(d.tol > 0.0)) throw ConfigError("[disorder] tol_meV must be > 0");
    if (d.max_iter < 1) throw ConfigError("[disorder] max_iter must be >= 1");
    if (!(d.mixing > 0.0 && d.mixing <= 1.0)) throw ConfigError("[disorder] mixing must lie in (0, 1]");
    if (!(d.calibration_tol > 0.0)) throw ConfigError("[disorder] calibration_tol_meV must be > 0");

    // [drive]
    if (const auto raw = r.raw("drive", "omega_L_meV")) {
        const std::string v = trim(*raw);
        if (v == "auto-lp") {
            cfg.drive.mode = two_photon::DriveMode::lp_shifted;
        } else if (v == "ideal-lp") {
            cfg.drive.mode = two_photon::DriveMode::lp_ideal;
        } else {
            cfg.drive.mode = two_photon::DriveMode::fixed;
            cfg.drive.omega_l = to_double("drive", "omega_L_meV", v);
            cfg.system.omega_l = *cfg.drive.omega_l;
        }
    }
    cfg.system.validate();

    // [g2]
    cfg.g2.tau_max = r.number("g2", "tau_max_hbar_per_meV");
    cfg.g2.n_tau = r.count("g2", "n_tau").value_or(cfg.g2.n_tau);
    cfg.g2.half_window = r.number("g2", "half_window_meV");
    if (cfg.g2.tau_max && !(*cfg.g2.tau_max > 0.0)) throw ConfigError("[g2] tau_max_hbar_per_meV must be > 0");
    if (cfg.g2.n_tau < 2) throw ConfigError("[g2] n_tau must be >= 2");
    if (cfg.g2.half_window && !(*cfg.g2.half_window > 0.0)) throw ConfigError("[g2] half_window_meV must be > 0");

    // [spectrum]
    cfg.spectrum.omega_min = r.number("spectrum", "omega_min_meV");
    cfg.spectrum.omega_max = r.number("spectrum", "omega_max_meV");
    cfg.spectrum.n_points = r.count("spectrum", "n_points").value_or(cfg.spectrum.n_points);
    cfg.spectrum.gamma_markov = r.number("spectrum", "gamma_markov_meV");
    if (cfg.spectrum.omega_min.has_value() != cfg.spectrum.omega_max.has_value()) {
        throw ConfigError("[spectrum] omega_min_meV and omega_max_meV go together");
    }
    if (cfg.spectrum.omega_min && !(*cfg.spectrum.omega_min < *cfg.spectrum.omega_max)) {
        throw ConfigError("[spectrum] omega_min_meV must be < omega_max_meV");
    }
    if (cfg.spectrum.n_points < 3) throw ConfigError("[spectrum] n_points must be >= 3");
    if (cfg.spectrum.gamma_markov && *cfg.spectrum.gamma_markov < 0.0) {
        throw ConfigError("[spectrum] gamma_markov_meV must be >= 0");
    }

    // [oracle]
    cfg.oracle_modes = r.count("oracle", "n_modes").value_or(cfg.oracle_modes);
    if (cfg.oracle_modes < 50) throw ConfigError("[oracle] n_modes must be >= 50");

    // [output]
    if (const auto dir = r.raw("output", "directory")) {
        const std::string v = trim(*dir);
        if (v.empty()) throw ConfigError("[output] directory must not be empty");
        cfg.output_directory = v;
    }

    // [sweep]
    cfg.sweep.g_c = r.list("sweep", "g_c_meV").value_or(std::vector<double>{});
    cfg.sweep.u = r.list("sweep", "u_meV").value_or(std::vector<double>{});
    cfg.sweep.markov_gamma = r.number("sweep", "markov_gamma_meV");
    cfg.sweep.markov_u = r.number("sweep", "markov_u_meV");
    cfg.sweep.lossless_g_c = r.number("sweep", "lossless_g_c_meV");
    for (double g : cfg.sweep.g_c) {
        if (g < 0.0) throw ConfigError("[sweep] g_c_meV entries must be >= 0");
    }
    for (double u : cfg.sweep.u) {
        if (u < 0.0) throw ConfigError("[sweep] u_meV entries must be >= 0");
    }
    if (cfg.sweep.markov_gamma && *cfg.sweep.markov_gamma < 0.0) {
        throw ConfigError("[sweep] markov_gamma_meV must be >= 0");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string RunConfig::to_ini() const
{
    std::ostringstream os;
    auto kv = [&](const char* key, const std::string& v) { os << key << " = " << v << "\n"; };
    auto num = [&](const char* key, double v) { kv(key, format_double(v)); };

    os << "[system]\n";
    num("g_c_meV", system.g_c);
    num("kappa_c_meV", system.kappa_c);
    num("delta_c_meV", system.delta_c);
    num("gamma_d_meV", system.gamma_d);
    num("u_meV", system.u_xx);

    os << "\n[disorder]\n";
    if (disorder.delta_dis) num("delta_dis_meV", *disorder.delta_dis);
    if (disorder.sigma) num("sigma_meV", *disorder.sigma);
    kv("ec_equals_sigma", disorder.ec_equals_sigma ? "true" : "false");
    if (disorder.e_c) num("e_c_meV", *disorder.e_c);
    if (disorder.grid) {
        num("omega_min_meV", disorder.grid->omega_min);
        num("omega_max_meV", disorder.grid->omega_max);
        kv("n_points", std::to_string(disorder.grid->n_points));
    }
    num("tol_meV", disorder.tol);
    kv("max_iter", std::to_string(disorder.max_iter));
    num("mixing", disorder.mixing);
    num("calibration_tol_meV", disorder.calibration_tol);

    os << "\n[drive]\n";
    switch (drive.mode) {
    case two_photon::DriveMode::lp_shifted: kv("omega_L_meV", "auto-lp"); break;
    case two_photon::DriveMode::lp_ideal: kv("omega_L_meV", "ideal-lp"); break;
    case two_photon::DriveMode::fixed: num("omega_L_meV", system.omega_l); break;
    }

    os << "\n[g2]\n";
    if (g2.tau_max) num("tau_max_hbar_per_meV", *g2.tau_max);
    kv("n_tau", std::to_string(g2.n_tau));
    if (g2.half_window) num("half_window_meV", *g2.half_window);

    os << "\n[spectrum]\n";
    if (spectrum.omega_min) num("omega_min_meV", *spectrum.omega_min);
    if (spectrum.omega_max) num("omega_max_meV", *spectrum.omega_max);
    kv("n_points", std::to_string(spectrum.n_points));
    if (spectrum.gamma_markov) num("gamma_markov_meV", *spectrum.gamma_markov);

    os << "\n[oracle]\n";
    kv("n_modes", std::to_string(oracle_modes));

    if (output_directory) {
        os << "\n[output]\n";
        kv("directory", *output_directory);
    }

    const bool any_sweep = !sweep.g_c.empty() || !sweep.u.empty() || sweep.markov_gamma || sweep.markov_u ||
                           sweep.lossless_g_c;
    if (any_sweep) {
        os << "\n[sweep]\n";
        if (!sweep.g_c.empty()) kv("g_c_meV", join(sweep.g_c));
        if (!sweep.u.empty()) kv("u_meV", join(sweep.u));
        if (sweep.markov_gamma) num("markov_gamma_meV", *sweep.markov_gamma);
        if (sweep.markov_u) num("markov_u_meV", *sweep.markov_u);
        if (sweep.lossless_g_c) num("lossless_g_c_meV", *sweep.lossless_g_c);
    }
    return os.str();
}

} // namespace xblockade::harness
