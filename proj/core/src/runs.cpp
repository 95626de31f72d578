// runs.cpp — Subcommand drivers and sweep dispatch

#include "xblockade/runs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "xblockade/errors.hpp"
#include "xblockade/fock_oracle.hpp"
#include "xblockade/linear_response.hpp"
#include "xblockade/polariton.hpp"
#include "xblockade/self_energy.hpp"
#include "xblockade/two_photon.hpp"

namespace xblockade::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cplx = std::complex<double>;
using disorder::DisorderParams;
using disorder::SelfEnergyTable;
using model::SystemParams;

namespace {

// ---------------------------------------------------------------------------
// Helpers

json cplx_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json params_json(const SystemParams& p)
{
    return json{{"g_c_meV", p.g_c},         {"kappa_c_meV", p.kappa_c}, {"delta_c_meV", p.delta_c},
                {"gamma_d_meV", p.gamma_d}, {"u_meV", p.u_xx},          {"omega_L_meV", p.omega_l}};
}

json resonance_json(const response::Resonance& r)
{
    json j{{"omega_meV", r.omega}, {"T", r.value}, {"level", r.level}};
    j["fwhm_meV"] = std::isfinite(r.fwhm) ? json(r.fwhm) : json(nullptr);
    return j;
}

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char* drive_name(two_photon::DriveMode m)
{
    switch (m) {
    case two_photon::DriveMode::fixed: return "fixed";
    case two_photon::DriveMode::lp_shifted: return "auto-lp";
    case two_photon::DriveMode::lp_ideal: return "ideal-lp";
    }
    return "fixed";
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <class Fn>
void parallel_tasks(std::size_t n, int jobs, Fn&& fn)
{
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex m;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!first) first = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (first) std::rethrow_exception(first);
}

/// Collects output files; the manifest order is fixed by the caller's keys,
/// not by completion order.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void add(std::size_t order, const std::string& name, const std::string& file, const std::string& content)
    {
        write_file(dir_ / file, content);
        std::lock_guard<std::mutex> lock(m_);
        entries_.push_back({order, {name, file, sha256_hex(content)}});
    }

    RunOutput finish(const RunConfig& cfg, json summary)
    {
        add(std::numeric_limits<std::size_t>::max() - 1, "resolved_config", "resolved_config.ini", cfg.to_ini());
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        RunOutput out;
        for (const auto& e : entries_) out.files.push_back(e.second);
        write_file(dir_ / "manifest.tsv", manifest_tsv(out.files));
        json files = json::array();
        for (const auto& f : out.files) files.push_back(json{{"name", f.name}, {"path", f.path}, {"sha256", f.sha256}});
        summary["output_directory"] = dir_.string();
        summary["files"] = files;
        summary["manifest"] = "manifest.tsv";
        out.summary_json = summary.dump(2);
        return out;
    }

private:
    fs::path dir_;
    std::mutex m_;
    std::vector<std::pair<std::size_t, ManifestEntry>> entries_;
};

// ---------------------------------------------------------------------------
// Disorder

struct Disorder {
    std::optional<SelfEnergyTable> table;
    std::optional<DisorderParams> params;
    json log = json::object();

    const SelfEnergyTable* active() const { return table && table->delta_dis() > 0.0 ? &*table : nullptr; }
};

FrequencyGrid zero_disorder_grid(const DisorderSection& d)
{
    return d.grid ? *d.grid : FrequencyGrid::covering(-10.0, 20.0, 0.01, 0.0);
}

Disorder build_disorder(const DisorderSection& d)
{
    Disorder out;
    disorder::ScbaOptions opts{d.tol, d.max_iter, d.mixing};
    if (d.delta_dis) {
        auto cal = disorder::calibrate_sigma(*d.delta_dis, d.calibration_tol, opts);
        out.log["mode"] = "calibrated";
        out.log["target_delta_dis_meV"] = *d.delta_dis;
        out.log["calibration_evaluations"] = cal.evaluations;
        out.log["sigma_bracket_meV"] = json::array({cal.bracket_lo, cal.bracket_hi});
        out.params = cal.params;
        out.table = std::move(cal.table);
    } else if (d.sigma && *d.sigma > 0.0) {
        DisorderParams dp = DisorderParams::with_default_grid(*d.sigma, d.ec_equals_sigma ? std::nullopt : d.e_c);
        dp.e_c_equals_sigma = d.ec_equals_sigma;
        if (d.grid) dp.grid = *d.grid;
        out.log["mode"] = "explicit";
        out.params = dp;
        out.table = disorder::scba_self_energy(dp, opts);
    } else if (d.sigma) {
        out.log["mode"] = "zero";
        out.table = SelfEnergyTable::zeros(zero_disorder_grid(d));
    } else {
        out.log["mode"] = "none";
        return out;
    }

    const auto& t = *out.table;
    out.log["delta_dis_meV"] = t.delta_dis();
    out.log["grid"] = json{{"omega_min_meV", t.grid().omega_min},
                           {"omega_max_meV", t.grid().omega_max},
                           {"n_points", t.grid().n_points}};
    if (out.params) {
        out.log["sigma_meV"] = out.params->sigma;
        out.log["e_c_meV"] = out.params->e_c;
        out.log["tol_meV"] = d.tol;
        out.log["mixing"] = d.mixing;
        out.log["max_iter"] = d.max_iter;
        const auto& it = t.iterations();
        out.log["max_iterations"] = it.empty() ? 0 : *std::max_element(it.begin(), it.end());
        out.log["resubstitution_residual_meV"] = disorder::resubstitution_residual(t, *out.params);
        out.log["kk_residual_meV"] = disorder::kk_residual(t);
    }
    return out;
}

void add_disorder_files(Outputs& outs, const Disorder& dis, std::size_t order)
{
    if (!dis.table) return;
    outs.add(order, "selfenergy", "selfenergy.csv", selfenergy_csv(*dis.table));
    if (dis.params) outs.add(order + 1, "selfenergy_convergence", "selfenergy_convergence.csv",
                             convergence_csv(*dis.table));
}

// ---------------------------------------------------------------------------
// Spectra

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<double> spectrum_grid(const RunConfig& cfg, const SystemParams& p, const SelfEnergyTable* tbl)
{
    if (cfg.spectrum.omega_min) return linspace(*cfg.spectrum.omega_min, *cfg.spectrum.omega_max, cfg.spectrum.n_points);
    const auto pol = model::polariton_data(p);
    const double w = std::max({p.kappa_c, p.gamma_d, tbl ? tbl->delta_dis() : 0.0});
    const double lo = std::min({pol.omega_lp, 0.0, p.delta_c}) - 10.0 * w;
    const double hi = std::max({pol.omega_up, 0.0, p.delta_c}) + 10.0 * w;
    return linspace(lo, hi, cfg.spectrum.n_points);
}

struct SpectrumTask {
    std::string name;
    std::string kind;  // cpa | markov | lossless | single
    SystemParams params;
    const SelfEnergyTable* table = nullptr;
    std::optional<double> markov;
};

json spectrum_meta(const SpectrumTask& task, const response::SpectrumTable& spec, const Disorder& dis)
{
    SystemParams eff = task.params;
    if (task.markov) eff.gamma_d = *task.markov;
    const auto pol = model::polariton_data(eff);
    json j;
    j["name"] = task.name;
    j["kind"] = task.kind;
    j["params"] = params_json(eff);
    j["self_energy"] = task.table ? json{{"delta_dis_meV", task.table->delta_dis()},
                                         {"sigma_meV", dis.params ? json(dis.params->sigma) : json(nullptr)}}
                                  : json(nullptr);
    json pj{{"omega_lp_meV", pol.omega_lp},
            {"omega_up_meV", pol.omega_up},
            {"x2_lp", pol.x2_lp},
            {"c2_lp", pol.c2_lp},
            {"gamma_lp_radiative_meV", pol.c2_lp * eff.kappa_c},
            {"gamma_lp_exact_meV", model::lp_linewidth(eff)}};
    pj["gamma_lp_pert_meV"] = pol.gamma_lp_pert ? json(*pol.gamma_lp_pert) : json(nullptr);
    j["polariton"] = pj;
    if (task.markov) {
        const double gam = pol.c2_lp * eff.kappa_c;
        j["peak_T_formula"] = response::peak_transmission_formula(gam, *task.markov);
    }
    json peaks = json::array(), dips = json::array();
    for (const auto& r : spec.peaks) peaks.push_back(resonance_json(r));
    for (const auto& r : spec.dips) dips.push_back(resonance_json(r));
    j["peaks"] = peaks;
    j["dips"] = dips;
    j["main_peak"] = spec.main_peak() ? resonance_json(*spec.main_peak()) : json(nullptr);
    j["warnings"] = spec.warnings;
    return j;
}

// ---------------------------------------------------------------------------
// g2

struct G2Task {
    std::string name;
    std::string kind;  // cpa | markov | single
    SystemParams params;
    const SelfEnergyTable* table = nullptr;
};

double lp_width(const SystemParams& p, const SelfEnergyTable* tbl)
{
    const auto pk = response::find_lp_peak(p, tbl);
    return std::isfinite(pk.fwhm) && pk.fwhm > 0.0 ? pk.fwhm : model::lp_linewidth(p);
}

std::vector<double> tau_grid(const RunConfig& cfg, double gamma_lp)
{
    if (cfg.g2.tau_max) return two_photon::uniform_tau_grid(*cfg.g2.tau_max, cfg.g2.n_tau);
    return two_photon::uniform_tau_grid(20.0 / gamma_lp, cfg.g2.n_tau);
}

json g2_meta(const G2Task& task, const two_photon::TwoPhotonResult& res, double gamma_lp, two_photon::DriveMode mode)
{
    json j;
    j["name"] = task.name;
    j["kind"] = task.kind;
    j["params"] = params_json(task.params);
    j["drive_mode"] = drive_name(mode);
    j["omega_L_meV"] = res.omega_l;
    j["t_at_drive"] = cplx_json(res.t_at_drive);
    j["T_at_drive"] = std::norm(res.t_at_drive);
    j["chi_at_2wL_per_meV"] = cplx_json(res.chi_at_2wl);
    j["T_matrix_at_2wL_meV"] = cplx_json(res.t_matrix_at_2wl);
    j["C"] = res.normalization;
    j["gamma_lp_meV"] = gamma_lp;
    j["g2_0"] = res.g2.empty() ? json(nullptr) : json(res.g2.front());
    j["fft"] = json{{"half_window_meV", res.half_window},
                    {"size", res.fft_size},
                    {"window_doublings", res.window_doublings}};
    j["self_energy_delta_dis_meV"] = task.table ? json(task.table->delta_dis()) : json(nullptr);
    return j;
}

json compare_g2(const two_photon::TwoPhotonResult& ref, const two_photon::TwoPhotonResult& oracle)
{
    double max_abs = 0.0, max_rel = 0.0;
    for (std::size_t i = 0; i < ref.g2.size(); ++i) {
        const double d = std::abs(ref.g2[i] - oracle.g2[i]);
        max_abs = std::max(max_abs, d);
        max_rel = std::max(max_rel, d / std::max(1.0, oracle.g2[i]));
    }
    return json{{"max_abs_dev", max_abs}, {"max_rel_dev", max_rel}, {"tolerance", 0.05}, {"pass", max_rel <= 0.05}};
}

oracle::BathDiscretization bath_for(const RunConfig& cfg, const SelfEnergyTable* tbl)
{
    return tbl ? oracle::fit_bath(*tbl, cfg.oracle_modes) : oracle::BathDiscretization{};
}

json bath_json(const oracle::BathDiscretization& b)
{
    return json{{"n_modes", b.n_modes()},
                {"spacing_meV", b.spacing},
                {"eta_broad_meV", b.eta_broad},
                {"reconstruction_error_rel_delta_dis", b.reconstruction_error}};
}

} // namespace

// ---------------------------------------------------------------------------
// Public drivers

RunConfig resolve_config(const std::optional<fs::path>& config_path, const std::optional<std::string>& preset)
{
    if (preset && !preset_text(*preset)) {
        throw ConfigError("unknown preset '" + *preset + "'; expected fig2 or fig3");
    }
    if (config_path) return load_config(*config_path);
    if (preset) return parse_config(*preset_text(*preset));
    throw ConfigError("either --config or --preset is required");
}

RunOutput run_selfenergy(const RunConfig& cfg, const RunOptions& opts)
{
    if (!cfg.disorder.delta_dis && !cfg.disorder.sigma) {
        throw ConfigError("selfenergy needs [disorder] delta_dis_meV or sigma_meV");
    }
    Outputs outs(opts.out_dir);
    const Disorder dis = build_disorder(cfg.disorder);
    add_disorder_files(outs, dis, 0);
    outs.add(2, "selfenergy_log", "selfenergy_log.json", dis.log.dump(2) + "\n");
    json summary{{"command", "selfenergy"}, {"disorder", dis.log}};
    return outs.finish(cfg, summary);
}

RunOutput run_spectrum(const RunConfig& cfg, const RunOptions& opts)
{
    Outputs outs(opts.out_dir);
    const Disorder dis = build_disorder(cfg.disorder);
    const SelfEnergyTable* tbl = dis.active();
    add_disorder_files(outs, dis, 0);

    std::vector<SpectrumTask> tasks;
    if (opts.preset) {
        if (cfg.sweep.g_c.empty()) throw ConfigError("spectrum sweep needs [sweep] g_c_meV");
        if (!tbl) throw ConfigError("spectrum sweep needs a disorder self-energy for its CPA curves");
        for (double g : cfg.sweep.g_c) {
            SystemParams p = cfg.system;
            p.g_c = g;
            tasks.push_back({"cpa_g" + label(g), "cpa", p, tbl, std::nullopt});
        }
        if (cfg.sweep.markov_gamma) {
            for (double g : cfg.sweep.g_c) {
                SystemParams p = cfg.system;
                p.g_c = g;
                tasks.push_back({"markov_g" + label(g), "markov", p, nullptr, cfg.sweep.markov_gamma});
            }
        }
        if (cfg.sweep.lossless_g_c) {
            SystemParams p = cfg.system;
            p.g_c = *cfg.sweep.lossless_g_c;
            p.gamma_d = 0.0;
            tasks.push_back({"lossless_g" + label(p.g_c), "lossless", p, nullptr, std::nullopt});
        }
    } else {
        tasks.push_back({"spectrum", "single", cfg.system, tbl, cfg.spectrum.gamma_markov});
    }

    std::vector<json> metas(tasks.size());
    parallel_tasks(tasks.size(), opts.jobs, [&](std::size_t i) {
        const auto& task = tasks[i];
        const auto grid = spectrum_grid(cfg, task.params, task.table);
        const auto spec = response::spectrum(grid, task.params, task.table, task.markov);
        const std::string base = task.name == "spectrum" ? "spectrum" : "spectrum_" + task.name;
        metas[i] = spectrum_meta(task, spec, dis);
        outs.add(10 + 2 * i, task.name, base + ".csv", spectrum_csv(spec));
        outs.add(11 + 2 * i, task.name + "_meta", base + "_meta.json", metas[i].dump(2) + "\n");
    });

    json curves = json::array();
    for (const auto& m : metas) {
        curves.push_back(json{{"name", m["name"]}, {"kind", m["kind"]}, {"main_peak", m["main_peak"]}});
    }
    json summary{{"command", "spectrum"},
                 {"preset", opts.preset ? json(*opts.preset) : json(nullptr)},
                 {"disorder", dis.log},
                 {"curves", curves}};
    return outs.finish(cfg, summary);
}

RunOutput run_g2(const RunConfig& cfg, const RunOptions& opts)
{
    Outputs outs(opts.out_dir);
    const Disorder dis = build_disorder(cfg.disorder);
    const SelfEnergyTable* tbl = dis.active();
    add_disorder_files(outs, dis, 0);

    std::vector<G2Task> tasks;
    if (opts.preset) {
        if (cfg.sweep.u.empty()) throw ConfigError("g2 sweep needs [sweep] u_meV");
        for (double u : cfg.sweep.u) {
            SystemParams p = cfg.system;
            p.u_xx = u;
            tasks.push_back({std::string(tbl ? "cpa" : "bare") + "_u" + label(u), tbl ? "cpa" : "bare", p, tbl});
        }
        if (cfg.sweep.markov_gamma) {
            SystemParams p = cfg.system;
            p.gamma_d = *cfg.sweep.markov_gamma;
            p.u_xx = cfg.sweep.markov_u.value_or(cfg.system.u_xx);
            tasks.push_back({"markov_u" + label(p.u_xx), "markov", p, nullptr});
        }
    } else {
        tasks.push_back({"g2", "single", cfg.system, tbl});
    }

    // All curves share the tau axis of the first one.
    const double gamma_lp = lp_width(tasks.front().params, tasks.front().table);
    const auto tau = tau_grid(cfg, gamma_lp);
    two_photon::G2Options g2opts;
    g2opts.drive = cfg.drive.mode;
    g2opts.half_window = cfg.g2.half_window;

    std::optional<oracle::BathDiscretization> bath;
    if (opts.with_oracle) bath = bath_for(cfg, tbl);

    std::vector<json> metas(tasks.size());
    parallel_tasks(tasks.size(), opts.jobs, [&](std::size_t i) {
        const auto& task = tasks[i];
        const auto res = two_photon::g2_curve(tau, task.params, task.table, g2opts);
        const std::string base = task.name == "g2" ? "g2" : "g2_" + task.name;
        metas[i] = g2_meta(task, res, gamma_lp, g2opts.drive);
        if (opts.with_oracle) {
            const oracle::BathDiscretization empty;
            const auto& b = task.table ? *bath : empty;
            const auto orc = oracle::g2_oracle(tau, task.params, b, res.omega_l);
            metas[i]["oracle"] = compare_g2(res, orc);
            metas[i]["oracle"]["bath"] = bath_json(b);
            outs.add(10 + 3 * i + 2, "oracle_" + task.name, "oracle_" + base + ".csv", g2_csv(orc));
        }
        outs.add(10 + 3 * i, task.name, base + ".csv", g2_csv(res));
        outs.add(10 + 3 * i + 1, task.name + "_meta", base + "_meta.json", metas[i].dump(2) + "\n");
    });

    json curves = json::array();
    for (const auto& m : metas) {
        json c{{"name", m["name"]}, {"kind", m["kind"]}, {"omega_L_meV", m["omega_L_meV"]}, {"g2_0", m["g2_0"]}};
        if (m.contains("oracle")) c["oracle"] = m["oracle"];
        curves.push_back(c);
    }
    json summary{{"command", "g2"},
                 {"preset", opts.preset ? json(*opts.preset) : json(nullptr)},
                 {"disorder", dis.log},
                 {"gamma_lp_meV", gamma_lp},
                 {"curves", curves}};
    return outs.finish(cfg, summary);
}

RunOutput run_oracle_check(const RunConfig& cfg, const RunOptions& opts)
{
    Outputs outs(opts.out_dir);
    const Disorder dis = build_disorder(cfg.disorder);
    const SelfEnergyTable* tbl = dis.active();
    add_disorder_files(outs, dis, 0);
    const SystemParams& p = cfg.system;
    const auto bath = bath_for(cfg, tbl);

    // Transmission over the lower-polariton window.
    const auto lp = response::find_lp_peak(p, tbl);
    const double width = std::isfinite(lp.fwhm) && lp.fwhm > 0.0 ? lp.fwhm : model::lp_linewidth(p);
    const auto grid = linspace(lp.omega - 10.0 * width, lp.omega + 10.0 * width, 801);
    response::SpectrumTable ref, orc;
    ref.omega = orc.omega = grid;
    for (auto* s : {&ref, &orc}) {
        s->t.resize(grid.size());
        s->T.resize(grid.size());
        s->R.resize(grid.size());
    }
    const auto net = oracle::cavity_exciton_network(p, bath);
    double max_abs = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ref.t[i] = response::transmission(grid[i], p, tbl);
        orc.t[i] = oracle::oracle_transmission(grid[i], net);
        for (auto* s : {&ref, &orc}) {
            s->T[i] = std::norm(s->t[i]);
            s->R[i] = std::norm(s->t[i] - 1.0);
        }
        max_abs = std::max(max_abs, std::abs(orc.T[i] - ref.T[i]));
        peak = std::max({peak, orc.T[i], ref.T[i]});
    }
    // Deviations are measured against the peak transmission in the window.
    const double max_t_dev = peak > 0.0 ? max_abs / peak : max_abs;
    outs.add(10, "transmission", "transmission.csv", spectrum_csv(ref));
    outs.add(11, "oracle_transmission", "oracle_transmission.csv", spectrum_csv(orc));

    two_photon::G2Options g2opts;
    g2opts.drive = cfg.drive.mode;
    g2opts.half_window = cfg.g2.half_window;
    const auto tau = tau_grid(cfg, width);
    const auto g2 = two_photon::g2_curve(tau, p, tbl, g2opts);
    const auto g2o = oracle::g2_oracle(tau, net, g2.omega_l);
    outs.add(12, "g2", "g2.csv", g2_csv(g2));
    outs.add(13, "oracle_g2", "oracle_g2.csv", g2_csv(g2o));

    json report;
    report["params"] = params_json(p);
    report["bath"] = bath_json(bath);
    report["lp_peak"] = resonance_json(lp);
    report["transmission"] = json{{"max_abs_dev_T", max_abs},
                                  {"peak_T", peak},
                                  {"max_rel_dev_T", max_t_dev},
                                  {"tolerance", 0.02},
                                  {"pass", max_t_dev <= 0.02}};
    report["g2"] = compare_g2(g2, g2o);
    report["omega_L_meV"] = g2.omega_l;
    outs.add(14, "oracle_report", "oracle_report.json", report.dump(2) + "\n");

    json summary{{"command", "oracle-check"}, {"disorder", dis.log}, {"report", report}};
    return outs.finish(cfg, summary);
}

} // namespace xblockade::harness
