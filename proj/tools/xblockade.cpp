// xblockade.cpp — Command line front end for the simulation runs

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xblockade/errors.hpp"
#include "xblockade/runs.hpp"

namespace {

namespace hx = xblockade::harness;

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kConvergence = 3 };

int report(const char* kind, const std::string& message, int code)
{
    nlohmann::ordered_json err{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Disorder-dressed polariton transmission and photon correlation runs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string preset;
    int jobs = 1;
    bool with_oracle = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--preset", preset, "built-in sweep: fig2 or fig3")
            ->check(CLI::IsMember({"fig2", "fig3"}));
        sub->add_option("--jobs", jobs, "worker threads for sweep points")->check(CLI::PositiveNumber);
    };

    auto* selfenergy = app.add_subcommand("selfenergy", "disorder self-energy table");
    auto* spectrum = app.add_subcommand("spectrum", "linear transmission spectra");
    auto* g2 = app.add_subcommand("g2", "two-photon correlation g2(tau)");
    auto* oracle = app.add_subcommand("oracle-check", "compare against the truncated Fock-space solver");
    for (auto* sub : {selfenergy, spectrum, g2, oracle}) add_common(sub);
    g2->add_flag("--with-oracle", with_oracle, "also run the Fock-space oracle for each curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("config", e.what(), kConfig);
    }

    try {
        const std::optional<std::string> preset_opt = preset.empty() ? std::nullopt : std::optional(preset);
        const auto cfg = hx::resolve_config(
            config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path), preset_opt);
        hx::RunOptions opts{out_dir, preset_opt, jobs, with_oracle};

        hx::RunOutput out;
        if (*selfenergy) out = hx::run_selfenergy(cfg, opts);
        else if (*spectrum) out = hx::run_spectrum(cfg, opts);
        else if (*g2) out = hx::run_g2(cfg, opts);
        else out = hx::run_oracle_check(cfg, opts);
        std::cout << out.summary_json << "\n";
        return kOk;
    } catch (const xblockade::ConfigError& e) {
        return report("config", e.what(), kConfig);
    } catch (const xblockade::ConvergenceError& e) {
        return report("convergence", e.what(), kConvergence);
    } catch (const std::exception& e) {
        return report("internal", e.what(), kInternal);
    }
}
