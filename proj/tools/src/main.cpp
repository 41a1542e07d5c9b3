#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace cgur::cli;

namespace {

// Writes text to <out>/<name> when an output directory was given, else to stdout.
void emit(const std::optional<fs::path>& out, const std::string& name, const std::string& text) {
    if (!out) {
        std::cout << text;
        return;
    }
    fs::create_directories(*out);
    const fs::path p = *out / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    std::cerr << "wrote " << p.string() << '\n';
}

int run(const ScenarioConfig& cfg, const fs::path& out) {
    const auto result = run_scenario(cfg);
    for (const auto& p : write_artifacts(cfg, result, out)) std::cerr << "wrote " << p.string() << '\n';
    std::map<std::string, int> tally;
    for (const auto& r : result.reports) ++tally[std::string(cgur::to_string(r.verdict))];
    std::cout << cfg.name << ": " << result.reports.size() << " reports";
    for (const auto& [k, n] : tally) std::cout << ", " << k << "=" << n;
    std::cout << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarse-grained uncertainty relations: evaluation, sweeps and entanglement witnesses"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
    app.add_option("--config", config_path, "Scenario config (JSON); runs it when no subcommand is given");
    app.add_option("--seed", seed, "Seed overriding the config");
    app.add_option("--out", out, "Output directory");

    auto* run_cmd = app.add_subcommand("run", "Run a scenario config or a bundled scenario");
    std::string scenario_name;
    run_cmd->add_option("--scenario", scenario_name, "Bundled scenario name");

    app.add_subcommand("scenarios", "List bundled scenarios");
    auto* dump_cmd = app.add_subcommand("dump", "Print the canonical form of a config or bundled scenario");
    dump_cmd->add_option("--scenario", scenario_name, "Bundled scenario name");

    auto* scan_cmd = app.add_subcommand("ur-scan", "Sweep Gamma with Delta = delta and tabulate the URs");
    std::string scan_state = "vacuum";
    UrScanOptions scan;
    std::string kinds = "cg_entropic,cg_variance,cg_K";
    scan_cmd->add_option("--state", scan_state, "State: vacuum, thermal:n, squeezed:r or a JSON object")
        ->capture_default_str();
    scan_cmd->add_option("--alpha", scan.alpha, "Renyi order in [1/2, 1]")->capture_default_str();
    scan_cmd->add_option("--gamma-min", scan.gamma.min)->capture_default_str();
    scan_cmd->add_option("--gamma-max", scan.gamma.max)->capture_default_str();
    scan_cmd->add_option("--steps", scan.gamma.steps)->capture_default_str();
    scan_cmd->add_option("--kinds", kinds, "Comma-separated UR kinds")->capture_default_str();

    auto* mub_cmd = app.add_subcommand("mub-check", "Mutual unbiasedness of periodic coarse grainings");
    MubCheckOptions mub;
    mub_cmd->add_option("--d", mub.d, "Number of outcomes")->required();
    mub_cmd->add_option("--Tu", mub.tu, "Period of the u coarse graining")->required();
    mub_cmd->add_option("--Tv", mub.tv, "Period of the v coarse graining")->required();
    mub_cmd->add_option("--hbar", mub.hbar)->capture_default_str();
    mub_cmd->add_flag("--numeric", mub.numeric, "Also measure the deviation from 1/d with localized probes");
    mub_cmd->add_option("--trials", mub.trials, "Probes per direction")->capture_default_str();

    auto* ent_cmd = app.add_subcommand("entangle", "Evaluate an entanglement witness on a two-mode Gaussian state");
    EntangleOptions ent;
    std::string ent_state = "tmsv:1";
    double ent_delta = 0.0, ent_small = 0.0;
    ent_cmd->add_option("--state", ent_state, "tmsv:r, coherent2:a or a JSON object")->capture_default_str();
    ent_cmd->add_option("--criterion", ent.criterion, "variance, entropy or naive")->capture_default_str();
    auto* d_opt = ent_cmd->add_option("--delta", ent_delta, "Bin width for q1 + s q2");
    auto* sd_opt = ent_cmd->add_option("--small-delta", ent_small, "Bin width for p1 - s p2");
    ent_cmd->add_option("--sign", ent.sign, "Sign s of the global operators")->capture_default_str();

    auto* r00_cmd = app.add_subcommand("r00-table", "Tabulate the radial prolate function R00(x, 1)");
    double r_min = 0.01, r_max = 100.0;
    int r_steps = 101;
    bool r_linear = false;
    r00_cmd->add_option("--min", r_min)->capture_default_str();
    r00_cmd->add_option("--max", r_max)->capture_default_str();
    r00_cmd->add_option("--steps", r_steps)->capture_default_str();
    r00_cmd->add_flag("--linear", r_linear, "Linear instead of logarithmic spacing");

    auto* val_cmd = app.add_subcommand("validate", "Run the property smoke set");

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path out_dir = out.value_or(fs::path("."));
        auto load = [&]() -> ScenarioConfig {
            ScenarioConfig cfg;
            if (!scenario_name.empty()) cfg = bundled_scenario(scenario_name);
            else if (!config_path.empty()) cfg = load_config(config_path);
            else throw ConfigError("--config", "give --config <path> or --scenario <name>");
            if (seed) cfg.seed = *seed;
            return cfg;
        };

        if (app.got_subcommand("scenarios")) {
            for (const auto& n : bundled_scenario_names()) std::cout << n << '\n';
            return 0;
        }
        if (*dump_cmd) {
            std::cout << to_json(load()).dump(2) << '\n';
            return 0;
        }
        if (*run_cmd || (app.get_subcommands().empty() && !config_path.empty())) return run(load(), out_dir);
        if (*scan_cmd) {
            scan.state = parse_state_shorthand(scan_state);
            scan.kinds.clear();
            std::stringstream ss(kinds);
            for (std::string k; std::getline(ss, k, ',');)
                if (!k.empty()) scan.kinds.push_back(k);
            emit(out, "ur_scan.csv", ur_scan(scan));
            return 0;
        }
        if (*mub_cmd) {
            if (seed) mub.seed = *seed;
            if (!out) {
                mub_check(mub, std::cout);
            } else {
                std::ostringstream os;
                mub_check(mub, os);
                emit(out, "mub_check.txt", os.str());
            }
            return 0;
        }
        if (*ent_cmd) {
            ent.state = parse_state_shorthand(ent_state);
            if (*d_opt) ent.delta = ent_delta;
            if (*sd_opt) ent.small_delta = ent_small;
            emit(out, "entangle.json", entangle(ent).dump(2) + "\n");
            return 0;
        }
        if (*r00_cmd) {
            emit(out, "r00_table.csv", r00_table(r_min, r_max, r_steps, !r_linear));
            return 0;
        }
        if (*val_cmd) return validate(seed.value_or(1), std::cout) == 0 ? 0 : 1;

        std::cout << app.help();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
