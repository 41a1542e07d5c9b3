#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <cgur/cgur.hpp>

#include "json.hpp"

namespace cgur::cli {

using json = nlohmann::ordered_json;

// Thrown for malformed configs; `where` is a dotted field path or "line L, column C".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

struct GaussianPreset {
    std::string preset;  // vacuum | thermal | squeezed
    double r = 0.0;
    double theta = 0.0;
    double nbar = 0.0;
    double q = 0.0;
    double p = 0.0;
    double hbar = 1.0;
    bool operator==(const GaussianPreset&) const = default;
};

struct GaussianExplicit {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;
    double hbar = 1.0;
    bool operator==(const GaussianExplicit&) const = default;
};

struct GridCsv {
    std::string path;
    double hbar = 1.0;
    bool operator==(const GridCsv&) const = default;
};

struct FockSpec {
    std::vector<std::vector<double>> coefficients;  // [re, im] per Fock number
    double hbar = 1.0;
    bool operator==(const FockSpec&) const = default;
};

struct TmsvSpec {
    double r = 0.0;
    double hbar = 1.0;
    bool operator==(const TmsvSpec&) const = default;
};

using StateSpec = std::variant<GaussianPreset, GaussianExplicit, GridCsv, FockSpec, TmsvSpec>;

struct PairSpec {
    bool canonical = true;
    std::vector<double> du;
    std::vector<double> dv;
    bool cco = false;
    bool operator==(const PairSpec&) const = default;
};

struct StandardSpec {
    double delta = 1.0;
    std::optional<double> u_cen;  // defaults to the marginal mean
    bool operator==(const StandardSpec&) const = default;
};

struct PeriodicSpec {
    double s = 1.0;
    double period = 2.0;
    double u_cen = 0.0;
    bool operator==(const PeriodicSpec&) const = default;
};

using CGSpec = std::variant<StandardSpec, PeriodicSpec>;

struct Range {
    double min = 1.0;
    double max = 1.0;
    int steps = 1;
    bool log = true;
    bool operator==(const Range&) const = default;
    double at(int i) const;
};

// Either a Gamma sweep with Delta = delta = sqrt(Gamma hbar |gamma|), or a Delta x delta grid.
struct SweepSpec {
    std::optional<Range> gamma;
    std::optional<Range> delta;
    std::optional<Range> small_delta;
    bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
    std::string reports = "reports.jsonl";
    std::string table = "table.csv";
    bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
    std::string name;
    std::optional<StateSpec> state;  // absent for pure bound sweeps
    PairSpec pair;
    std::optional<CGSpec> cg_u;
    std::optional<CGSpec> cg_v;
    double alpha = 1.0;
    int witness_sign = -1;
    std::vector<std::string> urs;
    std::optional<SweepSpec> sweep;
    OutputSpec outputs;
    std::uint64_t seed = 1;
    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const json& j);
// Parses text, mapping syntax errors to their line and column.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
json to_json(const ScenarioConfig& cfg);

StateSpec parse_state(const json& j, const std::string& where = "state");
// Shorthands: vacuum, thermal:nbar, squeezed:r, tmsv:r, or a JSON object.
StateSpec parse_state_shorthand(const std::string& text);
json to_json(const StateSpec& s);

json to_json(const URReport& r);

struct ScenarioResult {
    std::vector<URReport> reports;
    std::string table_csv;  // empty when the scenario has no table
};

// Deterministic for a given config; throws std::runtime_error with context on numeric failure.
ScenarioResult run_scenario(const ScenarioConfig& cfg);
// Writes reports as JSON lines and the table into dir; returns the paths written.
std::vector<std::filesystem::path> write_artifacts(const ScenarioConfig& cfg, const ScenarioResult& result,
                                                   const std::filesystem::path& dir);

std::vector<std::string> bundled_scenario_names();
// Throws ConfigError for unknown names.
ScenarioConfig bundled_scenario(const std::string& name);

// Helpers shared with the subcommands.
TwoModeGaussian two_mode_state(const StateSpec& s);
GridWavefunction load_grid_csv(const std::filesystem::path& path, double hbar);
std::string format_double(double x);

} // namespace cgur::cli
