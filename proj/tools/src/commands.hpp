#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace cgur::cli {

struct UrScanOptions {
    StateSpec state = GaussianPreset{.preset = "vacuum"};
    double alpha = 1.0;
    Range gamma{1e-3, 1e3, 61, true};
    std::vector<std::string> kinds{"cg_entropic", "cg_variance", "cg_K"};
};

// CSV of reports over a logarithmic Gamma sweep with Delta = delta.
std::string ur_scan(const UrScanOptions& o);

struct MubCheckOptions {
    int d = 2;
    double tu = 0.0;
    double tv = 0.0;
    double hbar = 1.0;
    bool numeric = false;
    int trials = 8;
    std::uint64_t seed = 1;
};

MubVerdict mub_check(const MubCheckOptions& o, std::ostream& out);

struct EntangleOptions {
    StateSpec state = TmsvSpec{.r = 1.0};
    std::string criterion = "variance";  // variance | entropy | naive
    std::optional<double> delta;
    std::optional<double> small_delta;
    int sign = -1;
};

// The deciding report with an "entangled" flag and the companion forms.
json entangle(const EntangleOptions& o);

std::string r00_table(double min, double max, int steps, bool log_spacing);

// Runs the smoke set of property checks, one PASS/FAIL line each; returns the failure count.
int validate(std::uint64_t seed, std::ostream& out);

} // namespace cgur::cli
