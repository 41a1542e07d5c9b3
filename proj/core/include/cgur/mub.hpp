#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgur/coarse_grain.hpp"
#include "cgur/states.hpp"

namespace cgur {

struct MubVerdict {
    enum class Status { Unbiased, Commuting, Biased };
    Status status = Status::Biased;
    long m = 0;          // matched integer with Tu Tv / (2 pi hbar) = d / m; 0 when none
    int d = 0;
    double product = 0;  // Tu Tv / (2 pi hbar)
};

const char* to_string(MubVerdict::Status s) noexcept;

MubVerdict mub_condition(double tu, double tv, int d, double hbar = 1.0);
bool alternative_forms_check(double su, double tu, double sv, double tv, int d, double hbar = 1.0);

struct ProbeOptions {
    // Position of the Gaussian centres inside the bin, as a fraction of s.
    double offset = 0.5;
    // Complex weight of each copy; empty means equal weights.
    std::vector<cplx> amplitudes;
    // Index of the period holding the first copy; defaults to centring the copies on u_cen.
    std::optional<long> first_period;
    double hbar = 1.0;
    // Zero padding factor on the grid length; refines sampling after a conjugate transform.
    int padding = 16;
};

// Superposition of Gaussians exp(-(u - c)^2 / (2 w^2)) centred in `copies`
// consecutive bins of outcome k0. Throws if w > s/4 or if the outcome does not
// hold at least 1 - 1e-6 of the probability.
GridWavefunction localized_probe_state(const PeriodicCG& pcg, int k0, double inner_width, int copies,
                                       const ProbeOptions& options = {});

struct UnbiasednessSample {
    int direction;  // 0: localized in u, measured in v; 1: the reverse
    int k0;
    int copies;
    double deviation;
};

struct UnbiasednessResult {
    double max_deviation = 0.0;
    std::vector<UnbiasednessSample> samples;
};

// Random probes localized in each outcome of one variable, measured in the other,
// in both directions. trials counts probes per direction.
UnbiasednessResult unbiasedness_test(const PeriodicCG& pcg_u, const PeriodicCG& pcg_v, int trials,
                                     std::uint64_t seed = 1, double hbar = 1.0, int max_copies = 4);

} // namespace cgur
