#include "cgur/mub.hpp"
#include "cgur/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cgur {

namespace {

constexpr double kDenominatorCap = 1e6;

struct Rational {
    long long p;
    long long q;
};

// Best continued-fraction convergent of x with denominator at most the cap.
Rational best_rational(double x) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(r);
        if (a > 9e15) break;
        const auto ai = static_cast<long long>(a);
        const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (static_cast<double>(q2) > kDenominatorCap) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        const double frac = r - a;
        if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 1e-15 * std::max(1.0, x) || frac < 1e-15)
            break;
        r = 1.0 / frac;
    }
    return {p1, q1};
}

double leak_of_copy(double centre, double lo, double hi, double sigma) {
    const double s = sigma * std::numbers::sqrt2;
    return 0.5 * std::erfc((centre - lo) / s) + 0.5 * std::erfc((hi - centre) / s);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 256;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

const char* to_string(MubVerdict::Status s) noexcept {
    switch (s) {
    case MubVerdict::Status::Unbiased: return "Unbiased";
    case MubVerdict::Status::Commuting: return "Commuting";
    case MubVerdict::Status::Biased: return "Biased";
    }
    return "Biased";
}

MubVerdict mub_condition(double tu, double tv, int d, double hbar) {
    if (d < 2) throw std::invalid_argument("mub_condition: d must be >= 2");
    if (!(tu > 0.0) || !(tv > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("mub_condition: periods must be positive");
    MubVerdict out;
    out.d = d;
    out.product = tu * tv / (2.0 * std::numbers::pi * hbar);
    const double m_real = static_cast<double>(d) / out.product;
    const Rational r = best_rational(m_real);
    const double approx = static_cast<double>(r.p) / static_cast<double>(r.q);
    if (r.q != 1 || r.p <= 0 || std::abs(approx - m_real) > 1e-12 * std::max(1.0, m_real)) return out;
    out.m = static_cast<long>(r.p);
    if (out.m % d == 0)
        out.status = MubVerdict::Status::Commuting;
    else if (std::gcd(out.m, static_cast<long>(d)) == 1)
        out.status = MubVerdict::Status::Unbiased;  // m n / d is never an integer for 0 < n < d
    return out;
}

bool alternative_forms_check(double su, double tu, double sv, double tv, int d, double hbar) {
    if (d < 2 || !(su > 0.0) || !(tu > 0.0) || !(sv > 0.0) || !(tv > 0.0) || !(hbar > 0.0)) return false;
    const double dd = static_cast<double>(d);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (!close(tu, dd * su) || !close(tv, dd * sv)) return false;
    const double h = 2.0 * std::numbers::pi * hbar;
    const double ma = h * dd / (tu * tv);
    const double mb = h / (tu * sv);
    const double mc = h / (su * tv);
    const double md = h / (su * sv * dd);
    return close(ma, mb) && close(ma, mc) && close(ma, md);
}

GridWavefunction localized_probe_state(const PeriodicCG& pcg, int k0, double inner_width, int copies,
                                       const ProbeOptions& options) {
    const double s = pcg.s();
    if (k0 < 0 || k0 >= pcg.d()) throw std::invalid_argument("localized_probe_state: outcome out of range");
    if (copies < 1) throw std::invalid_argument("localized_probe_state: copies must be >= 1");
    if (!(inner_width > 0.0) || inner_width > 0.25 * s)
        throw std::invalid_argument("localized_probe_state: inner width must lie in (0, s/4]");
    if (!(options.offset > 0.0 && options.offset < 1.0))
        throw std::invalid_argument("localized_probe_state: offset must lie in (0, 1)");
    std::vector<cplx> amps = options.amplitudes;
    if (amps.empty()) amps.assign(static_cast<std::size_t>(copies), cplx(1.0, 0.0));
    if (amps.size() != static_cast<std::size_t>(copies))
        throw std::invalid_argument("localized_probe_state: one amplitude per copy required");

    const double T = pcg.period();
    const long n0 = options.first_period.value_or(-static_cast<long>((copies - 1) / 2));
    std::vector<double> centres(amps.size());
    for (std::size_t j = 0; j < centres.size(); ++j)
        centres[j] = pcg.u_cen() + (k0 + options.offset) * s + static_cast<double>(n0 + static_cast<long>(j)) * T;

    // Each copy has density std w / sqrt 2; estimate the leak out of its bin.
    double weight = 0.0, leak = 0.0;
    for (std::size_t j = 0; j < centres.size(); ++j) {
        const double lo = centres[j] - options.offset * s;
        const double a2 = std::norm(amps[j]);
        weight += a2;
        leak += a2 * leak_of_copy(centres[j], lo, lo + s, inner_width / std::numbers::sqrt2);
    }
    if (!(weight > 0.0)) throw std::invalid_argument("localized_probe_state: amplitudes vanish");
    if (leak / weight > 1e-6)
        throw std::invalid_argument("localized_probe_state: width too large for the bin (leak " +
                                    std::to_string(leak / weight) + ")");

    const double dx = inner_width / 6.0;
    const double span = (centres.back() - centres.front()) + 24.0 * inner_width;
    if (options.padding < 1) throw std::invalid_argument("localized_probe_state: padding must be >= 1");
    const std::size_t n =
        next_pow2(static_cast<std::size_t>(std::ceil(span / dx)) * static_cast<std::size_t>(options.padding));
    if (n > (1u << 22)) throw std::invalid_argument("localized_probe_state: grid too large");
    const GridSpec grid = GridSpec::centred(n, dx, 0.5 * (centres.front() + centres.back()));
    std::vector<cplx> v(n, cplx(0.0, 0.0));
    const double inv = 1.0 / (2.0 * inner_width * inner_width);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.at(i);
        for (std::size_t j = 0; j < centres.size(); ++j) {
            const double y = x - centres[j];
            if (std::abs(y) < 40.0 * inner_width) v[i] += amps[j] * std::exp(-y * y * inv);
        }
    }
    return GridWavefunction::normalized(std::move(v), grid, options.hbar);
}

namespace {

double edge_mass(const GridDensity& g) {
    const std::size_t n = g.size(), band = std::max<std::size_t>(1, n / 100);
    double m = 0.0;
    for (std::size_t i = 0; i < band; ++i) m += g.values()[i] + g.values()[n - 1 - i];
    return m * g.grid().dx;
}

} // namespace

UnbiasednessResult unbiasedness_test(const PeriodicCG& pcg_u, const PeriodicCG& pcg_v, int trials, std::uint64_t seed,
                                     double hbar, int max_copies) {
    if (trials < 1) throw std::invalid_argument("unbiasedness_test: trials must be >= 1");
    if (pcg_u.d() != pcg_v.d()) throw std::invalid_argument("unbiasedness_test: both sides need the same d");
    if (max_copies < 1) throw std::invalid_argument("unbiasedness_test: max_copies must be >= 1");
    const int d = pcg_u.d();
    const std::size_t total = 2 * static_cast<std::size_t>(trials);
    std::vector<UnbiasednessSample> samples(total);

    parallel_for(total, [&](std::size_t idx) {
        const int direction = static_cast<int>(idx / static_cast<std::size_t>(trials));
        const int t = static_cast<int>(idx % static_cast<std::size_t>(trials));
        std::seed_seq seq{seed, static_cast<std::uint64_t>(direction), static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> normal;

        const PeriodicCG& prep = direction == 0 ? pcg_u : pcg_v;
        const PeriodicCG& meas = direction == 0 ? pcg_v : pcg_u;
        const int k0 = t % d;
        const int copies = 1 + static_cast<int>(unif(rng) * max_copies) % max_copies;
        const double w = prep.s() * (1.0 / 14.0 + unif(rng) * (1.0 / 10.0 - 1.0 / 14.0));
        const double margin = 5.5 * w / std::numbers::sqrt2 / prep.s();
        ProbeOptions opt;
        opt.hbar = hbar;
        opt.offset = margin + unif(rng) * (1.0 - 2.0 * margin);
        for (int j = 0; j < copies; ++j) opt.amplitudes.emplace_back(normal(rng), normal(rng));

        const GridWavefunction probe = localized_probe_state(prep, k0, w, copies, opt);
        const GridWavefunction other =
            direction == 0 ? conjugate_wavefunction(probe) : inverse_conjugate_wavefunction(probe, 0.0);
        const GridDensity density = GridDensity::from(other);
        if (edge_mass(density) > 1e-9) throw std::runtime_error("unbiasedness_test: unfaithful coverage of the window");
        const auto dist = pcg_probabilities(density, meas);
        if (!dist.faithful()) throw std::runtime_error("unbiasedness_test: unfaithful coverage");
        const auto p = dist.renormalized();
        double dev = 0.0;
        for (double q : p) dev = std::max(dev, std::abs(q - 1.0 / d));
        samples[idx] = {direction, k0, copies, dev};
    });

    UnbiasednessResult out;
    out.samples = std::move(samples);
    for (const auto& s : out.samples) out.max_deviation = std::max(out.max_deviation, s.deviation);
    return out;
}

} // namespace cgur
