#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "commands.hpp"

namespace cgur::cli {

std::string ur_scan(const UrScanOptions& o) {
    ScenarioConfig cfg;
    cfg.name = "ur_scan";
    cfg.state = o.state;
    cfg.alpha = o.alpha;
    cfg.urs = o.kinds;
    SweepSpec sweep;
    sweep.gamma = o.gamma;
    cfg.sweep = sweep;
    return run_scenario(parse_config(to_json(cfg))).table_csv;
}

MubVerdict mub_check(const MubCheckOptions& o, std::ostream& out) {
    const MubVerdict v = mub_condition(o.tu, o.tv, o.d, o.hbar);
    out << "d=" << o.d << " Tu=" << format_double(o.tu) << " Tv=" << format_double(o.tv)
        << " TuTv/(2 pi hbar)=" << format_double(v.product) << " m=" << v.m << " verdict=" << to_string(v.status)
        << '\n';
    if (o.numeric) {
        const PeriodicCG pu = PeriodicCG::from_period(o.tu / o.d, o.tu);
        const PeriodicCG pv = PeriodicCG::from_period(o.tv / o.d, o.tv);
        const auto r = unbiasedness_test(pu, pv, o.trials, o.seed, o.hbar);
        out << "direction,k0,copies,deviation\n";
        for (const auto& s : r.samples)
            out << (s.direction == 0 ? "u->v" : "v->u") << ',' << s.k0 << ',' << s.copies << ','
                << format_double(s.deviation) << '\n';
        out << "max_deviation=" << format_double(r.max_deviation) << '\n';
    }
    return v;
}

json entangle(const EntangleOptions& o) {
    const TwoModeGaussian state = two_mode_state(o.state);
    const auto pair = GlobalOperatorPair::position_momentum(o.sign);
    const bool binned = o.delta.has_value() || o.small_delta.has_value();
    if (binned && !(o.delta && o.small_delta)) throw ConfigError("--delta/--small-delta", "give both or neither");
    std::optional<BinWidths> widths;
    if (binned) widths = BinWidths{*o.delta, *o.small_delta};

    WitnessResult w;
    if (o.criterion == "variance") {
        w = witness_variance(state, pair, widths);
    } else if (o.criterion == "entropy") {
        if (!widths) throw ConfigError("--delta", "the entropic criterion needs bin widths");
        w = witness_entropy(state, pair, *widths);
    } else if (o.criterion == "naive") {
        if (!widths) throw ConfigError("--delta", "the naive criterion needs bin widths");
        w = naive_binned_variance_witness(state, pair, *widths);
    } else {
        throw ConfigError("--criterion", "expected variance, entropy or naive");
    }
    json j = to_json(w.report);
    j["entangled"] = w.entangled;
    json companions = json::array();
    for (const auto& c : w.companions) companions.push_back(to_json(c));
    j["companions"] = companions;
    return j;
}

std::string r00_table(double min, double max, int steps, bool log_spacing) {
    const Range r{min, max, steps, log_spacing};
    std::ostringstream os;
    os << "x,R00,half_R00_sq,concentration\n";
    for (int i = 0; i < steps; ++i) {
        const double x = r.at(i);
        const double v = r00(x);
        os << format_double(x) << ',' << format_double(v) << ',' << format_double(0.5 * v * v) << ','
           << format_double(2.0 * x / std::numbers::pi * v * v) << '\n';
    }
    return os.str();
}

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

struct Check {
    const char* name;
    std::function<std::string(Rng&)> run;  // empty string on success, else a description
};

} // namespace

int validate(std::uint64_t seed, std::ostream& out) {
    const std::vector<Check> checks = {
        {"variance chain: product UR implies linear UR",
         [](Rng& rng) -> std::string {
             for (int t = 0; t < 200; ++t) {
                 auto s = random_gaussian_state(2, rng);
                 auto du = random_quadrature(2, rng), dv = random_quadrature(2, rng);
                 const double g = commutator_gamma(du, dv);
                 const double vu = gaussian_marginal(s, du).variance, vv = gaussian_marginal(s, dv).variance;
                 const auto h = heisenberg_ur(vu, vv, g), l = linear_ur(vu, vv, g);
                 if (h.violated() || l.violated()) return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"entropic chain: ln(2 pi e su sv) >= h[u] + h[v] >= ln(pi e hbar)",
         [](Rng& rng) -> std::string {
             for (int t = 0; t < 200; ++t) {
                 auto s = random_gaussian_state(1, rng);
                 auto pu = gaussian_marginal(s, QuadratureCoeffs::position(0, 1));
                 auto pv = gaussian_marginal(s, QuadratureCoeffs::momentum(0, 1));
                 const double h = differential_entropy(pu, RenyiOrder::shannon()) +
                                  differential_entropy(pv, RenyiOrder::shannon());
                 const double top = std::log(2 * std::numbers::pi * std::numbers::e * pu.sigma() * pv.sigma());
                 if (top < h - 1e-9 || h < std::log(std::numbers::pi * std::numbers::e) - 1e-9)
                     return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"entropy decomposition of Q",
         [](Rng& rng) -> std::string {
             const double alphas[] = {0.6, 1.0, 2.0};
             for (int t = 0; t < 12; ++t) {
                 GaussianMarginal g{std::uniform_real_distribution<double>(-1, 1)(rng), log_uniform(rng, 0.1, 4)};
                 const double delta = log_uniform(rng, 0.05, 3);
                 auto dist = bin_probabilities(g, StandardCG(delta, 0.1));
                 auto hf = t % 2 ? HistogramFunction::rectangular(delta)
                                 : HistogramFunction::gaussian_optimal(delta, 0.04 * delta * delta);
                 auto d = decompose_Q_entropy(dist, hf, RenyiOrder(alphas[t % 3]));
                 if (std::abs(d.lhs - d.rhs) > 1e-8) return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"coarse graining raises differential entropy",
         [](Rng& rng) -> std::string {
             for (int t = 0; t < 20; ++t) {
                 GaussianMarginal g{0.3, log_uniform(rng, 0.05, 5)};
                 if (jensen_gap(g, StandardCG(log_uniform(rng, 0.01, 5), 0.0)) < -1e-9)
                     return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"coarse-grained entropic UR",
         [](Rng& rng) -> std::string {
             const auto pair = QuadraturePair::canonical();
             for (int t = 0; t < 300; ++t) {
                 auto s = random_gaussian_state(1, rng);
                 const double gc = log_uniform(rng, 1e-3, 1e3);
                 const double ratio = log_uniform(rng, 0.1, 10);
                 const double delta = std::sqrt(gc) * ratio, small = std::sqrt(gc) / ratio;
                 auto pu = gaussian_marginal(s, pair.du()), pv = gaussian_marginal(s, pair.dv());
                 auto du = bin_probabilities(pu, StandardCG(delta, pu.mean));
                 auto dv = bin_probabilities(pv, StandardCG(small, pv.mean));
                 const ConjugatePair orders(t % 2 ? 1.0 : std::uniform_real_distribution<double>(0.5, 1.0)(rng));
                 auto r = cg_entropic_ur(du, dv, CGPair(delta, small, pair), orders);
                 if (r.discrete.violated()) return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"separable states are never flagged",
         [](Rng& rng) -> std::string {
             const auto pair = GlobalOperatorPair::position_momentum();
             for (int t = 0; t < 100; ++t) {
                 auto s = random_separable_state(rng);
                 const BinWidths w{log_uniform(rng, 0.05, 5), log_uniform(rng, 0.05, 5)};
                 if (witness_variance(s, pair, w).entangled || witness_entropy(s, pair, w).entangled)
                     return "trial " + std::to_string(t);
             }
             return {};
         }},
        {"two-mode squeezed vacuum is flagged",
         [](Rng&) -> std::string {
             const auto s = two_mode_squeezed(1.0);
             const auto pair = GlobalOperatorPair::position_momentum();
             const BinWidths w{0.1, 0.1};
             if (!witness_variance(s, pair, w).entangled || !witness_entropy(s, pair, w).entangled) return "not flagged";
             return {};
         }},
        {"periodic coarse-graining certification",
         [](Rng&) -> std::string {
             const double two_pi = 2 * std::numbers::pi;
             for (int d : {4, 5})
                 for (int m = 1; m < d; ++m) {
                     const auto v = mub_condition(std::sqrt(two_pi * d / m), std::sqrt(two_pi * d / m), d);
                     const bool coprime = std::gcd(m, d) == 1;
                     if ((v.status == MubVerdict::Status::Unbiased) != coprime)
                         return "d=" + std::to_string(d) + " m=" + std::to_string(m);
                 }
             return {};
         }},
        {"eps_1 crossover near 1.79",
         [](Rng&) -> std::string {
             const double x = eps_crossover(1.0);
             return std::abs(x - 1.79) < 0.05 ? std::string{} : "root " + format_double(x);
         }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        std::seed_seq ss{seed, static_cast<std::uint64_t>(i)};
        Rng rng(ss);
        std::string why;
        try {
            why = checks[i].run(rng);
        } catch (const std::exception& e) {
            why = std::string("error: ") + e.what();
        }
        if (why.empty()) {
            out << "PASS " << checks[i].name << '\n';
        } else {
            ++failures;
            out << "FAIL " << checks[i].name << " (" << why << ")\n";
        }
    }
    return failures;
}

} // namespace cgur::cli
