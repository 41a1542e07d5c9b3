#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "generators.hpp"
#include "oracles.hpp"

using namespace cgur;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double total(const DiscreteDistribution& d) { return std::accumulate(d.probs().begin(), d.probs().end(), 0.0); }

GridDensity sampled_gaussian(const GridSpec& g, double mean, double sigma) {
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double z = (g.at(j) - mean) / sigma;
        v[j] = std::exp(-0.5 * z * z);
    }
    const double s = std::accumulate(v.begin(), v.end(), 0.0) * g.dx;
    for (auto& x : v) x /= s;
    return GridDensity(std::move(v), g);
}

} // namespace

TEST_CASE("standard bins are half-open with ties going down") {
    const StandardCG cg(0.5, 1.0);
    CHECK(cg.bin_of(1.0) == 0);
    CHECK(cg.bin_of(1.25) == 0);
    CHECK(cg.bin_of(1.2500001) == 1);
    CHECK(cg.bin_of(0.75) == -1);
    CHECK(cg.bin_of(-3.0) == -8);
    CHECK(cg.lower_edge(2) == 1.75);
    CHECK(cg.upper_edge(2) == 2.25);
    CHECK(cg.outcome(-2) == 0.0);
    CHECK_THROWS(StandardCG(0.0));
    CHECK_THROWS(StandardCG(1.0, 0.0, 3, 2));
    const auto [lo, hi] = cg.range_for(-1.0, 2.0);
    CHECK(lo <= cg.bin_of(-1.0));
    CHECK(hi >= cg.bin_of(2.0));
}

TEST_CASE("periodic coarse graining") {
    CHECK_THROWS(PeriodicCG::from_period(1.0, 2.5));
    CHECK_THROWS(PeriodicCG::from_period(1.0, 1.0));
    const auto pcg = PeriodicCG::from_period(0.5, 2.0, 0.1);
    CHECK(pcg.d() == 4);
    CHECK(pcg.outcome_of(0.1) == 0);
    CHECK(pcg.outcome_of(0.65) == 1);
    CHECK(pcg.outcome_of(0.65 + 6.0) == 1);
    CHECK(pcg.outcome_of(0.65 - 10.0) == 1);
    CHECK(pcg.outcome_of(0.05) == 3);
}

TEST_CASE("Gaussian bin probabilities match extended-precision masses") {
    auto rng = gen::rng_for(21);
    for (int trial = 0; trial < 20; ++trial) {
        const GaussianMarginal g{gen::uniform(rng, -2, 2), gen::log_uniform(rng, 0.01, 10)};
        const double delta = gen::log_uniform(rng, 0.05, 5), cen = gen::uniform(rng, -1, 1);
        const StandardCG cg(delta, cen);
        const auto d = bin_probabilities(g, cg);
        CHECK(d.faithful());
        CHECK_THAT(total(d), WithinAbs(1.0, 1e-12));
        for (std::size_t i = 0; i < d.size(); i += std::max<std::size_t>(1, d.size() / 7)) {
            const long k = d.k_min() + static_cast<long>(i);
            const double ref = oracle::normal_mass(g.mean, g.sigma(), cg.lower_edge(k), cg.upper_edge(k));
            CHECK_THAT(d.probs()[i], WithinAbs(ref, 1e-15) || WithinRel(ref, 1e-12));
        }
    }
}

TEST_CASE("grid binning splits cells by exact overlap") {
    // Uniform density on [0, 1) in ten cells, bins of width 0.3 starting at the edge.
    const GridSpec g{10, 0.0, 0.1};
    const GridDensity uni(std::vector<double>(10, 1.0), g);
    const auto d = bin_probabilities(uni, StandardCG(0.3, 0.15));
    auto at = [&](double outcome) {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (std::abs(d.outcome(i) - outcome) < 1e-12) return d.probs()[i];
        return 0.0;
    };
    CHECK_THAT(at(0.15), WithinAbs(0.3, 1e-14));
    CHECK_THAT(at(0.45), WithinAbs(0.3, 1e-14));
    CHECK_THAT(at(0.75), WithinAbs(0.3, 1e-14));
    CHECK_THAT(at(1.05), WithinAbs(0.1, 1e-14));
    CHECK_THAT(at(-0.15), WithinAbs(0.0, 1e-14));

    const auto fine = sampled_gaussian(GridSpec::centred(8192, 0.004), 0.2, 1.1);
    const auto dg = bin_probabilities(fine, StandardCG(0.7, 0.0));
    const auto dc = bin_probabilities(GaussianMarginal{0.2, 1.21}, StandardCG(0.7, 0.0));
    for (std::size_t i = 0; i < dg.size(); ++i) {
        const double x = dg.outcome(i);
        const long k = std::lround(x / 0.7) - dc.k_min();
        if (k >= 0 && k < static_cast<long>(dc.size())) CHECK_THAT(dg.probs()[i], WithinAbs(dc.probs()[k], 1e-6));
    }
}

TEST_CASE("pointwise densities bin like their closed form") {
    const GaussianMarginal g{-0.3, 0.8};
    const auto a = bin_probabilities(PdfFunction::of(g), StandardCG(0.4, 0.1));
    const auto b = bin_probabilities(g, StandardCG(0.4, 0.1));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK_THAT(a.probs()[i], WithinAbs(b.probs()[i], 1e-13));
    PdfFunction bad{[](double) { return 1.0; }, 1.0, 0.0, 1.0};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("explicit bin ranges report lost coverage") {
    const GaussianMarginal g{0.0, 1.0};
    const auto d = bin_probabilities(g, StandardCG(1.0, 0.0, -1, 1));
    CHECK(d.size() == 3);
    CHECK_FALSE(d.faithful());
    CHECK_THAT(d.coverage(), WithinAbs(oracle::normal_mass(0, 1, -1.5, 1.5), 1e-14));
    const auto r = d.renormalized();
    CHECK_THAT(std::accumulate(r.begin(), r.end(), 0.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("periodic probabilities fold the standard bins") {
    auto rng = gen::rng_for(22);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianMarginal g{gen::uniform(rng, -1, 1), gen::log_uniform(rng, 0.05, 4)};
        const int dd = gen::integer(rng, 2, 6);
        const double s = gen::log_uniform(rng, 0.1, 2), cen = gen::uniform(rng, -0.5, 0.5);
        const auto pcg = PeriodicCG(s, dd, cen);
        const auto p = pcg_probabilities(g, pcg);
        REQUIRE(p.size() == static_cast<std::size_t>(dd));
        CHECK(p.kind() == LabelKind::Periodic);
        CHECK_THAT(total(p), WithinAbs(1.0, 1e-11));
        // Bins [cen + k s, cen + (k+1) s) are standard bins centred at cen + (k + 1/2) s.
        const auto st = bin_probabilities(g, StandardCG(s, cen + 0.5 * s));
        std::vector<double> folded(dd, 0.0);
        for (std::size_t i = 0; i < st.size(); ++i) {
            const long k = st.k_min() + static_cast<long>(i);
            folded[((k % dd) + dd) % dd] += st.probs()[i];
        }
        for (int k = 0; k < dd; ++k) CHECK_THAT(p.probs()[k], WithinAbs(folded[k], 1e-11));

        const auto grid = sampled_gaussian(GridSpec::centred(4096, 40 * g.sigma() / 4096, g.mean), g.mean, g.sigma());
        const auto pg = pcg_probabilities(grid, pcg);
        for (int k = 0; k < dd; ++k) CHECK_THAT(pg.probs()[k], WithinAbs(p.probs()[k], 1e-4));
    }
}

TEST_CASE("distributions serialize to CSV") {
    const auto d = DiscreteDistribution::standard({0.25, 0.75}, 0.5, 1.0, -1);
    CHECK(d.to_csv() == "outcome,probability\n0.5,0.25\n1,0.75\n");
    const auto p = DiscreteDistribution::periodic({0.5, 0.5}, 1.0);
    CHECK(p.to_csv() == "outcome,probability\n0,0.5\n1,0.5\n");
    CHECK_THROWS(DiscreteDistribution::standard({0.7, 0.7}, 1.0, 0.0, 0));
}

TEST_CASE("histogram functions") {
    const auto rect = HistogramFunction::rectangular(0.8);
    CHECK(rect.shape(0.0) == 1.25);
    CHECK(rect.shape(0.5) == 0.0);
    CHECK_THAT(rect.mass(-1, 1), WithinAbs(1.0, 1e-15));
    CHECK_THAT(rect.mass(0.0, 0.2), WithinAbs(0.25, 1e-15));
    auto m = hf_moments(rect, 1.0);
    CHECK_THAT(m.entropy, WithinAbs(std::log(0.8), 1e-15));
    CHECK_THAT(m.variance, WithinAbs(0.64 / 12, 1e-15));
    CHECK_THAT(hf_moments(rect, 3.0).entropy, WithinAbs(std::log(0.8), 1e-14));

    const auto go = HistogramFunction::gaussian_optimal(1.0, 0.05);
    CHECK_THAT(go.mass(-0.5, 0.5), WithinAbs(1.0, 1e-14));
    CHECK(go.shape(0.6) == 0.0);
    const double var = oracle::integrate([&](double y) { return y * y * go.shape(y); }, -0.5, 0.5, 8);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const double h = alpha == 1.0
                             ? -oracle::integrate([&](double y) { return go.shape(y) * std::log(go.shape(y)); }, -0.5, 0.5, 8)
                             : std::log(oracle::integrate([&](double y) { return std::pow(go.shape(y), alpha); }, -0.5,
                                                          0.5, 8)) / (1 - alpha);
        CHECK_THAT(hf_moments(go, alpha).entropy, WithinAbs(h, 1e-12));
    }
    CHECK_THAT(hf_moments(go, 1.0).variance, WithinAbs(var, 1e-13));
    CHECK_THROWS(HistogramFunction::gaussian_optimal(1.0, 0.0));
}

TEST_CASE("Q densities conserve mass and mean") {
    const GaussianMarginal g{0.4, 0.6};
    const auto d = bin_probabilities(g, StandardCG(0.5, 0.0));
    for (const auto& hf : {HistogramFunction::rectangular(0.5), HistogramFunction::gaussian_optimal(0.5, 0.01)}) {
        const QDensity q(d, hf);
        // panels aligned with the bin edges, where Q jumps
        const double mass = oracle::integrate(q, -20.25, 20.25, 81);
        CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
        const auto grid = render_Q(d, hf, 32);
        CHECK_THAT(grid.mass(), WithinAbs(d.coverage(), 1e-12));
        CHECK_THAT(grid.mean(), WithinAbs(discrete_mean(d), 1e-10));
    }
    // Rectangular Q has the discrete variance plus the bin variance; the grid's
    // own variance leaves out the spread inside each of its cells.
    const auto grid = render_Q(d, HistogramFunction::rectangular(0.5), 64);
    const double cell = 0.5 / 64;
    CHECK_THAT(grid.variance(), WithinAbs(discrete_variance(d) + 0.25 / 12 - cell * cell / 12, 1e-9));
}

TEST_CASE("discrete moments") {
    const auto d = DiscreteDistribution::standard({0.5, 0.5}, 2.0, 1.0, 0);
    CHECK(discrete_mean(d) == 2.0);
    CHECK(discrete_variance(d) == 1.0);
    // Binned Gaussians approach their variance plus Sheppard's correction.
    const auto b = bin_probabilities(GaussianMarginal{0.0, 4.0}, StandardCG(0.5, 0.0));
    CHECK_THAT(discrete_variance(b), WithinAbs(4.0 + 0.25 / 12, 1e-9));
}
