#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"

using namespace cgur;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Bin probabilities of N(mean, sigma^2) on cells of width w centred at c + k w, summed independently.
std::vector<double> oracle_bins(double mean, double sigma, double w, double c) {
    std::vector<double> p;
    const long k = static_cast<long>(std::ceil(40 * sigma / w)) + 2;
    for (long j = -k; j <= k; ++j) p.push_back(oracle::normal_mass(mean, sigma, c + (j - 0.5) * w, c + (j + 0.5) * w));
    return p;
}

double shannon(const std::vector<double>& p) {
    double h = 0;
    for (double x : p)
        if (x > 0) h -= x * std::log(x);
    return h;
}

double oracle_variance(const std::vector<double>& p, double w) {
    double m = 0, s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * i * w;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * (i * w - m) * (i * w - m);
    return s;
}

Eigen::MatrixXcd random_unitary(gen::Rng& r, int d) {
    Eigen::MatrixXcd z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = {gen::normal(r), gen::normal(r)};
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

} // namespace

TEST_CASE("reports carry margin and verdict") {
    const auto ok = make_report("x", 1.0, 1.0 + 0.5e-9);
    CHECK(ok.verdict == Verdict::Satisfied);
    CHECK_THAT(ok.margin, WithinAbs(-0.5e-9, 1e-15));
    CHECK(make_report("x", 1.0, 1.0 + 2e-9).violated());
    CHECK(to_string(Verdict::TriviallySatisfied) != to_string(Verdict::Satisfied));
}

TEST_CASE("Heisenberg and linear relations") {
    for (double hbar : {1.0, 2.0, 0.3}) {
        CHECK_THAT(heisenberg_ur(hbar / 2, hbar / 2, 1.0, hbar).margin, WithinAbs(0.0, 1e-15));
        CHECK_THAT(heisenberg_ur(1, 1, 2.0, hbar).bound, WithinRel(hbar * hbar, 1e-15));
        const double a = hbar / 2 * std::exp(-2.0), b = hbar / 2 * std::exp(2.0);
        CHECK_THAT(heisenberg_ur(a, b, 1.0, hbar).margin, WithinAbs(0.0, 1e-14));
        CHECK_THAT(linear_ur(hbar / 2, hbar / 2, 1.0, hbar).margin, WithinAbs(0.0, 1e-15));
        CHECK_THAT(linear_ur(a, b, 1.0, hbar).margin, WithinRel(hbar * (std::cosh(2.0) - 1), 1e-13));
    }
    CHECK(linear_ur(0.1, 0.2, 0.0).bound == 0.0);
    CHECK_THROWS(heisenberg_ur(-1.0, 1.0, 1.0));
}

TEST_CASE("product relation implies the linear one and Shannon implies Heisenberg") {
    auto rng = gen::rng_for(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = gen::two_mode_state(rng, 1.0 + trial % 3);
        const auto pair = QuadraturePair::general(gen::quadrature(rng, 2), gen::quadrature(rng, 2));
        const auto mu = gaussian_marginal(s, pair.du()), mv = gaussian_marginal(s, pair.dv());
        const auto prod = heisenberg_ur(mu.variance, mv.variance, pair.gamma(), s.hbar());
        const auto lin = linear_ur(mu.variance, mv.variance, pair.gamma(), s.hbar());
        const auto sh = shannon_ur(differential_entropy(mu, RenyiOrder(1.0)), differential_entropy(mv, RenyiOrder(1.0)),
                                   pair.gamma(), s.hbar());
        CHECK_FALSE(prod.violated());
        // var_u + var_v >= 2 sqrt(var_u var_v), so the product form implies the linear one.
        if (!prod.violated()) CHECK_FALSE(lin.violated());
        if (!sh.violated()) CHECK_FALSE(prod.violated());
        CHECK_FALSE(sh.violated());
    }
}

TEST_CASE("Schrodinger relation") {
    const auto vac = GaussianState::vacuum(1, 2.0);
    const auto r = schrodinger_ur(vac, 0);
    CHECK_THAT(r.bound, WithinAbs(1.0, 1e-15));
    CHECK_THAT(r.margin, WithinAbs(0.0, 1e-14));
    const auto rot = GaussianState::squeezed(0.8, 0.7, 1.3);
    CHECK(std::abs(rot.cov()(0, 1)) > 0.1);
    CHECK_THAT(schrodinger_ur(rot, 0).margin, WithinAbs(0.0, 1e-12));
    CHECK(schrodinger_ur(rot, 0).margin < heisenberg_ur(rot.cov()(0, 0), rot.cov()(1, 1), 1.0, 1.3).margin);
    CHECK(schrodinger_ur(GaussianState::thermal(0.5), 0).margin > 0.1);
    CHECK_THROWS(schrodinger_ur(vac, 1));
}

TEST_CASE("Shannon relation") {
    const double hbar = 0.6;
    const double h = differential_entropy(GaussianMarginal{0, hbar / 2}, RenyiOrder(1.0));
    const auto r = shannon_ur(h, h, 1.0, hbar);
    CHECK_THAT(r.bound, WithinAbs(std::log(kPi * kE * hbar), 1e-15));
    CHECK_THAT(r.margin, WithinAbs(0.0, 1e-14));
    // The first excited state is non-Gaussian and sits strictly above the bound.
    const FockSuperposition one({0.0, 1.0});
    const double h1 = differential_entropy(PdfFunction::of(one), RenyiOrder(1.0));
    CHECK(shannon_ur(h1, h1, 1.0).margin > 0.05);

    // u -> lambda u, v -> v / lambda keeps gamma and the margin.
    auto rng = gen::rng_for(42);
    const auto s = gen::single_mode_state(rng);
    const auto q = QuadratureCoeffs::position(0, 1), p = QuadratureCoeffs::momentum(0, 1);
    auto margin = [&](double lam) {
        const auto pair = QuadraturePair::general(q.scaled(lam), p.scaled(1 / lam));
        return shannon_ur(differential_entropy(gaussian_marginal(s, pair.du()), RenyiOrder(1.0)),
                          differential_entropy(gaussian_marginal(s, pair.dv()), RenyiOrder(1.0)), pair.gamma())
            .margin;
    };
    for (double lam : {0.1, 3.0, 17.0}) CHECK_THAT(margin(lam), WithinAbs(margin(1.0), 1e-12));
    CHECK_THROWS(shannon_ur(1, 1, 0.0));
}

TEST_CASE("Renyi relation") {
    const auto cco = QuadraturePair::canonical();
    const double hbar = 1.0;
    const GaussianMarginal vac{0, 0.5};
    const ConjugatePair half(0.5);
    const auto r = renyi_ur(differential_entropy(vac, RenyiOrder(0.5)), differential_entropy(vac, RenyiOrder(kInf)), half,
                            cco, hbar);
    CHECK(r.margin >= -1e-12);
    CHECK_THAT(r.bound, WithinAbs(std::log(2 * kPi), 1e-14));
    // Orders close to one approach the Shannon bound.
    const ConjugatePair near(1.0 - 1e-7);
    CHECK_THAT(renyi_ur(0, 0, near, cco).bound, WithinAbs(std::log(kPi * kE), 1e-6));
    const auto general = QuadraturePair::general(QuadratureCoeffs::position(0, 1), QuadratureCoeffs::momentum(0, 1));
    CHECK_THROWS_AS(renyi_ur(0, 0, half, general), std::invalid_argument);
}

TEST_CASE("coarse-grained pair records Gamma") {
    const CGPair a(0.5, 3.0, QuadraturePair::canonical(), 2.0);
    CHECK_THAT(a.gamma_capital(), WithinRel(0.75, 1e-15));
    const auto pair2 = QuadraturePair::general(QuadratureCoeffs{1, 1, 0, 0}, QuadratureCoeffs{0, 0, 1, 1});
    CHECK(pair2.gamma() == 2.0);
    CHECK_THAT(CGPair(1.0, 1.0, pair2).gamma_capital(), WithinRel(0.5, 1e-15));
    CHECK_THROWS(CGPair(0.0, 1.0, QuadraturePair::canonical()));
    const auto commuting = QuadraturePair::general(QuadratureCoeffs{1, 0, 0, 0}, QuadratureCoeffs{0, 1, 0, 0});
    CHECK_THROWS(CGPair(1.0, 1.0, commuting));
}

TEST_CASE("coarse-grained entropic bound asymptotics") {
    const ConjugatePair shannon_orders(1.0);
    for (double g : {1e-6, 1e-3, 0.1, 1.0, 7.0})
        CHECK_THAT(cg_entropic_bound(g, shannon_orders), WithinAbs(std::log(kPi * kE / g), 1e-12));
    CHECK(std::abs(cg_entropic_bound(1e4, shannon_orders)) < 1e-3);
    for (double alpha : {0.5, 0.75, 1.0}) {
        const ConjugatePair o(alpha);
        double prev = kInf;
        for (double g = 1e-3; g < 1e4; g *= 1.2) {
            const double b = cg_entropic_bound(g, o);
            CHECK(b <= prev + 1e-12);
            CHECK(b >= cg_entropic_bound_bialynicki(g, o) - 1e-12);
            // Past Gamma ~ 100 the bound is below double resolution of ln(1 + x).
            if (g < 100) CHECK(b > 0.0);
            CHECK(b > -1e-12);
            prev = b;
        }
    }
    // Equal below the crossover, strictly larger above it.
    CHECK_THAT(cg_entropic_bound(4 * 1.7, shannon_orders),
               WithinAbs(cg_entropic_bound_bialynicki(4 * 1.7, shannon_orders), 1e-14));
    CHECK(cg_entropic_bound(4 * 3.0, shannon_orders) > cg_entropic_bound_bialynicki(4 * 3.0, shannon_orders) + 0.1);
    CHECK_THROWS(cg_entropic_bound(0.0, shannon_orders));
}

TEST_CASE("coarse-grained entropic relation on the vacuum against a direct bin sum") {
    const double hbar = 1.0, w = std::sqrt(hbar);
    const GaussianMarginal g{0.0, hbar / 2};
    const auto du = bin_probabilities(g, StandardCG(w, 0.0)), dv = bin_probabilities(g, StandardCG(w, 0.0));
    const CGPair cgp(w, w, QuadraturePair::canonical(), hbar);
    const auto res = cg_entropic_ur(du, dv, cgp, ConjugatePair(1.0));
    const double h = shannon(oracle_bins(0.0, std::sqrt(hbar / 2), w, 0.0));
    CHECK_THAT(res.discrete.lhs, WithinAbs(2 * h, 1e-12));
    CHECK_THAT(res.discrete.bound, WithinAbs(std::log(kPi * kE), 1e-13));
    CHECK(res.discrete.margin > 0.0);
    CHECK(res.discrete.verdict == Verdict::Satisfied);
    CHECK_THAT(res.continuous.margin, WithinAbs(res.discrete.margin, 1e-12));
    CHECK_THAT(res.bialynicki.bound, WithinAbs(res.discrete.bound, 1e-13));

    // Large Gamma: the weaker bound goes negative and is flagged trivial.
    const double big = 8.0;
    const CGPair wide(big, big, QuadraturePair::canonical(), hbar);
    const auto r2 = cg_entropic_ur(bin_probabilities(g, StandardCG(big)), bin_probabilities(g, StandardCG(big)), wide,
                                   ConjugatePair(1.0));
    CHECK(r2.bialynicki.bound < 0.0);
    CHECK(r2.bialynicki.verdict == Verdict::TriviallySatisfied);
    CHECK(r2.discrete.bound > 0.0);
    CHECK_FALSE(r2.discrete.violated());
}

TEST_CASE("coarse-grained entropic relation enforces its contract") {
    const GaussianMarginal g{0.0, 0.5};
    const auto d = bin_probabilities(g, StandardCG(1.0));
    const auto general = QuadraturePair::general(QuadratureCoeffs::position(0, 1), QuadratureCoeffs::momentum(0, 1));
    const CGPair gp(1.0, 1.0, general);
    CHECK_THROWS(cg_entropic_ur(d, d, gp, ConjugatePair(0.75)));
    CHECK_THROWS(cg_entropic_ur(d, d, gp, ConjugatePair(1.0), HistogramFunction::gaussian_optimal(1.0, 0.05),
                                HistogramFunction::gaussian_optimal(1.0, 0.05)));
    // General pairs at order one keep the 1/e constant for every Gamma.
    const CGPair wide(5.0, 5.0, general);
    const auto dw = bin_probabilities(g, StandardCG(5.0));
    CHECK_THAT(cg_entropic_ur(dw, dw, wide, ConjugatePair(1.0)).discrete.bound, WithinAbs(std::log(kPi * kE / 25), 1e-13));
    CHECK_THROWS(cg_entropic_ur(d, d, CGPair(1.0, 2.0, QuadraturePair::canonical()), ConjugatePair(1.0)));
}

TEST_CASE("coarse-grained variance relation") {
    const double hbar = 1.0, w = std::sqrt(hbar);
    const CGPair cgp(w, w, QuadraturePair::canonical(), hbar);
    // Perfect localization at fine graining is forbidden.
    const auto loc = cg_variance_ur(0.0, 0.0, cgp);
    CHECK_THAT(loc.lhs, WithinRel(hbar * hbar / 144, 1e-14));
    CHECK_THAT(loc.bound, WithinRel(hbar * hbar / 4, 1e-12));
    CHECK(loc.violated());

    // Continuum limit on the vacuum.
    const double fine = 1e-2;
    const GaussianMarginal g{0.0, hbar / 2};
    const double vd = discrete_variance(bin_probabilities(g, StandardCG(fine)));
    CHECK_THAT(vd, WithinAbs(oracle_variance(oracle_bins(0.0, std::sqrt(hbar / 2), fine, 0.0), fine), 1e-12));
    const auto cont = cg_variance_ur(vd, vd, CGPair(fine, fine, QuadraturePair::canonical(), hbar));
    // Binning adds delta^2 / 12 and the rectangular HF another; the surplus is sigma^2 delta^2 / 3 to leading order.
    CHECK_THAT(cont.margin, WithinRel(hbar / 2 * fine * fine / 3, 1e-3));

    // Gamma = 4 pi e is past the trivial threshold.
    const double big = std::sqrt(4 * kPi * kE * hbar);
    const auto triv = cg_variance_ur(0.0, 0.0, CGPair(big, big, QuadraturePair::canonical(), hbar));
    CHECK(triv.verdict == Verdict::TriviallySatisfied);
}

TEST_CASE("K-form variance relation") {
    const double hbar = 1.0;
    // Infinite coarse graining: K(0) = 1 and the bound tends to one.
    const double huge = 1e3;
    const auto inf = cg_K_ur(0.0, 0.0, CGPair(huge, huge, QuadraturePair::canonical(), hbar));
    CHECK(inf.lhs == 1.0);
    CHECK_THAT(inf.bound, WithinAbs(1.0, 1e-2));
    for (double g : {0.1, 1.0, 10.0, 30.0}) CHECK(cg_K_bound(g) > 1.0);

    // Fine graining recovers the Heisenberg relation.
    const auto sq = GaussianState::squeezed(0.4, 0.0, hbar);
    const GaussianMarginal mq = gaussian_marginal(sq, QuadratureCoeffs::position(0, 1));
    const GaussianMarginal mp = gaussian_marginal(sq, QuadratureCoeffs::momentum(0, 1));
    const double f = 2e-3;
    const double vq = discrete_variance(bin_probabilities(mq, StandardCG(f, mq.mean)));
    const double vp = discrete_variance(bin_probabilities(mp, StandardCG(f, mp.mean)));
    const auto fineK = cg_K_ur(vq, vp, CGPair(f, f, QuadraturePair::canonical(), hbar));
    CHECK_THAT(fineK.lhs / fineK.bound, WithinAbs(1.0, 1e-3));

    // Vacuum at Delta = delta = 2 sqrt(hbar).
    const double w = 2 * std::sqrt(hbar);
    const GaussianMarginal vac{0.0, hbar / 2};
    const double v = discrete_variance(bin_probabilities(vac, StandardCG(w, 0.0)));
    CHECK_THAT(v, WithinAbs(oracle_variance(oracle_bins(0.0, std::sqrt(hbar / 2), w, 0.0), w), 1e-13));
    const auto rk = cg_K_ur(v, v, CGPair(w, w, QuadraturePair::canonical(), hbar));
    CHECK(rk.margin >= 0.0);
    CHECK_THAT(rk.lhs, WithinRel(oracle::K_direct(v / (w * w)) * oracle::K_direct(v / (w * w)), 1e-9));

    const auto general = QuadraturePair::general(QuadratureCoeffs::position(0, 1), QuadratureCoeffs::momentum(0, 1));
    CHECK_THROWS(cg_K_ur(0.1, 0.1, CGPair(1, 1, general)));
}

TEST_CASE("discrete Maassen-Uffink and Deutsch bounds") {
    Eigen::MatrixXcd f2(2, 2);
    f2 << 1, 1, 1, -1;
    f2 /= std::sqrt(2.0);
    const ConjugatePair o(1.0);
    CHECK_THAT(discrete_mu_bounds(f2, o).mu, WithinAbs(std::log(2.0), 1e-15));
    CHECK_THAT(discrete_mu_bounds(Eigen::MatrixXcd::Identity(3, 3), o).mu, WithinAbs(0.0, 1e-15));
    CHECK_THROWS(discrete_mu_bounds(2.0 * f2, o));
    CHECK_THROWS(discrete_mu_bounds(Eigen::MatrixXcd::Identity(2, 3), o));

    auto rng = gen::rng_for(43);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_unitary(rng, 3);
        const auto b = discrete_mu_bounds(u, ConjugatePair(0.75));
        CHECK(b.deutsch <= b.mu + 1e-15);
        CHECK(b.deutsch >= 0.0);
    }
    // Brute force over pure qubit states: the entropy sum never drops below mu.
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = random_unitary(rng, 2);
        const auto b = discrete_mu_bounds(u, o);
        double best = kInf;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j < 200; ++j) {
                const double th = kPi * i / 200, ph = 2 * kPi * j / 200;
                Eigen::Vector2cd psi(std::cos(th / 2), std::polar(std::sin(th / 2), ph));
                const Eigen::Vector2cd phi = u.adjoint() * psi;
                best = std::min(best, shannon({std::norm(psi(0)), std::norm(psi(1))}) +
                                          shannon({std::norm(phi(0)), std::norm(phi(1))}));
            }
        CHECK(best >= b.mu - 1e-12);
        CHECK(best >= b.deutsch);
    }
}
