#include "cgur/entropy.hpp"
#include "detail/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cgur {

namespace {

constexpr double kTiny = 1e-300;

// Accumulates the order-dependent functional from (value, weight) pairs.
class EntropyAccumulator {
public:
    explicit EntropyAccumulator(RenyiOrder order) : order_(order) {}

    void add(double p, double weight) {
        if (!(p > kTiny)) return;
        if (order_.is_min_entropy())
            peak_ = std::max(peak_, p);
        else if (order_.is_shannon())
            acc_ -= weight * p * std::log(p);
        else
            acc_ += weight * std::pow(p, order_.alpha());
    }

    double result() const {
        if (order_.is_min_entropy()) return -std::log(peak_);
        if (order_.is_shannon()) return acc_;
        return std::log(acc_) / (1.0 - order_.alpha());
    }

private:
    RenyiOrder order_;
    double acc_ = 0.0;
    double peak_ = 0.0;
};

} // namespace

RenyiOrder::RenyiOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || std::isnan(alpha)) throw std::invalid_argument("RenyiOrder: alpha must be positive");
}

ConjugatePair::ConjugatePair(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("ConjugatePair: alpha must lie in [1/2, 1]");
    beta_ = alpha == 0.5 ? std::numeric_limits<double>::infinity() : alpha / (2.0 * alpha - 1.0);
}

double differential_entropy(const GridDensity& density, RenyiOrder order) {
    EntropyAccumulator acc(order);
    const double dx = density.grid().dx;
    for (double v : density.values()) acc.add(v, dx);
    return acc.result();
}

double differential_entropy(const GaussianMarginal& density, RenyiOrder order) {
    if (!(density.variance > 0.0)) throw std::invalid_argument("differential_entropy: variance must be positive");
    const double base = 0.5 * std::log(2.0 * std::numbers::pi * density.variance);
    if (order.is_shannon()) return base + 0.5;
    if (order.is_min_entropy()) return base;
    const double a = order.alpha();
    return base + std::log(a) / (2.0 * (a - 1.0));
}

double differential_entropy(const PdfFunction& density, RenyiOrder order) {
    density.validate();
    const double panel = 0.5 * density.scale;
    if (order.is_min_entropy()) {
        // Nodes straddle the peak; polish the best one with Brent.
        double best_u = density.lo, best_p = -1.0;
        detail::for_each_node(density.lo, density.hi, panel, [&](double u, double) {
            const double p = density.pdf(u);
            if (p > best_p) {
                best_p = p;
                best_u = u;
            }
        });
        const double a = std::max(density.lo, best_u - panel), b = std::min(density.hi, best_u + panel);
        const auto [u, neg] = boost::math::tools::brent_find_minima([&](double x) { return -density.pdf(x); }, a, b,
                                                                    std::numeric_limits<double>::digits / 2);
        const double peak = std::max(best_p, -neg);
        if (!(peak > 0.0)) throw std::domain_error("differential_entropy: density vanishes");
        return -std::log(peak);
    }
    EntropyAccumulator acc(order);
    detail::for_each_node(density.lo, density.hi, panel, [&](double u, double w) { acc.add(density.pdf(u), w); });
    return acc.result();
}

double differential_entropy(const QDensity& density, RenyiOrder order) {
    const auto& dist = density.dist();
    const auto& hf = density.hf();
    const double w = hf.width();
    double panel = w;
    if (hf.kind() == HistogramFunction::Kind::GaussianOptimal) panel = std::min(w, 0.5 * std::sqrt(hf.inner_variance()));
    EntropyAccumulator acc(order);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (!(dist.probs()[i] > kTiny)) continue;
        const double c = dist.outcome(i);
        if (order.is_min_entropy()) {
            acc.add(density(c), 1.0);
            continue;
        }
        // Integrate strictly inside the bin; the edge itself belongs to one side only.
        detail::for_each_node(c - 0.5 * w, c + 0.5 * w, panel, [&](double u, double wt) { acc.add(density(u), wt); });
    }
    return acc.result();
}

double discrete_entropy(const DiscreteDistribution& dist, RenyiOrder order) {
    const auto p = dist.renormalized();
    EntropyAccumulator acc(order);
    for (double q : p) acc.add(q, 1.0);
    return std::max(0.0, acc.result());
}

Decomposition decompose_Q_entropy(const DiscreteDistribution& dist, const HistogramFunction& hf, RenyiOrder order) {
    if (dist.kind() != LabelKind::Standard) throw std::invalid_argument("decompose_Q_entropy: needs standard CG");
    const auto normalized =
        DiscreteDistribution::standard(dist.renormalized(), dist.bin_width(), dist.u_cen(), dist.k_min());
    const QDensity q(normalized, hf);
    return {differential_entropy(q, order), discrete_entropy(normalized, order) + hf_moments(hf, order.alpha()).entropy};
}

double jensen_gap(const GridDensity& density, const StandardCG& cg) {
    const auto dist = bin_probabilities(density, cg);
    return discrete_entropy(dist, RenyiOrder::shannon()) + std::log(cg.delta()) -
           differential_entropy(density, RenyiOrder::shannon());
}

double jensen_gap(const GaussianMarginal& density, const StandardCG& cg) {
    const auto dist = bin_probabilities(density, cg);
    return discrete_entropy(dist, RenyiOrder::shannon()) + std::log(cg.delta()) -
           differential_entropy(density, RenyiOrder::shannon());
}

double jensen_gap(const PdfFunction& density, const StandardCG& cg) {
    const auto dist = bin_probabilities(density, cg);
    return discrete_entropy(dist, RenyiOrder::shannon()) + std::log(cg.delta()) -
           differential_entropy(density, RenyiOrder::shannon());
}

double renyi_gap_diagnostic(const GridDensity& density, const StandardCG& cg, RenyiOrder order) {
    const auto dist = bin_probabilities(density, cg);
    return discrete_entropy(dist, order) + std::log(cg.delta()) - differential_entropy(density, order);
}

namespace {

URReport variance_entropy_report(double variance, double h) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("entropy_variance_bound: variance must be finite and positive");
    return make_report("entropy_variance", std::log(2.0 * std::numbers::pi * std::numbers::e * variance), 2.0 * h);
}

} // namespace

URReport entropy_variance_bound(const GridDensity& density) {
    return variance_entropy_report(density.variance(), differential_entropy(density, RenyiOrder::shannon()));
}

URReport entropy_variance_bound(const GaussianMarginal& density) {
    return variance_entropy_report(density.variance, differential_entropy(density, RenyiOrder::shannon()));
}

URReport entropy_variance_bound(const PdfFunction& density) {
    return variance_entropy_report(moments(density).variance, differential_entropy(density, RenyiOrder::shannon()));
}

Moments moments(const PdfFunction& density) {
    density.validate();
    double m0 = 0.0, m1 = 0.0;
    detail::for_each_node(density.lo, density.hi, 0.5 * density.scale, [&](double u, double w) {
        const double p = density.pdf(u) * w;
        m0 += p;
        m1 += p * u;
    });
    const double mean = m1 / m0;
    double m2 = 0.0;
    detail::for_each_node(density.lo, density.hi, 0.5 * density.scale, [&](double u, double w) {
        const double y = u - mean;
        m2 += density.pdf(u) * w * y * y;
    });
    return {mean, m2 / m0};
}

} // namespace cgur
