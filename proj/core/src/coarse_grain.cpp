#include "cgur/coarse_grain.hpp"
#include "detail/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cgur {

namespace {

constexpr double kGaussianReach = 40.0;   // sigmas; the tail beyond underflows
constexpr double kPeriodicResidual = 1e-12;

long floor_index(double t) { return static_cast<long>(std::floor(t)); }

int mod_outcome(long idx, int d) {
    const long r = idx % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

} // namespace

void PdfFunction::validate() const {
    if (!pdf) throw std::invalid_argument("PdfFunction: missing density");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("PdfFunction: bad support");
    if (!(scale > 0.0)) throw std::invalid_argument("PdfFunction: scale must be positive");
}

PdfFunction PdfFunction::of(const FockSuperposition& state, double theta) {
    const double w = state.support_half_width();
    // Oscillations of psi_n have local wavelength ~ 2 pi sqrt(hbar / (2n+1)).
    const double scale = std::sqrt(state.hbar() / (2.0 * state.max_n() + 1.0));
    return {[state, theta](double u) { return state.density(u, theta); }, -w, w, scale};
}

PdfFunction PdfFunction::of(const GaussianMarginal& g) {
    const double s = g.sigma();
    return {[g](double u) { return g.pdf(u); }, g.mean - kGaussianReach * s, g.mean + kGaussianReach * s, s};
}

StandardCG::StandardCG(double delta, double u_cen) : delta_(delta), u_cen_(u_cen) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("StandardCG: delta must be positive");
    if (!std::isfinite(u_cen)) throw std::invalid_argument("StandardCG: u_cen must be finite");
}

StandardCG::StandardCG(double delta, double u_cen, long k_min, long k_max) : StandardCG(delta, u_cen) {
    if (k_max < k_min) throw std::invalid_argument("StandardCG: empty k range");
    range_ = std::pair{k_min, k_max};
}

long StandardCG::bin_of(double u) const noexcept {
    return static_cast<long>(std::ceil((u - u_cen_) / delta_ - 0.5));
}

std::pair<long, long> StandardCG::range_for(double lo, double hi) const {
    if (range_) return *range_;
    const long a = bin_of(lo), b = bin_of(hi);
    if (b - a > 50'000'000L) throw std::invalid_argument("StandardCG: too many bins for the density support");
    return {a, b};
}

PeriodicCG::PeriodicCG(double s, int d, double u_cen) : s_(s), d_(d), u_cen_(u_cen) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("PeriodicCG: s must be positive");
    if (d < 2) throw std::invalid_argument("PeriodicCG: d must be >= 2");
    if (!std::isfinite(u_cen)) throw std::invalid_argument("PeriodicCG: u_cen must be finite");
}

PeriodicCG PeriodicCG::from_period(double s, double period, double u_cen) {
    if (!(s > 0.0) || !(period > 0.0)) throw std::invalid_argument("PeriodicCG: s and T must be positive");
    const double ratio = period / s;
    const double d = std::round(ratio);
    if (std::abs(ratio - d) > 1e-12 * ratio || d < 2.0)
        throw std::invalid_argument("PeriodicCG: T must equal d * s for an integer d >= 2");
    return PeriodicCG(s, static_cast<int>(d), u_cen);
}

int PeriodicCG::outcome_of(double u) const noexcept { return mod_outcome(floor_index((u - u_cen_) / s_), d_); }

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs, LabelKind kind, double width, double u_cen,
                                           long k_min)
    : probs_(std::move(probs)), kind_(kind), width_(width), u_cen_(u_cen), k_min_(k_min) {
    if (probs_.empty()) throw std::invalid_argument("DiscreteDistribution: no outcomes");
    if (!(width > 0.0)) throw std::invalid_argument("DiscreteDistribution: bin width must be positive");
    for (double p : probs_)
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("DiscreteDistribution: invalid probability");
    coverage_ = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (coverage_ > 1.0 + 1e-12) throw std::invalid_argument("DiscreteDistribution: probabilities exceed 1");
}

DiscreteDistribution DiscreteDistribution::standard(std::vector<double> probs, double delta, double u_cen, long k_min) {
    return DiscreteDistribution(std::move(probs), LabelKind::Standard, delta, u_cen, k_min);
}

DiscreteDistribution DiscreteDistribution::periodic(std::vector<double> probs, double s) {
    if (probs.size() < 2) throw std::invalid_argument("DiscreteDistribution: periodic needs d >= 2");
    return DiscreteDistribution(std::move(probs), LabelKind::Periodic, s, 0.0, 0);
}

std::vector<double> DiscreteDistribution::renormalized() const {
    if (!(coverage_ > 0.0)) throw std::domain_error("DiscreteDistribution: zero coverage");
    std::vector<double> out(probs_);
    for (double& p : out) p /= coverage_;
    return out;
}

double DiscreteDistribution::outcome(std::size_t i) const {
    if (i >= probs_.size()) throw std::out_of_range("DiscreteDistribution: outcome index");
    if (kind_ == LabelKind::Periodic) return static_cast<double>(i);
    return u_cen_ + static_cast<double>(k_min_ + static_cast<long>(i)) * width_;
}

std::string DiscreteDistribution::to_csv() const {
    std::string out = "outcome,probability\n";
    char buf[64];
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (kind_ == LabelKind::Periodic)
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, probs_[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", outcome(i), probs_[i]);
        out += buf;
    }
    return out;
}

HistogramFunction::HistogramFunction(Kind kind, double width, double inner_variance)
    : kind_(kind), width_(width), inner_variance_(inner_variance), norm_(1.0 / width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("HistogramFunction: width must be positive");
    if (kind == Kind::GaussianOptimal) {
        if (!(inner_variance > 0.0) || !std::isfinite(inner_variance))
            throw std::invalid_argument("HistogramFunction: inner variance must be positive");
        const double s = std::sqrt(inner_variance);
        norm_ = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s * std::erf(width / (2.0 * std::numbers::sqrt2 * s)));
    }
}

HistogramFunction HistogramFunction::rectangular(double width) { return HistogramFunction(Kind::Rectangular, width, 0.0); }

HistogramFunction HistogramFunction::gaussian_optimal(double width, double inner_variance) {
    return HistogramFunction(Kind::GaussianOptimal, width, inner_variance);
}

double HistogramFunction::shape(double y) const noexcept {
    if (!(y > -0.5 * width_ && y <= 0.5 * width_)) return 0.0;
    if (kind_ == Kind::Rectangular) return norm_;
    return norm_ * std::exp(-0.5 * y * y / inner_variance_);
}

double HistogramFunction::mass(double a, double b) const noexcept {
    a = std::max(a, -0.5 * width_);
    b = std::min(b, 0.5 * width_);
    if (!(b > a)) return 0.0;
    if (kind_ == Kind::Rectangular) return (b - a) / width_;
    const double r = std::numbers::sqrt2 * std::sqrt(inner_variance_);
    return 0.5 * (std::erf(b / r) - std::erf(a / r)) / std::erf(0.5 * width_ / r);
}

HfMoments hf_moments(const HistogramFunction& hf, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("hf_moments: alpha must be positive");
    const double w = hf.width();
    if (hf.kind() == HistogramFunction::Kind::Rectangular) return {std::log(w), w * w / 12.0};

    const double s = std::sqrt(hf.inner_variance());
    const double a = 0.5 * w / s;
    const double c = std::erf(a / std::numbers::sqrt2);
    const double log_z = std::log(std::sqrt(2.0 * std::numbers::pi) * s * c);
    const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    const double variance = hf.inner_variance() * (1.0 - 2.0 * a * phi / c);
    double entropy;
    if (std::isinf(alpha)) {
        entropy = log_z;
    } else if (alpha == 1.0) {
        entropy = log_z + 0.5 * variance / hf.inner_variance();
    } else {
        // int D^alpha = Z^-alpha sqrt(2 pi) (s / sqrt(alpha)) erf(sqrt(alpha) a / sqrt 2)
        const double log_int = -alpha * log_z + std::log(std::sqrt(2.0 * std::numbers::pi) * s / std::sqrt(alpha) *
                                                         std::erf(std::sqrt(alpha) * a / std::numbers::sqrt2));
        entropy = log_int / (1.0 - alpha);
    }
    return {entropy, variance};
}

DiscreteDistribution bin_probabilities(const GridDensity& density, const StandardCG& cg) {
    const GridSpec& g = density.grid();
    const auto v = density.values();
    const auto [k0, k1] = cg.range_for(g.x0, g.right());
    std::vector<double> probs(static_cast<std::size_t>(k1 - k0 + 1), 0.0);
    for (long k = k0; k <= k1; ++k) {
        const double a = std::max(cg.lower_edge(k), g.x0);
        const double b = std::min(cg.upper_edge(k), g.right());
        if (!(b > a)) continue;
        const long j0 = std::max(0L, floor_index((a - g.x0) / g.dx));
        const long j1 = std::min(static_cast<long>(g.n) - 1, floor_index((b - g.x0) / g.dx));
        double acc = 0.0;
        for (long j = j0; j <= j1; ++j) {
            const double cl = g.x0 + static_cast<double>(j) * g.dx;
            const double overlap = std::min(b, cl + g.dx) - std::max(a, cl);
            if (overlap > 0.0) acc += v[static_cast<std::size_t>(j)] * overlap;
        }
        probs[static_cast<std::size_t>(k - k0)] = acc;
    }
    return DiscreteDistribution::standard(std::move(probs), cg.delta(), cg.u_cen(), k0);
}

DiscreteDistribution bin_probabilities(const GaussianMarginal& density, const StandardCG& cg) {
    if (!(density.variance > 0.0)) throw std::invalid_argument("bin_probabilities: variance must be positive");
    const double reach = kGaussianReach * density.sigma();
    const auto [k0, k1] = cg.range_for(density.mean - reach, density.mean + reach);
    std::vector<double> probs(static_cast<std::size_t>(k1 - k0 + 1));
    for (long k = k0; k <= k1; ++k)
        probs[static_cast<std::size_t>(k - k0)] = density.interval_mass(cg.lower_edge(k), cg.upper_edge(k));
    return DiscreteDistribution::standard(std::move(probs), cg.delta(), cg.u_cen(), k0);
}

DiscreteDistribution bin_probabilities(const PdfFunction& density, const StandardCG& cg) {
    density.validate();
    const auto [k0, k1] = cg.range_for(density.lo, density.hi);
    std::vector<double> probs(static_cast<std::size_t>(k1 - k0 + 1));
    for (long k = k0; k <= k1; ++k) {
        const double a = std::max(cg.lower_edge(k), density.lo);
        const double b = std::min(cg.upper_edge(k), density.hi);
        probs[static_cast<std::size_t>(k - k0)] =
            std::max(0.0, detail::integrate(density.pdf, a, b, 0.5 * density.scale));
    }
    // Quadrature can overshoot unity by rounding.
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (total > 1.0)
        for (double& p : probs) p /= total;
    return DiscreteDistribution::standard(std::move(probs), cg.delta(), cg.u_cen(), k0);
}

DiscreteDistribution pcg_probabilities(const GridDensity& density, const PeriodicCG& pcg) {
    const GridSpec& g = density.grid();
    const auto v = density.values();
    std::vector<double> probs(static_cast<std::size_t>(pcg.d()), 0.0);
    const double s = pcg.s();
    for (std::size_t j = 0; j < g.n; ++j) {
        double cur = g.x0 + static_cast<double>(j) * g.dx;
        const double end = cur + g.dx;
        long idx = floor_index((cur - pcg.u_cen()) / s);
        while (cur < end) {
            const double edge = std::min(end, pcg.u_cen() + static_cast<double>(idx + 1) * s);
            if (edge > cur) probs[static_cast<std::size_t>(mod_outcome(idx, pcg.d()))] += v[j] * (edge - cur);
            cur = std::max(cur, edge);
            ++idx;
        }
    }
    return DiscreteDistribution::periodic(std::move(probs), s);
}

DiscreteDistribution pcg_probabilities(const GaussianMarginal& density, const PeriodicCG& pcg) {
    if (!(density.variance > 0.0)) throw std::invalid_argument("pcg_probabilities: variance must be positive");
    std::vector<double> probs(static_cast<std::size_t>(pcg.d()), 0.0);
    const double T = pcg.period();
    const long n_c = floor_index((density.mean - pcg.u_cen()) / T);
    auto add_period = [&](long n) {
        const double base = pcg.u_cen() + static_cast<double>(n) * T;
        for (int k = 0; k < pcg.d(); ++k)
            probs[static_cast<std::size_t>(k)] +=
                density.interval_mass(base + k * pcg.s(), base + (k + 1) * pcg.s());
    };
    add_period(n_c);
    // Extend outward until the untouched tails hold less than the residual.
    for (long step = 1;; ++step) {
        const double left_edge = pcg.u_cen() + static_cast<double>(n_c - step + 1) * T;
        const double right_edge = pcg.u_cen() + static_cast<double>(n_c + step) * T;
        const double tail = density.interval_mass(-std::numeric_limits<double>::infinity(), left_edge) +
                            density.interval_mass(right_edge, std::numeric_limits<double>::infinity());
        if (tail < kPeriodicResidual) break;
        add_period(n_c - step);
        add_period(n_c + step);
        if (step > 100'000'000L) throw std::runtime_error("pcg_probabilities: periodic sum did not converge");
    }
    return DiscreteDistribution::periodic(std::move(probs), pcg.s());
}

DiscreteDistribution pcg_probabilities(const PdfFunction& density, const PeriodicCG& pcg) {
    density.validate();
    std::vector<double> probs(static_cast<std::size_t>(pcg.d()), 0.0);
    const double s = pcg.s();
    const long i0 = floor_index((density.lo - pcg.u_cen()) / s);
    const long i1 = floor_index((density.hi - pcg.u_cen()) / s);
    for (long idx = i0; idx <= i1; ++idx) {
        const double a = std::max(density.lo, pcg.u_cen() + static_cast<double>(idx) * s);
        const double b = std::min(density.hi, pcg.u_cen() + static_cast<double>(idx + 1) * s);
        probs[static_cast<std::size_t>(mod_outcome(idx, pcg.d()))] +=
            std::max(0.0, detail::integrate(density.pdf, a, b, 0.5 * density.scale));
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (total > 1.0)
        for (double& p : probs) p /= total;
    return DiscreteDistribution::periodic(std::move(probs), s);
}

namespace {

void require_matching(const DiscreteDistribution& dist, const HistogramFunction& hf) {
    if (dist.kind() != LabelKind::Standard) throw std::invalid_argument("Q density needs a standard coarse graining");
    if (std::abs(hf.width() - dist.bin_width()) > 1e-12 * dist.bin_width())
        throw std::invalid_argument("histogram function width differs from the bin width");
}

} // namespace

QDensity::QDensity(const DiscreteDistribution& dist, const HistogramFunction& hf) : dist_(dist), hf_(hf) {
    require_matching(dist, hf);
}

double QDensity::operator()(double u) const {
    const StandardCG cg(dist_.bin_width(), dist_.u_cen());
    const long k = cg.bin_of(u);
    const long i = k - dist_.k_min();
    if (i < 0 || i >= static_cast<long>(dist_.size())) return 0.0;
    return dist_.probs()[static_cast<std::size_t>(i)] * hf_.shape(u - cg.outcome(k));
}

GridDensity render_Q(const DiscreteDistribution& dist, const HistogramFunction& hf, int points_per_bin) {
    require_matching(dist, hf);
    if (points_per_bin < 1) throw std::invalid_argument("render_Q: points_per_bin must be positive");
    const double w = dist.bin_width();
    const double dx = w / points_per_bin;
    const std::size_t ppb = static_cast<std::size_t>(points_per_bin);
    std::vector<double> values(dist.size() * ppb);
    std::vector<double> cell(ppb);
    for (std::size_t c = 0; c < ppb; ++c) {
        const double y0 = -0.5 * w + static_cast<double>(c) * dx;
        cell[c] = hf.mass(y0, y0 + dx) / dx;
    }
    for (std::size_t i = 0; i < dist.size(); ++i)
        for (std::size_t c = 0; c < ppb; ++c) values[i * ppb + c] = dist.probs()[i] * cell[c];
    const double x0 = dist.outcome(0) - 0.5 * w;
    std::size_t n = values.size();
    if (n < 2) {
        // A single cell cannot form a grid; split it.
        values = {values[0], values[0]};
        n = 2;
        return GridDensity::sub_normalized(std::move(values), GridSpec{n, x0, w / 2}, 1.0);
    }
    return GridDensity::sub_normalized(std::move(values), GridSpec{n, x0, dx}, 1.0);
}

double discrete_mean(const DiscreteDistribution& dist) {
    if (dist.kind() != LabelKind::Standard) throw std::invalid_argument("discrete_mean: periodic labels have no metric");
    const auto p = dist.renormalized();
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * dist.outcome(i);
    return m;
}

double discrete_variance(const DiscreteDistribution& dist) {
    if (dist.kind() != LabelKind::Standard)
        throw std::invalid_argument("discrete_variance: periodic labels have no metric");
    const auto p = dist.renormalized();
    // Centred two-pass sum; labels measured from u_cen to limit cancellation.
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * (dist.outcome(i) - dist.u_cen());
    double v = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double y = dist.outcome(i) - dist.u_cen() - m;
        v += p[i] * y * y;
    }
    return v;
}

} // namespace cgur
