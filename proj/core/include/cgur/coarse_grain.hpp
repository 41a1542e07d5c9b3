#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgur/states.hpp"

namespace cgur {

// A density given pointwise. Mass outside [lo, hi] is treated as zero; `scale`
// is the shortest length over which the density changes appreciably and sets
// the quadrature panel width.
struct PdfFunction {
    std::function<double(double)> pdf;
    double lo = 0.0;
    double hi = 0.0;
    double scale = 1.0;

    void validate() const;
    static PdfFunction of(const FockSuperposition& state, double theta = 0.0);
    static PdfFunction of(const GaussianMarginal& g);
};

// Contiguous bins (u_cen + (k - 1/2) delta, u_cen + (k + 1/2) delta].
class StandardCG {
public:
    explicit StandardCG(double delta, double u_cen = 0.0);
    StandardCG(double delta, double u_cen, long k_min, long k_max);

    double delta() const noexcept { return delta_; }
    double u_cen() const noexcept { return u_cen_; }
    const std::optional<std::pair<long, long>>& k_range() const noexcept { return range_; }

    double outcome(long k) const noexcept { return u_cen_ + static_cast<double>(k) * delta_; }
    double lower_edge(long k) const noexcept { return u_cen_ + (static_cast<double>(k) - 0.5) * delta_; }
    double upper_edge(long k) const noexcept { return u_cen_ + (static_cast<double>(k) + 0.5) * delta_; }
    // Bin containing u, ties going to the lower bin.
    long bin_of(double u) const noexcept;
    // Range of bins meeting [lo, hi] unless an explicit range was given.
    std::pair<long, long> range_for(double lo, double hi) const;

private:
    double delta_;
    double u_cen_;
    std::optional<std::pair<long, long>> range_;
};

// Bins of width s repeated with period T = d s; outcome k collects
// [u_cen + k s + n T, u_cen + (k+1) s + n T) over all integers n.
class PeriodicCG {
public:
    PeriodicCG(double s, int d, double u_cen = 0.0);
    // Throws unless T is an integer multiple d >= 2 of s.
    static PeriodicCG from_period(double s, double period, double u_cen = 0.0);

    double s() const noexcept { return s_; }
    double period() const noexcept { return s_ * d_; }
    int d() const noexcept { return d_; }
    double u_cen() const noexcept { return u_cen_; }
    int outcome_of(double u) const noexcept;

private:
    double s_;
    int d_;
    double u_cen_;
};

enum class LabelKind { Standard, Periodic };

class DiscreteDistribution {
public:
    // Standard labels u_cen + k delta for k = k_min, k_min + 1, ...
    static DiscreteDistribution standard(std::vector<double> probs, double delta, double u_cen, long k_min);
    static DiscreteDistribution periodic(std::vector<double> probs, double s);

    std::span<const double> probs() const noexcept { return probs_; }
    std::vector<double> renormalized() const;
    std::size_t size() const noexcept { return probs_.size(); }
    LabelKind kind() const noexcept { return kind_; }
    double bin_width() const noexcept { return width_; }
    double u_cen() const noexcept { return u_cen_; }
    long k_min() const noexcept { return k_min_; }
    double outcome(std::size_t i) const;
    double coverage() const noexcept { return coverage_; }
    bool faithful() const noexcept { return coverage_ >= 0.999999; }

    std::string to_csv() const;

private:
    DiscreteDistribution(std::vector<double> probs, LabelKind kind, double width, double u_cen, long k_min);
    std::vector<double> probs_;
    LabelKind kind_;
    double width_;
    double u_cen_;
    long k_min_;
    double coverage_;
};

class HistogramFunction {
public:
    enum class Kind { Rectangular, GaussianOptimal };

    static HistogramFunction rectangular(double width);
    // Gaussian of the given variance truncated to the central bin.
    static HistogramFunction gaussian_optimal(double width, double inner_variance);

    Kind kind() const noexcept { return kind_; }
    double width() const noexcept { return width_; }
    double inner_variance() const noexcept { return inner_variance_; }
    // Density at offset y from the bin centre; zero outside (-w/2, w/2].
    double shape(double y) const noexcept;
    // Integral of the shape over [a, b].
    double mass(double a, double b) const noexcept;

private:
    HistogramFunction(Kind kind, double width, double inner_variance);
    Kind kind_;
    double width_;
    double inner_variance_;
    double norm_;
};

struct HfMoments {
    double entropy;
    double variance;
};

HfMoments hf_moments(const HistogramFunction& hf, double alpha);

DiscreteDistribution bin_probabilities(const GridDensity& density, const StandardCG& cg);
DiscreteDistribution bin_probabilities(const GaussianMarginal& density, const StandardCG& cg);
DiscreteDistribution bin_probabilities(const PdfFunction& density, const StandardCG& cg);

DiscreteDistribution pcg_probabilities(const GridDensity& density, const PeriodicCG& pcg);
DiscreteDistribution pcg_probabilities(const GaussianMarginal& density, const PeriodicCG& pcg);
DiscreteDistribution pcg_probabilities(const PdfFunction& density, const PeriodicCG& pcg);

// Q(u) = sum_k p_k D(u - u_k), evaluated pointwise.
class QDensity {
public:
    QDensity(const DiscreteDistribution& dist, const HistogramFunction& hf);

    double operator()(double u) const;
    const DiscreteDistribution& dist() const noexcept { return dist_; }
    const HistogramFunction& hf() const noexcept { return hf_; }

private:
    DiscreteDistribution dist_;
    HistogramFunction hf_;
};

// Q on a grid aligned with the bins, cell averages exact; mass equals coverage.
GridDensity render_Q(const DiscreteDistribution& dist, const HistogramFunction& hf, int points_per_bin = 64);

double discrete_mean(const DiscreteDistribution& dist);
double discrete_variance(const DiscreteDistribution& dist);

} // namespace cgur
