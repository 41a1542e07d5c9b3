#pragma once

#include "cgur/coarse_grain.hpp"
#include "cgur/report.hpp"
#include "cgur/states.hpp"

namespace cgur {

// Renyi order alpha > 0; alpha == 1 selects the Shannon branch, +infinity the min-entropy.
class RenyiOrder {
public:
    explicit RenyiOrder(double alpha);
    static RenyiOrder shannon() { return RenyiOrder(1.0); }

    double alpha() const noexcept { return alpha_; }
    bool is_shannon() const noexcept { return alpha_ == 1.0; }
    bool is_min_entropy() const noexcept { return std::isinf(alpha_); }

private:
    double alpha_;
};

// Conjugate orders with 1/alpha + 1/beta = 2 and 1/2 <= alpha <= 1 (beta = inf at alpha = 1/2).
class ConjugatePair {
public:
    explicit ConjugatePair(double alpha);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    RenyiOrder order_u() const { return RenyiOrder(alpha_); }
    RenyiOrder order_v() const { return RenyiOrder(beta_); }
    bool is_shannon() const noexcept { return alpha_ == 1.0; }

private:
    double alpha_;
    double beta_;
};

double differential_entropy(const GridDensity& density, RenyiOrder order);
double differential_entropy(const GaussianMarginal& density, RenyiOrder order);
double differential_entropy(const PdfFunction& density, RenyiOrder order);
// Integrates Q directly over each bin, independent of the decomposition.
double differential_entropy(const QDensity& density, RenyiOrder order);

double discrete_entropy(const DiscreteDistribution& dist, RenyiOrder order);

struct Decomposition {
    double lhs;  // h_alpha[Q]
    double rhs;  // H_alpha[P] + h_alpha[D]
};

Decomposition decompose_Q_entropy(const DiscreteDistribution& dist, const HistogramFunction& hf, RenyiOrder order);

// h[Q] - h[P] for rectangular histogram functions, Shannon order only.
double jensen_gap(const GridDensity& density, const StandardCG& cg);
double jensen_gap(const GaussianMarginal& density, const StandardCG& cg);
double jensen_gap(const PdfFunction& density, const StandardCG& cg);

// The same difference at another order. Exploratory: no sign is claimed.
double renyi_gap_diagnostic(const GridDensity& density, const StandardCG& cg, RenyiOrder order);

// ln(2 pi e sigma^2) >= 2 h[P].
URReport entropy_variance_bound(const GridDensity& density);
URReport entropy_variance_bound(const GaussianMarginal& density);
URReport entropy_variance_bound(const PdfFunction& density);

Moments moments(const PdfFunction& density);

} // namespace cgur
