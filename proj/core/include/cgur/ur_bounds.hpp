#pragma once

#include <Eigen/Dense>

#include "cgur/coarse_grain.hpp"
#include "cgur/entropy.hpp"
#include "cgur/report.hpp"
#include "cgur/states.hpp"

namespace cgur {

// Bin widths for a quadrature pair; gamma_capital = delta * small_delta / (hbar |gamma|).
class CGPair {
public:
    CGPair(double delta, double small_delta, QuadraturePair pair, double hbar = 1.0);

    double delta() const noexcept { return delta_; }
    double small_delta() const noexcept { return small_delta_; }
    const QuadraturePair& pair() const noexcept { return pair_; }
    double hbar() const noexcept { return hbar_; }
    double gamma_capital() const noexcept { return delta_ * small_delta_ / (hbar_ * std::abs(pair_.gamma())); }

private:
    double delta_;
    double small_delta_;
    QuadraturePair pair_;
    double hbar_;
};

URReport heisenberg_ur(double var_u, double var_v, double gamma, double hbar = 1.0);
URReport linear_ur(double var_u, double var_v, double gamma, double hbar = 1.0);
URReport schrodinger_ur(const GaussianState& state, int mode);
URReport shannon_ur(double h_u, double h_v, double gamma, double hbar = 1.0);
// Refuses pairs not declared CCO.
URReport renyi_ur(double h_alpha_u, double h_beta_v, const ConjugatePair& orders, const QuadraturePair& pair,
                  double hbar = 1.0);

// Bound ln(pi / (eps_alpha(Gamma/4) Gamma)) of the discrete coarse-grained relation.
double cg_entropic_bound(double gamma_capital, const ConjugatePair& orders);
// Weaker bound ln(pi / (c_alpha Gamma)) with the Renyi conjugacy constant; may be negative.
double cg_entropic_bound_bialynicki(double gamma_capital, const ConjugatePair& orders);

struct CGEntropicResult {
    URReport discrete;    // H_alpha[P_Delta] + H_beta[P_delta] against the bound above
    URReport continuous;  // the same relation written for the Q densities
    URReport bialynicki;
};

CGEntropicResult cg_entropic_ur(const DiscreteDistribution& dist_u, const DiscreteDistribution& dist_v,
                                const CGPair& cgp, const ConjugatePair& orders, const HistogramFunction& hf_u,
                                const HistogramFunction& hf_v);
// Rectangular histogram functions.
CGEntropicResult cg_entropic_ur(const DiscreteDistribution& dist_u, const DiscreteDistribution& dist_v,
                                const CGPair& cgp, const ConjugatePair& orders);

double cg_variance_bound(const CGPair& cgp, const HistogramFunction& hf_u, const HistogramFunction& hf_v);
URReport cg_variance_ur(double var_u_disc, double var_v_disc, const CGPair& cgp, const HistogramFunction& hf_u,
                        const HistogramFunction& hf_v);
URReport cg_variance_ur(double var_u_disc, double var_v_disc, const CGPair& cgp);

// pi^2 / (Gamma^2 eps_1(Gamma/4)^2).
double cg_K_bound(double gamma_capital);
// Discrete variances must come from bins centred on the distribution mean.
URReport cg_K_ur(double var_u_disc, double var_v_disc, const CGPair& cgp);

struct MuBounds {
    double deutsch;
    double mu;
};

MuBounds discrete_mu_bounds(const Eigen::MatrixXcd& u, const ConjugatePair& orders);

} // namespace cgur
