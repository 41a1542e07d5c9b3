#pragma once

#include <optional>
#include <vector>

#include "cgur/report.hpp"
#include "cgur/states.hpp"
#include "cgur/ur_bounds.hpp"

namespace cgur {

// Two-mode Gaussian state in the ordering (q1, q2, p1, p2). Need not be bona fide
// (a partial transpose usually is not); check with bona_fide_check.
class TwoModeGaussian {
public:
    explicit TwoModeGaussian(GaussianState state);
    TwoModeGaussian(Eigen::Vector4d mean, Eigen::Matrix4d cov, double hbar = 1.0);

    const GaussianState& state() const noexcept { return state_; }
    double hbar() const noexcept { return state_.hbar(); }

    // Product of single-mode states given as 2x2 (q, p) covariances and means.
    static TwoModeGaussian product(const Eigen::Matrix2d& cov1, const Eigen::Matrix2d& cov2,
                                   const Eigen::Vector2d& mean1 = Eigen::Vector2d::Zero(),
                                   const Eigen::Vector2d& mean2 = Eigen::Vector2d::Zero(), double hbar = 1.0);

private:
    GaussianState state_;
};

// Global operators u_pm = u1 pm u2, v_pm = v1 pm v2 from local pairs on each mode.
// The measured pair is (u_s, v_{-s}); its bound uses gamma(u_s, v_s) = 2 gamma_local.
class GlobalOperatorPair {
public:
    GlobalOperatorPair(QuadratureCoeffs u1, QuadratureCoeffs v1, QuadratureCoeffs u2, QuadratureCoeffs v2, int sign);
    // (q1 + s q2, p1 - s p2).
    static GlobalOperatorPair position_momentum(int sign = -1);

    int sign() const noexcept { return sign_; }
    const QuadratureCoeffs& u_plus() const noexcept { return u_plus_; }
    const QuadratureCoeffs& u_minus() const noexcept { return u_minus_; }
    const QuadratureCoeffs& v_plus() const noexcept { return v_plus_; }
    const QuadratureCoeffs& v_minus() const noexcept { return v_minus_; }
    const QuadratureCoeffs& measured_u() const noexcept { return sign_ > 0 ? u_plus_ : u_minus_; }
    const QuadratureCoeffs& measured_v() const noexcept { return sign_ > 0 ? v_minus_ : v_plus_; }
    // gamma(u_s, v_s), the effective commutator entering the bound.
    double gamma_eff() const noexcept { return gamma_eff_; }
    // (u_s, v_s) as a CCO pair, for bound bookkeeping.
    QuadraturePair reference_pair() const;

private:
    QuadratureCoeffs u_plus_, u_minus_, v_plus_, v_minus_;
    int sign_;
    double gamma_eff_;
};

TwoModeGaussian ppt_transform(const TwoModeGaussian& state);
TwoModeGaussian two_mode_squeezed(double r, double hbar = 1.0);

struct BinWidths {
    double delta;        // bins for the measured u
    double small_delta;  // bins for the measured v
};

struct WitnessResult {
    URReport report;                  // the deciding criterion
    std::vector<URReport> companions;  // further forms evaluated for comparison
    bool entangled = false;
};

// Continuous product and linear forms without bins; coarse-grained rectangular form with bins.
WitnessResult witness_variance(const TwoModeGaussian& state, const GlobalOperatorPair& pair,
                               std::optional<BinWidths> cg = std::nullopt);
// Continuous variance bound applied to binned variances without the histogram corrections.
// Unsound; kept to demonstrate false positives.
WitnessResult naive_binned_variance_witness(const TwoModeGaussian& state, const GlobalOperatorPair& pair,
                                            BinWidths cg);
// Shannon coarse-grained entropic form; companions carry the variance forms.
WitnessResult witness_entropy(const TwoModeGaussian& state, const GlobalOperatorPair& pair, BinWidths cg);

// Two-mode wavefunction psi(q1, q2) on an N x N grid with equal spacing on both axes;
// element (i, j) stores psi(q1_i, q2_j).
class TwoModeGridWavefunction {
public:
    TwoModeGridWavefunction(std::vector<cplx> samples, GridSpec grid, double hbar = 1.0);
    template <typename F>
    static TwoModeGridWavefunction sample(F&& f, GridSpec grid, double hbar = 1.0) {
        std::vector<cplx> v(grid.n * grid.n);
        for (std::size_t i = 0; i < grid.n; ++i)
            for (std::size_t j = 0; j < grid.n; ++j) v[i * grid.n + j] = f(grid.at(i), grid.at(j));
        return normalized(std::move(v), grid, hbar);
    }
    static TwoModeGridWavefunction normalized(std::vector<cplx> samples, GridSpec grid, double hbar = 1.0);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    double hbar() const noexcept { return hbar_; }

    // Momentum representation phi(p1, p2) via the per-axis transform.
    TwoModeGridWavefunction conjugate() const;
    // Density of q1 + sign q2 by line integration along the orthogonal direction.
    GridDensity combination_density(int sign) const;

private:
    std::vector<cplx> samples_;
    GridSpec grid_;
    double hbar_;
};

// Entropic witness on (q1 + s q2, p1 - s p2) for a grid wavefunction.
WitnessResult witness_entropy(const TwoModeGridWavefunction& psi, int sign, BinWidths cg);

} // namespace cgur
