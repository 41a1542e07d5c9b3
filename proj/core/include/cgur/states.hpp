#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cgur/report.hpp"

namespace cgur {

using cplx = std::complex<double>;

// Number of modes together with the effective Planck constant.
class ModeSystem {
public:
    ModeSystem(int n_modes, double hbar = 1.0);

    int n_modes() const noexcept { return n_modes_; }
    int dim() const noexcept { return 2 * n_modes_; }
    double hbar() const noexcept { return hbar_; }

private:
    int n_modes_;
    double hbar_;
};

// Uniform grid with N cells; sample j sits at the cell centre x0 + (j + 1/2) dx,
// so x0 is the left edge of the window.
struct GridSpec {
    std::size_t n = 0;
    double x0 = 0.0;
    double dx = 0.0;

    double at(std::size_t j) const noexcept { return x0 + (static_cast<double>(j) + 0.5) * dx; }
    double centre() const noexcept { return x0 + 0.5 * static_cast<double>(n) * dx; }
    double right() const noexcept { return x0 + static_cast<double>(n) * dx; }

    void validate() const;

    // Grid of n cells centred on c.
    static GridSpec centred(std::size_t n, double dx, double c = 0.0);
    // Grid whose position and momentum windows have equal extent: dx = sqrt(2 pi hbar / n).
    static GridSpec balanced(std::size_t n, double hbar, double c = 0.0);
};

class GridWavefunction {
public:
    // Throws unless the samples are normalized to 1e-9.
    GridWavefunction(std::vector<cplx> samples, GridSpec grid, double hbar = 1.0);
    // Rescales arbitrary nonzero samples to unit norm.
    static GridWavefunction normalized(std::vector<cplx> samples, GridSpec grid, double hbar = 1.0);

    std::span<const cplx> samples() const noexcept { return samples_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double hbar() const noexcept { return hbar_; }
    double norm_squared() const noexcept;

private:
    std::vector<cplx> samples_;
    GridSpec grid_;
    double hbar_;
};

// Piecewise-constant density on cells. Total mass may fall short of one only
// when built through sub_normalized (truncated windows).
class GridDensity {
public:
    GridDensity(std::vector<double> values, GridSpec grid, double hbar = 1.0);
    static GridDensity sub_normalized(std::vector<double> values, GridSpec grid, double hbar = 1.0);
    static GridDensity from(const GridWavefunction& psi);
    // Convex combination of densities on a common grid.
    static GridDensity mixture(std::span<const double> weights, std::span<const GridDensity> parts);

    std::span<const double> values() const noexcept { return values_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept;
    double mean() const noexcept;
    double variance() const noexcept;

private:
    GridDensity(std::vector<double> values, GridSpec grid, double hbar, bool require_unit_mass);
    std::vector<double> values_;
    GridSpec grid_;
    double hbar_;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

struct GaussianMarginal {
    double mean = 0.0;
    double variance = 1.0;

    double sigma() const { return std::sqrt(variance); }
    double pdf(double u) const;
    // Probability of (a, b], evaluated without cancellation in the tails.
    double interval_mass(double a, double b) const;
};

// Real 2n-vector d defining the quadrature d^T x with x = (q_1..q_n, p_1..p_n).
class QuadratureCoeffs {
public:
    explicit QuadratureCoeffs(Eigen::VectorXd d);
    QuadratureCoeffs(std::initializer_list<double> d);

    const Eigen::VectorXd& d() const noexcept { return d_; }
    Eigen::Index dim() const noexcept { return d_.size(); }
    int n_modes() const noexcept { return static_cast<int>(d_.size() / 2); }

    static QuadratureCoeffs position(int mode, int n_modes);
    static QuadratureCoeffs momentum(int mode, int n_modes);
    // cos(theta) q + sin(theta) p on one mode.
    static QuadratureCoeffs rotated(double theta, int mode, int n_modes);

    QuadratureCoeffs operator+(const QuadratureCoeffs& o) const;
    QuadratureCoeffs operator-(const QuadratureCoeffs& o) const;
    QuadratureCoeffs scaled(double c) const;

private:
    Eigen::VectorXd d_;
};

Eigen::MatrixXd symplectic_form(int n_modes);
double commutator_gamma(const QuadratureCoeffs& du, const QuadratureCoeffs& dv);

// A pair of quadratures. CCO status (eigenbases related by a Fourier or
// fractional Fourier transform) is declared, never inferred from gamma.
class QuadraturePair {
public:
    static QuadraturePair general(QuadratureCoeffs du, QuadratureCoeffs dv);
    static QuadraturePair declared_cco(QuadratureCoeffs du, QuadratureCoeffs dv);
    // (q_mode, p_mode), CCO.
    static QuadraturePair canonical(int mode = 0, int n_modes = 1);
    // Rotated quadrature and its conjugate at theta + pi/2, CCO.
    static QuadraturePair rotated(double theta, int mode = 0, int n_modes = 1);

    const QuadratureCoeffs& du() const noexcept { return du_; }
    const QuadratureCoeffs& dv() const noexcept { return dv_; }
    double gamma() const noexcept { return gamma_; }
    bool is_cco() const noexcept { return cco_; }

private:
    QuadraturePair(QuadratureCoeffs du, QuadratureCoeffs dv, bool cco);
    QuadratureCoeffs du_, dv_;
    double gamma_;
    bool cco_;
};

class GaussianState {
public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov, ModeSystem system);

    static GaussianState vacuum(int n_modes = 1, double hbar = 1.0);
    static GaussianState thermal(double nbar, double hbar = 1.0);
    // Single-mode squeezed state, squeezing along the direction at angle theta
    // in phase space, displaced to (q, p).
    static GaussianState squeezed(double r, double theta = 0.0, double hbar = 1.0, double q = 0.0,
                                  double p = 0.0);

    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    const Eigen::MatrixXd& cov() const noexcept { return cov_; }
    const ModeSystem& system() const noexcept { return system_; }
    double hbar() const noexcept { return system_.hbar(); }
    int n_modes() const noexcept { return system_.n_modes(); }
    bool bona_fide() const noexcept { return bona_fide_; }

    // State after the linear phase-space map x -> S x.
    GaussianState transformed(const Eigen::MatrixXd& s) const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    ModeSystem system_;
    bool bona_fide_;
};

GaussianMarginal gaussian_marginal(const GaussianState& state, const QuadratureCoeffs& d);

// Momentum representation via the centred unitary DFT; dp = 2 pi hbar / (N dx).
GridWavefunction conjugate_wavefunction(const GridWavefunction& psi);
// Inverse transform back to a position grid centred on x_centre.
GridWavefunction inverse_conjugate_wavefunction(const GridWavefunction& phi, double x_centre = 0.0);
// exp(-i angle n): the representation in the basis of cos(a) q + sin(a) p.
GridWavefunction frft(const GridWavefunction& psi, double angle);

URReport bona_fide_check(const GaussianState& state);
URReport det_cov_check(const GaussianState& state, int mode);

// Normalized Hermite function psi_n(x) with width sqrt(hbar).
double hermite_function(int n, double x, double hbar = 1.0);

// Finite superposition of Fock states sum_n c_n |n>.
class FockSuperposition {
public:
    FockSuperposition(std::vector<cplx> coefficients, double hbar = 1.0);

    std::span<const cplx> coefficients() const noexcept { return coeffs_; }
    double hbar() const noexcept { return hbar_; }
    int max_n() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    // Amplitude in the basis of cos(theta) q + sin(theta) p.
    cplx amplitude(double u, double theta = 0.0) const;
    double density(double u, double theta = 0.0) const { return std::norm(amplitude(u, theta)); }
    // Half-width outside which the density is below 1e-16 or so.
    double support_half_width() const;
    GridWavefunction to_grid(const GridSpec& grid, double theta = 0.0) const;
    // First and second moments of the rotated quadrature, exact via ladder algebra.
    Moments moments(double theta = 0.0) const;

private:
    std::vector<cplx> coeffs_;
    double hbar_;
};

} // namespace cgur
