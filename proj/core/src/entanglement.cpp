#include "cgur/entanglement.hpp"
#include "cgur/coarse_grain.hpp"
#include "cgur/entropy.hpp"
#include "detail/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace cgur {

TwoModeGaussian::TwoModeGaussian(GaussianState state) : state_(std::move(state)) {
    if (state_.n_modes() != 2) throw std::invalid_argument("TwoModeGaussian: state must have two modes");
}

TwoModeGaussian::TwoModeGaussian(Eigen::Vector4d mean, Eigen::Matrix4d cov, double hbar)
    : TwoModeGaussian(GaussianState(mean, cov, ModeSystem(2, hbar))) {}

TwoModeGaussian TwoModeGaussian::product(const Eigen::Matrix2d& cov1, const Eigen::Matrix2d& cov2,
                                         const Eigen::Vector2d& mean1, const Eigen::Vector2d& mean2, double hbar) {
    // Local (q, p) blocks scattered into (q1, q2, p1, p2).
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    const int idx1[2] = {0, 2}, idx2[2] = {1, 3};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            v(idx1[a], idx1[b]) = cov1(a, b);
            v(idx2[a], idx2[b]) = cov2(a, b);
        }
    Eigen::Vector4d m(mean1(0), mean2(0), mean1(1), mean2(1));
    return TwoModeGaussian(m, v, hbar);
}

GlobalOperatorPair::GlobalOperatorPair(QuadratureCoeffs u1, QuadratureCoeffs v1, QuadratureCoeffs u2,
                                       QuadratureCoeffs v2, int sign)
    : u_plus_(u1 + u2), u_minus_(u1 - u2), v_plus_(v1 + v2), v_minus_(v1 - v2), sign_(sign), gamma_eff_(0.0) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("GlobalOperatorPair: sign must be +1 or -1");
    if (u1.dim() != 4 || v1.dim() != 4 || u2.dim() != 4 || v2.dim() != 4)
        throw std::invalid_argument("GlobalOperatorPair: coefficients must act on two modes");
    const double g1 = commutator_gamma(u1, v1), g2 = commutator_gamma(u2, v2);
    const double tol = 1e-12 * std::max(1.0, std::abs(g1));
    if (g1 == 0.0 || std::abs(g1 - g2) > tol || std::abs(commutator_gamma(u1, v2)) > tol ||
        std::abs(commutator_gamma(u2, v1)) > tol)
        throw std::invalid_argument("GlobalOperatorPair: local pairs must share gamma and commute across modes");
    const double gp = commutator_gamma(u_plus_, v_plus_), gm = commutator_gamma(u_minus_, v_minus_);
    if (std::abs(gp - 2.0 * g1) > tol || std::abs(gm - 2.0 * g1) > tol ||
        std::abs(commutator_gamma(u_plus_, v_minus_)) > tol || std::abs(commutator_gamma(u_minus_, v_plus_)) > tol)
        throw std::invalid_argument("GlobalOperatorPair: gamma bookkeeping mismatch");
    gamma_eff_ = sign > 0 ? gp : gm;
}

GlobalOperatorPair GlobalOperatorPair::position_momentum(int sign) {
    return GlobalOperatorPair(QuadratureCoeffs::position(0, 2), QuadratureCoeffs::momentum(0, 2),
                              QuadratureCoeffs::position(1, 2), QuadratureCoeffs::momentum(1, 2), sign);
}

QuadraturePair GlobalOperatorPair::reference_pair() const {
    // (u_s, v_s) / sqrt 2 is a canonical pair of a beam-split mode when the local
    // pairs are canonical; the scale drops out of Gamma.
    return sign_ > 0 ? QuadraturePair::declared_cco(u_plus_, v_plus_) : QuadraturePair::declared_cco(u_minus_, v_minus_);
}

TwoModeGaussian ppt_transform(const TwoModeGaussian& state) {
    const Eigen::Vector4d lambda(1.0, 1.0, 1.0, -1.0);
    const auto& s = state.state();
    Eigen::Vector4d mean = lambda.asDiagonal() * s.mean();
    Eigen::Matrix4d cov = lambda.asDiagonal() * s.cov() * lambda.asDiagonal();
    return TwoModeGaussian(mean, cov, s.hbar());
}

TwoModeGaussian two_mode_squeezed(double r, double hbar) {
    if (!std::isfinite(r)) throw std::invalid_argument("two_mode_squeezed: r must be finite");
    const double c = 0.5 * hbar * std::cosh(2.0 * r), s = 0.5 * hbar * std::sinh(2.0 * r);
    Eigen::Matrix4d v;
    v << c, s, 0, 0,
         s, c, 0, 0,
         0, 0, c, -s,
         0, 0, -s, c;
    return TwoModeGaussian(Eigen::Vector4d::Zero(), v, hbar);
}

namespace {

struct BinnedPair {
    DiscreteDistribution u;
    DiscreteDistribution v;
};

BinnedPair bin_centred(const GaussianMarginal& mu, const GaussianMarginal& mv, BinWidths cg) {
    return {bin_probabilities(mu, StandardCG(cg.delta, mu.mean)), bin_probabilities(mv, StandardCG(cg.small_delta, mv.mean))};
}

void require_widths(BinWidths cg) {
    if (!(cg.delta > 0.0) || !(cg.small_delta > 0.0)) throw std::invalid_argument("witness: bin widths must be positive");
}

URReport rename(URReport r, std::string kind) {
    r.kind = std::move(kind);
    return r;
}

} // namespace

WitnessResult witness_variance(const TwoModeGaussian& state, const GlobalOperatorPair& pair, std::optional<BinWidths> cg) {
    const auto& s = state.state();
    const auto mu = gaussian_marginal(s, pair.measured_u());
    const auto mv = gaussian_marginal(s, pair.measured_v());
    WitnessResult out;
    if (!cg) {
        out.report = rename(heisenberg_ur(mu.variance, mv.variance, pair.gamma_eff(), s.hbar()), "witness_variance_product");
        out.companions.push_back(
            rename(linear_ur(mu.variance, mv.variance, pair.gamma_eff(), s.hbar()), "witness_variance_linear"));
    } else {
        require_widths(*cg);
        const auto b = bin_centred(mu, mv, *cg);
        const CGPair cgp(cg->delta, cg->small_delta, pair.reference_pair(), s.hbar());
        out.report = rename(cg_variance_ur(discrete_variance(b.u), discrete_variance(b.v), cgp), "witness_cg_variance");
    }
    out.entangled = out.report.violated();
    return out;
}

WitnessResult naive_binned_variance_witness(const TwoModeGaussian& state, const GlobalOperatorPair& pair, BinWidths cg) {
    require_widths(cg);
    const auto& s = state.state();
    const auto b = bin_centred(gaussian_marginal(s, pair.measured_u()), gaussian_marginal(s, pair.measured_v()), cg);
    WitnessResult out;
    out.report = rename(heisenberg_ur(discrete_variance(b.u), discrete_variance(b.v), pair.gamma_eff(), s.hbar()),
                        "witness_naive_binned_variance");
    out.report.annotations.push_back("continuous bound applied to binned variances: not a valid criterion");
    out.entangled = out.report.violated();
    return out;
}

namespace {

WitnessResult entropy_from_bins(const DiscreteDistribution& du, const DiscreteDistribution& dv, const CGPair& cgp) {
    WitnessResult out;
    const auto res = cg_entropic_ur(du, dv, cgp, ConjugatePair(1.0));
    out.report = rename(res.discrete, "witness_cg_entropy");
    out.companions.push_back(rename(cg_variance_ur(discrete_variance(du), discrete_variance(dv), cgp), "witness_cg_variance"));
    out.entangled = out.report.violated();
    return out;
}

} // namespace

WitnessResult witness_entropy(const TwoModeGaussian& state, const GlobalOperatorPair& pair, BinWidths cg) {
    require_widths(cg);
    const auto& s = state.state();
    const auto mu = gaussian_marginal(s, pair.measured_u());
    const auto mv = gaussian_marginal(s, pair.measured_v());
    const auto b = bin_centred(mu, mv, cg);
    auto out = entropy_from_bins(b.u, b.v, CGPair(cg.delta, cg.small_delta, pair.reference_pair(), s.hbar()));
    out.companions.push_back(
        rename(heisenberg_ur(mu.variance, mv.variance, pair.gamma_eff(), s.hbar()), "witness_variance_product"));
    return out;
}

TwoModeGridWavefunction::TwoModeGridWavefunction(std::vector<cplx> samples, GridSpec grid, double hbar)
    : samples_(std::move(samples)), grid_(grid), hbar_(hbar) {
    grid_.validate();
    if (samples_.size() != grid_.n * grid_.n) throw std::invalid_argument("TwoModeGridWavefunction: need N*N samples");
    if (!(hbar > 0.0)) throw std::invalid_argument("TwoModeGridWavefunction: hbar must be positive");
    double norm = 0.0;
    for (const auto& z : samples_) norm += std::norm(z);
    norm *= grid_.dx * grid_.dx;
    if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("TwoModeGridWavefunction: samples not normalized");
}

TwoModeGridWavefunction TwoModeGridWavefunction::normalized(std::vector<cplx> samples, GridSpec grid, double hbar) {
    grid.validate();
    double norm = 0.0;
    for (const auto& z : samples) norm += std::norm(z);
    norm *= grid.dx * grid.dx;
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("TwoModeGridWavefunction: zero samples");
    const double s = 1.0 / std::sqrt(norm);
    for (auto& z : samples) z *= s;
    return TwoModeGridWavefunction(std::move(samples), grid, hbar);
}

TwoModeGridWavefunction TwoModeGridWavefunction::conjugate() const {
    const std::size_t n = grid_.n;
    std::vector<cplx> data(samples_);
    std::vector<cplx> line(n);
    GridSpec out{};
    for (std::size_t i = 0; i < n; ++i) {
        std::span<cplx> row(data.data() + i * n, n);
        out = detail::reciprocal_transform(row, grid_, hbar_, 0.0, -1);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) line[i] = data[i * n + j];
        detail::reciprocal_transform(line, grid_, hbar_, 0.0, -1);
        for (std::size_t i = 0; i < n; ++i) data[i * n + j] = line[i];
    }
    return normalized(std::move(data), out, hbar_);
}

GridDensity TwoModeGridWavefunction::combination_density(int sign) const {
    if (sign != 1 && sign != -1) throw std::invalid_argument("combination_density: sign must be +1 or -1");
    const std::size_t n = grid_.n;
    const double dx = grid_.dx;
    std::vector<double> v(2 * n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k = sign > 0 ? i + j : i + (n - 1) - j;
            v[k] += std::norm(samples_[i * n + j]);
        }
    for (double& x : v) x *= dx;
    const double c = sign > 0 ? 2.0 * grid_.centre() : 0.0;
    const GridSpec g{2 * n - 1, c - (static_cast<double>(n) - 0.5) * dx, dx};
    return GridDensity::sub_normalized(std::move(v), g, hbar_);
}

WitnessResult witness_entropy(const TwoModeGridWavefunction& psi, int sign, BinWidths cg) {
    require_widths(cg);
    const GridDensity pu = psi.combination_density(sign);
    const GridDensity pv = psi.conjugate().combination_density(-sign);
    const auto du = bin_probabilities(pu, StandardCG(cg.delta, pu.mean()));
    const auto dv = bin_probabilities(pv, StandardCG(cg.small_delta, pv.mean()));
    const auto pair = GlobalOperatorPair::position_momentum(sign);
    auto out = entropy_from_bins(du, dv, CGPair(cg.delta, cg.small_delta, pair.reference_pair(), psi.hbar()));
    out.companions.push_back(
        rename(heisenberg_ur(pu.variance(), pv.variance(), pair.gamma_eff(), psi.hbar()), "witness_variance_product"));
    return out;
}

} // namespace cgur
