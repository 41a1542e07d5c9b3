#include "cgur/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cgur {

ModeSystem::ModeSystem(int n_modes, double hbar) : n_modes_(n_modes), hbar_(hbar) {
    if (n_modes < 1) throw std::invalid_argument("ModeSystem: n_modes must be >= 1");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("ModeSystem: hbar must be positive");
}

void GridSpec::validate() const {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 cells");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("grid spacing must be positive");
    if (!std::isfinite(x0)) throw std::invalid_argument("grid origin must be finite");
}

GridSpec GridSpec::centred(std::size_t n, double dx, double c) {
    GridSpec g{n, c - 0.5 * static_cast<double>(n) * dx, dx};
    g.validate();
    return g;
}

GridSpec GridSpec::balanced(std::size_t n, double hbar, double c) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    return centred(n, std::sqrt(2.0 * std::numbers::pi * hbar / static_cast<double>(n)), c);
}

namespace {

double sum_norm(std::span<const cplx> s) {
    double acc = 0.0;
    for (const auto& z : s) acc += std::norm(z);
    return acc;
}

} // namespace

GridWavefunction::GridWavefunction(std::vector<cplx> samples, GridSpec grid, double hbar)
    : samples_(std::move(samples)), grid_(grid), hbar_(hbar) {
    grid_.n = samples_.size();
    grid_.validate();
    if (!(hbar > 0.0)) throw std::invalid_argument("GridWavefunction: hbar must be positive");
    const double norm = norm_squared();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("GridWavefunction: samples not normalized (norm^2 = " + std::to_string(norm) + ")");
}

GridWavefunction GridWavefunction::normalized(std::vector<cplx> samples, GridSpec grid, double hbar) {
    grid.n = samples.size();
    grid.validate();
    const double norm = sum_norm(samples) * grid.dx;
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("GridWavefunction: zero or non-finite samples");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& z : samples) z *= scale;
    return GridWavefunction(std::move(samples), grid, hbar);
}

double GridWavefunction::norm_squared() const noexcept { return sum_norm(samples_) * grid_.dx; }

GridDensity::GridDensity(std::vector<double> values, GridSpec grid, double hbar)
    : GridDensity(std::move(values), grid, hbar, true) {}

GridDensity::GridDensity(std::vector<double> values, GridSpec grid, double hbar, bool require_unit_mass)
    : values_(std::move(values)), grid_(grid), hbar_(hbar) {
    grid_.n = values_.size();
    grid_.validate();
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("GridDensity: values must be finite and nonnegative");
    const double m = mass();
    if (require_unit_mass ? std::abs(m - 1.0) > 1e-9 : m > 1.0 + 1e-9)
        throw std::invalid_argument("GridDensity: mass " + std::to_string(m) + " is not 1");
}

GridDensity GridDensity::sub_normalized(std::vector<double> values, GridSpec grid, double hbar) {
    return GridDensity(std::move(values), grid, hbar, false);
}

GridDensity GridDensity::from(const GridWavefunction& psi) {
    std::vector<double> v(psi.size());
    std::ranges::transform(psi.samples(), v.begin(), [](const cplx& z) { return std::norm(z); });
    return GridDensity(std::move(v), psi.grid(), psi.hbar());
}

GridDensity GridDensity::mixture(std::span<const double> weights, std::span<const GridDensity> parts) {
    if (weights.size() != parts.size() || parts.empty())
        throw std::invalid_argument("GridDensity::mixture: weights and parts must match");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12 || std::ranges::any_of(weights, [](double w) { return w < 0.0; }))
        throw std::invalid_argument("GridDensity::mixture: weights must be a probability vector");
    const GridSpec& g = parts.front().grid();
    std::vector<double> v(g.n, 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const GridSpec& h = parts[i].grid();
        if (h.n != g.n || h.x0 != g.x0 || h.dx != g.dx)
            throw std::invalid_argument("GridDensity::mixture: grids differ");
        for (std::size_t j = 0; j < g.n; ++j) v[j] += weights[i] * parts[i].values()[j];
    }
    return GridDensity(std::move(v), g, parts.front().hbar(), false);
}

double GridDensity::mass() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.dx;
}

double GridDensity::mean() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) m += values_[j] * grid_.at(j);
    return m * grid_.dx / mass();
}

double GridDensity::variance() const noexcept {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        const double y = grid_.at(j) - mu;
        v += values_[j] * y * y;
    }
    return v * grid_.dx / mass();
}

double GaussianMarginal::pdf(double u) const {
    const double z = (u - mean) / sigma();
    return std::exp(-0.5 * z * z) / (sigma() * std::sqrt(2.0 * std::numbers::pi));
}

double GaussianMarginal::interval_mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    const double s = sigma() * std::numbers::sqrt2;
    const double za = (a - mean) / s;
    const double zb = (b - mean) / s;
    if (za >= 0.0) return 0.5 * (std::erfc(za) - std::erfc(zb));
    if (zb <= 0.0) return 0.5 * (std::erfc(-zb) - std::erfc(-za));
    return 0.5 * (std::erf(zb) - std::erf(za));
}

QuadratureCoeffs::QuadratureCoeffs(Eigen::VectorXd d) : d_(std::move(d)) {
    if (d_.size() < 2 || d_.size() % 2 != 0)
        throw std::invalid_argument("QuadratureCoeffs: length must be 2n");
    if (!d_.allFinite() || d_.isZero(0.0)) throw std::invalid_argument("QuadratureCoeffs: d must be finite and nonzero");
}

QuadratureCoeffs::QuadratureCoeffs(std::initializer_list<double> d)
    : QuadratureCoeffs(Eigen::Map<const Eigen::VectorXd>(d.begin(), static_cast<Eigen::Index>(d.size()))) {}

QuadratureCoeffs QuadratureCoeffs::rotated(double theta, int mode, int n_modes) {
    if (n_modes < 1 || mode < 0 || mode >= n_modes) throw std::invalid_argument("QuadratureCoeffs: bad mode index");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n_modes);
    d(mode) = std::cos(theta);
    d(n_modes + mode) = std::sin(theta);
    return QuadratureCoeffs(std::move(d));
}

QuadratureCoeffs QuadratureCoeffs::position(int mode, int n_modes) {
    if (n_modes < 1 || mode < 0 || mode >= n_modes) throw std::invalid_argument("QuadratureCoeffs: bad mode index");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n_modes);
    d(mode) = 1.0;
    return QuadratureCoeffs(std::move(d));
}

QuadratureCoeffs QuadratureCoeffs::momentum(int mode, int n_modes) {
    if (n_modes < 1 || mode < 0 || mode >= n_modes) throw std::invalid_argument("QuadratureCoeffs: bad mode index");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n_modes);
    d(n_modes + mode) = 1.0;
    return QuadratureCoeffs(std::move(d));
}

QuadratureCoeffs QuadratureCoeffs::operator+(const QuadratureCoeffs& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("QuadratureCoeffs: dimension mismatch");
    return QuadratureCoeffs(Eigen::VectorXd(d_ + o.d_));
}

QuadratureCoeffs QuadratureCoeffs::operator-(const QuadratureCoeffs& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("QuadratureCoeffs: dimension mismatch");
    return QuadratureCoeffs(Eigen::VectorXd(d_ - o.d_));
}

QuadratureCoeffs QuadratureCoeffs::scaled(double c) const { return QuadratureCoeffs(Eigen::VectorXd(c * d_)); }

Eigen::MatrixXd symplectic_form(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("symplectic_form: n_modes must be >= 1");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    j.topRightCorner(n_modes, n_modes).setIdentity();
    j.bottomLeftCorner(n_modes, n_modes) = -Eigen::MatrixXd::Identity(n_modes, n_modes);
    return j;
}

double commutator_gamma(const QuadratureCoeffs& du, const QuadratureCoeffs& dv) {
    if (du.dim() != dv.dim()) throw std::invalid_argument("commutator_gamma: dimension mismatch");
    // d^T J d' without forming J.
    const Eigen::Index n = du.dim() / 2;
    const auto& a = du.d();
    const auto& b = dv.d();
    return a.head(n).dot(b.tail(n)) - a.tail(n).dot(b.head(n));
}

QuadraturePair::QuadraturePair(QuadratureCoeffs du, QuadratureCoeffs dv, bool cco)
    : du_(std::move(du)), dv_(std::move(dv)), gamma_(commutator_gamma(du_, dv_)), cco_(cco) {
    if (cco_ && gamma_ == 0.0) throw std::invalid_argument("QuadraturePair: a CCO pair cannot commute");
}

QuadraturePair QuadraturePair::general(QuadratureCoeffs du, QuadratureCoeffs dv) {
    return QuadraturePair(std::move(du), std::move(dv), false);
}

QuadraturePair QuadraturePair::declared_cco(QuadratureCoeffs du, QuadratureCoeffs dv) {
    return QuadraturePair(std::move(du), std::move(dv), true);
}

QuadraturePair QuadraturePair::canonical(int mode, int n_modes) {
    return declared_cco(QuadratureCoeffs::position(mode, n_modes), QuadratureCoeffs::momentum(mode, n_modes));
}

QuadraturePair QuadraturePair::rotated(double theta, int mode, int n_modes) {
    return declared_cco(QuadratureCoeffs::rotated(theta, mode, n_modes),
                        QuadratureCoeffs::rotated(theta + std::numbers::pi / 2, mode, n_modes));
}

namespace {

Eigen::MatrixXcd uncertainty_matrix(const Eigen::MatrixXd& cov, double hbar) {
    const int n = static_cast<int>(cov.rows() / 2);
    return cov.cast<cplx>() + cplx(0.0, 0.5 * hbar) * symplectic_form(n).cast<cplx>();
}

double min_uncertainty_eigenvalue(const Eigen::MatrixXd& cov, double hbar) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(uncertainty_matrix(cov, hbar), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov, ModeSystem system)
    : mean_(std::move(mean)), cov_(std::move(cov)), system_(system) {
    const Eigen::Index dim = system_.dim();
    if (mean_.size() != dim || cov_.rows() != dim || cov_.cols() != dim)
        throw std::invalid_argument("GaussianState: dimension mismatch");
    if (!mean_.allFinite() || !cov_.allFinite()) throw std::invalid_argument("GaussianState: non-finite entries");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("GaussianState: covariance not symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("GaussianState: covariance not positive definite");
    bona_fide_ = min_uncertainty_eigenvalue(cov_, system_.hbar()) >= -1e-10;
}

GaussianState GaussianState::vacuum(int n_modes, double hbar) {
    ModeSystem sys(n_modes, hbar);
    return GaussianState(Eigen::VectorXd::Zero(sys.dim()), 0.5 * hbar * Eigen::MatrixXd::Identity(sys.dim(), sys.dim()),
                         sys);
}

GaussianState GaussianState::thermal(double nbar, double hbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar must be nonnegative");
    return GaussianState(Eigen::VectorXd::Zero(2), (nbar + 0.5) * hbar * Eigen::MatrixXd::Identity(2, 2),
                         ModeSystem(1, hbar));
}

GaussianState GaussianState::squeezed(double r, double theta, double hbar, double q, double p) {
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    const Eigen::Matrix2d d = Eigen::Vector2d(std::exp(-2.0 * r), std::exp(2.0 * r)).asDiagonal();
    Eigen::MatrixXd cov = 0.5 * hbar * rot * d * rot.transpose();
    return GaussianState(Eigen::Vector2d(q, p), cov, ModeSystem(1, hbar));
}

GaussianState GaussianState::transformed(const Eigen::MatrixXd& s) const {
    if (s.rows() != cov_.rows() || s.cols() != cov_.cols()) throw std::invalid_argument("transformed: dimension mismatch");
    return GaussianState(s * mean_, s * cov_ * s.transpose(), system_);
}

GaussianMarginal gaussian_marginal(const GaussianState& state, const QuadratureCoeffs& d) {
    if (d.dim() != state.system().dim()) throw std::invalid_argument("gaussian_marginal: dimension mismatch");
    return {d.d().dot(state.mean()), d.d().dot(state.cov() * d.d())};
}

URReport bona_fide_check(const GaussianState& state) {
    const double lam = min_uncertainty_eigenvalue(state.cov(), state.hbar());
    URReport r;
    r.kind = "bona_fide";
    r.lhs = lam;
    r.bound = 0.0;
    r.margin = lam;
    r.verdict = lam >= -1e-10 ? Verdict::Satisfied : Verdict::Violated;
    r.annotations.push_back("smallest eigenvalue of V + i(hbar/2)J");
    return r;
}

URReport det_cov_check(const GaussianState& state, int mode) {
    const int n = state.n_modes();
    if (mode < 0 || mode >= n) throw std::invalid_argument("det_cov_check: bad mode index");
    const auto& v = state.cov();
    const double det = v(mode, mode) * v(n + mode, n + mode) - v(mode, n + mode) * v(n + mode, mode);
    const double lhs = std::sqrt(std::max(det, 0.0));
    const double bound = 0.5 * state.hbar();
    URReport r = make_report("det_cov", lhs, bound, 1e-12);
    return r;
}

} // namespace cgur
