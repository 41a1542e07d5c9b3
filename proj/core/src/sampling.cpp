#include "cgur/sampling.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace cgur {

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal(rng);
    return m;
}

} // namespace

Eigen::MatrixXd random_symplectic(int n_modes, Rng& rng, double scale) {
    const Eigen::MatrixXd a = gaussian_matrix(2 * n_modes, 2 * n_modes, rng, scale);
    const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
    const Eigen::MatrixXd x = symplectic_form(n_modes) * h;
    return x.exp();
}

GaussianState random_gaussian_state(int n_modes, Rng& rng, double hbar, double squeeze_scale, double thermal_scale) {
    const ModeSystem sys(n_modes, hbar);
    const Eigen::MatrixXd s = random_symplectic(n_modes, rng, squeeze_scale);
    std::exponential_distribution<double> thermal(1.0 / thermal_scale);
    Eigen::VectorXd nu(2 * n_modes);
    for (int i = 0; i < n_modes; ++i) nu(i) = nu(n_modes + i) = 1.0 + thermal(rng);
    Eigen::MatrixXd v = 0.5 * hbar * s * nu.asDiagonal() * s.transpose();
    v = 0.5 * (v + v.transpose()).eval();
    return GaussianState(gaussian_matrix(2 * n_modes, 1, rng, std::sqrt(hbar)).col(0), v, sys);
}

TwoModeGaussian random_separable_state(Rng& rng, double hbar) {
    auto local = [&]() -> Eigen::Matrix2d {
        const auto g = random_gaussian_state(1, rng, hbar, 0.6, 0.5);
        return g.cov();
    };
    const Eigen::Matrix2d v1 = local(), v2 = local();
    std::normal_distribution<double> normal(0.0, std::sqrt(hbar));
    auto base = TwoModeGaussian::product(v1, v2, Eigen::Vector2d(normal(rng), normal(rng)),
                                         Eigen::Vector2d(normal(rng), normal(rng)), hbar);
    std::uniform_int_distribution<int> rank(0, 4);
    const int k = rank(rng);
    Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
    if (k > 0) {
        const Eigen::MatrixXd a = gaussian_matrix(4, k, rng, 0.6 * std::sqrt(hbar));
        w = a * a.transpose();
    }
    Eigen::Matrix4d cov = base.state().cov() + w;
    return TwoModeGaussian(Eigen::Vector4d(base.state().mean()), cov, hbar);
}

FockSuperposition random_fock_superposition(Rng& rng, int max_n, double hbar) {
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> top(0, max_n);
    const int n = top(rng);
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (auto& z : c) z = {normal(rng), normal(rng)};
    return FockSuperposition(std::move(c), hbar);
}

QuadratureCoeffs random_quadrature(int n_modes, Rng& rng) {
    for (;;) {
        Eigen::VectorXd d = gaussian_matrix(2 * n_modes, 1, rng, 1.0).col(0);
        if (d.norm() > 1e-3) return QuadratureCoeffs(std::move(d));
    }
}

} // namespace cgur
