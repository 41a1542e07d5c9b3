#pragma once

// Reference computations that share no code path with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    return {x, w};
}

// Largest eigenvalue of the band-limiting kernel sin(c(x-y)) / (pi (x-y)) on [-1, 1],
// discretized by Nystrom on Gauss-Legendre nodes. Equals (2c/pi) R00(c, 1)^2.
inline double sinc_kernel_lambda0(double c, int nodes = 120) {
    auto [x, w] = gauss_legendre(nodes);
    Eigen::MatrixXd a(nodes, nodes);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            const double d = x[i] - x[j];
            const double k = i == j ? c / std::numbers::pi : std::sin(c * d) / (std::numbers::pi * d);
            a(i, j) = std::sqrt(w[i]) * k * std::sqrt(w[j]);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(nodes - 1);
}

inline double r00_nystrom(double c, int nodes = 120) {
    return std::sqrt(std::numbers::pi * sinc_kernel_lambda0(c, nodes) / (2.0 * c));
}

inline long double M_long(long double y) {
    const long double pi = 3.141592653589793238462643383279502884L;
    return std::exp(-y / 4) / (2 * std::sqrt(pi * y) * std::erf(std::sqrt(y) / 2));
}

// Solves M(y) = t by bisection in log y, in extended precision.
inline double M_inverse_bisect(double t) {
    long double lo = std::log(1e-14L), hi = std::log(4000.0L);
    for (int i = 0; i < 300; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (M_long(std::exp(mid)) > t) lo = mid;
        else hi = mid;
    }
    return static_cast<double>(std::exp(0.5L * (lo + hi)));
}

inline double K_direct(double t) {
    const long double y = M_inverse_bisect(t);
    const long double e = std::erf(std::sqrt(y) / 2);
    return static_cast<double>(std::exp(2 * t * y) / (e * e));
}

// Plain O(N^2) Fourier sum phi(p_k) = sum_j psi(x_j) exp(-i p_k x_j / hbar) dx / sqrt(2 pi hbar).
inline std::vector<std::complex<double>> fourier_sum(const std::vector<std::complex<double>>& psi,
                                                     const std::vector<double>& x, const std::vector<double>& p,
                                                     double hbar) {
    const double dx = x[1] - x[0];
    std::vector<std::complex<double>> out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        std::complex<long double> acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const long double ph = -static_cast<long double>(p[k]) * x[j] / hbar;
            acc += std::complex<long double>(psi[j]) * std::complex<long double>(std::cos(ph), std::sin(ph));
        }
        out[k] = std::complex<double>(acc) * dx / std::sqrt(2 * std::numbers::pi * hbar);
    }
    return out;
}

// Normal probability of (a, b] in extended precision.
inline double normal_mass(double mean, double sigma, double a, double b) {
    const long double s = std::sqrt(2.0L) * sigma;
    const long double za = (a - mean) / s, zb = (b - mean) / s;
    if (za >= 0) return static_cast<double>(0.5L * (std::erfc(za) - std::erfc(zb)));
    if (zb <= 0) return static_cast<double>(0.5L * (std::erfc(-zb) - std::erfc(-za)));
    return static_cast<double>(1.0L - 0.5L * std::erfc(zb) - 0.5L * std::erfc(-za));
}

// Closed-form Renyi entropy of a normal density; alpha = 1 is Shannon, inf the min-entropy.
inline double normal_renyi(double sigma, double alpha) {
    const double base = 0.5 * std::log(2 * std::numbers::pi * sigma * sigma);
    if (alpha == 1.0) return base + 0.5;
    if (std::isinf(alpha)) return base;
    return base + std::log(alpha) / (2.0 * (alpha - 1.0));
}

// Composite Gauss-Legendre rule on [a, b] with `panels` panels of 40 nodes.
template <typename F>
double integrate(F&& f, double a, double b, int panels) {
    static const auto rule = gauss_legendre(40);
    const double h = (b - a) / panels;
    long double acc = 0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.first.size(); ++i) acc += rule.second[i] * f(mid + 0.5 * h * rule.first[i]);
    }
    return static_cast<double>(acc * 0.5L * h);
}

// Smallest symplectic eigenvalue of a 2n x 2n covariance in (q..., p...) ordering.
inline double min_symplectic_eigenvalue(const Eigen::MatrixXd& v) {
    const auto n = v.rows() / 2;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    Eigen::EigenSolver<Eigen::MatrixXd> es(j * v);
    double m = INFINITY;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) m = std::min(m, std::abs(es.eigenvalues()(i).imag()));
    return m;
}

// Values computed once with the oracles above and an independent prototype, frozen here.
struct R00Frozen {
    double x, r00;
};
inline constexpr R00Frozen kR00Table[] = {
    {0.5, 0.9863662932834}, {1.0, 0.9483719511962}, {2.0, 0.8316189907340},
    {5.0, 0.5603176040968}, {25.0, 0.2506628274631}, {50.0, 0.1772453850906},
};

struct KFrozen {
    double t, m_inv, k;
};
inline constexpr KFrozen kKTable[] = {
    {1e-6, 42.6919866, 1.000093057}, {1e-3, 16.92581723, 1.041970925}, {0.01, 9.080930465, 1.282670686},
    {0.1, 2.975014142, 3.000001392}, {1.0, 0.4626237345, 18.48098489},
};

inline constexpr double kEps1Crossover = 1.7916520270;

} // namespace oracle
