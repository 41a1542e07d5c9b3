#include "cgur/special_fn.hpp"
#include "detail/memo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

namespace cgur {

namespace {

// Beyond this the concentration equals 1 to far below double precision
// (1 - lambda_0 ~ 4 sqrt(pi x) e^{-2x}), so R00^2 = pi / (2x) exactly in floating point.
constexpr double kAsymptoticX = 200.0;

} // namespace

ProlateEvaluator::ProlateEvaluator(int truncation, double tolerance)
    : truncation_(truncation), tolerance_(tolerance), cache_(std::make_unique<detail::QuantizedMemo>()) {
    if (truncation < 16) throw std::invalid_argument("ProlateEvaluator: truncation must be >= 16");
    if (!(tolerance > 0.0)) throw std::invalid_argument("ProlateEvaluator: tolerance must be positive");
}

ProlateEvaluator::~ProlateEvaluator() = default;

ProlateExpansion ProlateEvaluator::expansion(double x, int terms) const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("r00: x must be finite and nonnegative");
    if (terms < 2) throw std::invalid_argument("ProlateEvaluator: need at least two terms");
    const double c2 = x * x;
    Eigen::VectorXd diag(terms), off(terms - 1);
    for (int i = 0; i < terms; ++i) {
        const double k = 2.0 * i;
        diag(i) = k * (k + 1.0) + c2 * (2.0 * k * (k + 1.0) - 1.0) / ((2.0 * k + 3.0) * (2.0 * k - 1.0));
        if (i + 1 < terms)
            off(i) = c2 * (k + 2.0) * (k + 1.0) / ((2.0 * k + 3.0) * std::sqrt((2.0 * k + 1.0) * (2.0 * k + 5.0)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("r00: tridiagonal eigensolver failed");
    const Eigen::VectorXd b = es.eigenvectors().col(0);

    // psi(0) from P_k(0) = -(k-1)/k P_{k-2}(0); normalizing through psi(0) avoids
    // the cancellation of the alternating Bessel series at large x.
    double pk = 1.0, psi0 = 0.0;
    for (int i = 0; i < terms; ++i) {
        const double k = 2.0 * i;
        if (i > 0) pk *= -(k - 1.0) / k;
        psi0 += b(i) * std::sqrt(k + 0.5) * pk;
    }
    ProlateExpansion out;
    out.beta.assign(b.data(), b.data() + b.size());
    out.chi = es.eigenvalues()(0);
    out.r00 = std::abs(b(0) / (std::numbers::sqrt2 * psi0));
    return out;
}

int ProlateEvaluator::adaptive_terms(double x) const {
    int n = std::max(truncation_, static_cast<int>(std::ceil(0.5 * x)) + 24);
    for (;;) {
        const auto e = expansion(x, n);
        const double scale = std::abs(e.beta.front()) + std::abs(e.beta[1]);
        if (std::abs(e.beta.back()) < tolerance_ * std::max(scale, 1e-300) || std::abs(e.beta.back()) < tolerance_)
            return n;
        if (n > 100000) throw std::runtime_error("r00: expansion failed to converge");
        n *= 2;
    }
}

double ProlateEvaluator::r00(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("r00: x must be finite and nonnegative");
    if (x == 0.0) return 1.0;
    if (x > kAsymptoticX) return std::sqrt(std::numbers::pi / (2.0 * x));
    return cache_->get(x, [this](double xq) {
        if (xq == 0.0) return 1.0;
        return expansion(xq, adaptive_terms(xq)).r00;
    });
}

const ProlateEvaluator& default_prolate() {
    static const ProlateEvaluator evaluator;
    return evaluator;
}

double r00(double x) { return default_prolate().r00(x); }

double prolate_concentration(double x) {
    const double r = r00(x);
    return 2.0 * x / std::numbers::pi * r * r;
}

double renyi_constant(double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("renyi_constant: alpha must lie in [1/2, 1]");
    if (alpha == 1.0) return std::exp(-1.0);
    // ln a / (2 - 2a) written with log1p so it stays accurate near a = 1.
    auto term = [](double a) { return std::log1p(a - 1.0) / (2.0 - 2.0 * a); };
    if (alpha == 0.5) return 0.5;  // beta = inf contributes exp(0)
    const double beta = alpha / (2.0 * alpha - 1.0);
    return std::exp(term(alpha) + term(beta));
}

double eps_alpha(double alpha, double x) {
    const double f = renyi_constant(alpha);
    if (!(x >= 0.0)) throw std::invalid_argument("eps_alpha: x must be nonnegative");
    const double r = r00(x);
    return std::min(f, 0.5 * r * r);
}

double eps_crossover(double alpha) {
    const double f = renyi_constant(alpha);
    auto g = [f](double x) {
        const double r = r00(x);
        return 0.5 * r * r - f;
    };
    if (g(0.0) <= 0.0) return 0.0;
    double hi = 1.0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e4) throw std::runtime_error("eps_crossover: no sign change");
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

double schurmann_eps1(double x) {
    const double r = r00(2.0 * x / std::numbers::e);
    return std::exp(-1.0) * r * r;
}

double erf(double x) { return std::erf(x); }

namespace {

double log_M(double y) {
    return -0.25 * y - std::numbers::ln2 - 0.5 * std::log(std::numbers::pi * y) - std::log(std::erf(0.5 * std::sqrt(y)));
}

detail::QuantizedMemo& m_inverse_cache() {
    static detail::QuantizedMemo memo;
    return memo;
}

detail::QuantizedMemo& k_cache() {
    static detail::QuantizedMemo memo;
    return memo;
}

double solve_M_inverse(double t) {
    const double target = std::log(t);
    auto f = [target](double y) { return log_M(y) - target; };
    double lo = 1.0, hi = 1.0;
    int guard = 0;
    while (f(lo) <= 0.0) {
        lo *= 0.5;
        if (++guard > 1100 || !(lo > 0.0))
            throw std::runtime_error("M_inverse: lower bracket failed for t = " + std::to_string(t));
    }
    guard = 0;
    while (f(hi) >= 0.0) {
        hi *= 2.0;
        if (++guard > 64) throw std::runtime_error("M_inverse: upper bracket failed for t = " + std::to_string(t));
    }
    std::uintmax_t iters = 300;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    if (iters >= 300) throw std::runtime_error("M_inverse: root search did not converge");
    return 0.5 * (a + b);
}

} // namespace

double M(double y) {
    if (!(y > 0.0)) throw std::invalid_argument("M: y must be positive");
    if (std::isinf(y)) return 0.0;
    return std::exp(log_M(y));
}

double M_inverse(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("M_inverse: t must be finite and positive");
    return m_inverse_cache().get(t, solve_M_inverse);
}

double K_of_t(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("K_of_t: t must be finite and nonnegative");
    if (t == 0.0) return 1.0;
    auto eval = [](double tt) {
        const double y = solve_M_inverse(tt);
        const double e = std::erf(0.5 * std::sqrt(y));
        return std::exp(2.0 * tt * y) / (e * e);
    };
    return k_cache().get(t, eval);
}

} // namespace cgur
