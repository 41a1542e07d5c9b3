#include "cgur/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cgur {

namespace {

// psi_0 .. psi_nmax at x, normalized recurrence (stable for large n).
template <typename F>
void hermite_sweep(int nmax, double x, double hbar, F&& visit) {
    const double xi = x / std::sqrt(hbar);
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi * hbar, -0.25) * std::exp(-0.5 * xi * xi);
    visit(0, cur);
    for (int n = 0; n < nmax; ++n) {
        const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
        prev = cur;
        cur = next;
        visit(n + 1, cur);
    }
}

} // namespace

double hermite_function(int n, double x, double hbar) {
    if (n < 0) throw std::invalid_argument("hermite_function: n must be >= 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("hermite_function: hbar must be positive");
    double out = 0.0;
    hermite_sweep(n, x, hbar, [&](int k, double v) {
        if (k == n) out = v;
    });
    return out;
}

FockSuperposition::FockSuperposition(std::vector<cplx> coefficients, double hbar)
    : coeffs_(std::move(coefficients)), hbar_(hbar) {
    if (coeffs_.empty()) throw std::invalid_argument("FockSuperposition: no coefficients");
    if (!(hbar > 0.0)) throw std::invalid_argument("FockSuperposition: hbar must be positive");
    double norm = 0.0;
    for (const auto& c : coeffs_) norm += std::norm(c);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("FockSuperposition: zero coefficients");
    const double s = 1.0 / std::sqrt(norm);
    for (auto& c : coeffs_) c *= s;
}

cplx FockSuperposition::amplitude(double u, double theta) const {
    cplx acc = 0.0;
    hermite_sweep(max_n(), u, hbar_, [&](int n, double v) {
        acc += coeffs_[static_cast<std::size_t>(n)] * std::polar(v, -theta * n);
    });
    return acc;
}

double FockSuperposition::support_half_width() const {
    return std::sqrt(hbar_) * (std::sqrt(2.0 * max_n() + 1.0) + 9.0);
}

GridWavefunction FockSuperposition::to_grid(const GridSpec& grid, double theta) const {
    grid.validate();
    std::vector<cplx> v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) v[j] = amplitude(grid.at(j), theta);
    return GridWavefunction::normalized(std::move(v), grid, hbar_);
}

Moments FockSuperposition::moments(double theta) const {
    // u_theta = sqrt(hbar/2) (e^{-i theta} a + e^{i theta} a^dagger)
    cplx a1 = 0.0, a2 = 0.0;
    double nbar = 0.0;
    const std::size_t n = coeffs_.size();
    for (std::size_t k = 0; k < n; ++k) {
        nbar += static_cast<double>(k) * std::norm(coeffs_[k]);
        if (k + 1 < n) a1 += std::conj(coeffs_[k]) * coeffs_[k + 1] * std::sqrt(static_cast<double>(k + 1));
        if (k + 2 < n)
            a2 += std::conj(coeffs_[k]) * coeffs_[k + 2] * std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    }
    const cplx ph = std::polar(1.0, -theta);
    const double mean = std::sqrt(hbar_ / 2.0) * 2.0 * (ph * a1).real();
    const double second = 0.5 * hbar_ * (2.0 * (ph * ph * a2).real() + 2.0 * nbar + 1.0);
    return {mean, second - mean * mean};
}

} // namespace cgur
