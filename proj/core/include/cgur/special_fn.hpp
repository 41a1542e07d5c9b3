#pragma once

#include <memory>
#include <vector>

namespace cgur {

namespace detail {
class QuantizedMemo;
}

// Lowest even angular prolate mode expanded in normalized Legendre functions.
struct ProlateExpansion {
    std::vector<double> beta;  // coefficients of sqrt(k + 1/2) P_k, k = 0, 2, 4, ...
    double chi = 0.0;          // separation eigenvalue
    double r00 = 0.0;          // radial function at xi = 1
};

class ProlateEvaluator {
public:
    explicit ProlateEvaluator(int truncation = 16, double tolerance = 1e-14);
    ~ProlateEvaluator();
    ProlateEvaluator(const ProlateEvaluator&) = delete;
    ProlateEvaluator& operator=(const ProlateEvaluator&) = delete;

    int truncation() const noexcept { return truncation_; }
    double tolerance() const noexcept { return tolerance_; }

    // R00(x, 1), memoized; grows the expansion until the trailing coefficient is below tolerance.
    double r00(double x) const;
    // Expansion with exactly `terms` even Legendre functions, no growth, no cache.
    ProlateExpansion expansion(double x, int terms) const;
    // Number of terms the adaptive rule settles on.
    int adaptive_terms(double x) const;

private:
    int truncation_;
    double tolerance_;
    std::unique_ptr<detail::QuantizedMemo> cache_;
};

// Process-wide evaluator with default settings.
const ProlateEvaluator& default_prolate();

double r00(double x);
// lambda_0 = (2x/pi) R00(x,1)^2, the concentration of the first prolate function.
double prolate_concentration(double x);
// alpha^{1/(2-2alpha)} beta^{1/(2-2beta)}; 1/e at alpha = 1 and 1/2 at alpha = 1/2.
double renyi_constant(double alpha);
double eps_alpha(double alpha, double x);
// Root of R00(x,1)^2 / 2 = renyi_constant(alpha).
double eps_crossover(double alpha = 1.0);
// Conjectured sharper replacement for eps_1, diagnostic only.
double schurmann_eps1(double x);

double erf(double x);
// M(y) = exp(-y/4) / (2 sqrt(pi y) erf(sqrt(y)/2)), decreasing from +inf to 0.
double M(double y);
double M_inverse(double t);
// K(t) = exp(2 t M^{-1}(t)) / erf(sqrt(M^{-1}(t))/2)^2, K(0) = 1.
double K_of_t(double t);

} // namespace cgur
