#pragma once

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace cgur::detail {

// Composite 20-point Gauss-Legendre on [a, b] with panels no wider than max_panel.
template <typename F>
double integrate(F&& f, double a, double b, double max_panel) {
    if (!(b > a)) return 0.0;
    const double span = b - a;
    const long panels = std::max(1L, static_cast<long>(std::ceil(span / max_panel)));
    const double h = span / static_cast<double>(panels);
    double acc = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double lo = a + static_cast<double>(i) * h;
        const double hi = (i + 1 == panels) ? b : lo + h;
        acc += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
    }
    return acc;
}

// Visits the Gauss-Legendre nodes of the same composite rule with their weights.
template <typename V>
void for_each_node(double a, double b, double max_panel, V&& visit) {
    if (!(b > a)) return;
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    const double span = b - a;
    const long panels = std::max(1L, static_cast<long>(std::ceil(span / max_panel)));
    const double h = span / static_cast<double>(panels);
    for (long i = 0; i < panels; ++i) {
        const double lo = a + static_cast<double>(i) * h;
        const double hi = (i + 1 == panels) ? b : lo + h;
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) {
                visit(c, w[k] * r);
            } else {
                visit(c - r * x[k], w[k] * r);
                visit(c + r * x[k], w[k] * r);
            }
        }
    }
}

} // namespace cgur::detail
