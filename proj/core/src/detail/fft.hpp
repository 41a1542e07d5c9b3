#pragma once

#include <complex>
#include <span>

#include "cgur/states.hpp"

namespace cgur::detail {

// Unitary centred DFT: out_m = N^{-1/2} sum_j in_j exp(sign i 2 pi (m-a)(j-a)/N), a = (N-1)/2.
// in and out may alias.
void centred_dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign);

// In place: out(y) = dx / sqrt(2 pi hbar) sum_j in(x_j) exp(sign i y x_j / hbar) on the
// reciprocal grid of spacing 2 pi hbar / (N dx) centred on out_centre, which is returned.
GridSpec reciprocal_transform(std::span<std::complex<double>> data, const GridSpec& g, double hbar, double out_centre,
                              int sign);

} // namespace cgur::detail
