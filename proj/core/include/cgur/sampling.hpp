#pragma once

#include <random>

#include <Eigen/Dense>

#include "cgur/entanglement.hpp"
#include "cgur/states.hpp"

namespace cgur {

using Rng = std::mt19937_64;

// exp(J H) with H symmetric Gaussian noise of the given scale.
Eigen::MatrixXd random_symplectic(int n_modes, Rng& rng, double scale = 0.5);
// Williamson form: (hbar/2) S diag(nu, nu) S^T with nu >= 1, random mean.
GaussianState random_gaussian_state(int n_modes, Rng& rng, double hbar = 1.0, double squeeze_scale = 0.5,
                                    double thermal_scale = 0.5);
// Local bona fide states plus a positive semidefinite classical correlation term.
TwoModeGaussian random_separable_state(Rng& rng, double hbar = 1.0);
FockSuperposition random_fock_superposition(Rng& rng, int max_n, double hbar = 1.0);
QuadratureCoeffs random_quadrature(int n_modes, Rng& rng);

} // namespace cgur
