#pragma once

#include <span>
#include <vector>

#include "egl/field.hpp"
#include "egl/transform.hpp"

namespace egl {

/// Populate the sine-sine spectrum from physical samples. Throws SymmetryError
/// when the samples are not odd in both variables to within 1e-10 (relative
/// to max(1, max|f|)).
ScalarField to_spectral(const ScalarField& f);

/// Populate physical samples from the spectrum.
ScalarField to_physical(const ScalarField& f);

/// Largest violation of f(-x1,x2) = -f(x1,x2) and f(x1,-x2) = -f(x1,x2) over
/// the grid nodes.
double oddness_residual(const Grid& grid, std::span<const double> values);

/// Velocity u = (-d2 psi, d1 psi) with -Laplace(psi) = omega, on the full grid.
VectorField biot_savart(const ScalarField& omega);

/// Spectral gradient (d1 f, d2 f) on the full grid.
VectorField gradient(const ScalarField& f);

/// Vorticity recovered from velocity samples, d2 u1 - d1 u2. That sign is the
/// one under which u = (-d2 psi, d1 psi) and -Laplace(psi) = omega agree, so
/// curl(biot_savart(w)) = w. Runs the forward transforms on u itself, so it is
/// independent of biot_savart.
ScalarField curl(const VectorField& u);

/// Sup norm of the spectral divergence of sampled velocity.
double divergence_linf(const VectorField& u);

/// 2/3-rule truncation: zero every mode with j > n/3 or k > n/3.
std::vector<double> dealias(const Grid& grid, std::span<const double> spectrum);
void dealias_in_place(const Grid& grid, std::span<double> spectrum);

double linf(const ScalarField& f);
/// sqrt(h^2 sum f^2) over the n x n nodes.
double l2(const ScalarField& f);
double linf(std::span<const double> values);
double l2(const Grid& grid, std::span<const double> values);

/// Stream-function coefficients psi_{jk} = a_{jk} / (pi^2 (j^2 + k^2)), q x q.
QuadrantArray stream_modes(const Grid& grid, std::span<const double> spectrum);

/// Multiply mode (j,k) of a q x q modal array by sign (j pi)^pow_j (k pi)^pow_k;
/// with the matching parity flips this is spectral differentiation.
QuadrantArray scale_modes(const Grid& grid, std::span<const double> modal, int pow_j,
                          int pow_k, double sign);

/// Per-snapshot velocity magnitudes that drive time stepping and the
/// growth bounds.
struct VelocityStats {
  double max_speed = 0.0;     // max |u| over nodes
  double max_grad_u = 0.0;    // max operator 2-norm of grad u over nodes
};
VelocityStats velocity_stats(const Grid& grid, std::span<const double> spectrum);

/// Max over nodes of |grad f| for a sine-sine spectrum.
double max_gradient_norm(const Grid& grid, std::span<const double> spectrum);

}  // namespace egl
