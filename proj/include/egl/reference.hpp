#pragma once

#include <array>
#include <span>
#include <vector>

#include "egl/grid.hpp"
#include "egl/transform.hpp"

/// Serial, direct-summation versions of the hot kernels. They share no code
/// with the FFT/OpenMP paths and exist so tests and benchmarks have something
/// independent to compare against. All are O(q^3) or worse; keep n small.
namespace egl::ref {

void synthesize(const Grid& grid, std::span<const double> coeff, Parity p1, Parity p2,
                std::span<double> samples);
void analyze(const Grid& grid, std::span<const double> samples, Parity p1, Parity p2,
             std::span<double> coeff);

/// -u . grad(omega), dealiased, as a sine-sine spectrum (M x M).
std::vector<double> advection_rhs(const Grid& grid, std::span<const double> spectrum);

/// Off-grid velocity by a plain double loop over all modes.
std::array<double, 2> velocity_at(const Grid& grid, std::span<const double> spectrum,
                                  std::array<double, 2> x);

}  // namespace egl::ref
