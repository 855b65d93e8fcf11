#include "egl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace egl {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t at(int q, int a, int b) { return static_cast<std::size_t>(a) * q + b; }

QuadrantArray synth(const Grid& grid, const QuadrantArray& modal, Parity p1, Parity p2) {
  QuadrantArray out(modal.size());
  quadrant_transform(grid.n()).synthesize(modal, p1, p2, out);
  return out;
}

QuadrantArray analyze(const Grid& grid, const QuadrantArray& samples, Parity p1, Parity p2) {
  QuadrantArray out(samples.size());
  quadrant_transform(grid.n()).analyze(samples, p1, p2, out);
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

double oddness_residual(const Grid& grid, std::span<const double> values) {
  const int n = grid.n();
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int r1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      const int r2 = (n - i2) % n;
      const double f = values[grid.index(i1, i2)];
      worst = std::max(worst, std::abs(f + values[grid.index(r1, i2)]));
      worst = std::max(worst, std::abs(f + values[grid.index(i1, r2)]));
    }
  }
  return worst;
}

ScalarField to_spectral(const ScalarField& f) {
  if (f.has_spectrum()) return f;
  const Grid& grid = f.grid();
  const auto values = f.values();
  const double scale = std::max(1.0, linf(values));
  const double violation = oddness_residual(grid, values);
  if (violation > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "field is not odd in both variables (violation " << violation << ")";
    throw SymmetryError(msg.str(), violation);
  }
  const auto quadrant = quadrant_from_full(grid, values, Parity::odd, Parity::odd);
  return f.with_spectrum(crop_spectrum(grid, analyze(grid, quadrant, Parity::odd, Parity::odd)));
}

ScalarField to_physical(const ScalarField& f) {
  if (f.has_values()) return f;
  const Grid& grid = f.grid();
  const auto quadrant =
      synth(grid, pad_spectrum(grid, f.spectrum()), Parity::odd, Parity::odd);
  return f.with_values(full_from_quadrant(grid, quadrant, Parity::odd, Parity::odd));
}

QuadrantArray stream_modes(const Grid& grid, std::span<const double> spectrum) {
  QuadrantArray psi = pad_spectrum(grid, spectrum);
  const int q = grid.quadrant_size();
  for (int j = 1; j < q - 1; ++j) {
    for (int k = 1; k < q - 1; ++k) {
      psi[at(q, j, k)] /= pi * pi * static_cast<double>(j * j + k * k);
    }
  }
  return psi;
}

QuadrantArray scale_modes(const Grid& grid, std::span<const double> modal, int pow_j,
                          int pow_k, double sign) {
  const int q = grid.quadrant_size();
  std::vector<double> fj(q), fk(q);
  for (int j = 0; j < q; ++j) {
    fj[j] = sign * std::pow(j * pi, pow_j);
    fk[j] = std::pow(j * pi, pow_k);
  }
  QuadrantArray out(modal.size());
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < q; ++k) out[at(q, j, k)] = fj[j] * fk[k] * modal[at(q, j, k)];
  }
  return out;
}

VectorField biot_savart(const ScalarField& omega) {
  const Grid& grid = omega.grid();
  const auto psi = stream_modes(grid, omega.spectrum());
  const auto u1 = synth(grid, scale_modes(grid, psi, 0, 1, -1.0), Parity::odd, Parity::even);
  const auto u2 = synth(grid, scale_modes(grid, psi, 1, 0, 1.0), Parity::even, Parity::odd);
  return {grid, full_from_quadrant(grid, u1, Parity::odd, Parity::even),
          full_from_quadrant(grid, u2, Parity::even, Parity::odd)};
}

VectorField gradient(const ScalarField& f) {
  const Grid& grid = f.grid();
  const auto a = pad_spectrum(grid, f.spectrum());
  const auto d1 = synth(grid, scale_modes(grid, a, 1, 0, 1.0), Parity::even, Parity::odd);
  const auto d2 = synth(grid, scale_modes(grid, a, 0, 1, 1.0), Parity::odd, Parity::even);
  return {grid, full_from_quadrant(grid, d1, Parity::even, Parity::odd),
          full_from_quadrant(grid, d2, Parity::odd, Parity::even)};
}

ScalarField curl(const VectorField& u) {
  const Grid& grid = u.grid;
  const int q = grid.quadrant_size();
  const auto c = analyze(grid, quadrant_from_full(grid, u.u1, Parity::odd, Parity::even),
                         Parity::odd, Parity::even);
  const auto d = analyze(grid, quadrant_from_full(grid, u.u2, Parity::even, Parity::odd),
                         Parity::even, Parity::odd);
  QuadrantArray w(c.size(), 0.0);
  for (int j = 1; j < q - 1; ++j) {
    for (int k = 1; k < q - 1; ++k) {
      w[at(q, j, k)] = j * pi * d[at(q, j, k)] - k * pi * c[at(q, j, k)];
    }
  }
  return ScalarField::from_spectrum(grid, crop_spectrum(grid, w));
}

double divergence_linf(const VectorField& u) {
  const Grid& grid = u.grid;
  const auto c = analyze(grid, quadrant_from_full(grid, u.u1, Parity::odd, Parity::even),
                         Parity::odd, Parity::even);
  const auto d = analyze(grid, quadrant_from_full(grid, u.u2, Parity::even, Parity::odd),
                         Parity::even, Parity::odd);
  auto div = scale_modes(grid, c, 1, 0, 1.0);
  const auto d2 = scale_modes(grid, d, 0, 1, 1.0);
  for (std::size_t i = 0; i < div.size(); ++i) div[i] += d2[i];
  return max_abs(synth(grid, div, Parity::even, Parity::even));
}

void dealias_in_place(const Grid& grid, std::span<double> spectrum) {
  const int m = grid.modes();
  const int cut = grid.dealias_cutoff();
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      if (j > cut || k > cut) spectrum[static_cast<std::size_t>(j - 1) * m + (k - 1)] = 0.0;
    }
  }
}

std::vector<double> dealias(const Grid& grid, std::span<const double> spectrum) {
  std::vector<double> out(spectrum.begin(), spectrum.end());
  dealias_in_place(grid, out);
  return out;
}

double linf(std::span<const double> values) { return max_abs(values); }

double l2(const Grid& grid, std::span<const double> values) {
  // Row partial sums keep the reduction order fixed regardless of threads.
  const int n = grid.n();
  std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = values[grid.index(i, k)];
      s += v * v;
    }
    rows[i] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return std::sqrt(grid.h() * grid.h() * total);
}

double linf(const ScalarField& f) { return linf(to_physical(f).values()); }

double l2(const ScalarField& f) { return l2(f.grid(), to_physical(f).values()); }

VelocityStats velocity_stats(const Grid& grid, std::span<const double> spectrum) {
  const auto psi = stream_modes(grid, spectrum);
  const auto u1 = synth(grid, scale_modes(grid, psi, 0, 1, -1.0), Parity::odd, Parity::even);
  const auto u2 = synth(grid, scale_modes(grid, psi, 1, 0, 1.0), Parity::even, Parity::odd);
  const auto a = synth(grid, scale_modes(grid, psi, 1, 1, -1.0), Parity::even, Parity::even);
  const auto b = synth(grid, scale_modes(grid, psi, 0, 2, 1.0), Parity::odd, Parity::odd);
  const auto c = synth(grid, scale_modes(grid, psi, 2, 0, -1.0), Parity::odd, Parity::odd);
  VelocityStats stats;
  double speed = 0.0;
  double grad = 0.0;
#pragma omp parallel for reduction(max : speed, grad) schedule(static)
  for (std::size_t i = 0; i < u1.size(); ++i) {
    speed = std::max(speed, std::hypot(u1[i], u2[i]));
    // grad u = [[a, b], [c, -a]]; largest singular value of a traceless 2x2.
    const double fro2 = 2.0 * a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
    const double det = -a[i] * a[i] - b[i] * c[i];
    const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
    grad = std::max(grad, std::sqrt(0.5 * (fro2 + std::sqrt(disc))));
  }
  stats.max_speed = speed;
  stats.max_grad_u = grad;
  return stats;
}

double max_gradient_norm(const Grid& grid, std::span<const double> spectrum) {
  const auto a = pad_spectrum(grid, spectrum);
  const auto d1 = synth(grid, scale_modes(grid, a, 1, 0, 1.0), Parity::even, Parity::odd);
  const auto d2 = synth(grid, scale_modes(grid, a, 0, 1, 1.0), Parity::odd, Parity::even);
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::size_t i = 0; i < d1.size(); ++i) m = std::max(m, std::hypot(d1[i], d2[i]));
  return m;
}

}  // namespace egl
