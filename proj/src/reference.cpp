#include "egl/reference.hpp"

#include <cmath>
#include <numbers>

namespace egl::ref {

namespace {

constexpr double pi = std::numbers::pi;

// basis[m*q + j] = sin or cos of (pi j m / (q-1)); odd axes zero j = 0, q-1.
std::vector<double> basis(int q, Parity p) {
  std::vector<double> b(static_cast<std::size_t>(q) * q, 0.0);
  for (int m = 0; m < q; ++m) {
    for (int j = 0; j < q; ++j) {
      const double arg = pi * j * m / (q - 1);
      if (p == Parity::odd) {
        if (j > 0 && j < q - 1) b[static_cast<std::size_t>(m) * q + j] = std::sin(arg);
      } else {
        b[static_cast<std::size_t>(m) * q + j] = std::cos(arg);
      }
    }
  }
  return b;
}

// Analysis weights w[j*q + m] such that c_j = sum_m w[j,m] f_m.
std::vector<double> inverse_basis(int q, Parity p) {
  const int big_n = q - 1;
  std::vector<double> w(static_cast<std::size_t>(q) * q, 0.0);
  for (int j = 0; j < q; ++j) {
    for (int m = 0; m < q; ++m) {
      const double arg = pi * j * m / big_n;
      double v;
      if (p == Parity::odd) {
        v = (j > 0 && j < big_n && m > 0 && m < big_n) ? 2.0 / big_n * std::sin(arg) : 0.0;
      } else {
        const double end_m = (m == 0 || m == big_n) ? 0.5 : 1.0;
        const double end_j = (j == 0 || j == big_n) ? 1.0 : 2.0;
        v = end_j * end_m / big_n * std::cos(arg);
      }
      w[static_cast<std::size_t>(j) * q + m] = v;
    }
  }
  return w;
}

// out[a1, a2] = sum_{b1, b2} t1[a1, b1] t2[a2, b2] in[b1, b2]
void apply(int q, const std::vector<double>& t1, const std::vector<double>& t2,
           std::span<const double> in, std::span<double> out) {
  std::vector<double> tmp(static_cast<std::size_t>(q) * q, 0.0);
  for (int b1 = 0; b1 < q; ++b1) {
    for (int a2 = 0; a2 < q; ++a2) {
      double s = 0.0;
      for (int b2 = 0; b2 < q; ++b2) {
        s += t2[static_cast<std::size_t>(a2) * q + b2] * in[static_cast<std::size_t>(b1) * q + b2];
      }
      tmp[static_cast<std::size_t>(b1) * q + a2] = s;
    }
  }
  for (int a1 = 0; a1 < q; ++a1) {
    for (int a2 = 0; a2 < q; ++a2) {
      double s = 0.0;
      for (int b1 = 0; b1 < q; ++b1) {
        s += t1[static_cast<std::size_t>(a1) * q + b1] * tmp[static_cast<std::size_t>(b1) * q + a2];
      }
      out[static_cast<std::size_t>(a1) * q + a2] = s;
    }
  }
}

}  // namespace

void synthesize(const Grid& grid, std::span<const double> coeff, Parity p1, Parity p2,
                std::span<double> samples) {
  const int q = grid.quadrant_size();
  apply(q, basis(q, p1), basis(q, p2), coeff, samples);
}

void analyze(const Grid& grid, std::span<const double> samples, Parity p1, Parity p2,
             std::span<double> coeff) {
  const int q = grid.quadrant_size();
  apply(q, inverse_basis(q, p1), inverse_basis(q, p2), samples, coeff);
}

std::vector<double> advection_rhs(const Grid& grid, std::span<const double> spectrum) {
  const int q = grid.quadrant_size();
  const int m = grid.modes();
  const std::size_t size = static_cast<std::size_t>(q) * q;
  std::vector<double> u1m(size, 0.0), u2m(size, 0.0), w1m(size, 0.0), w2m(size, 0.0);
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      const double a = spectrum[static_cast<std::size_t>(j - 1) * m + (k - 1)];
      const double psi = a / (pi * pi * (j * j + k * k));
      const std::size_t i = static_cast<std::size_t>(j) * q + k;
      u1m[i] = -k * pi * psi;
      u2m[i] = j * pi * psi;
      w1m[i] = j * pi * a;
      w2m[i] = k * pi * a;
    }
  }
  std::vector<double> u1(size), u2(size), w1(size), w2(size), prod(size, 0.0), out(size);
  synthesize(grid, u1m, Parity::odd, Parity::even, u1);
  synthesize(grid, u2m, Parity::even, Parity::odd, u2);
  synthesize(grid, w1m, Parity::even, Parity::odd, w1);
  synthesize(grid, w2m, Parity::odd, Parity::even, w2);
  for (std::size_t i = 0; i < size; ++i) prod[i] = -(u1[i] * w1[i] + u2[i] * w2[i]);
  analyze(grid, prod, Parity::odd, Parity::odd, out);
  std::vector<double> rhs(static_cast<std::size_t>(m) * m, 0.0);
  const int cut = grid.dealias_cutoff();
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      if (j <= cut && k <= cut) {
        rhs[static_cast<std::size_t>(j - 1) * m + (k - 1)] =
            out[static_cast<std::size_t>(j) * q + k];
      }
    }
  }
  return rhs;
}

std::array<double, 2> velocity_at(const Grid& grid, std::span<const double> spectrum,
                                  std::array<double, 2> x) {
  const int m = grid.modes();
  double u1 = 0.0;
  double u2 = 0.0;
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      const double a = spectrum[static_cast<std::size_t>(j - 1) * m + (k - 1)];
      const double psi = a / (pi * pi * (j * j + k * k));
      u1 += -k * pi * psi * std::sin(j * pi * x[0]) * std::cos(k * pi * x[1]);
      u2 += j * pi * psi * std::cos(j * pi * x[0]) * std::sin(k * pi * x[1]);
    }
  }
  return {u1, u2};
}

}  // namespace egl::ref
