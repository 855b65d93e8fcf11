#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "egl/grid.hpp"

namespace egl {

/// Grid function in the odd-odd class, held as physical samples, as sine-sine
/// coefficients, or both.
///
/// Physical samples cover the full n x n grid, row-major with x1 as the slow
/// index. The spectrum holds a_{jk} for sin(j pi x1) sin(k pi x2) with
/// j, k = 1 .. M (M = n/2 - 1), j-major. With this normalization the discrete
/// Parseval identity reads h^2 sum f^2 = sum a_{jk}^2.
class ScalarField {
 public:
  static ScalarField from_values(const Grid& grid, std::vector<double> values);
  static ScalarField from_spectrum(const Grid& grid, std::vector<double> spectrum);
  static ScalarField zero(const Grid& grid);

  const Grid& grid() const { return grid_; }
  bool has_values() const { return values_.has_value(); }
  bool has_spectrum() const { return spectrum_.has_value(); }

  std::span<const double> values() const;
  std::span<const double> spectrum() const;

  double value(int i1, int i2) const { return values()[grid_.index(i1, i2)]; }
  /// Coefficient of sin(j pi x1) sin(k pi x2), 1-based.
  double coeff(int j, int k) const {
    const int m = grid_.modes();
    return spectrum()[static_cast<std::size_t>(j - 1) * m + (k - 1)];
  }

  ScalarField with_values(std::vector<double> values) const;
  ScalarField with_spectrum(std::vector<double> spectrum) const;

 private:
  explicit ScalarField(const Grid& grid) : grid_(grid) {}

  Grid grid_;
  std::optional<std::vector<double>> values_;
  std::optional<std::vector<double>> spectrum_;
};

/// Velocity samples on the full grid, same layout as ScalarField values.
struct VectorField {
  Grid grid;
  std::vector<double> u1;
  std::vector<double> u2;
};

class SymmetryError : public std::runtime_error {
 public:
  SymmetryError(const std::string& what, double violation)
      : std::runtime_error(what), violation_(violation) {}
  double violation() const { return violation_; }

 private:
  double violation_;
};

}  // namespace egl
