#include "egl/field.hpp"

#include <string>

namespace egl {

namespace {

std::size_t spectrum_size(const Grid& grid) {
  const auto m = static_cast<std::size_t>(grid.modes());
  return m * m;
}

}  // namespace

ScalarField ScalarField::from_values(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("value array has " + std::to_string(values.size()) +
                                " entries, grid needs " + std::to_string(grid.size()));
  }
  ScalarField f(grid);
  f.values_ = std::move(values);
  return f;
}

ScalarField ScalarField::from_spectrum(const Grid& grid, std::vector<double> spectrum) {
  if (spectrum.size() != spectrum_size(grid)) {
    throw std::invalid_argument("spectrum has " + std::to_string(spectrum.size()) +
                                " entries, grid needs " +
                                std::to_string(spectrum_size(grid)));
  }
  ScalarField f(grid);
  f.spectrum_ = std::move(spectrum);
  return f;
}

ScalarField ScalarField::zero(const Grid& grid) {
  ScalarField f(grid);
  f.values_ = std::vector<double>(grid.size(), 0.0);
  f.spectrum_ = std::vector<double>(spectrum_size(grid), 0.0);
  return f;
}

std::span<const double> ScalarField::values() const {
  if (!values_) throw std::logic_error("field has no physical samples");
  return *values_;
}

std::span<const double> ScalarField::spectrum() const {
  if (!spectrum_) throw std::logic_error("field has no sine-sine spectrum");
  return *spectrum_;
}

ScalarField ScalarField::with_values(std::vector<double> values) const {
  ScalarField f = from_values(grid_, std::move(values));
  f.spectrum_ = spectrum_;
  return f;
}

ScalarField ScalarField::with_spectrum(std::vector<double> spectrum) const {
  ScalarField f = from_spectrum(grid_, std::move(spectrum));
  f.values_ = values_;
  return f;
}

}  // namespace egl
