#pragma once

#include <memory>
#include <span>
#include <vector>

#include "egl/grid.hpp"

namespace egl {

/// Symmetry of a field along one axis: odd fields expand in sines, even
/// fields in cosines.
enum class Parity { odd, even };

inline Parity flip(Parity p) { return p == Parity::odd ? Parity::even : Parity::odd; }

/// q x q array (q = n/2 + 1) indexed [m1*q + m2]. Holds either samples at the
/// quadrant nodes x = (m1 h, m2 h) or amplitudes of the modes with
/// wavenumbers (m1 pi, m2 pi). Odd axes leave index 0 and q-1 at zero.
using QuadrantArray = std::vector<double>;

/// Fast transforms between quadrant samples and mode amplitudes, one axis at
/// a time: DST-I on odd axes, DCT-I on even axes. Line transforms run in
/// parallel across rows and columns; the object itself is immutable after
/// construction and safe to share between threads.
class QuadrantTransform {
 public:
  explicit QuadrantTransform(int n);
  ~QuadrantTransform();
  QuadrantTransform(const QuadrantTransform&) = delete;
  QuadrantTransform& operator=(const QuadrantTransform&) = delete;

  int n() const { return n_; }
  int q() const { return q_; }

  /// samples(m1,m2) = sum_{j,k} coeff(j,k) B1_j(m1 h) B2_k(m2 h), where B is
  /// sin(j pi x) on odd axes and cos(j pi x) on even axes.
  void synthesize(std::span<const double> coeff, Parity p1, Parity p2,
                  std::span<double> samples) const;
  /// Exact inverse of synthesize on the resolved modes.
  void analyze(std::span<const double> samples, Parity p1, Parity p2,
               std::span<double> coeff) const;

 private:
  struct Plans;

  void line(bool forward, Parity p, const double* in, double* out, double* work) const;

  int n_;
  int q_;
  std::unique_ptr<Plans> plans_;
};

/// Shared transform for grid size n; built once, then reused.
const QuadrantTransform& quadrant_transform(int n);

/// Embed a j-major M x M sine-sine spectrum into a q x q modal array.
QuadrantArray pad_spectrum(const Grid& grid, std::span<const double> spectrum);
/// Inverse of pad_spectrum; entries on the border rows/columns are dropped.
std::vector<double> crop_spectrum(const Grid& grid, std::span<const double> modal);

/// Read the closed quadrant [0,1]^2 out of full-grid samples. The x = 1 line
/// is taken from the x = -1 nodes through the parity reflection, i.e. as the
/// one-sided limit from inside the quadrant.
QuadrantArray quadrant_from_full(const Grid& grid, std::span<const double> values,
                                 Parity p1, Parity p2);
/// Extend quadrant samples to the full grid using the given parities.
std::vector<double> full_from_quadrant(const Grid& grid, std::span<const double> samples,
                                       Parity p1, Parity p2);

}  // namespace egl
