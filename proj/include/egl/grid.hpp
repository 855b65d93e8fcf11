#pragma once

#include <cstddef>

namespace egl {

/// Uniform periodic grid on the square [-1,1)^2 with n points per side.
///
/// Node i sits at x_i = -1 + i*h, so index n/2 is the origin. Fields on this
/// grid are odd in both variables, which means only the closed quadrant
/// [0,1]^2 (nodes n/2 .. n, the last one aliasing x = -1) carries independent
/// data. `modes()` is the number of sine modes the grid resolves per axis.
class Grid {
 public:
  explicit Grid(int n);

  int n() const { return n_; }
  double h() const { return h_; }
  double node(int i) const { return -1.0 + i * h_; }
  int origin_index() const { return n_ / 2; }

  /// Resolved sine modes per axis: j = 1 .. n/2 - 1.
  int modes() const { return n_ / 2 - 1; }
  /// Quadrant nodes per axis, m = 0 .. n/2 (x = m*h in [0,1]).
  int quadrant_size() const { return n_ / 2 + 1; }

  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * n_ + i2;
  }

  /// Highest mode kept by the 2/3 truncation rule.
  int dealias_cutoff() const { return n_ / 3; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }

 private:
  int n_;
  double h_;
};

/// Validating constructor; throws std::invalid_argument unless n is a power
/// of two and at least 32.
Grid make_grid(int n);

}  // namespace egl
