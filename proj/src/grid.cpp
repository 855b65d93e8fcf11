#include "egl/grid.hpp"

#include <stdexcept>
#include <string>

namespace egl {

Grid::Grid(int n) : n_(n), h_(2.0 / n) {
  if (n < 32 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid size must be a power of two >= 32, got " +
                                std::to_string(n));
  }
}

Grid make_grid(int n) { return Grid(n); }

}  // namespace egl
