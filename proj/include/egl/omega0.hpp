#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "egl/field.hpp"

namespace egl {

using Point = std::array<double, 2>;

/// Initial vorticity with a double-logarithmic modulus at the origin.
///
/// On the closed first quadrant:
///   - r <= inner_radius: w = sqrt2 x1 x2 / (r log(-log(r/sqrt2))), which is
///     x1 x2-shaped and equals s / log(-log s) at the diagonal point (s, s);
///   - r >= outer_radius: w = phi(x1) phi(x2) with phi a quintic ramp from 0
///     to 1 over [0, delta], flat up to 1 - delta, and mirrored back to 0 at 1;
///   - in between, a radial quintic cut blends the two.
/// The field is extended to [-1,1]^2 as an odd function of each variable.
struct Omega0Spec {
  double delta = 0.1;
  double inner_radius = 0.071;  // covers the diagonal up to s = delta/2
  double outer_radius = 0.14;   // stays inside the corner of [delta, 1-delta]^2
};

/// Throws std::invalid_argument unless 0 < delta < 1/4.
Omega0Spec make_omega0_spec(double delta);

/// s / log(-log s) for s in [0, 1/e); 0 at s = 0.
double omega0_diagonal(double s);

/// Pointwise value; any point is wrapped into the periodic cell first.
double eval_omega0_exact(Point x, const Omega0Spec& spec);
/// Closed-form gradient of eval_omega0_exact.
Point eval_grad_omega0(Point x, const Omega0Spec& spec);

class UnresolvedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Samples omega0 on the grid (values and spectrum). Requires delta >= 8h;
/// throws UnresolvedError otherwise, and ConstraintError if the node-wise
/// gradient exceeds 20/delta.
ScalarField build_omega0(const Omega0Spec& spec, const Grid& grid);

struct ConstraintCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // violation, deviation or norm, see name
  double limit = 0.0;
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;

  bool all_passed() const;
  const ConstraintCheck* find(const std::string& name) const;
  const ConstraintCheck* first_failure() const;
};

/// The five requirements on the initial vorticity, measured at grid nodes:
/// "range" (0 <= w <= 1 on [0,1]^2), "plateau" (w = 1 on [delta, 1-delta]^2),
/// "oddness", "diagonal" (w(s,s) = s/log(-log s) for s <= delta/2), and
/// "gradient" (spectral max |grad w| <= 20/delta).
ConstraintReport verify_constraints(const ScalarField& field, const Omega0Spec& spec);

}  // namespace egl
