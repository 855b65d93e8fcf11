#include "egl/omega0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "egl/spectral.hpp"

namespace egl {

namespace {

constexpr double root2 = std::numbers::sqrt2;
constexpr double tol = 1e-12;

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double smoothstep_slope(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Ramp for x in [0,1]: value and derivative.
std::pair<double, double> ramp(double x, double delta) {
  if (x < delta) return {smoothstep(x / delta), smoothstep_slope(x / delta) / delta};
  if (x > 1.0 - delta) {
    const double t = (1.0 - x) / delta;
    return {smoothstep(t), -smoothstep_slope(t) / delta};
  }
  return {1.0, 0.0};
}

double wrap(double x) { return x - 2.0 * std::floor((x + 1.0) / 2.0); }

struct Local {
  double value;
  double d1;
  double d2;
};

// Value and gradient on the closed quadrant a1, a2 >= 0 (a <= 1).
Local quadrant_eval(double a1, double a2, const Omega0Spec& spec) {
  const auto [f1, df1] = ramp(a1, spec.delta);
  const auto [f2, df2] = ramp(a2, spec.delta);
  const double r = std::hypot(a1, a2);
  if (r >= spec.outer_radius) return {f1 * f2, df1 * f2, f1 * df2};
  if (r == 0.0) return {0.0, 0.0, 0.0};

  const double rho = r / root2;
  const double log_rho = std::log(rho);
  const double ell = std::log(-log_rho);
  const double g = root2 / (r * ell);
  const double dg = -root2 / (r * r * ell) * (1.0 + 1.0 / (ell * log_rho));
  const double polar = a1 * a2 * g;
  const double polar_d1 = a2 * g + a1 * a2 * dg * a1 / r;
  const double polar_d2 = a1 * g + a1 * a2 * dg * a2 / r;
  if (r <= spec.inner_radius) return {polar, polar_d1, polar_d2};

  const double width = spec.outer_radius - spec.inner_radius;
  const double t = (r - spec.inner_radius) / width;
  const double chi = 1.0 - smoothstep(t);
  const double dchi = -smoothstep_slope(t) / width;
  const double outer = f1 * f2;
  const double diff = polar - outer;
  return {chi * polar + (1.0 - chi) * outer,
          chi * polar_d1 + (1.0 - chi) * df1 * f2 + dchi * a1 / r * diff,
          chi * polar_d2 + (1.0 - chi) * f1 * df2 + dchi * a2 / r * diff};
}

}  // namespace

Omega0Spec make_omega0_spec(double delta) {
  if (!(delta > 0.0 && delta < 0.25)) {
    throw std::invalid_argument("delta must lie in (0, 1/4)");
  }
  // Diagonal points (s, s) with s <= delta/2 sit at r <= delta/sqrt2 ~ 0.7071 delta;
  // the plateau corner (delta, delta) sits at r = sqrt2 delta ~ 1.4142 delta.
  return {delta, 0.71 * delta, 1.4 * delta};
}

double omega0_diagonal(double s) {
  if (s == 0.0) return 0.0;
  return s / std::log(-std::log(s));
}

double eval_omega0_exact(Point x, const Omega0Spec& spec) {
  const double x1 = wrap(x[0]);
  const double x2 = wrap(x[1]);
  const double sign = (x1 < 0.0 ? -1.0 : 1.0) * (x2 < 0.0 ? -1.0 : 1.0);
  return sign * quadrant_eval(std::abs(x1), std::abs(x2), spec).value;
}

Point eval_grad_omega0(Point x, const Omega0Spec& spec) {
  const double x1 = wrap(x[0]);
  const double x2 = wrap(x[1]);
  const double s1 = x1 < 0.0 ? -1.0 : 1.0;
  const double s2 = x2 < 0.0 ? -1.0 : 1.0;
  const Local l = quadrant_eval(std::abs(x1), std::abs(x2), spec);
  return {s2 * l.d1, s1 * l.d2};
}

ScalarField build_omega0(const Omega0Spec& spec, const Grid& grid) {
  if (spec.delta < 8.0 * grid.h()) {
    std::ostringstream msg;
    msg << "delta = " << spec.delta << " is below 8h = " << 8.0 * grid.h() << " on an n = "
        << grid.n() << " grid; use a larger delta or grid (resolvable mode)";
    throw UnresolvedError(msg.str());
  }
  const int n = grid.n();
  std::vector<double> values(grid.size());
  double max_grad = 0.0;
#pragma omp parallel for reduction(max : max_grad) schedule(static)
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const Point x{grid.node(i1), grid.node(i2)};
      values[grid.index(i1, i2)] = eval_omega0_exact(x, spec);
      const Point g = eval_grad_omega0(x, spec);
      max_grad = std::max(max_grad, std::hypot(g[0], g[1]));
    }
  }
  if (max_grad > 20.0 / spec.delta) {
    std::ostringstream msg;
    msg << "blend gradient " << max_grad << " exceeds 20/delta = " << 20.0 / spec.delta;
    throw ConstraintError(msg.str());
  }
  return to_spectral(ScalarField::from_values(grid, std::move(values)));
}

bool ConstraintReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ConstraintCheck* ConstraintReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ConstraintCheck* ConstraintReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

ConstraintReport verify_constraints(const ScalarField& field, const Omega0Spec& spec) {
  const ScalarField f = field.has_values() ? field : to_physical(field);
  const Grid& grid = f.grid();
  if (spec.delta < 8.0 * grid.h()) {
    throw UnresolvedError("verify_constraints needs delta >= 8h");
  }
  const int q = grid.quadrant_size();
  const double h = grid.h();
  const auto quad = quadrant_from_full(grid, f.values(), Parity::odd, Parity::odd);
  auto at = [&](int m1, int m2) { return quad[static_cast<std::size_t>(m1) * q + m2]; };

  ConstraintReport report;

  double range_violation = 0.0;
  double plateau_dev = 0.0;
  for (int m1 = 0; m1 < q; ++m1) {
    for (int m2 = 0; m2 < q; ++m2) {
      const double v = at(m1, m2);
      range_violation = std::max({range_violation, -v, v - 1.0});
      const double x1 = m1 * h;
      const double x2 = m2 * h;
      if (x1 >= spec.delta && x1 <= 1.0 - spec.delta && x2 >= spec.delta &&
          x2 <= 1.0 - spec.delta) {
        plateau_dev = std::max(plateau_dev, std::abs(v - 1.0));
      }
    }
  }
  report.checks.push_back({"range", range_violation <= tol, std::max(0.0, range_violation), tol});
  report.checks.push_back({"plateau", plateau_dev <= tol, plateau_dev, tol});

  const double odd = oddness_residual(grid, f.values());
  report.checks.push_back({"oddness", odd <= tol, odd, tol});

  double diag_dev = 0.0;
  for (int m = 0; m < q && m * h <= spec.delta / 2.0; ++m) {
    diag_dev = std::max(diag_dev, std::abs(at(m, m) - omega0_diagonal(m * h)));
  }
  report.checks.push_back({"diagonal", diag_dev <= tol, diag_dev, tol});

  const double limit = 20.0 / spec.delta;
  double grad = std::numeric_limits<double>::infinity();
  if (odd <= 1e-10 * std::max(1.0, linf(f.values()))) {
    grad = max_gradient_norm(grid, to_spectral(f).spectrum());
  }
  report.checks.push_back({"gradient", grad <= limit, grad, limit});
  return report;
}

}  // namespace egl
