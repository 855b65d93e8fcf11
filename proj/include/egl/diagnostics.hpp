#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "egl/evolution.hpp"
#include "egl/field.hpp"
#include "egl/lagrangian.hpp"
#include "egl/omega0.hpp"

namespace egl {

/// (4/pi) * integral over [2 x1, 1] x [2 x2, 1] of y1 y2 / |y|^4 omega(y).
///
/// omega is replaced by the bilinear interpolant of its quadrant samples and
/// each grid cell clipped to the region is integrated with 8x8 Gauss-Legendre;
/// cells within 4h of the corner are split 4x4 first. Only the samples are
/// used, so fields without a sine spectrum (e.g. the odd extension of a
/// constant) are accepted. Throws std::domain_error unless x is in (0, 1/2)^2.
double key_integral(const ScalarField& omega, Point x);

struct BResiduals {
  double I = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
};

/// B1 = -u1(x)/x1 - I(x), B2 = u2(x)/x2 - I(x) with u evaluated off-grid.
/// Throws std::domain_error unless x is in (0, 1/2)^2 with x1, x2 > h.
BResiduals b_residuals(const ScalarField& omega, Point x);

/// |B1| / (1 + min{log(1 + x2/x1), x2 sup|grad w| / sup|w|}).
double c3_estimate(const BResiduals& b, Point x, double sup_grad_omega, double sup_omega);

/// Max over nodes of |grad omega|, spectral derivatives.
double sup_grad(const ScalarField& omega);

/// log(omega0(s,s)) - log(X1), with omega0(s,s) = s / log(-log s) given by log s.
/// Throws std::domain_error for X1 <= 0.
double growth_quotient_log(double log_s, double x1);
/// Same, with omega0 evaluated at the tracer's start point.
double growth_quotient_log(const Tracer& tracer, const Omega0Spec& spec);

struct GrowthFit {
  double t_a = 0.0;
  double t_b = 0.0;
  double rate = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// Least-squares line through (t, ln v) for t in [t_a, t_b]. Throws
/// std::invalid_argument for a degenerate window, fewer than three points or
/// a nonpositive value inside the window.
GrowthFit fit_exponential(std::span<const std::pair<double, double>> series, double t_a,
                          double t_b);

/// Fraction of enstrophy in modes with max(j, k) above two thirds of the
/// retained band (the 2/3-rule cutoff, or M without dealiasing).
double tail_fraction(const ScalarField& omega, bool dealias = true);

struct DiagnosticsRecord {
  double t = 0.0;
  double linf_omega = 0.0;
  double l2_u = 0.0;
  double enstrophy = 0.0;
  double linf_grad_omega = 0.0;
  std::optional<double> X1, X2;
  std::optional<double> I, B1, B2;
  std::optional<double> growth_quotient_log;
  double int_grad_u = 0.0;
  double tail = 0.0;
  bool trusted = false;
};

struct RecordOptions {
  bool dealias = true;
  double tail_limit = 1e-4;
  /// log s for the growth quotient; taken from the tracer start when unset.
  std::optional<double> log_s;
};

/// Everything for one snapshot. I/B are left empty when the tracer is not in
/// (0, 1/2)^2 with both coordinates above h. Untrusted when X1 < 2h or the
/// spectral tail exceeds tail_limit.
DiagnosticsRecord record(const SimState& state, const Tracer* tracer,
                         const RecordOptions& options = {});

/// Energy norm sqrt(integral |u|^2) and enstrophy integral omega^2 from the spectrum.
double energy_norm(const ScalarField& omega);
double enstrophy(const ScalarField& omega);

}  // namespace egl
