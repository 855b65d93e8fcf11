#include "egl/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "egl/spectral.hpp"

namespace egl {

namespace {

constexpr double pi = std::numbers::pi;

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

const Rule& gauss8() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, 8>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
      if (a[i] != 0.0) {
        r.x.push_back(-a[i]);
        r.w.push_back(w[i]);
      }
    }
    return r;
  }();
  return rule;
}

bool in_lemma_square(Point x) {
  return x[0] > 0.0 && x[0] < 0.5 && x[1] > 0.0 && x[1] < 0.5;
}

// Integral of y1 y2 / |y|^4 * bilinear over [l1,r1] x [l2,r2], a piece of the
// cell with lower-left node (y01, y02) and corner values f00 .. f11.
double cell_piece(double l1, double r1, double l2, double r2, double y01, double y02, double h,
                  double f00, double f01, double f10, double f11) {
  const Rule& g = gauss8();
  const double c1 = 0.5 * (l1 + r1), s1 = 0.5 * (r1 - l1);
  const double c2 = 0.5 * (l2 + r2), s2 = 0.5 * (r2 - l2);
  double total = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double y1 = c1 + s1 * g.x[i];
    const double t1 = (y1 - y01) / h;
    double inner = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double y2 = c2 + s2 * g.x[k];
      const double t2 = (y2 - y02) / h;
      const double f = (1 - t1) * ((1 - t2) * f00 + t2 * f01) + t1 * ((1 - t2) * f10 + t2 * f11);
      const double r2sq = y1 * y1 + y2 * y2;
      inner += g.w[k] * y1 * y2 / (r2sq * r2sq) * f;
    }
    total += g.w[i] * inner;
  }
  return total * s1 * s2;
}

}  // namespace

double key_integral(const ScalarField& omega, Point x) {
  if (!in_lemma_square(x)) throw std::domain_error("key_integral needs x in (0, 1/2)^2");
  const ScalarField f = omega.has_values() ? omega : to_physical(omega);
  const Grid& grid = f.grid();
  const int q = grid.quadrant_size();
  const double h = grid.h();
  const auto quad = quadrant_from_full(grid, f.values(), Parity::odd, Parity::odd);
  const double a1 = 2.0 * x[0];
  const double a2 = 2.0 * x[1];
  const int c1_lo = std::min(static_cast<int>(std::floor(a1 / h)), q - 2);
  const int c2_lo = std::min(static_cast<int>(std::floor(a2 / h)), q - 2);
  const int split = 4;
  std::vector<double> rows(q - 1, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (int c1 = c1_lo; c1 < q - 1; ++c1) {
    const double y01 = c1 * h;
    const double l1 = std::max(a1, y01), r1 = (c1 + 1) * h;
    double row = 0.0;
    if (r1 > l1) {
      for (int c2 = c2_lo; c2 < q - 1; ++c2) {
        const double y02 = c2 * h;
        const double l2 = std::max(a2, y02), r2 = (c2 + 1) * h;
        if (!(r2 > l2)) continue;
        const double f00 = quad[static_cast<std::size_t>(c1) * q + c2];
        const double f01 = quad[static_cast<std::size_t>(c1) * q + c2 + 1];
        const double f10 = quad[static_cast<std::size_t>(c1 + 1) * q + c2];
        const double f11 = quad[static_cast<std::size_t>(c1 + 1) * q + c2 + 1];
        const bool near = std::hypot(l1 - a1, l2 - a2) < 4.0 * h;
        if (!near) {
          row += cell_piece(l1, r1, l2, r2, y01, y02, h, f00, f01, f10, f11);
          continue;
        }
        const double d1 = (r1 - l1) / split, d2 = (r2 - l2) / split;
        for (int i = 0; i < split; ++i) {
          for (int k = 0; k < split; ++k) {
            row += cell_piece(l1 + i * d1, l1 + (i + 1) * d1, l2 + k * d2, l2 + (k + 1) * d2,
                              y01, y02, h, f00, f01, f10, f11);
          }
        }
      }
    }
    rows[c1] = row;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return 4.0 / pi * total;
}

BResiduals b_residuals(const ScalarField& omega, Point x) {
  if (!in_lemma_square(x)) throw std::domain_error("b_residuals needs x in (0, 1/2)^2");
  const double h = omega.grid().h();
  if (!(x[0] > h && x[1] > h)) {
    std::ostringstream msg;
    msg << "b_residuals: x = (" << x[0] << ", " << x[1] << ") is within h = " << h
        << " of an axis";
    throw std::domain_error(msg.str());
  }
  const ScalarField s = to_spectral(omega);
  const Point u = velocity_at(s, x);
  BResiduals b;
  b.I = key_integral(s, x);
  b.B1 = -u[0] / x[0] - b.I;
  b.B2 = u[1] / x[1] - b.I;
  return b;
}

double c3_estimate(const BResiduals& b, Point x, double sup_grad_omega, double sup_omega) {
  double branch = std::log1p(x[1] / x[0]);
  if (sup_omega > 0.0) branch = std::min(branch, x[1] * sup_grad_omega / sup_omega);
  return std::abs(b.B1) / (1.0 + branch);
}

double sup_grad(const ScalarField& omega) {
  const ScalarField s = to_spectral(omega);
  return max_gradient_norm(s.grid(), s.spectrum());
}

double growth_quotient_log(double log_s, double x1) {
  if (!(x1 > 0.0)) throw std::domain_error("growth quotient needs X1 > 0");
  return log_s - std::log(std::log(-log_s)) - std::log(x1);
}

double growth_quotient_log(const Tracer& tracer, const Omega0Spec& spec) {
  if (!(tracer.x[0] > 0.0)) throw std::domain_error("growth quotient needs X1 > 0");
  return std::log(eval_omega0_exact(tracer.alpha, spec)) - std::log(tracer.x[0]);
}

GrowthFit fit_exponential(std::span<const std::pair<double, double>> series, double t_a,
                          double t_b) {
  if (!(t_b > t_a)) throw std::invalid_argument("fit window needs t_b > t_a");
  std::vector<double> ts, ys;
  for (const auto& [t, v] : series) {
    if (t < t_a || t > t_b) continue;
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "nonpositive value " << v << " at t = " << t;
      throw std::invalid_argument(msg.str());
    }
    ts.push_back(t);
    ys.push_back(std::log(v));
  }
  const std::size_t n = ts.size();
  if (n < 3) throw std::invalid_argument("fit window holds fewer than three points");
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
  }
  if (!(stt > 0.0)) throw std::invalid_argument("fit window has a single time value");
  GrowthFit fit;
  fit.t_a = t_a;
  fit.t_b = t_b;
  fit.points = static_cast<int>(n);
  fit.rate = sty / stt;
  fit.intercept = ym - fit.rate * tm;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.rate * ts[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

double tail_fraction(const ScalarField& omega, bool dealias_on) {
  const ScalarField s = to_spectral(omega);
  const int m = s.grid().modes();
  const int band = dealias_on ? s.grid().dealias_cutoff() : m;
  const int edge = (2 * band) / 3;
  const auto a = s.spectrum();
  double tail = 0.0, total = 0.0;
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      const double v = a[static_cast<std::size_t>(j - 1) * m + (k - 1)];
      total += v * v;
      if (std::max(j, k) > edge) tail += v * v;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

double energy_norm(const ScalarField& omega) {
  const ScalarField s = to_spectral(omega);
  const int m = s.grid().modes();
  const auto a = s.spectrum();
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      const double v = a[static_cast<std::size_t>(j - 1) * m + (k - 1)];
      total += v * v / (pi * pi * static_cast<double>(j * j + k * k));
    }
  }
  return std::sqrt(total);
}

double enstrophy(const ScalarField& omega) {
  const ScalarField s = to_spectral(omega);
  const auto a = s.spectrum();
  double total = 0.0;
  for (double v : a) total += v * v;
  return total;
}

DiagnosticsRecord record(const SimState& state, const Tracer* tracer,
                         const RecordOptions& options) {
  const ScalarField& omega = state.omega;
  const Grid& grid = omega.grid();
  const ScalarField phys = to_physical(omega);
  DiagnosticsRecord r;
  r.t = state.t;
  r.linf_omega = linf(phys.values());
  r.l2_u = energy_norm(omega);
  r.enstrophy = enstrophy(omega);
  r.linf_grad_omega = max_gradient_norm(grid, omega.spectrum());
  r.int_grad_u = state.int_grad_u;
  r.tail = tail_fraction(omega, options.dealias);
  bool resolved_x = tracer == nullptr;
  if (tracer != nullptr) {
    const Point x = tracer->x;
    r.X1 = x[0];
    r.X2 = x[1];
    if (x[0] > 0.0) {
      const double log_s = options.log_s ? *options.log_s : std::log(tracer->alpha[0]);
      r.growth_quotient_log = growth_quotient_log(log_s, x[0]);
    }
    if (in_lemma_square(x) && x[0] > grid.h() && x[1] > grid.h()) {
      const BResiduals b = b_residuals(phys, x);
      r.I = b.I;
      r.B1 = b.B1;
      r.B2 = b.B2;
    }
    resolved_x = x[0] >= 2.0 * grid.h();
  }
  r.trusted = resolved_x && r.tail <= options.tail_limit;
  return r;
}

}  // namespace egl
