#include "egl/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace egl {

namespace {

constexpr double pi = std::numbers::pi;

struct Trig {
  std::vector<double> s, c;
};

Trig trig(int m, double x) {
  Trig t{std::vector<double>(m), std::vector<double>(m)};
  for (int j = 1; j <= m; ++j) {
    t.s[j - 1] = std::sin(j * pi * x);
    t.c[j - 1] = std::cos(j * pi * x);
  }
  return t;
}

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 axpy(const Mat2& y, double a, const Mat2& x) {
  return {y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2], y[3] + a * x[3]};
}

Point axpy(const Point& y, double a, const Point& x) { return {y[0] + a * x[0], y[1] + a * x[1]}; }

}  // namespace

FlowSample flow_at(const Grid& grid, std::span<const double> spectrum, Point x) {
  const int m = grid.modes();
  const Trig t1 = trig(m, x[0]);
  const Trig t2 = trig(m, x[1]);
  // psi_jk = a_jk / (pi^2 (j^2 + k^2)); each sum is taken row by row in j.
  double u1 = 0.0, u2 = 0.0, g11 = 0.0, g12 = 0.0, g21 = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double* row = spectrum.data() + static_cast<std::size_t>(j - 1) * m;
    double ksc = 0.0, ss = 0.0, kkss = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double psi = row[k - 1] / (pi * pi * static_cast<double>(j * j + k * k));
      const double kp = k * pi;
      ksc += psi * kp * t2.c[k - 1];
      ss += psi * t2.s[k - 1];
      kkss += psi * kp * kp * t2.s[k - 1];
    }
    const double jp = j * pi;
    u1 -= t1.s[j - 1] * ksc;
    u2 += jp * t1.c[j - 1] * ss;
    g11 -= jp * t1.c[j - 1] * ksc;
    g12 += t1.s[j - 1] * kkss;
    g21 -= jp * jp * t1.s[j - 1] * ss;
  }
  FlowSample out;
  out.u = {u1, u2};
  out.grad = {g11, g12, g21, -g11};
  return out;
}

Point vorticity_gradient_at(const Grid& grid, std::span<const double> spectrum, Point x) {
  const int m = grid.modes();
  const Trig t1 = trig(m, x[0]);
  const Trig t2 = trig(m, x[1]);
  double d1 = 0.0, d2 = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double* row = spectrum.data() + static_cast<std::size_t>(j - 1) * m;
    double s = 0.0, kc = 0.0;
    for (int k = 1; k <= m; ++k) {
      s += row[k - 1] * t2.s[k - 1];
      kc += row[k - 1] * k * pi * t2.c[k - 1];
    }
    d1 += j * pi * t1.c[j - 1] * s;
    d2 += t1.s[j - 1] * kc;
  }
  return {d1, d2};
}

Point velocity_at(const Grid& grid, std::span<const double> spectrum, Point x) {
  return flow_at(grid, spectrum, x).u;
}

Point velocity_at(const ScalarField& omega, Point x) {
  return velocity_at(omega.grid(), omega.spectrum(), x);
}

FlowFn interpolated_flow(const Grid& grid, double t0, std::vector<double> a0, double t1,
                         std::vector<double> a1) {
  return [grid, t0, t1, a0 = std::move(a0), a1 = std::move(a1)](double t, Point x) {
    const FlowSample f0 = flow_at(grid, a0, x);
    if (t1 == t0) return f0;
    const FlowSample f1 = flow_at(grid, a1, x);
    const double th = (t - t0) / (t1 - t0);
    FlowSample f;
    for (int i = 0; i < 2; ++i) f.u[i] = (1.0 - th) * f0.u[i] + th * f1.u[i];
    for (int i = 0; i < 4; ++i) f.grad[i] = (1.0 - th) * f0.grad[i] + th * f1.grad[i];
    return f;
  };
}

Tracer Tracer::at(Point alpha, double t0) {
  Tracer tr;
  tr.alpha = alpha;
  tr.x = alpha;
  tr.history.push_back({t0, alpha[0], alpha[1], 1.0});
  return tr;
}

void rk4_flow_step(Point& x, Mat2& jacobian, const FlowFn& flow, double t, double dt) {
  auto rate = [&](double tt, const Point& p, const Mat2& j) {
    const FlowSample f = flow(tt, p);
    return std::pair{f.u, mul(f.grad, j)};
  };
  const auto [v1, m1] = rate(t, x, jacobian);
  const auto [v2, m2] = rate(t + 0.5 * dt, axpy(x, 0.5 * dt, v1), axpy(jacobian, 0.5 * dt, m1));
  const auto [v3, m3] = rate(t + 0.5 * dt, axpy(x, 0.5 * dt, v2), axpy(jacobian, 0.5 * dt, m2));
  const auto [v4, m4] = rate(t + dt, axpy(x, dt, v3), axpy(jacobian, dt, m3));
  for (int i = 0; i < 2; ++i) x[i] += dt / 6.0 * (v1[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
  for (int i = 0; i < 4; ++i) {
    jacobian[i] += dt / 6.0 * (m1[i] + 2.0 * m2[i] + 2.0 * m3[i] + m4[i]);
  }
}

void advance_tracer(Tracer& tracer, const FlowFn& flow, double dt) {
  if (tracer.history.empty()) throw std::logic_error("tracer has no start time");
  const double t = tracer.history.back().t;
  rk4_flow_step(tracer.x, tracer.jacobian, flow, t, dt);
  tracer.history.push_back({t + dt, tracer.x[0], tracer.x[1], det(tracer.jacobian)});
}

SnapshotStore::SnapshotStore(const Grid& grid, double dense_until, int thin_every)
    : grid_(grid), dense_until_(dense_until), thin_every_(thin_every) {
  if (thin_every < 1) throw std::invalid_argument("thin_every must be >= 1");
}

bool SnapshotStore::offer(double t, std::span<const double> spectrum) {
  const std::int64_t index = offered_++;
  if (t > dense_until_ && index % thin_every_ != 0) return false;
  force(t, spectrum);
  return true;
}

void SnapshotStore::force(double t, std::span<const double> spectrum) {
  if (!snaps_.empty() && !(t > snaps_.back().t)) {
    if (t == snaps_.back().t) return;
    throw std::invalid_argument("snapshot times must increase");
  }
  snaps_.push_back({t, std::vector<double>(spectrum.begin(), spectrum.end())});
}

bool SnapshotStore::covers(double ta, double tb) const {
  if (snaps_.empty()) return false;
  return snaps_.front().t <= std::min(ta, tb) && snaps_.back().t >= std::max(ta, tb);
}

FlowSample SnapshotStore::sample(double t, Point x) const {
  // Stage times computed as t + dt can miss the end snapshots by an ulp.
  if (!snaps_.empty()) {
    const double slack = 1e-12 * (1.0 + std::abs(snaps_.back().t));
    if (t < snaps_.front().t && t > snaps_.front().t - slack) t = snaps_.front().t;
    if (t > snaps_.back().t && t < snaps_.back().t + slack) t = snaps_.back().t;
  }
  if (!covers(t, t)) {
    std::ostringstream msg;
    msg << "no velocity snapshot covers t = " << t;
    throw CoverageError(msg.str());
  }
  auto hi = std::lower_bound(snaps_.begin(), snaps_.end(), t,
                             [](const Snapshot& s, double v) { return s.t < v; });
  if (hi->t == t) return flow_at(grid_, hi->spectrum, x);
  const auto lo = hi - 1;
  const FlowSample f0 = flow_at(grid_, lo->spectrum, x);
  const FlowSample f1 = flow_at(grid_, hi->spectrum, x);
  const double th = (t - lo->t) / (hi->t - lo->t);
  FlowSample f;
  for (int i = 0; i < 2; ++i) f.u[i] = (1.0 - th) * f0.u[i] + th * f1.u[i];
  for (int i = 0; i < 4; ++i) f.grad[i] = (1.0 - th) * f0.grad[i] + th * f1.grad[i];
  return f;
}

FlowFn SnapshotStore::flow() const {
  return [this](double t, Point x) { return sample(t, x); };
}

std::vector<double> SnapshotStore::times_between(double ta, double tb) const {
  std::vector<double> out;
  for (const auto& s : snaps_) {
    if (s.t > ta && s.t < tb) out.push_back(s.t);
  }
  return out;
}

Backtrack backtrack(Point x, double t_from, double t_to, const SnapshotStore& store,
                    int substeps) {
  if (t_to > t_from) throw std::invalid_argument("backtrack needs t_to <= t_from");
  if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  Backtrack out{x, identity2};
  if (t_from == t_to) return out;
  if (!store.covers(t_to, t_from)) {
    std::ostringstream msg;
    msg << "snapshots do not cover [" << t_to << ", " << t_from << "]";
    throw CoverageError(msg.str());
  }
  std::vector<double> marks{t_from};
  const auto inner = store.times_between(t_to, t_from);
  marks.insert(marks.end(), inner.rbegin(), inner.rend());
  marks.push_back(t_to);
  // Running time downward is the same ODE with a negative step.
  const FlowFn flow = store.flow();
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    const double span = marks[i + 1] - marks[i];
    for (int k = 0; k < substeps; ++k) {
      const double t = marks[i] + span * k / substeps;
      const double dt = k + 1 == substeps ? marks[i + 1] - t : span / substeps;
      rk4_flow_step(out.origin, out.jacobian, flow, t, dt);
    }
  }
  return out;
}

Point gradient_via_backtracking(Point x, double t, const SnapshotStore& store,
                                const std::function<Point(Point)>& grad_omega0,
                                int substeps) {
  const Backtrack b = backtrack(x, t, 0.0, store, substeps);
  const Point g = grad_omega0(b.origin);
  const Mat2& j = b.jacobian;
  return {j[0] * g[0] + j[2] * g[1], j[1] * g[0] + j[3] * g[1]};
}

Point gradient_via_backtracking(Point x, double t, const SnapshotStore& store,
                                const Omega0Spec& spec, int substeps) {
  return gradient_via_backtracking(
      x, t, store, [&spec](Point p) { return eval_grad_omega0(p, spec); }, substeps);
}

}  // namespace egl
