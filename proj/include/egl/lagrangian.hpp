#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "egl/field.hpp"
#include "egl/omega0.hpp"

namespace egl {

/// Row-major 2x2 matrix: {m11, m12, m21, m22}.
using Mat2 = std::array<double, 4>;

inline constexpr Mat2 identity2{1.0, 0.0, 0.0, 1.0};

inline double det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

/// Velocity and its gradient at a point; grad[i*2 + j] = d_j u_i.
struct FlowSample {
  Point u{0.0, 0.0};
  Mat2 grad{0.0, 0.0, 0.0, 0.0};
};

/// Off-grid velocity by direct summation over the resolved modes. The sine
/// and cosine factors separate, so one point costs O(M^2).
Point velocity_at(const Grid& grid, std::span<const double> spectrum, Point x);
Point velocity_at(const ScalarField& omega, Point x);
FlowSample flow_at(const Grid& grid, std::span<const double> spectrum, Point x);
/// Off-grid (d1 omega, d2 omega), same direct summation.
Point vorticity_gradient_at(const Grid& grid, std::span<const double> spectrum, Point x);

/// Time-dependent velocity seen by tracers.
using FlowFn = std::function<FlowSample(double t, Point x)>;

/// Velocity linearly interpolated in time between two vorticity spectra.
FlowFn interpolated_flow(const Grid& grid, double t0, std::vector<double> a0, double t1,
                         std::vector<double> a1);

struct TrajectoryPoint {
  double t;
  double x1;
  double x2;
  double det_j;
};

/// Material point started at alpha. J = dX/d(alpha) is carried along.
struct Tracer {
  Point alpha{0.0, 0.0};
  Point x{0.0, 0.0};
  Mat2 jacobian = identity2;
  std::vector<TrajectoryPoint> history;

  static Tracer at(Point alpha, double t0 = 0.0);
};

/// One RK4 step of dX/dt = u(t, X) and dJ/dt = grad u(t, X) J over [t, t+dt].
/// dt may be negative.
void rk4_flow_step(Point& x, Mat2& jacobian, const FlowFn& flow, double t, double dt);

/// Advance the tracer from its last history time by dt and append the new
/// point. Throws std::logic_error on an empty history.
void advance_tracer(Tracer& tracer, const FlowFn& flow, double dt);

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vorticity spectra kept for backtracking, strictly increasing in time.
/// Every offered step is kept while t <= dense_until, then every
/// `thin_every`-th one.
class SnapshotStore {
 public:
  struct Snapshot {
    double t;
    std::vector<double> spectrum;
  };

  explicit SnapshotStore(const Grid& grid, double dense_until = 1.0, int thin_every = 10);

  /// Returns true if the snapshot was retained. Times must increase.
  bool offer(double t, std::span<const double> spectrum);
  /// Always retain, regardless of thinning (used for the final state).
  void force(double t, std::span<const double> spectrum);

  const Grid& grid() const { return grid_; }
  const std::vector<Snapshot>& snapshots() const { return snaps_; }
  bool covers(double ta, double tb) const;

  /// Velocity at time t, interpolated between the bracketing snapshots.
  /// Throws CoverageError outside [first, last].
  FlowSample sample(double t, Point x) const;
  FlowFn flow() const;

  /// Snapshot times inside (ta, tb), ascending.
  std::vector<double> times_between(double ta, double tb) const;

 private:
  Grid grid_;
  double dense_until_;
  int thin_every_;
  std::int64_t offered_ = 0;
  std::vector<Snapshot> snaps_;
};

/// Result of integrating characteristics backward from (t_from, x).
struct Backtrack {
  Point origin{0.0, 0.0};   // X^{-1}: position at t_to
  Mat2 jacobian = identity2;  // d origin / d x
};

/// Integrates dY/dtau = -u(t_from - tau, Y) down to t_to with RK4, one step per
/// snapshot gap split into `substeps` pieces so that no step straddles a
/// snapshot. Throws CoverageError if the store does not span [t_to, t_from].
Backtrack backtrack(Point x, double t_from, double t_to, const SnapshotStore& store,
                    int substeps = 1);

/// grad omega(t, x) = J^T grad omega0(X^{-1}(t, x)), J = dX^{-1}/dx.
Point gradient_via_backtracking(Point x, double t, const SnapshotStore& store,
                                const std::function<Point(Point)>& grad_omega0,
                                int substeps = 1);
Point gradient_via_backtracking(Point x, double t, const SnapshotStore& store,
                                const Omega0Spec& spec, int substeps = 1);

}  // namespace egl
