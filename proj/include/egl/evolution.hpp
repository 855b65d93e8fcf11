#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "egl/field.hpp"

namespace egl {

struct TimeStepConfig {
  double cfl_number = 0.5;
  double t_end = 1.0;
  bool dealias = true;
  double snapshot_interval = 0.1;
  double max_dt = 0.01;
  /// Abort once max|u| exceeds this multiple of its value at the first step.
  double blowup_factor = 100.0;
  /// High-mode exponential filter. Off by default: with it on the dynamics
  /// are no longer inviscid.
  bool filter = false;

  void validate() const;
};

/// The evolving vorticity. The sine-sine spectrum is authoritative; speed and
/// grad_u are cached velocity norms at time t.
struct SimState {
  ScalarField omega;
  double t = 0.0;
  std::int64_t step_count = 0;
  double last_dt = 0.0;
  double int_grad_u = 0.0;  // trapezoid sum of max|grad u| dt since t = 0
  double speed = 0.0;       // max |u| at t
  double grad_u = 0.0;      // max |grad u| at t
  double initial_speed = 0.0;
};

/// State at time t0 from initial vorticity. With `dealias` the spectrum is
/// first projected onto the 2/3-rule modes so the truncated system is closed.
SimState make_state(const ScalarField& omega0, bool dealias = true, double t0 = 0.0);

/// Refresh the cached velocity norms from the spectrum.
void refresh_velocity(SimState& state);

/// -u . grad(omega) as a sine-sine spectrum, product formed on the grid.
std::vector<double> rhs_spectrum(const Grid& grid, std::span<const double> spectrum,
                                 bool dealias = true);
ScalarField rhs(const ScalarField& omega, bool dealias = true);

double cfl_dt(double max_speed, double h, const TimeStepConfig& config);
double cfl_dt(const SimState& state, const TimeStepConfig& config);

using Slope = std::function<std::vector<double>(std::span<const double>)>;

/// One classical RK4 step y -> y + dt/6 (k1 + 2k2 + 2k3 + k4).
std::vector<double> rk4_update(std::span<const double> y, double dt, const Slope& slope);

/// Advance the vorticity by dt with RK4 and update the cached norms and the
/// grad-u integral.
SimState step_rk4(const SimState& state, double dt, const TimeStepConfig& config = {});

struct RunCallbacks {
  /// After every accepted step, with the states at both ends.
  std::function<void(const SimState& before, const SimState& after)> on_step;
  /// At every multiple of snapshot_interval and at t_end. Receives a copy.
  std::function<void(SimState)> on_snapshot;
};

/// Thrown when max|u| crosses the blow-up guard; carries the last good state.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, SimState last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const SimState& last_good() const { return last_good_; }

 private:
  SimState last_good_;
};

/// Step to config.t_end, landing exactly on snapshot times k*snapshot_interval.
SimState run_until(SimState state, const TimeStepConfig& config,
                   const RunCallbacks& callbacks = {});

}  // namespace egl
