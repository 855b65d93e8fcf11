#include "egl/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "egl/spectral.hpp"
#include "egl/transform.hpp"

namespace egl {

void TimeStepConfig::validate() const {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) {
    throw std::invalid_argument("cfl_number must lie in (0, 1]");
  }
  if (!(snapshot_interval > 0.0)) throw std::invalid_argument("snapshot_interval must be > 0");
  if (!(max_dt > 0.0)) throw std::invalid_argument("max_dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(blowup_factor > 1.0)) throw std::invalid_argument("blowup_factor must be > 1");
}

void refresh_velocity(SimState& state) {
  const auto stats = velocity_stats(state.omega.grid(), state.omega.spectrum());
  state.speed = stats.max_speed;
  state.grad_u = stats.max_grad_u;
}

SimState make_state(const ScalarField& omega0, bool dealias_on, double t0) {
  const ScalarField spectral = to_spectral(omega0);
  std::vector<double> a(spectral.spectrum().begin(), spectral.spectrum().end());
  if (dealias_on) dealias_in_place(spectral.grid(), a);
  SimState s{ScalarField::from_spectrum(spectral.grid(), std::move(a))};
  s.t = t0;
  refresh_velocity(s);
  s.initial_speed = s.speed;
  return s;
}

std::vector<double> rhs_spectrum(const Grid& grid, std::span<const double> spectrum,
                                 bool dealias_on) {
  const auto& tr = quadrant_transform(grid.n());
  const auto a = pad_spectrum(grid, spectrum);
  const auto psi = stream_modes(grid, spectrum);
  const std::size_t len = a.size();
  QuadrantArray u1(len), u2(len), w1(len), w2(len);
  tr.synthesize(scale_modes(grid, psi, 0, 1, -1.0), Parity::odd, Parity::even, u1);
  tr.synthesize(scale_modes(grid, psi, 1, 0, 1.0), Parity::even, Parity::odd, u2);
  tr.synthesize(scale_modes(grid, a, 1, 0, 1.0), Parity::even, Parity::odd, w1);
  tr.synthesize(scale_modes(grid, a, 0, 1, 1.0), Parity::odd, Parity::even, w2);
  QuadrantArray prod(len);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < len; ++i) prod[i] = -(u1[i] * w1[i] + u2[i] * w2[i]);
  QuadrantArray modal(len);
  tr.analyze(prod, Parity::odd, Parity::odd, modal);
  auto out = crop_spectrum(grid, modal);
  if (dealias_on) dealias_in_place(grid, out);
  return out;
}

ScalarField rhs(const ScalarField& omega, bool dealias_on) {
  const ScalarField s = to_spectral(omega);
  return ScalarField::from_spectrum(s.grid(), rhs_spectrum(s.grid(), s.spectrum(), dealias_on));
}

double cfl_dt(double max_speed, double h, const TimeStepConfig& config) {
  return std::min(config.max_dt, config.cfl_number * h / std::max(max_speed, 1e-12));
}

double cfl_dt(const SimState& state, const TimeStepConfig& config) {
  return cfl_dt(state.speed, state.omega.grid().h(), config);
}

std::vector<double> rk4_update(std::span<const double> y, double dt, const Slope& slope) {
  const std::size_t len = y.size();
  std::vector<double> stage(len), out(y.begin(), y.end());
  auto accumulate = [&](const std::vector<double>& k, double weight, double next) {
    for (std::size_t i = 0; i < len; ++i) {
      out[i] += weight * dt / 6.0 * k[i];
      stage[i] = y[i] + next * dt * k[i];
    }
  };
  const auto k1 = slope(y);
  accumulate(k1, 1.0, 0.5);
  const auto k2 = slope(stage);
  accumulate(k2, 2.0, 0.5);
  const auto k3 = slope(stage);
  accumulate(k3, 2.0, 1.0);
  const auto k4 = slope(stage);
  for (std::size_t i = 0; i < len; ++i) out[i] += dt / 6.0 * k4[i];
  return out;
}

namespace {

// exp(-36 (k/k_max)^36) on each axis, k_max the highest retained mode.
void apply_filter(const Grid& grid, std::span<double> a, bool dealias_on) {
  const int m = grid.modes();
  const double kmax = dealias_on ? grid.dealias_cutoff() : m;
  std::vector<double> f(m);
  for (int j = 1; j <= m; ++j) f[j - 1] = std::exp(-36.0 * std::pow(j / kmax, 36.0));
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(j) * m + k] *= f[j] * f[k];
  }
}

}  // namespace

SimState step_rk4(const SimState& state, double dt, const TimeStepConfig& config) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4 needs dt > 0");
  const Grid& grid = state.omega.grid();
  auto next = rk4_update(state.omega.spectrum(), dt, [&](std::span<const double> y) {
    return rhs_spectrum(grid, y, config.dealias);
  });
  if (config.filter) apply_filter(grid, next, config.dealias);
  SimState out = state;
  out.omega = ScalarField::from_spectrum(grid, std::move(next));
  out.t = state.t + dt;
  out.step_count = state.step_count + 1;
  out.last_dt = dt;
  refresh_velocity(out);
  out.int_grad_u = state.int_grad_u + 0.5 * dt * (state.grad_u + out.grad_u);
  return out;
}

SimState run_until(SimState state, const TimeStepConfig& config, const RunCallbacks& callbacks) {
  config.validate();
  if (config.t_end < state.t) throw std::invalid_argument("t_end is before the current time");
  const double interval = config.snapshot_interval;
  // Relative slack so that floating landing on k*interval counts as reached.
  const double eps = 1e-12 * std::max(1.0, config.t_end);
  bool stepped = false;
  while (state.t < config.t_end - eps) {
    const double k = std::floor(state.t / interval + 1e-9) + 1.0;
    const double target = std::min(k * interval, config.t_end);
    double dt = cfl_dt(state, config);
    bool lands = false;
    if (state.t + dt >= target - eps) {
      dt = target - state.t;
      lands = true;
    }
    SimState next = step_rk4(state, dt, config);
    if (lands) next.t = target;
    if (!std::isfinite(next.speed) ||
        (state.initial_speed > 0.0 && next.speed > config.blowup_factor * state.initial_speed)) {
      std::ostringstream msg;
      msg << "blow-up guard: max|u| = " << next.speed << " at t = " << next.t
          << " exceeds " << config.blowup_factor << " x initial " << state.initial_speed;
      throw NumericalAbort(msg.str(), state);
    }
    if (callbacks.on_step) callbacks.on_step(state, next);
    state = std::move(next);
    stepped = true;
    if (lands && callbacks.on_snapshot) callbacks.on_snapshot(state);
  }
  if (!stepped && callbacks.on_snapshot) callbacks.on_snapshot(state);
  return state;
}

}  // namespace egl
