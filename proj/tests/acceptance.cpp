// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance            all criteria
//   acceptance 2 5 9      a subset

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "egl/commands.hpp"
#include "egl/constants.hpp"
#include "egl/csv.hpp"
#include "egl/diagnostics.hpp"
#include "egl/evolution.hpp"
#include "egl/lagrangian.hpp"
#include "egl/omega0.hpp"
#include "egl/spectral.hpp"

using namespace egl;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ScalarField eigenfunction(const Grid& grid) {
  std::vector<double> a(static_cast<std::size_t>(grid.modes()) * grid.modes(), 0.0);
  a[0] = 2.0 * pi * pi;
  return ScalarField::from_spectrum(grid, std::move(a));
}

struct Run {
  std::vector<DiagnosticsRecord> records;
  SimState final_state{ScalarField::zero(Grid(32))};
  std::vector<Tracer> tracers;
};

// Evolve with a tracer at each start point, recording diagnostics at every
// snapshot; optionally retain every step for backtracking.
Run simulate(const ScalarField& omega0, double t_end, double interval,
             const std::vector<Point>& starts, SnapshotStore* store = nullptr,
             std::optional<double> log_s = std::nullopt) {
  SimState state = make_state(omega0, true);
  Run run;
  for (const auto& p : starts) run.tracers.push_back(Tracer::at(p));
  RecordOptions ro;
  ro.log_s = log_s;
  const Tracer* lead = run.tracers.empty() ? nullptr : &run.tracers.front();
  run.records.push_back(record(state, lead, ro));
  if (store) store->force(state.t, state.omega.spectrum());
  TimeStepConfig ts;
  ts.t_end = t_end;
  ts.snapshot_interval = interval;
  RunCallbacks cb;
  cb.on_step = [&](const SimState& a, const SimState& b) {
    const FlowFn flow =
        interpolated_flow(a.omega.grid(), a.t, {a.omega.spectrum().begin(), a.omega.spectrum().end()},
                          b.t, {b.omega.spectrum().begin(), b.omega.spectrum().end()});
    for (auto& tr : run.tracers) {
      advance_tracer(tr, flow, b.t - a.t);
      tr.history.back().t = b.t;
      tr.x = {tr.history.back().x1, tr.history.back().x2};
    }
    if (store) store->force(b.t, b.omega.spectrum());
  };
  cb.on_snapshot = [&](SimState s) {
    lead = run.tracers.empty() ? nullptr : &run.tracers.front();
    run.records.push_back(record(s, lead, ro));
  };
  run.final_state = run_until(std::move(state), ts, cb);
  return run;
}

// log(g(t)/g(0)) <= int_0^t |grad u| + 0.05 t on trusted rows.
Outcome upper_bound(const std::vector<DiagnosticsRecord>& rows) {
  const double g0 = rows.front().linf_grad_omega;
  double worst = -INFINITY;
  int checked = 0;
  for (const auto& r : rows) {
    if (!r.trusted || r.t == 0.0) continue;
    ++checked;
    worst = std::max(worst, std::log(r.linf_grad_omega / g0) - r.int_grad_u - 0.05 * r.t);
  }
  return {checked > 0 && worst <= 0.0,
          std::to_string(checked) + " trusted rows, max excess " + fmt("%.3e", worst)};
}

std::vector<Outcome> upper_bound_runs;

Outcome c1_constants() {
  const auto start = std::chrono::steady_clock::now();
  double worst_margin = INFINITY, worst_identity = 0.0;
  bool ok = true;
  for (double A : {2.0, 3.0, 5.0}) {
    for (double C3 : {0.5, 1.0, 2.0}) {
      const auto c = theoretical_constants(A, C3, 50);
      PrecisionScope scope(60);
      const HighPrecision margin = key_integral_lower_bound(c.delta, c.delta1) - (c.A + 2 * c.C3);
      const HighPrecision lhs = HighPrecision(20) / c.delta;
      const HighPrecision rhs =
          c.K * boost::multiprecision::exp(4 * boost::multiprecision::sqrt(HighPrecision(3)) * c.A);
      const double rel = static_cast<double>(boost::multiprecision::abs(lhs - rhs) / lhs);
      worst_margin = std::min(worst_margin, static_cast<double>(margin));
      worst_identity = std::max(worst_identity, rel);
      ok = ok && margin >= 0 && rel < 1e-48;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 1.0;
  return {ok, "min margin " + fmt("%.6f", worst_margin) + ", max identity residual " +
                  fmt("%.1e", worst_identity) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome c2_key_integral() {
  const auto start = std::chrono::steady_clock::now();
  const Grid grid(512);
  std::vector<double> v(grid.size());
  auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  for (int i1 = 0; i1 < grid.n(); ++i1) {
    for (int i2 = 0; i2 < grid.n(); ++i2) {
      v[grid.index(i1, i2)] = sgn(grid.node(i1)) * sgn(grid.node(i2));
    }
  }
  const double got = key_integral(ScalarField::from_values(grid, std::move(v)), {0.25, 0.25});
  const double exact = 2.0 / pi * std::log(1.25);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double err = std::abs(got - exact);
  return {err <= 1e-6 && secs < 1.0, "I = " + fmt("%.12f", got) + ", exact " +
                                         fmt("%.12f", exact) + ", error " + fmt("%.2e", err) +
                                         ", " + fmt("%.3f", secs) + " s"};
}

Outcome c3_eigenfunction() {
  const Grid grid(128);
  const ScalarField w0 = to_physical(eigenfunction(grid));
  const Run run = simulate(w0, 1.0, 0.1, {});
  const ScalarField w1 = to_physical(run.final_state.omega);
  double diff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    diff = std::max(diff, std::abs(w1.values()[i] - w0.values()[i]));
  }
  const double drift = diff / linf(w0.values());
  double row_drift = 0.0;
  const auto& r0 = run.records.front();
  for (const auto& r : run.records) {
    row_drift = std::max({row_drift, std::abs(r.linf_omega / r0.linf_omega - 1.0),
                          std::abs(r.l2_u / r0.l2_u - 1.0),
                          std::abs(r.enstrophy / r0.enstrophy - 1.0),
                          std::abs(r.linf_grad_omega / r0.linf_grad_omega - 1.0)});
  }
  upper_bound_runs.push_back(upper_bound(run.records));
  return {drift <= 1e-6 && row_drift <= 1e-6 && run.records.size() == 11,
          "L-inf drift " + fmt("%.2e", drift) + ", max row drift " + fmt("%.2e", row_drift) +
              ", " + std::to_string(run.records.size()) + " rows"};
}

Outcome c4_conservation() {
  const Grid grid(256);
  const ScalarField w0 = build_omega0(make_omega0_spec(0.2), grid);
  const Run run = simulate(w0, 2.0, 0.1, {});
  const auto& r0 = run.records.front();
  double de = 0.0, dz = 0.0, dw = 0.0;
  for (const auto& r : run.records) {
    de = std::max(de, std::abs(r.l2_u / r0.l2_u - 1.0));
    dz = std::max(dz, std::abs(r.enstrophy / r0.enstrophy - 1.0));
    dw = std::max(dw, std::abs(r.linf_omega / r0.linf_omega - 1.0));
  }
  const double odd = oddness_residual(grid, to_physical(run.final_state.omega).values());
  upper_bound_runs.push_back(upper_bound(run.records));
  return {de <= 1e-6 && dz <= 1e-6 && dw <= 1e-3 && odd <= 1e-12,
          "energy " + fmt("%.2e", de) + ", enstrophy " + fmt("%.2e", dz) + ", sup|w| " +
              fmt("%.2e", dw) + ", oddness " + fmt("%.1e", odd)};
}

// Shared by criteria 5 and 6: smooth data at n = 256 to t = 1, every step kept.
struct StoredRun {
  Grid grid{256};
  Omega0Spec spec = make_omega0_spec(0.2);
  SnapshotStore store{Grid(256), 1e9, 1};
  Run run;
};

StoredRun& stored_run() {
  static StoredRun s = [] {
    StoredRun r;
    const ScalarField w0 = build_omega0(r.spec, r.grid);
    r.run = simulate(w0, 1.0, 0.1, {{0.02, 0.02}, {0.3, 0.6}, {-0.45, 0.15}, {0.7, -0.8}},
                     &r.store);
    upper_bound_runs.push_back(upper_bound(r.run.records));
    return r;
  }();
  return s;
}

Outcome c5_round_trip() {
  StoredRun& s = stored_run();
  double err = 0.0, det_dev = 0.0;
  for (const auto& tr : s.run.tracers) {
    for (const auto& h : tr.history) det_dev = std::max(det_dev, std::abs(h.det_j - 1.0));
    const Backtrack b = backtrack(tr.x, 1.0, 0.0, s.store);
    err = std::max(err, std::hypot(b.origin[0] - tr.alpha[0], b.origin[1] - tr.alpha[1]));
    det_dev = std::max(det_dev, std::abs(det(b.jacobian) - 1.0));
  }
  return {err <= 2e-6 && det_dev <= 1e-6,
          "round-trip error " + fmt("%.2e", err) + ", max |det J - 1| " + fmt("%.2e", det_dev)};
}

// Low-mode odd-odd field: smooth, no flat regions, not a steady state.
struct SmoothData {
  static constexpr double c[3][3] = {{1.0, 0.3, 0.0}, {0.5, 0.0, 0.0}, {0.0, 0.0, 0.25}};
  static double value(Point x) {
    double w = 0.0;
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        w += c[j - 1][k - 1] * std::sin(j * pi * x[0]) * std::sin(k * pi * x[1]);
    return w;
  }
  static Point grad(Point x) {
    Point g{0.0, 0.0};
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        g[0] += c[j - 1][k - 1] * j * pi * std::cos(j * pi * x[0]) * std::sin(k * pi * x[1]);
        g[1] += c[j - 1][k - 1] * k * pi * std::sin(j * pi * x[0]) * std::cos(k * pi * x[1]);
      }
    }
    return g;
  }
};

Outcome c6_gradient_identity() {
  const Grid grid(256);
  std::vector<double> a(static_cast<std::size_t>(grid.modes()) * grid.modes(), 0.0);
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k)
      a[static_cast<std::size_t>(j - 1) * grid.modes() + (k - 1)] = SmoothData::c[j - 1][k - 1];
  SnapshotStore store(grid, 1e9, 1);
  const Run run = simulate(ScalarField::from_spectrum(grid, a), 1.0, 0.1, {}, &store);
  upper_bound_runs.push_back(upper_bound(run.records));
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> coord(-0.95, 0.95);
  const auto spec = run.final_state.omega.spectrum();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Point x{coord(rng), coord(rng)};
    const Point g = gradient_via_backtracking(x, 1.0, store, SmoothData::grad);
    const Point ref = vorticity_gradient_at(grid, spec, x);
    const double scale = std::max(std::hypot(ref[0], ref[1]), 1e-12);
    worst = std::max(worst, std::hypot(g[0] - ref[0], g[1] - ref[1]) / scale);
    if (std::getenv("EGL_VERBOSE")) {
      std::printf("  x=(%.3f,%.3f) backtracked=(%.6e,%.6e) spectral=(%.6e,%.6e)\n", x[0], x[1],
                  g[0], g[1], ref[0], ref[1]);
    }
  }
  return {worst <= 1e-3, "max relative error " + fmt("%.2e", worst) + " over 10 points"};
}

Outcome c7_upper_bound() {
  bool ok = !upper_bound_runs.empty();
  std::string detail;
  for (const auto& o : upper_bound_runs) {
    ok = ok && o.pass;
    detail += (detail.empty() ? "" : "; ") + o.detail;
  }
  if (upper_bound_runs.empty()) detail = "no runs recorded";
  return {ok, detail};
}

Outcome c8_mechanism() {
  const Grid grid(512);
  const double s = 0.02;
  const ScalarField w0 = build_omega0(make_omega0_spec(0.05), grid);
  const Run run = simulate(w0, 3.0, 0.05, {{s, s}}, nullptr, std::log(s));
  upper_bound_runs.push_back(upper_bound(run.records));
  std::vector<DiagnosticsRecord> window;
  for (const auto& r : run.records) {
    if (!r.trusted) break;
    window.push_back(r);
  }
  if (window.size() < 3) return {false, "trusted window has fewer than 3 snapshots"};
  bool x_dec = true, q_inc = true, i_pos = true;
  double i_min = INFINITY, b_max = 0.0;
  std::vector<std::pair<double, double>> x1;
  for (std::size_t k = 0; k < window.size(); ++k) {
    const auto& r = window[k];
    if (!r.I) {
      i_pos = false;
      continue;
    }
    i_pos = i_pos && *r.I > 0.0;
    i_min = std::min(i_min, *r.I);
    b_max = std::max(b_max, std::abs(*r.B1));
    x1.emplace_back(r.t, *r.X1);
    if (k > 0) {
      x_dec = x_dec && *r.X1 < *window[k - 1].X1;
      q_inc = q_inc && *r.growth_quotient_log > *window[k - 1].growth_quotient_log;
    }
  }
  const GrowthFit fit = fit_exponential(x1, window.front().t, window.back().t);
  const double limit = -(i_min - b_max) + 0.1;
  const bool ok = x_dec && q_inc && i_pos && fit.rate <= limit;
  return {ok, "trusted to t = " + fmt("%.2f", window.back().t) + " (" +
                  std::to_string(window.size()) + " rows), X1 decreasing " +
                  (x_dec ? "yes" : "no") + ", quotient increasing " + (q_inc ? "yes" : "no") +
                  ", I_min " + fmt("%.4f", i_min) + ", |B1|_max " + fmt("%.4f", b_max) +
                  ", X1 rate " + fmt("%.4f", fit.rate) + " <= " + fmt("%.4f", limit)};
}

Outcome c9_fit() {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 10; ++i) series.emplace_back(0.1 * i, std::exp(0.2 * i));
  const GrowthFit fit = fit_exponential(series, 0.0, 1.0);
  return {std::abs(fit.rate - 2.0) <= 1e-10, "rate " + fmt("%.15f", fit.rate)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c10_determinism() {
  const fs::path root =
      fs::temp_directory_path() / ("egl_acceptance_" + std::to_string(::getpid()));
  std::vector<std::string> diag, traj;
  for (int k = 0; k < 2; ++k) {
    RunConfig c;
    apply_setting(c, "n", "128");
    apply_setting(c, "delta", "0.2");
    apply_setting(c, "delta1", "0.1");
    apply_setting(c, "s", "0.04");
    apply_setting(c, "t_end", "0.5");
    apply_setting(c, "output", (root / std::to_string(k)).string());
    apply_setting(c, "force", "true");
    std::ostringstream out, err;
    if (cmd_init(c, out, err) != exit_ok || cmd_run(c, "", out, err) != exit_ok) {
      fs::remove_all(root);
      return {false, "run failed: " + err.str()};
    }
    diag.push_back(slurp(root / std::to_string(k) / "diagnostics.csv"));
    traj.push_back(slurp(root / std::to_string(k) / "trajectory.csv"));
  }
  fs::remove_all(root);
  const bool same = diag[0] == diag[1] && traj[0] == traj[1] && !diag[0].empty();
  return {same, same ? "diagnostics.csv and trajectory.csv identical (" +
                           std::to_string(diag[0].size()) + " + " +
                           std::to_string(traj[0].size()) + " bytes)"
                     : "outputs differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants and key-integral inequality", c1_constants},
      {"key-integral quadrature oracle", c2_key_integral},
      {"stationary eigenfunction", c3_eigenfunction},
      {"conservation", c4_conservation},
      {"flow-map round trip", c5_round_trip},
      {"gradient transport identity", c6_gradient_identity},
      {"upper-bound inequality", c7_upper_bound},
      {"mechanism observation", c8_mechanism},
      {"fit correctness", c9_fit},
      {"determinism", c10_determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  // Criterion 7 aggregates the runs of 3, 4, 5/6 and 8, so it goes last.
  std::vector<int> order{1, 2, 3, 4, 5, 6, 8, 9, 10, 7};
  if (only.count(7)) only.insert({3, 4, 5, 8});
  int failures = 0;
  for (int id : order) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[id - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %2d  %-40s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[id - 1].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
