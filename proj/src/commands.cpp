#include "egl/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "egl/checkpoint.hpp"
#include "egl/constants.hpp"
#include "egl/csv.hpp"
#include "egl/diagnostics.hpp"
#include "egl/evolution.hpp"
#include "egl/lagrangian.hpp"
#include "egl/omega0.hpp"
#include "egl/spectral.hpp"

namespace fs = std::filesystem;

namespace egl {

namespace {

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

bool refuse_overwrite(const std::vector<std::string>& paths, bool force, std::ostream& err) {
  if (force) return false;
  for (const auto& p : paths) {
    if (fs::exists(p)) {
      err << "error: " << p << " exists; pass --force to overwrite\n";
      return true;
    }
  }
  return false;
}

std::string num(double v) { return format_number(v); }

template <class Real>
void print_growth(std::ostream& out, const GrowthConstants<Real>& g, unsigned digits) {
  if constexpr (std::is_same_v<Real, double>) {
    out << "log_s = " << num(g.log_s) << "\n";
    out << "log(-log s) = " << num(g.loglog_s) << "\n";
    out << "C4 = " << num(g.C4) << "\n";
    out << "C1 = " << num(g.C1) << "\n";
  } else {
    out << "log_s = " << to_decimal(g.log_s, digits) << "\n";
    out << "log(-log s) = " << to_decimal(g.loglog_s, digits) << "\n";
    out << "C4 = " << to_decimal(g.C4, digits) << "\n";
    out << "C1 = " << to_decimal(g.C1, digits) << "\n";
  }
}

}  // namespace

ScalarField initial_field(const RunConfig& config) {
  const Grid grid = make_grid(config.n);
  if (config.initial == InitialKind::eigenfunction) {
    std::vector<double> a(static_cast<std::size_t>(grid.modes()) * grid.modes(), 0.0);
    a[0] = 2.0 * std::numbers::pi * std::numbers::pi;
    return to_physical(ScalarField::from_spectrum(grid, std::move(a)));
  }
  return build_omega0(make_omega0_spec(config.delta), grid);
}

int cmd_constants(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate_for_constants(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  const unsigned digits = config.precision;
  if (config.mode == Mode::theoretical) {
    const auto c = theoretical_constants(config.A, config.C3, digits);
    PrecisionScope scope(digits + 10);
    using R = HighPrecision;
    const R sqrt3 = boost::multiprecision::sqrt(R(3));
    const R A = c.A;
    const R C3 = c.C3;
    const R lhs = R(20) / c.delta;
    const R rhs = c.K * boost::multiprecision::exp(4 * sqrt3 * A);
    const R identity = boost::multiprecision::abs(lhs - rhs) / lhs;
    out << "mode = theoretical\n";
    out << "digits = " << digits << "\n";
    out << "A = " << to_decimal(A, digits) << "\n";
    out << "C3 = " << to_decimal(C3, digits) << "\n";
    out << "delta = " << to_decimal(c.delta, digits) << "\n";
    out << "delta1 = " << to_decimal(c.delta1, digits) << "\n";
    out << "delta1_branch = "
        << (c.branch == Delta1Branch::half_delta ? "delta/2" : "(sqrt2/4) e^{-2 sqrt3 (A+2C3)}")
        << "\n";
    out << "K = " << to_decimal(c.K, digits) << "\n";
    out << "20/delta = " << to_decimal(lhs, digits) << "\n";
    out << "K e^{4 sqrt3 A} = " << to_decimal(rhs, digits) << "\n";
    out << "identity_relative_residual = " << to_decimal(identity, 6) << "\n";
    R bound;
    try {
      bound = key_integral_lower_bound(c.delta, c.delta1);
    } catch (const std::domain_error& e) {
      err << "error: " << e.what() << "\n";
      return exit_constraint;
    }
    const R margin = bound - (A + 2 * C3);
    out << "key_integral_lower_bound = " << to_decimal(bound, digits) << "\n";
    out << "A + 2 C3 = " << to_decimal(A + 2 * C3, digits) << "\n";
    out << "margin = " << to_decimal(margin, digits) << "\n";
    out << "C2 = " << num(config.C2) << "\n";
    out << "T = " << num(config.T) << "\n";
    print_growth(out, growth_constants(R(config.T), R(config.C2), c.delta, c.delta1), digits);
    const bool ok = margin >= 0 && identity < R(10) * pow(R(10), -static_cast<int>(digits));
    out << "status = " << (ok ? "ok" : "FAILED") << "\n";
    return ok ? exit_ok : exit_constraint;
  }
  out << "mode = resolvable\n";
  out << "A = " << num(config.A) << "\n";
  out << "C3 = " << num(config.C3) << "\n";
  out << "delta = " << num(config.delta) << "\n";
  out << "delta1 = " << num(config.delta1) << "\n";
  double bound = 0.0;
  try {
    bound = key_integral_lower_bound(config.delta, config.delta1);
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_constraint;
  }
  const double margin = bound - (config.A + 2.0 * config.C3);
  out << "key_integral_lower_bound = " << num(bound) << "\n";
  out << "A + 2 C3 = " << num(config.A + 2.0 * config.C3) << "\n";
  out << "margin = " << num(margin) << "\n";
  out << "C2 = " << num(config.C2) << "\n";
  out << "T = " << num(config.T) << "\n";
  print_growth(out, growth_constants(config.T, config.C2, config.delta, config.delta1), 17);
  out << "status = " << (margin >= 0.0 ? "ok" : "FAILED") << "\n";
  return margin >= 0.0 ? exit_ok : exit_constraint;
}

int cmd_init(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate_for_simulation(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  fs::create_directories(config.output);
  const std::string chk = path_in(config.output, "initial.chk");
  const std::string report_path = path_in(config.output, "init_report.txt");
  if (refuse_overwrite({chk, report_path}, config.force, err)) return exit_usage;

  ScalarField omega = ScalarField::zero(make_grid(config.n));
  try {
    omega = initial_field(config);
  } catch (const UnresolvedError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ConstraintError& e) {
    err << "constraint failure: " << e.what() << "\n";
    return exit_constraint;
  }

  std::ostringstream report;
  report << "n = " << config.n << "\n";
  bool passed = true;
  if (config.initial == InitialKind::omega0) {
    const Omega0Spec spec = make_omega0_spec(config.delta);
    const ConstraintReport r = verify_constraints(omega, spec);
    report << "initial = omega0\ndelta = " << num(config.delta) << "\n";
    for (const auto& c : r.checks) {
      report << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL")
             << " measured = " << num(c.measured) << " limit = " << num(c.limit) << "\n";
    }
    if (const auto* f = r.first_failure()) {
      report << "first failure: " << f->name << "\n";
      passed = false;
    }
  } else {
    report << "initial = eigenfunction\n";
  }
  report << "status = " << (passed ? "ok" : "FAILED") << "\n";

  SimState state = make_state(omega, config.dealias);
  std::vector<Tracer> tracers{Tracer::at({config.s, config.s})};
  Checkpoint c = make_checkpoint(state, tracers);
  c.log_s = std::log(config.s);
  c.delta = config.delta;
  c.delta1 = config.delta1;
  c.initial_kind = static_cast<std::uint32_t>(config.initial);
  write_file_atomic(report_path, report.str());
  if (!passed) {
    out << report.str();
    return exit_constraint;
  }
  save_checkpoint(chk, c);
  out << report.str() << "checkpoint = " << chk << "\n";
  return exit_ok;
}

int cmd_run(const RunConfig& config, const std::string& from, std::ostream& out,
            std::ostream& err) {
  try {
    validate_for_simulation(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  const std::string source = from.empty() ? path_in(config.output, "initial.chk") : from;
  Checkpoint start;
  try {
    start = load_checkpoint(source);
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  if (start.n != config.n && config.assigned.count("n")) {
    err << "error: checkpoint has n = " << start.n << " but config asks for n = " << config.n
        << "\n";
    return exit_usage;
  }
  if (config.t_end < start.t) {
    err << "error: t_end = " << config.t_end << " is before the checkpoint time " << start.t
        << "\n";
    return exit_usage;
  }
  fs::create_directories(config.output);
  const std::string diag_path = path_in(config.output, "diagnostics.csv");
  const std::string traj_path = path_in(config.output, "trajectory.csv");
  const std::string chk_path = path_in(config.output, "checkpoint.chk");
  if (refuse_overwrite({diag_path, traj_path, chk_path}, config.force, err)) return exit_usage;

  SimState state = state_from_checkpoint(start);
  std::vector<Tracer> tracers = tracers_from_checkpoint(start);
  const Grid grid = state.omega.grid();

  TimeStepConfig ts;
  ts.cfl_number = config.cfl;
  ts.t_end = config.t_end;
  ts.dealias = config.dealias;
  ts.snapshot_interval = config.snapshot_interval;
  ts.max_dt = config.max_dt;
  ts.blowup_factor = config.blowup_factor;
  ts.filter = config.filter;

  RecordOptions ro;
  ro.dealias = config.dealias;
  ro.log_s = start.log_s;

  std::vector<DiagnosticsRecord> records;
  std::vector<TrajectoryPoint> trajectory;
  if (!tracers.empty()) trajectory = tracers.front().history;

  auto finish_checkpoint = [&](const SimState& s) {
    Checkpoint c = make_checkpoint(s, tracers);
    c.log_s = start.log_s;
    c.delta = start.delta;
    c.delta1 = start.delta1;
    c.initial_kind = start.initial_kind;
    save_checkpoint(chk_path, c);
  };
  auto flush = [&] {
    write_file_atomic(diag_path, diagnostics_csv(records));
    write_file_atomic(traj_path, trajectory_csv(trajectory));
  };
  auto add_record = [&](const SimState& s) {
    records.push_back(record(s, tracers.empty() ? nullptr : &tracers.front(), ro));
  };

  if (config.t_end > state.t) {
    add_record(state);
    flush();
  }

  RunCallbacks cb;
  cb.on_step = [&](const SimState& before, const SimState& after) {
    const double dt = after.t - before.t;
    const std::vector<double> a0(before.omega.spectrum().begin(), before.omega.spectrum().end());
    const std::vector<double> a1(after.omega.spectrum().begin(), after.omega.spectrum().end());
    const FlowFn flow = interpolated_flow(grid, before.t, a0, after.t, a1);
    for (auto& tr : tracers) {
      advance_tracer(tr, flow, dt);
      tr.history.back().t = after.t;
    }
    if (!tracers.empty()) trajectory.push_back(tracers.front().history.back());
  };
  double next_checkpoint =
      config.checkpoint_interval > 0.0 ? state.t + config.checkpoint_interval : INFINITY;
  cb.on_snapshot = [&](SimState s) {
    add_record(s);
    flush();
    if (s.t >= next_checkpoint - 1e-12) {
      finish_checkpoint(s);
      next_checkpoint += config.checkpoint_interval;
    }
  };

  try {
    state = run_until(std::move(state), ts, cb);
  } catch (const NumericalAbort& e) {
    flush();
    finish_checkpoint(e.last_good());
    err << "numerical abort: " << e.what() << "\n";
    return exit_abort;
  }
  finish_checkpoint(state);

  out << "t = " << num(state.t) << "\n";
  out << "steps = " << state.step_count << "\n";
  out << "rows = " << records.size() << "\n";
  if (!tracers.empty() && !records.empty()) {
    // Reported, not asserted: the bound X2 sup|grad w| <= 1 needs the theoretical s.
    out << "X2_times_sup_grad = " << num(tracers.front().x[1] * records.back().linf_grad_omega)
        << "\n";
  }
  out << "diagnostics = " << diag_path << "\n";
  out << "trajectory = " << traj_path << "\n";
  out << "checkpoint = " << chk_path << "\n";
  return exit_ok;
}

int cmd_fit(const FitRequest& request, std::ostream& out, std::ostream& err) {
  CsvTable table;
  std::size_t col = 0, tcol = 0;
  try {
    table = read_csv(request.csv);
    col = table.column(request.column);
    tcol = table.column("t");
  } catch (const CsvError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  std::vector<std::pair<double, double>> series;
  for (const auto& row : table.rows) {
    if (row[tcol] && row[col]) series.emplace_back(*row[tcol], *row[col]);
  }
  if (series.empty()) {
    err << "error: column '" << request.column << "' has no values\n";
    return exit_usage;
  }
  const double t_a = request.t_a.value_or(series.front().first);
  const double t_b = request.t_b.value_or(series.back().first);
  GrowthFit fit;
  try {
    fit = fit_exponential(series, t_a, t_b);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  out << "column = " << request.column << "\n";
  out << "window = [" << num(fit.t_a) << ", " << num(fit.t_b) << "]\n";
  out << "points = " << fit.points << "\n";
  out << "rate = " << num(fit.rate) << "\n";
  out << "intercept = " << num(fit.intercept) << "\n";
  out << "residual_rms = " << num(fit.residual_rms) << "\n";

  if (request.column != "linf_grad_omega") return exit_ok;
  std::size_t icol = 0, trusted_col = 0;
  try {
    icol = table.column("int_grad_u");
    trusted_col = table.column("trusted");
  } catch (const CsvError&) {
    return exit_ok;
  }
  const double g0 = series.front().second;
  int checked = 0, violations = 0;
  double worst = -INFINITY;
  for (const auto& row : table.rows) {
    if (!row[tcol] || !row[col] || !row[icol] || !row[trusted_col] || *row[trusted_col] != 1.0) {
      continue;
    }
    const double t = *row[tcol];
    if (t < t_a || t > t_b) continue;
    const double slack = *row[icol] + 0.05 * t - std::log(*row[col] / g0);
    worst = std::max(worst, -slack);
    ++checked;
    if (slack < 0.0) ++violations;
  }
  out << "upper_bound_rows_checked = " << checked << "\n";
  out << "upper_bound_violations = " << violations << "\n";
  if (checked) out << "upper_bound_worst_excess = " << num(worst) << "\n";
  return violations ? exit_constraint : exit_ok;
}

int cmd_plot(const std::string& csv, const std::string& out_dir, std::ostream& out,
             std::ostream& err) {
  CsvTable table;
  std::size_t ct = 0, cg = 0, cx = 0, ci = 0;
  try {
    table = read_csv(csv);
    ct = table.column("t");
    cg = table.column("linf_grad_omega");
    cx = table.column("X1");
    ci = table.column("I");
  } catch (const CsvError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  if (table.rows.empty()) {
    err << "error: " << csv << " has no data rows\n";
    return exit_usage;
  }
  const std::string dir = out_dir.empty() ? fs::path(csv).parent_path().string() : out_dir;
  if (!dir.empty()) fs::create_directories(dir);
  const std::string dat = path_in(dir.empty() ? "." : dir, "plot.dat");
  const std::string script = path_in(dir.empty() ? "." : dir, "plot.gp");

  std::ostringstream d;
  d << "# t linf_grad_omega X1 I\n";
  for (const auto& row : table.rows) {
    bool first = true;
    for (std::size_t c : {ct, cg, cx, ci}) {
      if (!first) d << ' ';
      first = false;
      d << (row[c] ? format_number(*row[c]) : std::string("?"));
    }
    d << '\n';
  }
  write_file_atomic(dat, d.str());

  std::ostringstream g;
  g << "# gnuplot -p plot.gp\n"
       "set datafile missing \"?\"\n"
       "set terminal pngcairo size 1200,400\n"
       "set output \"growth.png\"\n"
       "set multiplot layout 1,3\n"
       "set logscale y\n"
       "set xlabel \"t\"\n"
       "set title \"sup |grad omega|\"\n"
       "plot \"plot.dat\" using 1:2 with linespoints notitle\n"
       "set title \"X1(t)\"\n"
       "plot \"plot.dat\" using 1:3 with linespoints notitle\n"
       "set title \"I(t, X(t))\"\n"
       "plot \"plot.dat\" using 1:4 with linespoints notitle\n"
       "unset multiplot\n";
  write_file_atomic(script, g.str());
  out << "data = " << dat << "\nscript = " << script << "\n";
  return exit_ok;
}

}  // namespace egl
