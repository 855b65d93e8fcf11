#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "egl/config.hpp"
#include "egl/field.hpp"

namespace egl {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_constraint = 2, exit_abort = 3 };

/// Initial vorticity for a resolvable config (omega0 or the eigenfunction
/// 2 pi^2 sin(pi x1) sin(pi x2)).
ScalarField initial_field(const RunConfig& config);

/// Constant chain report. Exit 0 iff the key-integral margin is >= 0.
int cmd_constants(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Build the initial field, verify it, write <output>/initial.chk and
/// <output>/init_report.txt.
int cmd_init(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Evolve from a checkpoint (default <output>/initial.chk) to t_end, writing
/// diagnostics.csv, trajectory.csv and checkpoint.chk under <output>.
int cmd_run(const RunConfig& config, const std::string& from, std::ostream& out,
            std::ostream& err);

struct FitRequest {
  std::string csv;
  std::string column = "linf_grad_omega";
  std::optional<double> t_a, t_b;
};
int cmd_fit(const FitRequest& request, std::ostream& out, std::ostream& err);

/// Writes plot.dat and plot.gp (gnuplot) next to the csv or into out_dir.
int cmd_plot(const std::string& csv, const std::string& out_dir, std::ostream& out,
             std::ostream& err);

}  // namespace egl
