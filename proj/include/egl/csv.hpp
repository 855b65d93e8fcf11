#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "egl/diagnostics.hpp"
#include "egl/lagrangian.hpp"

namespace egl {

const std::vector<std::string>& diagnostics_columns();
const std::vector<std::string>& trajectory_columns();

/// 17 significant digits; empty for a missing value.
std::string format_number(std::optional<double> v);

std::string diagnostics_row(const DiagnosticsRecord& r);
std::string trajectory_row(const TrajectoryPoint& p);

/// Header line plus one line per row.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric table; empty cells read as nullopt.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  /// Index of a column; throws CsvError if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

}  // namespace egl
