#include "egl/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace egl {

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols{
      "t",  "linf_omega", "l2_u", "enstrophy", "linf_grad_omega",     "X1",         "X2",
      "I",  "B1",         "B2",   "growth_quotient_log", "int_grad_u", "trusted"};
  return cols;
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"t", "X1", "X2", "detJ"};
  return cols;
}

std::string format_number(std::optional<double> v) {
  if (!v) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, *v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

}  // namespace

std::string diagnostics_row(const DiagnosticsRecord& r) {
  return join({format_number(r.t), format_number(r.linf_omega), format_number(r.l2_u),
               format_number(r.enstrophy), format_number(r.linf_grad_omega), format_number(r.X1),
               format_number(r.X2), format_number(r.I), format_number(r.B1), format_number(r.B2),
               format_number(r.growth_quotient_log), format_number(r.int_grad_u),
               r.trusted ? "1" : "0"});
}

std::string trajectory_row(const TrajectoryPoint& p) {
  return join({format_number(p.t), format_number(p.x1), format_number(p.x2),
               format_number(p.det_j)});
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = join(diagnostics_columns()) + "\n";
  for (const auto& r : records) out += diagnostics_row(r) + "\n";
  return out;
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points) {
  std::string out = join(trajectory_columns()) + "\n";
  for (const auto& p : points) out += trajectory_row(p) + "\n";
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw CsvError("no column named '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  int number = 0;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw CsvError("line " + std::to_string(number) + ": expected " +
                     std::to_string(table.header.size()) + " fields, got " +
                     std::to_string(cells.size()));
    }
    std::vector<std::optional<double>> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw CsvError("line " + std::to_string(number) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw CsvError("csv is empty");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

}  // namespace egl
