#include "cfsim/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "cfsim/errors.hpp"

namespace cfsim {

std::string format_fixed6(double x) {
  std::string s = fmt::format("{:.6f}", x);
  if (s == "-0.000000") {
    s.erase(0, 1);
  }
  return s;
}

void write_trajectory(const Trajectory& trajectory, std::ostream& sink) {
  const auto old = sink.exceptions();
  sink.exceptions(std::ios::badbit | std::ios::failbit);
  std::string buf;
  buf.reserve(128);
  sink << kTrajectoryHeader << '\n';
  for (const auto& r : trajectory.rows) {
    buf.clear();
    buf += std::to_string(r.tick);
    buf += ',';
    buf += format_fixed6(r.time);
    buf += ',';
    buf += trajectory.droneId;
    for (double v : {r.position.x(), r.position.y(), r.position.z(), r.yaw, r.velocity.x(),
                     r.velocity.y(), r.velocity.z(), r.yawRate, r.charge}) {
      buf += ',';
      buf += format_fixed6(v);
    }
    buf += '\n';
    sink << buf;
  }
  sink.flush();
  sink.exceptions(old);
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  write_trajectory(trajectory, os);
  return os.str();
}

namespace {

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                   : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
      cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
      cell.remove_suffix(1);
    }
    out.emplace_back(cell);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable table;
  int lineNo = 0;
  std::size_t pos = 0;
  bool haveHeader = false;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    auto cells = split_commas(line);
    if (!haveHeader) {
      table.header_ = std::move(cells);
      haveHeader = true;
      continue;
    }
    if (cells.size() != table.header_.size()) {
      throw ParseError(lineNo, fmt::format("expected {} columns, got {}", table.header_.size(),
                                           cells.size()));
    }
    table.rows_.push_back(std::move(cells));
    table.lineNumbers_.push_back(lineNo);
  }
  if (!haveHeader) {
    throw ParseError(0, "empty CSV, no header line");
  }
  return table;
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) {
    throw ParseError(1, fmt::format("no column named '{}'", name));
  }
  const auto col = static_cast<std::size_t>(it - header_.begin());
  std::vector<double> out;
  out.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::string_view cell = rows_[i][col];
    if (!cell.empty() && cell.front() == '+') {
      cell.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw ParseError(lineNumbers_[i],
                       fmt::format("column '{}': '{}' is not a number", name, rows_[i][col]));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace cfsim
