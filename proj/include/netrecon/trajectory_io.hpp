#pragma once

// Delimited-text trajectory files.
//
//   t,x1,...,xn,u1,...,un[,dx1,...,dxn]
//
// One sample per row, decimal-point reals. The time column must be a uniform
// grid; a sample whose time deviates from t0 + k*h by more than 1e-9*h is
// rejected.

#include <netrecon/errors.hpp>
#include <netrecon/model.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace netrecon {

inline constexpr double kTimeGridJitter = 1e-9;

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_real(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto res = std::from_chars(field.data(), end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end)
    throw ParseError(line, "malformed number '" + std::string(field) + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite sample");
  return v;
}

}  // namespace detail

inline void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.nodes();
  const bool with_dx = traj.has_derivatives();
  os << 't';
  for (std::size_t j = 1; j <= n; ++j) os << ",x" << j;
  for (std::size_t j = 1; j <= n; ++j) os << ",u" << j;
  if (with_dx)
    for (std::size_t j = 1; j <= n; ++j) os << ",dx" << j;
  os << '\n';
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    os << detail::format_real(traj.time(k));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
      os << ',' << detail::format_real(traj.states()(row, j));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
      os << ',' << detail::format_real(traj.inputs()(row, j));
    if (with_dx)
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
        os << ',' << detail::format_real((*traj.derivatives())(row, j));
    os << '\n';
  }
}

inline Trajectory read_trajectory(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_text;
  while (std::getline(is, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) {
      header_text = line;
      break;
    }
  }
  if (header_text.empty()) throw ParseError(line_no ? line_no : 1, "empty trajectory file");
  header = detail::split_fields(header_text);

  const std::size_t fields = header.size();
  if (fields < 3 || header[0] != "t")
    throw ParseError(line_no, "header must start with 't' followed by state and input columns");
  std::size_t n = 0;
  bool with_dx = false;
  if ((fields - 1) % 3 == 0 && header.back().substr(0, 2) == "dx") {
    n = (fields - 1) / 3;
    with_dx = true;
  } else if ((fields - 1) % 2 == 0) {
    n = (fields - 1) / 2;
  } else {
    throw ParseError(line_no, "header column count does not match t,x1..xn,u1..un[,dx1..dxn]");
  }
  auto expect = [&](std::size_t col, const std::string& name) {
    if (header[col] != name)
      throw ParseError(line_no, "expected column '" + name + "', found '" +
                                    std::string(header[col]) + "'");
  };
  for (std::size_t j = 1; j <= n; ++j) {
    expect(j, "x" + std::to_string(j));
    expect(n + j, "u" + std::to_string(j));
    if (with_dx) expect(2 * n + j, "dx" + std::to_string(j));
  }
  const std::size_t header_line = line_no;

  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::size_t> lines;
  while (std::getline(is, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto row = detail::split_fields(line);
    if (row.size() != fields)
      throw ParseError(line_no, "expected " + std::to_string(fields) + " fields, found " +
                                    std::to_string(row.size()));
    times.push_back(detail::parse_real(row[0], line_no));
    for (std::size_t c = 1; c < fields; ++c) values.push_back(detail::parse_real(row[c], line_no));
    lines.push_back(line_no);
  }
  const std::size_t m = times.size();
  if (m < 2) throw ParseError(m ? lines.back() : header_line, "trajectory needs at least two samples");

  const double t0 = times.front();
  const double step = (times.back() - t0) / static_cast<double>(m - 1);
  if (!(step > 0.0)) throw ParseError(lines.back(), "time column must be increasing");
  for (std::size_t k = 0; k < m; ++k) {
    const double expected = t0 + static_cast<double>(k) * step;
    if (std::abs(times[k] - expected) > kTimeGridJitter * step)
      throw ParseError(lines[k], "non-uniform time grid");
  }

  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = static_cast<Eigen::Index>(n);
  Matrix x(rows, cols), u(rows, cols), dx(rows, cols);
  const std::size_t stride = fields - 1;
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double* rec = values.data() + static_cast<std::size_t>(k) * stride;
    for (Eigen::Index j = 0; j < cols; ++j) {
      x(k, j) = rec[j];
      u(k, j) = rec[cols + j];
      if (with_dx) dx(k, j) = rec[2 * cols + j];
    }
  }
  if (with_dx) return Trajectory(t0, step, std::move(x), std::move(u), std::move(dx));
  return Trajectory(t0, step, std::move(x), std::move(u));
}

}  // namespace netrecon
