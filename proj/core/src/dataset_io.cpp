#include "lgosc/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "lgosc/error.hpp"

namespace lgosc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, std::string_view column, std::size_t line) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DataError("column '" + std::string(column) + "': '" + std::string(cell) +
                        "' is not a finite number",
                    line);
  }
  return value;
}

constexpr std::array<std::string_view, 4> kColumns{"energy_gev", "p_mumu", "sigma_stat",
                                                   "sigma_sys"};

}  // namespace

std::vector<MeasuredPoint> parse_dataset(std::istream& in) {
  std::array<std::optional<std::size_t>, 4> column_of{};
  std::size_t width = 0;
  bool have_header = false;
  std::vector<MeasuredPoint> points;
  std::vector<std::size_t> lines;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);

    if (!have_header) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto it = std::find(kColumns.begin(), kColumns.end(), cells[c]);
        if (it == kColumns.end()) {
          throw DataError("unknown column '" + std::string(cells[c]) + "'", line_no);
        }
        auto& slot = column_of[it - kColumns.begin()];
        if (slot) throw DataError("duplicate column '" + std::string(cells[c]) + "'", line_no);
        slot = c;
      }
      for (std::size_t k = 0; k < 3; ++k) {
        if (!column_of[k]) {
          throw DataError("missing required column '" + std::string(kColumns[k]) + "'", line_no);
        }
      }
      width = cells.size();
      have_header = true;
      continue;
    }

    if (cells.size() != width) {
      throw DataError("expected " + std::to_string(width) + " columns, found " +
                          std::to_string(cells.size()),
                      line_no);
    }
    MeasuredPoint p;
    p.energy_gev = parse_number(cells[*column_of[0]], kColumns[0], line_no);
    p.p_mumu = parse_number(cells[*column_of[1]], kColumns[1], line_no);
    p.sigma_stat = parse_number(cells[*column_of[2]], kColumns[2], line_no);
    if (column_of[3]) p.sigma_sys = parse_number(cells[*column_of[3]], kColumns[3], line_no);

    if (!(p.energy_gev > 0.0)) throw DataError("column 'energy_gev': must be positive", line_no);
    if (!(p.p_mumu >= 0.0 && p.p_mumu <= 1.0)) {
      throw DataError("column 'p_mumu': " + format_double(p.p_mumu) + " outside [0, 1]", line_no);
    }
    if (p.sigma_stat < 0.0) throw DataError("column 'sigma_stat': must be non-negative", line_no);
    if (p.sigma_sys < 0.0) throw DataError("column 'sigma_sys': must be non-negative", line_no);
    points.push_back(p);
    lines.push_back(line_no);
  }
  if (!have_header) throw DataError("missing header row");
  if (points.empty()) throw DataError("dataset has no rows");

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].energy_gev < points[b].energy_gev;
  });
  std::vector<MeasuredPoint> sorted;
  sorted.reserve(points.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && points[order[k]].energy_gev == points[order[k - 1]].energy_gev) {
      const std::size_t later = std::max(lines[order[k]], lines[order[k - 1]]);
      throw DataError("duplicate energy " + format_double(points[order[k]].energy_gev) + " GeV",
                      later);
    }
    sorted.push_back(points[order[k]]);
  }
  return sorted;
}

std::vector<MeasuredPoint> parse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  try {
    return parse_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<MeasuredPoint>& points) {
  out << "energy_gev,p_mumu,sigma_stat,sigma_sys\n";
  for (const MeasuredPoint& p : points) {
    out << format_double(p.energy_gev) << ',' << format_double(p.p_mumu) << ','
        << format_double(p.sigma_stat) << ',' << format_double(p.sigma_sys) << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const std::vector<MeasuredPoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset '" + path.string() + "'");
  write_dataset(out, points);
  if (!out) throw IoError("failed writing dataset '" + path.string() + "'");
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf.data(), ptr);
}

}  // namespace lgosc
