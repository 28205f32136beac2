#pragma once

// Spectrum CSV: header `energy_gev,p_mumu,sigma_stat[,sigma_sys]`, one point
// per row, `#` comment lines and blank lines ignored.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lgosc/selection.hpp"

namespace lgosc {

// Parses and validates a spectrum; rows come back sorted by energy. Errors
// are DataError naming the offending line.
std::vector<MeasuredPoint> parse_dataset(std::istream& in);
std::vector<MeasuredPoint> parse_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const std::vector<MeasuredPoint>& points);
void write_dataset(const std::filesystem::path& path, const std::vector<MeasuredPoint>& points);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace lgosc
