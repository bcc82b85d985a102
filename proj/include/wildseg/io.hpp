#pragma once

#include "wildseg/core_stats.hpp"

#include <filesystem>
#include <istream>
#include <string>

namespace wildseg {

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

/// Parses a single-column numeric CSV: one value per line, '\n' or "\r\n"
/// endings, blank lines ignored, a non-numeric first line is taken as a
/// header and skipped. Throws IoError carrying the offending line number.
TimeSeries parse_series(std::istream &in);

TimeSeries read_series_csv(const std::filesystem::path &path);

/// Writes `content` to `path`, or to stdout when path is empty or "-".
void write_text(const std::filesystem::path &path, const std::string &content);

} // namespace wildseg
