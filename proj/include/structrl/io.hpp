#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace structrl {

/// Shortest decimal string that round-trips to the same double. Locale-free,
/// so artifacts are byte-stable across machines.
std::string format_double(double v);
std::string format_int(std::int64_t v);

/// Strict parsers: the whole string must be consumed or they throw.
int parse_int(const std::string& s);
std::int64_t parse_i64(const std::string& s);
std::uint64_t parse_u64(const std::string& s);
double parse_double(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// CSV with a header row; cells are written verbatim (callers pass plain
/// numeric tokens, so no quoting is needed).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> read_csv(const std::string& path);

/// Row-major width x height grid, one CSV row per y.
void write_grid_csv(const std::string& path, int width, int height,
                    std::span<const double> values);
void write_grid_csv(const std::string& path, int width, int height, std::span<const int> values);
void write_grid_csv(const std::string& path, int width, int height,
                    std::span<const std::int64_t> values);

/// key=value lines in the given order.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);
std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path);

/// One learning-curve series: a center line plus a shaded band.
struct CurveSeries {
  std::string label;
  std::string color;
  std::vector<double> center;
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Minimal deterministic SVG line plot; x axis is 1-based episode index.
void write_curves_svg(const std::string& path, const std::string& title,
                      const std::vector<CurveSeries>& series);

}  // namespace structrl
