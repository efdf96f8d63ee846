#include "structrl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace structrl {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

namespace {

template <typename T>
T parse_via_from_chars(const std::string& s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("not ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

int parse_int(const std::string& s) { return parse_via_from_chars<int>(s, "an integer"); }

std::int64_t parse_i64(const std::string& s) {
  return parse_via_from_chars<std::int64_t>(s, "an integer");
}

std::uint64_t parse_u64(const std::string& s) {
  return parse_via_from_chars<std::uint64_t>(s, "a non-negative integer");
}

double parse_double(const std::string& s) { return parse_via_from_chars<double>(s, "a number"); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  write_text_file(path, out);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<std::string>> rows;
  std::string cell;
  std::vector<std::string> row;
  for (const char c : text) {
    if (c == '\n') {
      row.push_back(cell);
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (c == ',') {
      row.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

template <typename T, typename Fmt>
void write_grid_impl(const std::string& path, int width, int height, std::span<const T> values,
                     Fmt fmt) {
  if (static_cast<int>(values.size()) != width * height)
    throw std::invalid_argument("write_grid_csv: value count does not match width*height");
  std::string out;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x) out += ',';
      out += fmt(values[static_cast<std::size_t>(y * width + x)]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace

void write_grid_csv(const std::string& path, int width, int height,
                    std::span<const double> values) {
  write_grid_impl(path, width, height, values, [](double v) { return format_double(v); });
}

void write_grid_csv(const std::string& path, int width, int height, std::span<const int> values) {
  write_grid_impl(path, width, height, values,
                  [](int v) { return format_int(static_cast<std::int64_t>(v)); });
}

void write_grid_csv(const std::string& path, int width, int height,
                    std::span<const std::int64_t> values) {
  write_grid_impl(path, width, height, values, [](std::int64_t v) { return format_int(v); });
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [key, value] : entries) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest line without '=': " + line);
    entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return entries;
}

namespace {

struct PlotFrame {
  double x0, x1, y0, y1;          // data ranges
  double px0, px1, py0, py1;      // pixel box
  double sx(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
  double sy(double y) const { return py1 - (y - y0) / (y1 - y0) * (py1 - py0); }
};

std::string svg_num(double v) {
  const double r = std::round(v * 100.0) / 100.0;
  return format_double(r == 0.0 ? 0.0 : r);
}

}  // namespace

void write_curves_svg(const std::string& path, const std::string& title,
                      const std::vector<CurveSeries>& series) {
  std::size_t n = 0;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& s : series) {
    n = std::max(n, s.center.size());
    for (const auto* v : {&s.center, &s.lo, &s.hi})
      for (const double y : *v) {
        if (!any) lo = hi = y, any = true;
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
  }
  if (n < 2 || !any) throw std::invalid_argument("write_curves_svg: need at least two points");
  if (hi - lo < 1e-9) hi = lo + 1.0;

  const PlotFrame f{1.0, static_cast<double>(n), lo, hi, 60.0, 760.0, 40.0, 420.0};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" "
         "viewBox=\"0 0 800 480\">\n";
  out += "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + title + "</text>\n";

  out += "<line x1=\"60\" y1=\"420\" x2=\"760\" y2=\"420\" stroke=\"black\"/>\n";
  out += "<line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = lo + (hi - lo) * i / 4.0;
    const double yp = f.sy(yv);
    out += "<line x1=\"55\" y1=\"" + svg_num(yp) + "\" x2=\"60\" y2=\"" + svg_num(yp) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"50\" y=\"" + svg_num(yp + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + svg_num(yv) +
           "</text>\n";
    const double xv = 1.0 + (static_cast<double>(n) - 1.0) * i / 4.0;
    const double xp = f.sx(xv);
    out += "<line x1=\"" + svg_num(xp) + "\" y1=\"420\" x2=\"" + svg_num(xp) +
           "\" y2=\"425\" stroke=\"black\"/>\n";
    out += "<text x=\"" + svg_num(xp) +
           "\" y=\"440\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           svg_num(std::round(xv)) + "</text>\n";
  }
  out += "<text x=\"410\" y=\"466\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">episode</text>\n";
  out += "<text x=\"18\" y=\"230\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 18 230)\">return</text>\n";

  int legend_y = 56;
  for (const auto& s : series) {
    if (s.lo.size() == s.center.size() && s.hi.size() == s.center.size()) {
      std::string band = "<path d=\"M";
      for (std::size_t i = 0; i < s.center.size(); ++i) {
        band += ' ' + svg_num(f.sx(static_cast<double>(i + 1))) + ' ' + svg_num(f.sy(s.lo[i]));
      }
      for (std::size_t i = s.center.size(); i-- > 0;) {
        band += ' ' + svg_num(f.sx(static_cast<double>(i + 1))) + ' ' + svg_num(f.sy(s.hi[i]));
      }
      band += " Z\" fill=\"" + s.color + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
      out += band;
    }
    std::string line = "<polyline fill=\"none\" stroke=\"" + s.color +
                       "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.center.size(); ++i) {
      if (i) line += ' ';
      line += svg_num(f.sx(static_cast<double>(i + 1))) + ',' + svg_num(f.sy(s.center[i]));
    }
    line += "\"/>\n";
    out += line;
    out += "<line x1=\"640\" y1=\"" + svg_num(legend_y) + "\" x2=\"668\" y2=\"" +
           svg_num(legend_y) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"674\" y=\"" + svg_num(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
    legend_y += 18;
  }
  out += "</svg>\n";
  write_text_file(path, out);
}

}  // namespace structrl
