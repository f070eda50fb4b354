#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace isoflow::app {

// RFC 4180 table; numbers are written with 17 significant digits so the
// file round-trips every double exactly.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(const std::vector<double>& values);
  CsvTable& row(const std::vector<std::string>& cells);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);
std::string csv_escape(const std::string& cell);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Static SVG line plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& plot);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace isoflow::app
