#pragma once
// Minimal SVG rendering: polylines + axes + labels, no external dependency.
#include <string>
#include <vector>

namespace burster {

class SvgPlot {
 public:
  SvgPlot(double x0, double x1, double y0, double y1, std::string x_label,
          std::string y_label, std::string title = "");

  void add_polyline(const std::vector<std::pair<double, double>>& pts,
                    const std::string& color, double width = 1.0);
  void add_marker(double x, double y, const std::string& color, bool filled);

  std::string render() const;
  void save(const std::string& path) const;

 private:
  double x0_, x1_, y0_, y1_;
  std::string xl_, yl_, title_;
  std::string body_;
  double px(double x) const;
  double py(double y) const;
};

}  // namespace burster
