#include "burster/svg.hpp"

#include <sstream>

#include "burster/csvio.hpp"

namespace burster {

namespace {
constexpr double W = 720, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
}

SvgPlot::SvgPlot(double x0, double x1, double y0, double y1, std::string x_label,
                 std::string y_label, std::string title)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), xl_(std::move(x_label)),
      yl_(std::move(y_label)), title_(std::move(title)) {}

double SvgPlot::px(double x) const {
  return ML + (x - x0_) / (x1_ - x0_) * (W - ML - MR);
}
double SvgPlot::py(double y) const {
  return H - MB - (y - y0_) / (y1_ - y0_) * (H - MT - MB);
}

void SvgPlot::add_polyline(const std::vector<std::pair<double, double>>& pts,
                           const std::string& color, double width) {
  if (pts.size() < 2) return;
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
    << "\" points=\"";
  for (auto& [x, y] : pts) s << px(x) << "," << py(y) << " ";
  s << "\"/>\n";
  body_ += s.str();
}

void SvgPlot::add_marker(double x, double y, const std::string& color, bool filled) {
  std::ostringstream s;
  s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"4\" stroke=\"" << color
    << "\" fill=\"" << (filled ? color : std::string("white")) << "\"/>\n";
  body_ += s.str();
}

std::string SvgPlot::render() const {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
    << "\" height=\"" << H - MT - MB << "\" fill=\"white\" stroke=\"black\"/>\n";
  // Axis tick labels at the corners plus midpoints.
  for (int i = 0; i <= 4; ++i) {
    double fx = x0_ + (x1_ - x0_) * i / 4.0;
    double fy = y0_ + (y1_ - y0_) * i / 4.0;
    s << "<text x=\"" << px(fx) << "\" y=\"" << H - MB + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << fx << "</text>\n";
    s << "<text x=\"" << ML - 8 << "\" y=\"" << py(fy) + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << fy << "</text>\n";
    s << "<line x1=\"" << px(fx) << "\" y1=\"" << H - MB << "\" x2=\"" << px(fx)
      << "\" y2=\"" << H - MB + 5 << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ML - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ML << "\" y2=\""
      << py(fy) << "\" stroke=\"black\"/>\n";
  }
  s << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 10
    << "\" font-size=\"13\" text-anchor=\"middle\">" << xl_ << "</text>\n";
  s << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
    << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (MT + H - MB) / 2 << ")\">" << yl_ << "</text>\n";
  if (!title_.empty())
    s << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"24\" font-size=\"14\" "
      << "text-anchor=\"middle\">" << title_ << "</text>\n";
  s << body_ << "</svg>\n";
  return s.str();
}

void SvgPlot::save(const std::string& path) const { write_text_atomic(path, render()); }

}  // namespace burster
