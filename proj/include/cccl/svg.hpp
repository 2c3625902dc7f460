#pragma once

// Minimal self-contained SVG writer: enough for axes, points, lines, a band
// polygon, bars and labels. Coordinates are written with two decimals.

#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "cccl/text.hpp"

namespace cccl::svg {

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) { return text::format_fixed(v, 2); }

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  double width() const { return width_; }
  double height() const { return height_; }

  Document& line(double x1, double y1, double x2, double y2, std::string_view stroke, double stroke_width = 1.0) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
    return *this;
  }

  Document& circle(double cx, double cy, double r, std::string_view fill, double opacity = 1.0) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
             std::string(fill) + "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
    return *this;
  }

  Document& rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none") {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
    return *this;
  }

  Document& polygon(std::span<const std::pair<double, double>> pts, std::string_view fill, double opacity) {
    body_ += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
    body_ += "\" fill=\"" + std::string(fill) + "\" fill-opacity=\"" + num(opacity) + "\" stroke=\"none\"/>\n";
    return *this;
  }

  Document& polyline(std::span<const std::pair<double, double>> pts, std::string_view stroke, double stroke_width) {
    body_ += "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
    body_ += "\" fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
    return *this;
  }

  // anchor: start | middle | end
  Document& label(double x, double y, std::string_view content, double size = 12, std::string_view anchor = "start",
                  bool bold = false, std::string_view id = {}) {
    body_ += "<text";
    if (!id.empty()) body_ += " id=\"" + std::string(id) + "\"";
    body_ += " x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + num(size) +
             "\" text-anchor=\"" + std::string(anchor) + "\"";
    if (bold) body_ += " font-weight=\"bold\"";
    body_ += ">" + escape(content) + "</text>\n";
    return *this;
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\">\n<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  double width_;
  double height_;
  std::string body_;
};

/// Maps a data interval onto a pixel interval (pixels may run backwards).
struct Scale {
  double d0, d1, p0, p1;
  double operator()(double v) const { return d1 == d0 ? (p0 + p1) / 2 : p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
};

}  // namespace cccl::svg
