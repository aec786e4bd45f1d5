#pragma once

// Minimal SVG emitter for the report charts. Coordinates are printed with a
// fixed number of decimals so output bytes do not depend on the platform.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uvsram::svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
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

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, std::string_view fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + std::string(fill) + "\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#000") {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
             "\" y2=\"" + num(y2) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke,
                bool dashed = false) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"2\"";
    if (dashed) body_ += " stroke-dasharray=\"6,3\"";
    body_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, std::string_view fill,
               std::string_view stroke = "#000") {
    if (pts.empty()) return;
    body_ += "<polygon fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) +
             "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
  }

  void text(double x, double y, std::string_view s, std::string_view anchor = "start",
            int size = 12) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
             std::to_string(size) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
             escape(s) + "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
           num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" fill=\"#fff\"/>\n" + body_ + "</svg>\n";
  }

 private:
  double width_, height_;
  std::string body_;
};

}  // namespace uvsram::svg
