#include "chordbasis/render.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace chordbasis {

namespace {

constexpr double kRadius = 40.0;
constexpr double kPitch = 120.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') {
      out += "&amp;";
    } else if (c == '<') {
      out += "&lt;";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_text(const ChordDiagram& d) { return format(d); }

std::string render_svg(const ChordDiagram& d) {
  const StringRep& rep = d.rep();
  const std::size_t m = rep.circles();
  const double width = kPitch * static_cast<double>(m);
  const double height = 2 * kMargin + 20;

  struct Point {
    double x, y;
  };
  std::vector<std::vector<Point>> ends(rep.chords());
  for (std::size_t i = 0; i < m; ++i) {
    const double cx = kMargin + kPitch * static_cast<double>(i);
    const std::size_t len = rep.circle_size(i);
    auto block = rep.circle(i);
    for (std::size_t k = 0; k < len; ++k) {
      const double t = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      ends[block[k]].push_back(Point{cx + kRadius * std::sin(t), kMargin - kRadius * std::cos(t)});
    }
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<title>" + escape(format(d)) + "</title>\n";
  for (std::size_t i = 0; i < m; ++i) {
    const double cx = kMargin + kPitch * static_cast<double>(i);
    out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(kMargin) + "\" r=\"" + num(kRadius) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(cx) + "\" y=\"" + num(2 * kMargin + 10) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" + std::to_string(i) + "</text>\n";
  }
  for (std::size_t l = 0; l < ends.size(); ++l) {
    const Point a = ends[l][0], b = ends[l][1];
    out += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" + num(b.y) +
           "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (const auto& pair : ends) {
    for (const Point& p : pair) {
      out += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"2.5\" fill=\"black\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace chordbasis
