#include "stab/render.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "stab/cuts.hpp"
#include "stab/error.hpp"

namespace stab {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  // Trim trailing zeros so output stays compact and stable.
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

class Canvas {
 public:
  Canvas(const Instance& inst, const RenderStyle& style)
      : inst_(inst), style_(style) {
    min_x_ = max_x_ = inst[0].x;
    min_y_ = max_y_ = inst[0].y;
    for (const Point& p : inst.points()) {
      min_x_ = std::min<double>(min_x_, p.x);
      max_x_ = std::max<double>(max_x_, p.x);
      min_y_ = std::min<double>(min_y_, p.y);
      max_y_ = std::max<double>(max_y_, p.y);
    }
    const double span = std::max({max_x_ - min_x_, max_y_ - min_y_, 1.0});
    scale_ = style.size / span;
    width_ = (max_x_ - min_x_) * scale_ + 2 * style.margin;
    height_ = (max_y_ - min_y_) * scale_ + 2 * style.margin + kCaption;
  }

  void edge(const Segment& e, double width) {
    const Point p = inst_[e.a], q = inst_[e.b];
    body_ += "<line x1=\"" + fmt(sx(p.x)) + "\" y1=\"" + fmt(sy(p.y)) +
             "\" x2=\"" + fmt(sx(q.x)) + "\" y2=\"" + fmt(sy(q.y)) +
             "\" stroke-width=\"" + fmt(width) + "\"/>\n";
  }

  std::string finish(const std::string& caption) const {
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
        "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " +
        fmt(height_) + "\">\n";
    out += "<title>" + escape(inst_.name()) + "</title>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<g stroke=\"black\" stroke-linecap=\"round\">\n" + body_ + "</g>\n";
    out += "<g fill=\"#c0392b\">\n";
    for (const Point& p : inst_.points())
      out += "<circle cx=\"" + fmt(sx(p.x)) + "\" cy=\"" + fmt(sy(p.y)) +
             "\" r=\"" + fmt(style_.point_radius) + "\"/>\n";
    out += "</g>\n";
    if (!caption.empty())
      out += "<text x=\"" + fmt(style_.margin) + "\" y=\"" +
             fmt(height_ - style_.margin / 2) +
             "\" font-family=\"monospace\" font-size=\"14\">" + escape(caption) +
             "</text>\n";
    out += "</svg>\n";
    return out;
  }

 private:
  static constexpr double kCaption = 20.0;

  double sx(double x) const { return style_.margin + (x - min_x_) * scale_; }
  // SVG y grows downward.
  double sy(double y) const { return style_.margin + (max_y_ - y) * scale_; }

  static std::string escape(const std::string& s) {
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

  const Instance& inst_;
  RenderStyle style_;
  double min_x_, max_x_, min_y_, max_y_;
  double scale_ = 1.0;
  double width_ = 0.0;
  double height_ = 0.0;
  std::string body_;
};

}  // namespace

std::string render_svg(const Instance& inst, const Solution& sol,
                       const RenderStyle& style) {
  check_edges(sol.edges, inst.points().size());
  Canvas canvas(inst, style);
  EdgeSet edges = sol.edges;
  std::sort(edges.begin(), edges.end());
  for (const Segment& e : edges) canvas.edge(e, style.base_stroke);
  return canvas.finish("k = " + std::to_string(sol.k));
}

std::string render_svg_fractional(const Instance& inst, std::span<const double> x,
                                  double k_frac, const RenderStyle& style) {
  const int n = inst.size();
  if (static_cast<int>(x.size()) != num_edges(n))
    throw Error("fractional point does not match the instance");
  Canvas canvas(inst, style);
  for (int id = 0; id < num_edges(n); ++id)
    if (x[id] > kSupportThreshold) canvas.edge(edge_at(id, n), style.base_stroke * x[id]);
  return canvas.finish("k_frac = " + fmt(k_frac));
}

std::string render_svg_points(const Instance& inst, const RenderStyle& style) {
  return Canvas(inst, style).finish("");
}

}  // namespace stab
