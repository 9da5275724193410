#include "mulepatrol/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace mule {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

class Viewport {
 public:
  Viewport(const Instance& inst, const RenderStyle& style) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const auto& s : inst.segments) {
      for (Point p : {s.a, s.b}) {
        x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
      }
    }
    min_x_ = x0;
    max_y_ = y1;
    const double w = std::max(x1 - x0, 1e-9);
    const double h = std::max(y1 - y0, 1e-9);
    const double avail_w = style.width_px - 2.0 * style.margin_px;
    const double avail_h = style.height_px - 2.0 * style.margin_px;
    scale_ = std::min(avail_w / w, avail_h / h);
    // Centre the drawing inside the margins.
    pad_x_ = style.margin_px + 0.5 * (avail_w - scale_ * w);
    pad_y_ = style.margin_px + 0.5 * (avail_h - scale_ * h);
  }

  // Screen y grows downwards.
  Point map(Point p) const { return {pad_x_ + (p.x - min_x_) * scale_, pad_y_ + (max_y_ - p.y) * scale_}; }

 private:
  double min_x_ = 0.0, max_y_ = 0.0, scale_ = 1.0, pad_x_ = 0.0, pad_y_ = 0.0;
};

void line(std::string& out, const char* cls, Point a, Point b) {
  out += "  <line class=\"";
  out += cls;
  out += "\" x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" + num(b.y) + "\"/>\n";
}

// Unit direction of the path near arc s, in world coordinates.
Point direction_at(const EulerPath& path, double s) {
  const auto& pl = path.polyline;
  if (pl.size() < 2) return {1.0, 0.0};
  auto it = std::upper_bound(pl.begin(), pl.end(), s, [](double v, const PolylinePoint& q) { return v < q.s; });
  if (it == pl.end()) --it;
  if (it == pl.begin()) ++it;
  const Point d = it->p - (it - 1)->p;
  const double n = std::hypot(d.x, d.y);
  return n > 0.0 ? (1.0 / n) * d : Point{1.0, 0.0};
}

}  // namespace

std::string render_svg(const Instance& inst, const DeploymentPlan* plan, const RenderStyle& st) {
  if (plan != nullptr) check_plan_matches(*plan, inst);
  const Viewport vp(inst, st);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(st.width_px) + "\" height=\"" +
         num(st.height_px) + "\" viewBox=\"0 0 " + num(st.width_px) + " " + num(st.height_px) + "\">\n";
  out += "  <style>\n";
  out += "    .segment { stroke: " + st.segment_color + "; stroke-width: " + num(st.segment_width) +
         "; stroke-linecap: round; }\n";
  out += "    .connector { stroke: " + st.connector_color + "; stroke-width: " + num(st.connector_width) +
         "; stroke-dasharray: 6 4; }\n";
  out += "    .euler { fill: none; stroke: " + st.euler_color + "; stroke-width: " + num(st.euler_width) +
         "; stroke-opacity: " + num(st.euler_opacity) + "; }\n";
  out += "    .tick { stroke: " + st.tick_color + "; stroke-width: 1.5; }\n";
  out += "    .mule { fill: " + st.mule_color + "; stroke: #000000; stroke-width: 0.5; }\n";
  out += "    .sensor { fill: " + st.sensor_color + "; stroke: #000000; stroke-width: 0.5; }\n";
  out += "  </style>\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + num(st.width_px) + "\" height=\"" + num(st.height_px) +
         "\" fill=\"#ffffff\"/>\n";

  for (const auto& s : inst.segments) line(out, "segment", vp.map(s.a), vp.map(s.b));

  if (plan != nullptr) {
    for (const auto& pt : plan->trees)
      for (const auto& c : pt.tree.connectors) line(out, "connector", vp.map(c.point_i(inst)), vp.map(c.point_j(inst)));

    for (const auto& pt : plan->trees) {
      out += "  <polyline class=\"euler\" transform=\"translate(" + num(st.euler_offset_px) + "," +
             num(-st.euler_offset_px) + ")\" points=\"";
      bool first = true;
      for (const auto& q : pt.path.polyline) {
        const Point p = vp.map(q.p);
        if (!first) out += ' ';
        first = false;
        out += num(p.x) + "," + num(p.y);
      }
      out += "\"/>\n";
    }

    for (const auto& pt : plan->trees) {
      const auto pieces = plan->pieces_of(pt);
      std::vector<double> bounds;
      for (const auto& p : pieces) bounds.push_back(p.s_start);
      bounds.push_back(pieces.back().s_end);
      for (double s : bounds) {
        const Point c = vp.map(point_at(pt.path, s));
        const Point d = direction_at(pt.path, s);
        const Point n{d.y, d.x};  // perpendicular in screen space (y flipped)
        const double h = 0.5 * st.tick_length_px;
        line(out, "tick", c - h * n, c + h * n);
      }
    }

    for (std::size_t m = 0; m < 2 * plan->pieces.size(); ++m) {
      const auto& piece = plan->pieces[m / 2];
      const auto& path = plan->trees[static_cast<std::size_t>(piece.tree_index)].path;
      const Point c = vp.map(point_at(path, m % 2 == 0 ? piece.s_start : piece.s_end));
      const double h = 0.5 * st.mule_size_px;
      out += "  <rect class=\"mule\" data-mule=\"" + std::to_string(m) + "\" x=\"" + num(c.x - h) + "\" y=\"" +
             num(c.y - h) + "\" width=\"" + num(st.mule_size_px) + "\" height=\"" + num(st.mule_size_px) + "\"/>\n";
    }
  }

  for (const auto& s : inst.sensors) {
    const Point c = vp.map(inst.segments[static_cast<std::size_t>(s.segment_id)].at(s.offset0));
    out += "  <circle class=\"sensor\" data-sensor=\"" + std::to_string(s.id) + "\" cx=\"" + num(c.x) + "\" cy=\"" +
           num(c.y) + "\" r=\"" + num(st.sensor_radius_px) + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace mule
