#pragma once

// SVG 1.1 drawings of a scene in development: pieces side by side, arcs
// coloured by gluing class, optional path legs and marked points on top.

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "gluing/complex.hpp"
#include "gluing/glued_metric.hpp"

namespace gluing {

struct SvgOverlay {
  std::string title;
  std::vector<PathLeg> legs;
  std::vector<std::pair<PiecePoint, std::string>> points;
};

namespace detail {

struct Layout {
  std::vector<Vec2> offset;  // per piece, scene units
  double scale = 1.0;
  double min_y = 0.0, height = 0.0;
  Vec2 map(int piece, Vec2 p) const {
    const Vec2 q = p + offset[piece];
    return {20.0 + q.x * scale, 40.0 + (min_y + height - q.y) * scale};
  }
};

inline Layout layout(const ComplexSpec& spec, double width_px) {
  Layout l;
  double x = 0.0, lo = kInfinity, hi = -kInfinity, max_h = 0.0;
  for (const Piece& p : spec.pieces) {
    double a = kInfinity, b = -kInfinity, c = kInfinity, d = -kInfinity;
    for (const Vec2& v : p.vertices) {
      a = std::min(a, v.x);
      b = std::max(b, v.x);
      c = std::min(c, v.y);
      d = std::max(d, v.y);
    }
    max_h = std::max(max_h, d - c);
    l.offset.push_back({x - a, 0.0});
    x += (b - a);
    lo = std::min(lo, c);
    hi = std::max(hi, d);
  }
  const double gap = 0.3 * std::max(max_h, 1e-3);
  for (std::size_t i = 0; i < l.offset.size(); ++i) l.offset[i].x += gap * i;
  const double total = x + gap * (spec.pieces.size() - 1);
  l.scale = width_px / std::max(total, 1e-9);
  l.min_y = lo;
  l.height = std::max(hi - lo, 1e-9);
  return l;
}

inline std::string xy(Vec2 p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f,%.3f", p.x, p.y);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const ComplexSpec& spec, const SvgOverlay& overlay = {}, double width_px = 800.0) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  const detail::Layout l = detail::layout(spec, width_px);
  const double height_px = l.height * l.scale + 60.0;
  char head[256];
  std::snprintf(head, sizeof head,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.0f\" height=\"%.0f\">\n",
                width_px + 40.0, height_px);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += head;
  if (!overlay.title.empty())
    out += "<text x=\"20\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" + detail::escape_xml(overlay.title) +
           "</text>\n";
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const Piece& p = spec.pieces[i];
    std::string pts;
    for (const Vec2& v : p.vertices) pts += detail::xy(l.map(static_cast<int>(i), v)) + " ";
    if (p.kind == PieceKind::Polygon)
      out += "<polygon points=\"" + pts + "\" fill=\"#eeeeee\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    else
      out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
    const Vec2 label = l.map(static_cast<int>(i), p.vertices.front());
    out += "<text x=\"" + std::to_string(label.x) + "\" y=\"" + std::to_string(label.y + 14) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape_xml(p.id) + "</text>\n";
  }
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    const int arc = static_cast<int>(a);
    const int g = spec.arc_class(arc).first;
    const char* colour = g < 0 ? "#000000" : palette[g % 10];
    const double len = spec.arc_length(arc);
    const int piece = spec.arcs[a].piece;
    std::string pts;
    for (double t : spec.arc_breakpoints(arc)) pts += detail::xy(l.map(piece, spec.arc_point(arc, t))) + " ";
    if (len <= kLengthTolerance) {
      const Vec2 c = l.map(piece, spec.arc_point(arc, 0.0));
      out += "<circle cx=\"" + std::to_string(c.x) + "\" cy=\"" + std::to_string(c.y) + "\" r=\"5\" fill=\"" + colour +
             "\"/>\n";
    } else {
      out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"3\"/>\n";
    }
  }
  for (const PathLeg& leg : overlay.legs) {
    const Vec2 a = l.map(leg.piece, leg.from), b = l.map(leg.piece, leg.to);
    out += "<line x1=\"" + std::to_string(a.x) + "\" y1=\"" + std::to_string(a.y) + "\" x2=\"" + std::to_string(b.x) +
           "\" y2=\"" + std::to_string(b.y) + "\" stroke=\"#0000cc\" stroke-width=\"2\"/>\n";
  }
  for (const auto& [pp, name] : overlay.points) {
    const Vec2 c = l.map(pp.piece, pp.pos);
    out += "<circle cx=\"" + std::to_string(c.x) + "\" cy=\"" + std::to_string(c.y) +
           "\" r=\"4\" fill=\"#cc0000\" stroke=\"#000000\"/>\n";
    out += "<text x=\"" + std::to_string(c.x + 6) + "\" y=\"" + std::to_string(c.y - 6) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape_xml(name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gluing
