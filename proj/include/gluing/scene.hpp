#pragma once

// Line-oriented scene files.
//
//   # comment
//   kappa 0
//   piece sq polygon 0 0 1 0 1 1 0 1
//   piece s segment 0 0 3.14159 0
//   arc a sq sides 1
//   arc b sq side 0 from 0.25 to 0.75
//   glue g a + b -
//   glue f fold a
//   verify samples=1000 seed=7 h=0.02,0.01,0.005 tolfactor=4 bias=0.7 focus=0.5 probes=on

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gluing/complex.hpp"
#include "gluing/verifier.hpp"

namespace gluing {

class SceneError : public std::runtime_error {
 public:
  SceneError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct Scene {
  ComplexSpec spec;
  VerifierConfig config;
};

namespace detail {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const {
    const int col = pos_ < tokens_.size() ? tokens_[pos_].column : (tokens_.empty() ? 1 : end_column());
    throw SceneError(line_, col, what);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& what) const { throw SceneError(line_, t.column, what); }

  Token next(const char* expected) {
    if (done()) fail(std::string("expected ") + expected);
    return tokens_[pos_++];
  }
  Token peek() const {
    if (done()) fail("unexpected end of line");
    return tokens_[pos_];
  }

  double number(const char* expected) {
    const Token t = next(expected);
    return parse_real(t, expected);
  }
  int integer(const char* expected) {
    const Token t = next(expected);
    int v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      fail_at(t, "malformed integer '" + std::string(t.text) + "' (expected " + expected + ")");
    return v;
  }
  std::string identifier(const char* expected) {
    const Token t = next(expected);
    if (!is_identifier(t.text)) fail_at(t, "invalid identifier '" + std::string(t.text) + "'");
    return std::string(t.text);
  }
  void keyword(std::string_view kw) {
    const Token t = next(std::string(kw).c_str());
    if (t.text != kw) fail_at(t, "expected '" + std::string(kw) + "', found '" + std::string(t.text) + "'");
  }
  void finish() {
    if (!done()) fail("unexpected token '" + std::string(tokens_[pos_].text) + "'");
  }

  double parse_real(const Token& t, const char* expected) const {
    return parse_real_text(t, t.text, expected);
  }
  double parse_real_text(const Token& t, std::string_view text, const char* expected) const {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v))
      fail_at(t, "malformed number '" + std::string(text) + "' (expected " + expected + ")");
    return v;
  }

  static bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
  }

 private:
  int end_column() const { return tokens_.back().column + static_cast<int>(tokens_.back().text.size()); }
  int line_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline void parse_verify(LineParser& lp, VerifierConfig& cfg) {
  while (!lp.done()) {
    const Token t = lp.next("key=value");
    const std::size_t eq = t.text.find('=');
    if (eq == std::string_view::npos) lp.fail_at(t, "expected key=value, found '" + std::string(t.text) + "'");
    const std::string_view key = t.text.substr(0, eq), value = t.text.substr(eq + 1);
    if (key == "samples") {
      cfg.sample_count = static_cast<int>(lp.parse_real_text(t, value, "sample count"));
    } else if (key == "seed") {
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) lp.fail_at(t, "malformed seed '" + std::string(value) + "'");
      cfg.seed = v;
    } else if (key == "h") {
      cfg.h_schedule.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string_view item = value.substr(start, comma == std::string_view::npos ? value.npos : comma - start);
        cfg.h_schedule.push_back(lp.parse_real_text(t, item, "spacing"));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (key == "tolfactor") {
      cfg.angle_tolerance_factor = lp.parse_real_text(t, value, "tolerance factor");
    } else if (key == "bias") {
      cfg.bias = lp.parse_real_text(t, value, "bias");
    } else if (key == "focus") {
      cfg.focus_radius = lp.parse_real_text(t, value, "focus radius");
    } else if (key == "probes") {
      if (value != "on" && value != "off") lp.fail_at(t, "probes must be on or off");
      cfg.link_probes = value == "on";
    } else {
      lp.fail_at(t, "unknown verify key '" + std::string(key) + "'");
    }
  }
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw SceneError(lp.line(), 1, e.what());
  }
}

}  // namespace detail

inline Scene parse_scene_text(std::string_view text) {
  Scene scene;
  ComplexSpec& spec = scene.spec;
  bool have_kappa = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    detail::LineParser lp(line_no, detail::tokenize(line));
    if (lp.done()) continue;
    const detail::Token head = lp.next("statement");
    if (head.text == "kappa") {
      if (have_kappa) lp.fail_at(head, "duplicate kappa statement");
      spec.kappa.kappa = lp.number("curvature");
      have_kappa = true;
    } else if (head.text == "piece") {
      const detail::Token id_tok = lp.peek();
      Piece p;
      p.id = lp.identifier("piece id");
      if (spec.piece_index(p.id) >= 0) lp.fail_at(id_tok, "duplicate piece id '" + p.id + "'");
      const detail::Token kind = lp.next("polygon or segment");
      if (kind.text == "polygon") {
        p.kind = PieceKind::Polygon;
      } else if (kind.text == "segment") {
        p.kind = PieceKind::Segment;
      } else {
        lp.fail_at(kind, "expected polygon or segment, found '" + std::string(kind.text) + "'");
      }
      while (!lp.done()) {
        const double x = lp.number("x coordinate");
        const double y = lp.number("y coordinate");
        p.vertices.push_back({x, y});
      }
      if (p.kind == PieceKind::Polygon && p.vertices.size() < 3) lp.fail("a polygon needs at least 3 vertices");
      if (p.kind == PieceKind::Segment && p.vertices.size() != 2) lp.fail("a segment needs exactly 2 endpoints");
      spec.pieces.push_back(std::move(p));
    } else if (head.text == "arc") {
      const detail::Token id_tok = lp.peek();
      BoundaryArc a;
      a.id = lp.identifier("arc id");
      if (spec.arc_index(a.id) >= 0) lp.fail_at(id_tok, "duplicate arc id '" + a.id + "'");
      const detail::Token piece_tok = lp.peek();
      const std::string piece = lp.identifier("piece id");
      a.piece = spec.piece_index(piece);
      if (a.piece < 0) lp.fail_at(piece_tok, "unknown piece '" + piece + "'");
      const detail::Token mode = lp.next("sides or side");
      if (mode.text == "sides") {
        while (!lp.done()) a.sides.push_back(lp.integer("side index"));
        if (a.sides.empty()) lp.fail("expected at least one side index");
      } else if (mode.text == "side") {
        SubSide sub;
        sub.side = lp.integer("side index");
        lp.keyword("from");
        sub.from = lp.number("start parameter");
        lp.keyword("to");
        sub.to = lp.number("end parameter");
        a.sides.push_back(sub.side);
        a.sub = sub;
      } else {
        lp.fail_at(mode, "expected sides or side, found '" + std::string(mode.text) + "'");
      }
      const int n = spec.pieces[a.piece].side_count();
      for (int s : a.sides)
        if (s < 0 || s >= n) lp.fail_at(mode, "side index " + std::to_string(s) + " out of range for piece '" + piece + "'");
      spec.arcs.push_back(std::move(a));
    } else if (head.text == "glue") {
      GluingClass g;
      g.id = lp.identifier("gluing class id");
      if (!lp.done() && lp.peek().text == "fold") {
        lp.next("fold");
        const detail::Token arc_tok = lp.peek();
        const std::string arc = lp.identifier("arc id");
        const int ai = spec.arc_index(arc);
        if (ai < 0) lp.fail_at(arc_tok, "unknown arc '" + arc + "'");
        g.members.push_back({ai, false});
        g.self_fold = true;
      } else {
        while (!lp.done()) {
          const detail::Token arc_tok = lp.peek();
          const std::string arc = lp.identifier("arc id");
          const int ai = spec.arc_index(arc);
          if (ai < 0) lp.fail_at(arc_tok, "unknown arc '" + arc + "'");
          const detail::Token o = lp.next("orientation + or -");
          if (o.text != "+" && o.text != "-") lp.fail_at(o, "expected orientation + or -, found '" + std::string(o.text) + "'");
          g.members.push_back({ai, o.text == "-"});
        }
        if (g.members.empty()) lp.fail("expected at least one arc");
      }
      spec.gluings.push_back(std::move(g));
    } else if (head.text == "verify") {
      detail::parse_verify(lp, scene.config);
    } else {
      lp.fail_at(head, "unknown statement '" + std::string(head.text) + "'");
    }
    lp.finish();
  }
  if (spec.pieces.empty()) throw SceneError(std::max(1, line_no), 1, "no pieces");
  return scene;
}

inline Scene parse_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read scene file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene_text(ss.str());
}

}  // namespace gluing
