// Command-line front end: validate, distance, verify, links, report.
//
// Exit status: 0 pass, 1 violations found, 2 invalid input.

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gluing/gluing.hpp"

namespace {

using namespace gluing;

struct Options {
  std::string scene;
  std::string from, to;
  std::optional<int> m;
  std::optional<double> h;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::vector<double> h_schedule;
  std::optional<double> tolfactor, bias, focus;
  std::string svg;
  std::string out_dir;
};

PiecePoint parse_point(const ComplexSpec& spec, const std::string& text) {
  const auto colon = text.find(':');
  const auto comma = text.find(',', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || comma == std::string::npos)
    throw std::invalid_argument("point '" + text + "' is not of the form piece:x,y");
  const int piece = spec.piece_index(text.substr(0, colon));
  if (piece < 0) throw std::invalid_argument("unknown piece in point '" + text + "'");
  auto num = [&](const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("malformed coordinate in '" + text + "'");
    return v;
  };
  return {piece, {num(text.substr(colon + 1, comma - colon - 1)), num(text.substr(comma + 1))}};
}

Rendered invalid(const std::string& what) {
  Rendered r;
  r.report.record("error", {{"message", fmt::quoted(what)}});
  r.outcome = Outcome::Invalid;
  return r;
}

VerifierConfig config_for(const Scene& scene, const Options& o) {
  VerifierConfig c = scene.config;
  if (o.samples) c.sample_count = *o.samples;
  if (o.seed) c.seed = *o.seed;
  if (!o.h_schedule.empty()) c.h_schedule = o.h_schedule;
  if (o.tolfactor) c.angle_tolerance_factor = *o.tolfactor;
  if (o.bias) c.bias = *o.bias;
  if (o.focus) c.focus_radius = *o.focus;
  c.check();
  return c;
}

// Validation errors end every command with verdict=invalid.
std::optional<Rendered> reject_invalid(const ComplexSpec& spec) {
  Rendered v = render_validate_command(spec);
  if (v.outcome == Outcome::Invalid) return v;
  return std::nullopt;
}

Rendered run_distance(const Scene& scene, const Options& o) {
  if (auto bad = reject_invalid(scene.spec)) return *bad;
  const double h = o.h.value_or(scene.config.h_schedule.back());
  const DiscretizedComplex dc(scene.spec, h);
  const PiecePoint x = parse_point(scene.spec, o.from), y = parse_point(scene.spec, o.to);
  Rendered r;
  if (o.m) {
    const double v = dc.predistance(x, y, *o.m);
    r.report.record("predistance", {{"from", fmt::point(scene.spec, x)},
                                    {"to", fmt::point(scene.spec, y)},
                                    {"h", fmt::num(h)},
                                    {"m", std::to_string(*o.m)},
                                    {"value", fmt::num(v)}});
    return r;
  }
  const Measured m = dc.distance(x, y);
  std::vector<std::pair<std::string, std::string>> fields{{"from", fmt::point(scene.spec, x)},
                                                          {"to", fmt::point(scene.spec, y)},
                                                          {"h", fmt::num(h)},
                                                          {"value", fmt::num(m.value)},
                                                          {"error_bound", fmt::num(m.error_bound)},
                                                          {"crossings", std::to_string(m.crossings)}};
  r.report.record("distance", fields);
  if (std::isfinite(m.value)) {
    const GeodesicPath path = dc.shortest_path(x, y);
    for (std::size_t i = 0; i < path.legs.size(); ++i) {
      const PathLeg& leg = path.legs[i];
      r.report.record("leg", {{"index", std::to_string(i)},
                              {"from", fmt::point(scene.spec, {leg.piece, leg.from})},
                              {"to", fmt::point(scene.spec, {leg.piece, leg.to})},
                              {"length", fmt::num(leg.length())}});
    }
    if (!o.svg.empty()) {
      SvgOverlay ov{"distance " + fmt::num(m.value), path.legs, {{x, "x"}, {y, "y"}}};
      std::ofstream(o.svg) << render_svg(scene.spec, ov);
    }
  }
  return r;
}

SvgOverlay certificate_overlay(const ViolationCertificate& c, std::size_t index) {
  SvgOverlay ov;
  ov.title = "certificate " + std::to_string(index) + " (" + to_string(c.kind) + ")";
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  for (std::size_t i = 0; i < c.points.size(); ++i) ov.points.push_back({c.points[i], names[i % 6]});
  return ov;
}

Rendered run_verify(const Scene& scene, const Options& o, const std::string& svg_dir) {
  if (auto bad = reject_invalid(scene.spec)) return *bad;
  const VerifierConfig cfg = config_for(scene, o);
  const VerifyReport v = verify(scene.spec, cfg);
  if (!svg_dir.empty()) {
    std::filesystem::create_directories(svg_dir);
    for (std::size_t i = 0; i < v.certificates.size(); ++i)
      std::ofstream(svg_dir + "/certificate_" + std::to_string(i) + ".svg")
          << render_svg(scene.spec, certificate_overlay(v.certificates[i], i));
  }
  return render_verify_command(scene.spec, v);
}

Rendered run_links(const Scene& scene, const Options& o) {
  if (auto bad = reject_invalid(scene.spec)) return *bad;
  if (scene.spec.dimension() != 2) return invalid("links are only defined for 2D scenes");
  const DiscretizedComplex dc(scene.spec, o.h.value_or(scene.config.h_schedule.front()));
  return render_links_command(dc);
}

Rendered run_report(const Scene& scene, const Options& o) {
  std::filesystem::create_directories(o.out_dir);
  Rendered all;
  const Rendered val = render_validate_command(scene.spec);
  all.report.append(val.report);
  if (val.outcome == Outcome::Invalid) {
    all.outcome = Outcome::Invalid;
  } else {
    const Rendered ver = run_verify(scene, o, o.out_dir);
    all.report.append(ver.report);
    all.outcome = ver.outcome;
    all.violations = ver.violations;
    std::ofstream(o.out_dir + "/scene.svg") << render_svg(scene.spec, {"scene", {}, {}});
  }
  std::ofstream(o.out_dir + "/report.txt") << all.text();
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gluing of flat polygonal complexes: glued metric, links and curvature checks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto add_scene = [&](CLI::App* sub) { sub->add_option("scene", o.scene, "Scene file")->required(); };
  auto add_verify_flags = [&](CLI::App* sub) {
    sub->add_option("--samples", o.samples, "Number of random quadruples");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--h", o.h_schedule, "Decreasing spacing schedule")->delimiter(',');
    sub->add_option("--tolfactor", o.tolfactor, "Angle tolerance factor");
    sub->add_option("--bias", o.bias, "Fraction of apexes near the glued set");
    sub->add_option("--focus", o.focus, "Radius of the neighbourhood sampled around each apex");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scene against the gluing hypotheses");
  add_scene(validate_cmd);

  CLI::App* distance_cmd = app.add_subcommand("distance", "Glued distance between two points");
  add_scene(distance_cmd);
  distance_cmd->add_option("--from", o.from, "Start point piece:x,y")->required();
  distance_cmd->add_option("--to", o.to, "End point piece:x,y")->required();
  distance_cmd->add_option("--m", o.m, "Report the m-predistance instead")->check(CLI::NonNegativeNumber);
  distance_cmd->add_option("--h", o.h, "Sample spacing on the glued set")->check(CLI::PositiveNumber);
  distance_cmd->add_option("--svg", o.svg, "Write the shortest path as SVG");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Search for curvature violations");
  add_scene(verify_cmd);
  add_verify_flags(verify_cmd);
  verify_cmd->add_option("--svg-dir", o.out_dir, "Write one SVG per certificate");

  CLI::App* links_cmd = app.add_subcommand("links", "Glued links at boundary classes");
  add_scene(links_cmd);
  links_cmd->add_option("--h", o.h, "Sample spacing used to enumerate classes")->check(CLI::PositiveNumber);

  CLI::App* report_cmd = app.add_subcommand("report", "Validation and verification written to a directory");
  add_scene(report_cmd);
  add_verify_flags(report_cmd);
  report_cmd->add_option("--out", o.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Rendered result;
  try {
    const Scene scene = parse_scene(o.scene);
    if (validate_cmd->parsed()) result = render_validate_command(scene.spec);
    else if (distance_cmd->parsed()) result = run_distance(scene, o);
    else if (verify_cmd->parsed()) result = run_verify(scene, o, o.out_dir);
    else if (links_cmd->parsed()) result = run_links(scene, o);
    else result = run_report(scene, o);
  } catch (const std::exception& e) {
    result = invalid(e.what());
  }
  std::cout << result.text();
  return result.exit_code();
}
