#pragma once

// Deterministic line-oriented reports. Each line is a record tag followed by
// key=value fields; the last line is always verdict=<pass|violations:n|invalid>.
// Numbers use %.8g so identical inputs give byte-identical output.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gluing/glued_metric.hpp"
#include "gluing/link.hpp"
#include "gluing/validate.hpp"
#include "gluing/verifier.hpp"

namespace gluing {

namespace fmt {

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + num(vs[i]);
  return out;
}

inline std::string point(const ComplexSpec& spec, PiecePoint p) {
  return spec.pieces.at(p.piece).id + ":" + num(p.pos.x) + "," + num(p.pos.y);
}

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace fmt

class Report {
 public:
  void record(const std::string& tag, const std::vector<std::pair<std::string, std::string>>& fields) {
    text_ += tag;
    for (const auto& [k, v] : fields) text_ += " " + k + "=" + v;
    text_ += "\n";
  }
  void append(const Report& other) { text_ += other.text_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

enum class Outcome { Pass, Violations, Invalid };

struct Rendered {
  Report report;
  Outcome outcome = Outcome::Pass;
  int violations = 0;

  std::string verdict() const {
    switch (outcome) {
      case Outcome::Pass:
        return "pass";
      case Outcome::Violations:
        return "violations:" + std::to_string(violations);
      case Outcome::Invalid:
        return "invalid";
    }
    return "invalid";
  }
  int exit_code() const { return outcome == Outcome::Pass ? 0 : outcome == Outcome::Violations ? 1 : 2; }
  std::string text() const { return report.text() + "verdict=" + verdict() + "\n"; }
};

inline void render_validation(Report& r, const ValidationReport& v) {
  r.record("validate", {{"status", to_string(v.status())}, {"findings", std::to_string(v.findings.size())}});
  for (const Finding& f : v.findings) {
    std::string loc;
    for (std::size_t i = 0; i < f.location.size(); ++i) loc += (i ? "," : "") + f.location[i];
    r.record("finding", {{"severity", to_string(f.severity)},
                         {"code", f.code},
                         {"location", loc.empty() ? "-" : loc},
                         {"message", fmt::quoted(f.message)}});
  }
}

inline void render_link(Report& r, const LinkRecord& rec) {
  std::vector<std::pair<std::string, std::string>> fields{
      {"class", rec.site.label},
      {"sectors", std::to_string(rec.link.sectors.size())},
      {"kind", to_string(rec.link.kind)},
      {"length", fmt::num(rec.link.length)},
  };
  if (rec.link.kind == LinkKind::Graph) {
    fields.push_back({"nodes", std::to_string(rec.link.graph_nodes)});
    fields.push_back({"edges", fmt::list(rec.link.graph_edge_lengths)});
  }
  fields.push_back({"judge", rec.verdict.ok ? "ok" : "violation"});
  r.record("link", fields);
}

inline void render_certificate(Report& r, const ComplexSpec& spec, std::size_t index,
                               const ViolationCertificate& c) {
  std::string pts;
  for (std::size_t i = 0; i < c.points.size(); ++i) pts += (i ? ";" : "") + fmt::point(spec, c.points[i]);
  std::vector<std::pair<std::string, std::string>> fields{
      {"index", std::to_string(index)}, {"kind", to_string(c.kind)}, {"points", pts}};
  if (!c.distances.empty()) fields.push_back({"distances", fmt::list(c.distances)});
  if (!c.angles.empty()) fields.push_back({"angles", fmt::list(c.angles)});
  fields.push_back({"value", fmt::num(c.value)});
  fields.push_back({"margin", fmt::num(c.margin)});
  fields.push_back({"tolerance", fmt::num(c.tolerance)});
  if (!c.note.empty()) fields.push_back({"note", fmt::quoted(c.note)});
  r.record("certificate", fields);
  for (const RefinementStep& s : c.history)
    r.record("refinement", {{"index", std::to_string(index)},
                            {"h", fmt::num(s.h)},
                            {"margin", fmt::num(s.margin)},
                            {"tolerance", fmt::num(s.tolerance)}});
}

inline Rendered render_validate_command(const ComplexSpec& spec) {
  Rendered out;
  const ValidationReport v = validate(spec);
  render_validation(out.report, v);
  out.outcome = v.status() == ValidationStatus::Invalid ? Outcome::Invalid : Outcome::Pass;
  return out;
}

inline Rendered render_links_command(const DiscretizedComplex& dc) {
  Rendered out;
  std::vector<LinkRecord> recs;
  for (const LinkSite& site : link_sites(dc)) {
    LinkRecord rec{site, build_link(dc.spec(), site.piece, site.point), {}};
    rec.verdict = classify_and_judge(rec.link);
    render_link(out.report, rec);
    if (!rec.verdict.ok) ++out.violations;
  }
  out.report.record("links", {{"classes", std::to_string(link_sites(dc).size())},
                              {"violations", std::to_string(out.violations)}});
  out.outcome = out.violations ? Outcome::Violations : Outcome::Pass;
  return out;
}

inline void render_verify(Report& r, const ComplexSpec& spec, const VerifyReport& v) {
  std::vector<double> hs = v.config.h_schedule;
  r.record("verify", {{"kappa", fmt::num(v.kappa)},
                      {"samples", std::to_string(v.sampled)},
                      {"seed", std::to_string(v.config.seed)},
                      {"h", fmt::list(hs)},
                      {"tolfactor", fmt::num(v.config.angle_tolerance_factor)},
                      {"bias", fmt::num(v.config.bias)},
                      {"focus", v.config.focus_radius ? fmt::num(*v.config.focus_radius) : "none"}});
  for (const LinkRecord& rec : v.links) render_link(r, rec);
  r.record("quadruples", {{"tested", std::to_string(v.tested)},
                          {"skipped", std::to_string(v.skipped)},
                          {"probes", std::to_string(v.probes)},
                          {"raw_failures", std::to_string(v.raw_failures)},
                          {"worst_excess", fmt::num(v.worst_margin)}});
  if (v.diameter)
    r.record("diameter", {{"estimate", fmt::num(v.diameter->estimate)},
                          {"error_bound", fmt::num(v.diameter->error_bound)},
                          {"bound", fmt::num(v.diameter->bound)},
                          {"result", to_string(v.diameter->verdict)}});
  for (std::size_t i = 0; i < v.certificates.size(); ++i) render_certificate(r, spec, i, v.certificates[i]);
  r.record("certificates", {{"count", std::to_string(v.certificates.size())}});
}

inline Rendered render_verify_command(const ComplexSpec& spec, const VerifyReport& v) {
  Rendered out;
  render_verify(out.report, spec, v);
  out.violations = static_cast<int>(v.certificates.size());
  out.outcome = out.violations ? Outcome::Violations : Outcome::Pass;
  return out;
}

}  // namespace gluing
