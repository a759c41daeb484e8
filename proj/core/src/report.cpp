#include "gjmslab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace gjmslab {

using ojson = nlohmann::ordered_json;

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::warn: return "warn";
    case Verdict::fail: return "fail";
    case Verdict::skip: return "skip";
  }
  return "fail";
}

Record record_from(const DeficitReport& r, std::string name, std::string group) {
  Record out;
  out.name = std::move(name);
  out.group = std::move(group);
  out.lhs = r.lhs;
  out.rhs = r.rhs;
  out.deficit = r.deficit;
  out.relative = r.relative;
  out.has_refinement = r.has_refinement;
  out.refinement[0] = r.refinement_coarse;
  out.refinement[1] = r.refinement_fine;
  return out;
}

Record residual_record(std::string name, std::string group, double value, double tol) {
  Record out;
  out.name = std::move(name);
  out.group = std::move(group);
  out.lhs = value;
  out.deficit = value;
  out.relative = value;
  out.tolerance = tol;
  out.verdict = std::fabs(value) <= tol ? Verdict::pass : Verdict::fail;
  return out;
}

Record lower_bound_record(std::string name, std::string group, double lhs, double rhs, double tol) {
  Record out;
  out.name = std::move(name);
  out.group = std::move(group);
  out.lhs = lhs;
  out.rhs = rhs;
  out.deficit = lhs - rhs;
  out.relative = out.deficit / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  out.tolerance = tol;
  out.verdict = out.deficit >= -tol ? Verdict::pass : Verdict::fail;
  return out;
}

Verdict Report::verdict() const {
  Verdict v = Verdict::pass;
  for (const auto& r : records) {
    if (r.verdict == Verdict::fail) return Verdict::fail;
    if (r.verdict == Verdict::warn) v = Verdict::warn;
  }
  return v;
}

int Report::failures() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const Record& r) { return r.verdict == Verdict::fail; }));
}

void Report::constant(const std::string& key, double value) { constants[key] = decimal(value); }

std::string decimal(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string config_digest(const std::vector<std::pair<std::string, std::string>>& config) {
  auto sorted = config;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& [k, v] : sorted) {
    feed(k);
    feed(v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

ojson number(double x) {
  if (std::isfinite(x)) return x;
  return decimal(x);
}

ojson record_json(const Record& r) {
  ojson j;
  j["name"] = r.name;
  j["group"] = r.group;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["deficit"] = number(r.deficit);
  j["relative"] = number(r.relative);
  if (r.has_refinement)
    j["refinement"] = ojson::array({number(r.refinement[0]), number(r.refinement[1])});
  else
    j["refinement"] = nullptr;
  j["tolerance"] = r.tolerance;
  j["verdict"] = verdict_name(r.verdict);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string to_json(const Report& r, int indent) {
  ojson j;
  j["command"] = r.command;
  ojson cfg = ojson::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  cfg["digest"] = config_digest(r.config);
  j["config"] = cfg;
  ojson recs = ojson::array();
  for (const auto& rec : r.records) recs.push_back(record_json(rec));
  j["records"] = recs;
  j["verdict"] = verdict_name(r.verdict());
  j["seconds"] = r.seconds;
  if (!r.constants.empty()) {
    ojson c = ojson::object();
    for (const auto& [k, v] : r.constants) c[k] = v;
    j["constants"] = c;
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  if (!r.tables.empty()) j["tables"] = ojson::parse(r.tables);
  return j.dump(indent);
}

void write_records_csv(std::ostream& os, const Report& r) {
  os << "command,name,group,lhs,rhs,deficit,relative,refinement_coarse,refinement_fine,tolerance,verdict,note\n";
  for (const auto& rec : r.records) {
    os << csv_field(r.command) << ',' << csv_field(rec.name) << ',' << csv_field(rec.group) << ',' << decimal(rec.lhs)
       << ',' << decimal(rec.rhs) << ',' << decimal(rec.deficit) << ',' << decimal(rec.relative) << ',';
    if (rec.has_refinement) os << decimal(rec.refinement[0]) << ',' << decimal(rec.refinement[1]);
    else os << ',';
    os << ',' << decimal(rec.tolerance) << ',' << verdict_name(rec.verdict) << ',' << csv_field(rec.note) << '\n';
  }
}

void write_plot_csv(std::ostream& os, const Plot& p) {
  os << "series," << csv_field(p.xlabel) << ',' << csv_field(p.ylabel) << '\n';
  for (const auto& s : p.series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << csv_field(s.label) << ',' << decimal(s.x[i]) << ',' << decimal(s.y[i]) << '\n';
}

void write_plot_svg(std::ostream& os, const Plot& p) {
  const double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : p.series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x0 < x1)) {
    x0 = std::isfinite(x0) ? x0 - 1 : 0;
    x1 = x0 + 2;
  }
  if (!(y0 < y1)) {
    y0 = std::isfinite(y0) ? y0 - 1 : 0;
    y1 = y0 + 2;
  }
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(p.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << X(xv) << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    os << "<text x=\"" << left - 5 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
    os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << Y(yv) << "\" y2=\"" << Y(yv)
       << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml_escape(p.xlabel) << "</text>\n";
  os << "<text x=\"15\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << top + ph / 2
     << ")\">" << xml_escape(p.ylabel) << "</text>\n";
  for (size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* c = colors[k % 8];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    os << "\"/>\n";
    double ly = top + 12 + 16 * k;
    os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

std::string coefficients_json(const BoundaryCoefficients& bc) {
  auto arr = [](const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(number(x));
    return a;
  };
  ojson j;
  j["gamma"] = bc.gamma;
  j["floor"] = bc.split.floor;
  j["frac"] = bc.split.frac;
  j["b_small"] = arr(bc.b_small);
  j["b_small_frac"] = arr(bc.b_small_frac);
  j["b_small_closed"] = arr(bc.b_small_closed);
  j["b_small_frac_closed"] = arr(bc.b_small_frac_closed);
  j["b_large"] = arr(bc.b_large);
  j["sigma"] = arr(bc.sigma);
  j["zeta"] = arr(bc.zeta);
  j["sigma_closed"] = arr(bc.sigma_closed);
  j["zeta_closed"] = arr(bc.zeta_closed);
  ojson c = ojson::object();
  for (const auto& [g, v] : bc.c_gammas) c[decimal(g)] = decimal(v);
  j["c_gamma"] = c;
  return j.dump();
}

}  // namespace gjmslab
