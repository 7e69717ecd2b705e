// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "orbent/errors.hpp"

namespace orbent {

nlohmann::json RunRecord::to_json() const {
  return nlohmann::json{{"schema", kRecordSchema},
                        {"scenario", scenario},
                        {"cell", cell},
                        {"payload", payload},
                        {"seed", seed},
                        {"configHash", config_hash},
                        {"wallMs", wall_ms}};
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  RunRecord r;
  r.scenario = j.at("scenario").get<std::string>();
  r.cell = j.at("cell");
  r.payload = j.at("payload");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config_hash = j.at("configHash").get<std::string>();
  r.wall_ms = j.value("wallMs", 0.0);
  return r;
}

std::string config_hash_hex(const nlohmann::json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<RunRecord>& records) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  for (const auto& r : records) os << r.to_json().dump() << '\n';
}

std::vector<RunRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
  }
  return out;
}

namespace {

std::string csv_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return "";
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

void write_csv_summary(const std::filesystem::path& path,
                       const std::vector<RunRecord>& records) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << "scenario,N,m,delta,G,trials,hits,pHat,ciLo,ciHi,logProxy,value,verdict\n";
  for (const auto& r : records) {
    const auto& c = r.cell;
    const auto& p = r.payload;
    std::string p_hat, hits, trials, ci_lo, ci_hi, log_proxy;
    if (p.contains("volume")) {
      const auto& v = p.at("volume");
      hits = csv_field(v, "hits");
      trials = csv_field(v, "trials");
      p_hat = csv_field(v, "pHat");
      if (v.contains("ci")) {
        ci_lo = v.at("ci").at(0).dump();
        ci_hi = v.at("ci").at(1).dump();
      }
      log_proxy = csv_field(v, "logProxy");
    }
    os << r.scenario << ',' << csv_field(c, "N") << ',' << csv_field(c, "m")
       << ',' << csv_field(c, "delta") << ',' << csv_field(c, "G") << ','
       << trials << ',' << hits << ',' << p_hat << ',' << ci_lo << ',' << ci_hi
       << ',' << log_proxy << ',' << csv_field(p, "value") << ','
       << csv_field(p, "verdict") << '\n';
  }
}

void write_svg_line_plot(const std::filesystem::path& path,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double ylo = i < s.y_lo.size() ? s.y_lo[i] : s.y[i];
      const double yhi = i < s.y_hi.size() ? s.y_hi[i] : s.y[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(ylo) || !std::isfinite(yhi))
        continue;
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = ylo;
        y_max = yhi;
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, ylo);
      y_max = std::max(y_max, yhi);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  auto py = [&](double y) {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
     << "' height='" << height << "' viewBox='0 0 " << width << ' ' << height
     << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
     << "font-family='sans-serif' font-size='15'>" << title << "</text>\n";
  // axes
  os << "<line x1='" << left << "' y1='" << top << "' x2='" << left << "' y2='"
     << height - bottom << "' stroke='black'/>\n";
  os << "<line x1='" << left << "' y1='" << height - bottom << "' x2='"
     << width - right << "' y2='" << height - bottom << "' stroke='black'/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = y_min + (y_max - y_min) * t / 4;
    const double xv = x_min + (x_max - x_min) * t / 4;
    os << "<text x='" << left - 8 << "' y='" << py(yv) + 4
       << "' text-anchor='end' font-family='sans-serif' font-size='11'>";
    os.precision(4);
    os << yv << "</text>\n";
    os << "<text x='" << px(xv) << "' y='" << height - bottom + 18
       << "' text-anchor='middle' font-family='sans-serif' font-size='11'>" << xv
       << "</text>\n";
  }
  os << "<text x='" << (left + width - right) / 2 << "' y='" << height - 12
     << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
     << x_label << "</text>\n";
  os << "<text x='18' y='" << (top + height - bottom) / 2
     << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
     << "transform='rotate(-90 18 " << (top + height - bottom) / 2 << ")'>"
     << y_label << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % 4];
    std::ostringstream pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      if (i < s.y_lo.size() && i < s.y_hi.size() && std::isfinite(s.y_lo[i]) &&
          std::isfinite(s.y_hi[i])) {
        os << "<line x1='" << px(s.x[i]) << "' y1='" << py(s.y_lo[i]) << "' x2='"
           << px(s.x[i]) << "' y2='" << py(s.y_hi[i]) << "' stroke='" << color
           << "' stroke-width='1'/>\n";
      }
      os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
         << "' r='3' fill='" << color << "'/>\n";
    }
    os << "<polyline points='" << pts.str() << "' fill='none' stroke='" << color
       << "' stroke-width='1.5'/>\n";
    os << "<text x='" << width - right - 8 << "' y='" << top + 16 * (si + 1)
       << "' text-anchor='end' font-family='sans-serif' font-size='12' fill='"
       << color << "'>" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace orbent
