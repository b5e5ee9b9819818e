#include "rankbandit/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rankbandit/errors.hpp"

namespace rankbandit {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_field(const std::string& s, std::size_t line, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("csv line " + std::to_string(line) + ": bad " + what + " '" + s + "'");
  return v;
}

std::string svg_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kCsvHeader << '\n';
  for (const RunRecord& r : records)
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
      const StepRecord& s = r.steps[t];
      os << r.agent << ',' << r.run << ',' << t + 1 << ',' << to_string(s.action) << ','
         << format_double(s.reward_total) << ',' << format_double(s.regret_inst) << ','
         << format_double(s.regret_cum) << ',' << s.elapsed_ns << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, records);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<RunRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw IoError("csv: missing or wrong header");
  std::vector<RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw IoError("csv line " + std::to_string(lineno) + ": expected 8 fields");
    const auto run = parse_field<std::size_t>(f[1], lineno, "run");
    const auto t = parse_field<std::size_t>(f[2], lineno, "t");
    if (out.empty() || out.back().agent != f[0] || out.back().run != run) {
      out.push_back(RunRecord{f[0], run, 0.0, {}});
    }
    RunRecord& rec = out.back();
    if (t != rec.steps.size() + 1) throw IoError("csv line " + std::to_string(lineno) + ": steps out of order");
    StepRecord s;
    for (const std::string& item : split(f[3], '-'))
      s.action.items.push_back(parse_field<std::size_t>(item, lineno, "action"));
    s.reward_total = parse_field<double>(f[4], lineno, "reward_total");
    s.regret_inst = parse_field<double>(f[5], lineno, "regret_inst");
    s.regret_cum = parse_field<double>(f[6], lineno, "regret_cum");
    s.elapsed_ns = parse_field<std::int64_t>(f[7], lineno, "elapsed_ns");
    rec.steps.push_back(std::move(s));
  }
  return out;
}

std::vector<RunRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

std::string render_svg(const std::vector<RegretCurve>& curves,
                       const std::vector<BoundOverlay>& overlays) {
  constexpr double W = 800, H = 500, left = 70, right = 170, top = 20, bottom = 50;
  const double pw = W - left - right;
  const double ph = H - top - bottom;

  std::size_t T = 0;
  double ymax = 0.0;
  for (const auto& c : curves) {
    T = std::max(T, c.mean.size());
    for (double v : c.max) ymax = std::max(ymax, v);
  }
  // overlays are usually far above the empirical curves; cap them at 4x so
  // the curves stay readable
  const double curve_top = ymax;
  for (const auto& o : overlays) {
    T = std::max(T, o.values.size());
    for (double v : o.values) ymax = std::max(ymax, curve_top > 0.0 ? std::min(v, 4.0 * curve_top) : v);
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  const double tmax = static_cast<double>(std::max<std::size_t>(T, 2));

  auto px = [&](std::size_t t) { return left + pw * static_cast<double>(t + 1) / tmax; };
  auto py = [&](double v) { return top + ph * (1.0 - std::clamp(v, 0.0, ymax) / ymax); };
  const std::size_t stride = std::max<std::size_t>(1, T / 800);
  auto sample = [&](std::size_t n, auto&& emit) {
    for (std::size_t t = 0; t < n; t += stride) emit(t);
    if (n > 0 && (n - 1) % stride != 0) emit(n - 1);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n"
     << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << svg_number(py(v) + 4) << "\" text-anchor=\"end\">"
       << svg_number(v) << "</text>\n";
    const std::size_t t = static_cast<std::size_t>(tmax * i / 4.0);
    os << "<text x=\"" << svg_number(left + pw * i / 4.0) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << t << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">t</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
     << ")\" text-anchor=\"middle\">cumulative regret</text>\n";
  os << "</g>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::ostringstream band;
    sample(c.max.size(), [&](std::size_t t) { band << svg_number(px(t)) << ',' << svg_number(py(c.max[t])) << ' '; });
    std::vector<std::size_t> back;
    sample(c.min.size(), [&](std::size_t t) { back.push_back(t); });
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      band << svg_number(px(*it)) << ',' << svg_number(py(c.min[*it])) << ' ';
    os << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\""
       << band.str() << "\"/>\n";
  }
  auto polyline = [&](const std::string& name, const Vec& v, const char* color, bool dashed) {
    os << "<polyline data-name=\"" << name << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    sample(v.size(), [&](std::size_t t) { os << svg_number(px(t)) << ',' << svg_number(py(v[t])) << ' '; });
    os << "\"/>\n";
  };
  for (std::size_t i = 0; i < curves.size(); ++i)
    polyline(curves[i].agent, curves[i].mean, kPalette[i % std::size(kPalette)], false);
  for (std::size_t i = 0; i < overlays.size(); ++i) polyline(overlays[i].name, overlays[i].values, "#444444", true);

  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = top + 10;
  for (std::size_t i = 0; i < curves.size(); ++i, ly += 18)
    os << "<text x=\"" << left + pw + 12 << "\" y=\"" << ly << "\" fill=\""
       << kPalette[i % std::size(kPalette)] << "\">" << curves[i].agent << "</text>\n";
  for (const auto& o : overlays) {
    os << "<text x=\"" << left + pw + 12 << "\" y=\"" << ly << "\" fill=\"#444444\">" << o.name << "</text>\n";
    ly += 18;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const std::vector<RegretCurve>& curves,
               const std::vector<BoundOverlay>& overlays) {
  write_text_file(path, render_svg(curves, overlays));
}

}  // namespace rankbandit
