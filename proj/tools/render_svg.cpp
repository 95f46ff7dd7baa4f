// Minimal line-chart SVG emitter for sweep CSVs: one polyline per
// (scheme, n_p) group, no interactivity.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

int render_svg(const std::string& csv_path, const std::string& x_col, const std::string& y_col,
               bool logx, bool logy, const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "error: cannot open " << csv_path << "\n";
    return 2;
  }
  std::string line;
  if (!std::getline(in, line)) {
    std::cerr << "error: empty CSV\n";
    return 2;
  }
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int xi = col(x_col), yi = col(y_col);
  const int si = col("scheme"), ni = col("n_p");
  if (xi < 0 || yi < 0) {
    std::cerr << "error: columns not found: " << x_col << ", " << y_col << "\n";
    return 2;
  }

  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  while (std::getline(in, line)) {
    const auto f = split(line);
    if (static_cast<int>(f.size()) <= std::max(xi, yi)) continue;
    double x, y;
    try {
      x = std::stod(f[xi]);
      y = std::stod(f[yi]);
    } catch (...) {
      continue;
    }
    if (logx) x = std::log10(x);
    if (logy) y = std::log10(y);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    std::string key;
    if (si >= 0 && si < static_cast<int>(f.size())) key = f[si];
    if (ni >= 0 && ni < static_cast<int>(f.size())) key += " np=" + f[ni];
    groups[key].push_back({x, y});
  }
  if (groups.empty()) {
    std::cerr << "error: no plottable rows\n";
    return 2;
  }

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [k, pts] : groups)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;

  const double W = 720, H = 480, L = 70, R = 20, T = 20, B = 50;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
      << "' stroke='black'/>\n";
  svg << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
      << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    svg << "<text x='" << sx(fx) << "' y='" << H - B + 18
        << "' font-size='11' text-anchor='middle'>" << fx << "</text>\n";
    svg << "<text x='" << L - 6 << "' y='" << sy(fy) + 4
        << "' font-size='11' text-anchor='end'>" << fy << "</text>\n";
  }
  svg << "<text x='" << (L + W - R) / 2 << "' y='" << H - 12
      << "' font-size='13' text-anchor='middle'>" << x_col << (logx ? " (log10)" : "")
      << "</text>\n";
  svg << "<text x='16' y='" << (T + H - B) / 2
      << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 " << (T + H - B) / 2
      << ")'>" << y_col << (logy ? " (log10)" : "") << "</text>\n";

  int ci = 0;
  double ly = T + 14;
  for (const auto& [key, pts] : groups) {
    const char* color = kColors[ci % 8];
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) svg << sx(x) << "," << sy(y) << " ";
    svg << "'/>\n";
    svg << "<text x='" << W - R - 150 << "' y='" << ly << "' font-size='11' fill='" << color
        << "'>" << (key.empty() ? "series" : key) << "</text>\n";
    ly += 14;
    ++ci;
  }
  svg << "</svg>\n";

  if (out_path.empty()) {
    std::cout << svg.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 2;
    }
    out << svg.str();
  }
  return 0;
}
