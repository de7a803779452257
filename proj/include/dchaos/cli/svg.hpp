#pragma once

// Phi*/Phi step plot on a log-x axis as a standalone SVG document.

#include <cmath>
#include <string>
#include <vector>

#include "dchaos/cli/csv.hpp"
#include "dchaos/density.hpp"
#include "dchaos/error.hpp"

namespace dchaos::cli {

inline std::string phi_svg(const PhiProfile& profile, const std::vector<std::string>& preamble = {}) {
  require(profile.size() > 0, ErrorKind::grid, "cannot plot an empty profile");
  constexpr double width = 640, height = 400;
  constexpr double left = 60, right = 20, top = 30, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = std::log10(profile.grid.front());
  double hi = std::log10(profile.grid.back());
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  auto x_of = [&](double t) { return left + (std::log10(t) - lo) / (hi - lo) * plot_w; };
  auto y_of = [&](double v) { return top + (1.0 - v) * plot_h; };
  auto f = [](double v) { return format_fixed(v, 2); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& line : preamble) {
    std::string safe = line;
    for (std::size_t pos = 0; (pos = safe.find("--", pos)) != std::string::npos;) safe.replace(pos, 2, "- -");
    s += "<!-- " + safe + " -->\n";
  }
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<line x1=\"" + f(left) + "\" y1=\"" + f(top + plot_h) + "\" x2=\"" + f(left + plot_w) + "\" y2=\"" +
       f(top + plot_h) + "\"/>\n";
  s += "<line x1=\"" + f(left) + "\" y1=\"" + f(top) + "\" x2=\"" + f(left) + "\" y2=\"" + f(top + plot_h) + "\"/>\n";
  s += "</g>\n";

  s += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int e = static_cast<int>(std::ceil(lo - 1e-9)); e <= static_cast<int>(std::floor(hi + 1e-9)); ++e) {
    const double x = left + (e - lo) / (hi - lo) * plot_w;
    s += "<line x1=\"" + f(x) + "\" y1=\"" + f(top + plot_h) + "\" x2=\"" + f(x) + "\" y2=\"" + f(top + plot_h + 4) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + f(x) + "\" y=\"" + f(top + plot_h + 16) + "\" text-anchor=\"middle\">1e" + std::to_string(e) +
         "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s += "<text x=\"" + f(left - 6) + "\" y=\"" + f(y_of(v) + 4) + "\" text-anchor=\"end\">" + format_fixed(v, 2) +
         "</text>\n";
  }
  s += "<text x=\"" + f(left + plot_w / 2) + "\" y=\"" + f(height - 10) + "\" text-anchor=\"middle\">t</text>\n";
  s += "</g>\n";

  auto polyline = [&](const std::vector<double>& ys, const char* color, const char* dash) {
    std::string pts;
    for (std::size_t j = 0; j < profile.size(); ++j) {
      if (j) pts += ' ';
      pts += f(x_of(profile.grid[j])) + "," + f(y_of(ys[j]));
    }
    std::string line = "<polyline fill=\"none\" stroke=\"";
    line += color;
    line += "\" stroke-width=\"2\"";
    if (dash[0] != '\0') line += std::string(" stroke-dasharray=\"") + dash + "\"";
    return line + " points=\"" + pts + "\"/>\n";
  };
  s += polyline(profile.phi_star, "#1f77b4", "");
  s += polyline(profile.phi_lower, "#d62728", "6,4");

  const double lx = left + plot_w - 150;
  s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"" + f(lx) + "\" y=\"" + f(top + 8) + "\" width=\"140\" height=\"44\" fill=\"white\" stroke=\"gray\"/>\n";
  s += "<line x1=\"" + f(lx + 8) + "\" y1=\"" + f(top + 22) + "\" x2=\"" + f(lx + 36) + "\" y2=\"" + f(top + 22) +
       "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  s += "<text x=\"" + f(lx + 42) + "\" y=\"" + f(top + 26) + "\">upper (Phi*)</text>\n";
  s += "<line x1=\"" + f(lx + 8) + "\" y1=\"" + f(top + 40) + "\" x2=\"" + f(lx + 36) + "\" y2=\"" + f(top + 40) +
       "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
  s += "<text x=\"" + f(lx + 42) + "\" y=\"" + f(top + 44) + "\">lower (Phi)</text>\n";
  s += "</g>\n";
  s += "</svg>\n";
  return s;
}

inline void emit_phi_svg(const PhiProfile& profile, const std::string& path,
                         const std::vector<std::string>& preamble = {}) {
  write_atomic(path, phi_svg(profile, preamble));
}

}  // namespace dchaos::cli
