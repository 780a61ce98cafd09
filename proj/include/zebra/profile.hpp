#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zebra/detail/format.hpp"
#include "zebra/metrics.hpp"
#include "zebra/types.hpp"

namespace zebra {

// Uniform grid of prior log10-odds. The default spans priors from 1e-4 odds
// to 1e4 odds, which covers the visible structure of typical profiles.
struct GridSpec {
  double lo = -4.0;
  double hi = 4.0;
  std::size_t n = 201;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline EceProfile build_profile(const CalibratedLLRs& cal, GridSpec grid = {}) {
  if (!(grid.lo < grid.hi) || !std::isfinite(grid.lo) || !std::isfinite(grid.hi)) {
    throw InvalidGridError("grid bounds must be finite with lo < hi");
  }
  if (grid.n < 2) throw InvalidGridError("grid needs at least 2 points");

  const auto mated = detail::group_values(cal.mated_llr);
  const auto nonmated = detail::group_values(cal.nonmated_llr);

  EceProfile profile;
  profile.grid.reserve(grid.n);
  profile.ece.reserve(grid.n);
  profile.perfect_privacy_ece.reserve(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    // i/(n-1) first, so shared abscissae agree bit-exactly across resolutions
    const double x = grid.lo + (grid.hi - grid.lo) *
                                   (static_cast<double>(i) /
                                    static_cast<double>(grid.n - 1));
    const double pi = 1.0 / (1.0 + std::pow(10.0, -x));
    const double theta = std::log(pi) - std::log1p(-pi);
    profile.grid.push_back(x);
    profile.ece.push_back(detail::ece_grouped(mated, nonmated, pi, theta));
    profile.perfect_privacy_ece.push_back(
        detail::perfect_privacy_ece_theta(pi, theta));
  }
  for (std::size_t i = 1; i < profile.grid.size(); ++i) {
    if (!(profile.grid[i - 1] < profile.grid[i])) {
      throw InvalidGridError("grid resolution collapses adjacent points");
    }
  }
  return profile;
}

// One system's profile plus the metadata the plot legend shows.
struct ProfileSeries {
  std::string source_id;
  EceProfile profile;
  std::optional<ZebraReport> report;  // rendered in the SVG legend when present
};

namespace detail {

inline void require_shared_grid(std::span<const ProfileSeries> series) {
  if (series.empty()) {
    throw InvalidGridError("no profiles given; a grid is required");
  }
  const auto& grid = series.front().profile.grid;
  for (const auto& s : series) {
    if (s.profile.grid != grid) {
      throw GridMismatchError("profiles were built on different grids");
    }
  }
}

}  // namespace detail

// CSV with one row per grid point: prior log10-odds, the zero-evidence
// reference, then one ECE column per system. 17 significant digits so the
// doubles survive a round trip exactly.
inline std::string emit_csv(std::span<const ProfileSeries> series) {
  detail::require_shared_grid(series);

  std::string out = "log10_odds,perfect_privacy_ece";
  for (const auto& s : series) {
    out += ',';
    out += s.source_id;
  }
  out += '\n';

  const auto& reference = series.front().profile;
  for (std::size_t i = 0; i < reference.grid.size(); ++i) {
    out += detail::format_17g(reference.grid[i]);
    out += ',';
    out += detail::format_17g(reference.perfect_privacy_ece[i]);
    for (const auto& s : series) {
      out += ',';
      out += detail::format_17g(s.profile.ece[i]);
    }
    out += '\n';
  }
  return out;
}

struct SvgStyle {
  double width = 640.0;
  double height = 400.0;
};

// Standalone deterministic SVG: ECE in bits against prior log10-odds, one
// polyline per system plus the perfect-privacy curve in black. The legend
// lists each system with its (D_ECE, log10(l), tag) tuple when available.
inline std::string emit_svg(std::span<const ProfileSeries> series,
                            SvgStyle style = {}) {
  detail::require_shared_grid(series);

  static constexpr const char* kPalette[] = {
      "#1f77b4", "#c51b8a", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf",
  };
  constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

  const auto& reference = series.front().profile;
  const double x_lo = reference.grid.front();
  const double x_hi = reference.grid.back();
  double y_hi = 1.0;
  for (const auto& s : series) {
    for (double v : s.profile.ece) y_hi = std::max(y_hi, v);
    for (double v : s.profile.perfect_privacy_ece) y_hi = std::max(y_hi, v);
  }
  y_hi *= 1.05;

  const double margin_left = 56.0;
  const double margin_right = 12.0;
  const double margin_top = 12.0;
  const double margin_bottom = 44.0;
  const double plot_w = style.width - margin_left - margin_right;
  const double plot_h = style.height - margin_top - margin_bottom;

  const auto px = [&](double x) {
    return margin_left + plot_w * (x - x_lo) / (x_hi - x_lo);
  };
  const auto py = [&](double y) {
    return margin_top + plot_h * (1.0 - y / y_hi);
  };
  const auto f2 = [](double v) { return detail::format_fixed(v, 2); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         f2(style.width) + "\" height=\"" + f2(style.height) +
         "\" viewBox=\"0 0 " + f2(style.width) + " " + f2(style.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // axes
  svg += "<line x1=\"" + f2(margin_left) + "\" y1=\"" + f2(py(0.0)) +
         "\" x2=\"" + f2(margin_left + plot_w) + "\" y2=\"" + f2(py(0.0)) +
         "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + f2(margin_left) + "\" y1=\"" + f2(margin_top) +
         "\" x2=\"" + f2(margin_left) + "\" y2=\"" + f2(py(0.0)) +
         "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double x = x_lo + (x_hi - x_lo) * (static_cast<double>(k) / 4.0);
    svg += "<line x1=\"" + f2(px(x)) + "\" y1=\"" + f2(py(0.0)) + "\" x2=\"" +
           f2(px(x)) + "\" y2=\"" + f2(py(0.0) + 4.0) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + f2(px(x)) + "\" y=\"" + f2(py(0.0) + 16.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           detail::format_fixed(x, 1) + "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double y = y_hi * (static_cast<double>(k) / 4.0);
    svg += "<line x1=\"" + f2(margin_left - 4.0) + "\" y1=\"" + f2(py(y)) +
           "\" x2=\"" + f2(margin_left) + "\" y2=\"" + f2(py(y)) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + f2(margin_left - 7.0) + "\" y=\"" + f2(py(y) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           f2(y) + "</text>\n";
  }
  svg += "<text x=\"" + f2(margin_left + plot_w / 2.0) + "\" y=\"" +
         f2(style.height - 8.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">prior log10 odds</text>\n";
  svg += "<text x=\"14\" y=\"" + f2(margin_top + plot_h / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         f2(margin_top + plot_h / 2.0) + ")\">ECE [bits]</text>\n";

  const auto polyline = [&](const std::vector<double>& xs,
                            const std::vector<double>& ys, const char* color) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) pts += ' ';
      pts += f2(px(xs[i]));
      pts += ',';
      pts += f2(py(ys[i]));
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };

  svg += polyline(reference.grid, reference.perfect_privacy_ece, "#000000");
  for (std::size_t i = 0; i < series.size(); ++i) {
    svg += polyline(series[i].profile.grid, series[i].profile.ece,
                    kPalette[i % kPaletteSize]);
  }

  // legend, top-right
  const double legend_x = margin_left + plot_w - 240.0;
  double legend_y = margin_top + 10.0;
  const auto legend_entry = [&](const std::string& label, const char* color) {
    std::string entry;
    entry += "<line x1=\"" + f2(legend_x) + "\" y1=\"" + f2(legend_y - 4.0) +
             "\" x2=\"" + f2(legend_x + 18.0) + "\" y2=\"" +
             f2(legend_y - 4.0) + "\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    entry += "<text x=\"" + f2(legend_x + 24.0) + "\" y=\"" + f2(legend_y) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + label +
             "</text>\n";
    legend_y += 15.0;
    return entry;
  };

  svg += legend_entry("perfect privacy", "#000000");
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::string label = detail::xml_escape(series[i].source_id);
    if (series[i].report.has_value()) {
      const ZebraReport& r = *series[i].report;
      label += " (" + detail::format_fixed(r.d_ece, 2) + ", " +
               detail::format_fixed(r.log10_l, 2) + ", " + to_string(r.tag) +
               ")";
    }
    svg += legend_entry(label, kPalette[i % kPaletteSize]);
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace zebra
