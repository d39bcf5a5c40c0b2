#include "pedintent/util/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pedintent/common.hpp"

namespace pedintent {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

const char* kPalette[] = {"#3465a4", "#cc0000", "#4e9a06", "#f57900",
                          "#75507b", "#0e8a8a"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct YScale {
  double lo = 0.0;
  double hi = 1.0;

  double to_px(double v) const {
    const double span = hi - lo;
    return kHeight - kBottom - (v - lo) / span * (kHeight - kTop - kBottom);
  }
};

YScale make_scale(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    throw ValidationError("chart: non-finite data range");
  if (lo > hi) std::swap(lo, hi);
  const double pad = (hi - lo) == 0.0 ? std::max(std::abs(hi), 1.0) * 0.1
                                      : (hi - lo) * 0.08;
  return YScale{lo - pad, hi + pad};
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"17\" font-weight=\"bold\">"
      << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& out, const YScale& scale,
               const std::string& y_label) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = scale.lo + (scale.hi - scale.lo) * i / 5.0;
    const double y = scale.to_px(v);
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(v) << "</text>\n";
  }
  out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(y_label)
      << "</text>\n";
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<Bar>& bars) {
  if (bars.empty()) throw ValidationError("bar chart with no bars");
  double lo = 0.0, hi = 0.0;
  for (const Bar& b : bars) {
    lo = std::min(lo, b.value - b.spread);
    hi = std::max(hi, b.value + b.spread);
  }
  const YScale scale = make_scale(lo, hi);

  std::ostringstream out;
  open_svg(out, title);
  draw_axes(out, scale, y_label);

  const double span = kWidth - kLeft - kRight;
  const double slot = span / static_cast<double>(bars.size());
  const double bar_w = slot * 0.6;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Bar& b = bars[i];
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double y0 = scale.to_px(std::max(0.0, scale.lo));
    const double y1 = scale.to_px(b.value);
    out << "<rect x=\"" << cx - bar_w / 2 << "\" y=\"" << std::min(y0, y1)
        << "\" width=\"" << bar_w << "\" height=\"" << std::abs(y0 - y1)
        << "\" fill=\"" << kPalette[i % 6] << "\" fill-opacity=\"0.85\"/>\n";
    if (b.spread > 0.0) {
      const double ya = scale.to_px(b.value - b.spread);
      const double yb = scale.to_px(b.value + b.spread);
      out << "<line x1=\"" << cx << "\" y1=\"" << ya << "\" x2=\"" << cx
          << "\" y2=\"" << yb << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << cx - 5 << "\" y1=\"" << ya << "\" x2=\"" << cx + 5
          << "\" y2=\"" << ya << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << cx - 5 << "\" y1=\"" << yb << "\" x2=\"" << cx + 5
          << "\" y2=\"" << yb << "\" stroke=\"black\"/>\n";
    }
    out << "<text x=\"" << cx << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << escape(b.label) << "</text>\n"
        << "<text x=\"" << cx << "\" y=\"" << std::min(y0, y1) - 5
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << num(b.value) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series) {
  if (series.empty()) throw ValidationError("line chart with no series");
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
  bool first = true;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw DimensionError("line chart: series '" + s.name + "' has " +
                           std::to_string(s.x.size()) + " x values and " +
                           std::to_string(s.y.size()) + " y values");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        first = false;
      }
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (first) throw ValidationError("line chart with empty series");
  const YScale scale = make_scale(ylo, yhi);
  const double xspan = xhi - xlo == 0.0 ? 1.0 : xhi - xlo;
  const auto x_px = [&](double x) {
    return kLeft + (x - xlo) / xspan * (kWidth - kLeft - kRight);
  };

  std::ostringstream out;
  open_svg(out, title);
  draw_axes(out, scale, y_label);
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << x_px(series[s].x[i]) << "," << scale.to_px(series[s].y[i]) << " ";
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << kWidth - kRight - 110 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kRight - 90 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kRight - 84 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pedintent
