#pragma once

#include <string>
#include <vector>

namespace pedintent {

// Minimal self-contained SVG charts for report files. No external assets;
// the output renders in any browser.

struct Bar {
  std::string label;
  double value = 0.0;
  double spread = 0.0;  // drawn as a symmetric error bar when positive
};

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<Bar>& bars);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series);

}  // namespace pedintent
