#pragma once

#include <string>
#include <vector>

#include "ffpage/page_curve.hpp"

namespace ffpage::app {

/// Static SVG line plot of S/N against f = N_A/N, one polyline per curve.
std::string render_svg(const std::vector<PageCurve>& curves, const std::string& title);

}  // namespace ffpage::app
