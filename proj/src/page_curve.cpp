#include "ffpage/page_curve.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "ffpage/error.hpp"

namespace ffpage {
namespace {

constexpr std::array<std::pair<CurveSource, std::string_view>, 7> kNames{{
    {CurveSource::kRfgMonteCarlo, "rfg-montecarlo"},
    {CurveSource::kDynamical, "dynamical"},
    {CurveSource::kSeriesRfg, "series-rfg"},
    {CurveSource::kSeriesDyn, "series-dyn"},
    {CurveSource::kSeriesAtypical, "series-atypical"},
    {CurveSource::kQuasiparticle, "quasiparticle"},
    {CurveSource::kInteractingReference, "interacting-reference"},
}};

}  // namespace

std::string_view to_string(CurveSource source) {
  for (const auto& [s, name] : kNames) {
    if (s == source) return name;
  }
  return "unknown";
}

CurveSource parse_curve_source(std::string_view name) {
  for (const auto& [s, n] : kNames) {
    if (n == name) return s;
  }
  throw ValidationError("unknown curve source '" + std::string(name) + "'");
}

void PageCurve::validate() const {
  detail::require(modes >= 1, "page curve needs modes >= 1");
  constexpr double slack = 1e-9;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    detail::require(p.subsystem_size >= 1 && p.subsystem_size <= modes,
                    "page curve point N_A = " + std::to_string(p.subsystem_size) + " out of range");
    if (i > 0) {
      detail::require(p.subsystem_size > points[i - 1].subsystem_size,
                      "page curve points must be sorted by N_A");
    }
    const double cap = static_cast<double>(p.subsystem_size);
    if (!(p.entropy >= -slack && p.entropy <= cap + slack)) {
      throw ValidationError("page curve entropy " + std::to_string(p.entropy) + " at N_A = " +
                            std::to_string(p.subsystem_size) + " outside [0, N_A]");
    }
    detail::require(p.std_error >= 0.0, "page curve standard error must be non-negative");
  }
}

std::vector<Index> normalize_sizes(std::vector<Index> sizes, Index modes) {
  detail::require(!sizes.empty(), "subsystem size list is empty");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.front() < 1 || sizes.back() > modes) {
    throw ValidationError("subsystem sizes must lie in [1, " + std::to_string(modes) + "]");
  }
  return sizes;
}

}  // namespace ffpage
