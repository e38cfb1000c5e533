#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ffpage/linalg.hpp"

namespace ffpage {

enum class CurveSource {
  kRfgMonteCarlo,
  kDynamical,
  kSeriesRfg,
  kSeriesDyn,
  kSeriesAtypical,
  kQuasiparticle,
  kInteractingReference,
};

/// "rfg-montecarlo", "dynamical", "series-rfg", ...
[[nodiscard]] std::string_view to_string(CurveSource source);
[[nodiscard]] CurveSource parse_curve_source(std::string_view name);

struct CurvePoint {
  Index subsystem_size = 0;
  double entropy = 0.0;    ///< bits
  double std_error = 0.0;  ///< 0 for closed-form curves
};

/// Entropy (bits) against subsystem size for a chain of `modes` modes.
struct PageCurve {
  Index modes = 0;
  CurveSource source = CurveSource::kDynamical;
  std::string model;
  /// Free-form qualifier, e.g. the truncation order of a series.
  std::string note;
  std::vector<CurvePoint> points;

  /// Throws ValidationError unless points are strictly increasing in N_A,
  /// 1 <= N_A <= modes and 0 <= entropy <= N_A (with 1e-9 slack).
  void validate() const;

  /// S / N, the quantity the series formulas predict as a function of f.
  [[nodiscard]] double density(std::size_t i) const {
    return points[i].entropy / static_cast<double>(modes);
  }
  [[nodiscard]] double fraction(std::size_t i) const {
    return static_cast<double>(points[i].subsystem_size) / static_cast<double>(modes);
  }
};

/// Sorted, de-duplicated copy; throws unless every size lies in [1, modes].
std::vector<Index> normalize_sizes(std::vector<Index> sizes, Index modes);

}  // namespace ffpage
