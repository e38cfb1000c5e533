#pragma once

#include <vector>

#include "ffpage/page_curve.hpp"
#include "ffpage/parallel.hpp"
#include "ffpage/quench.hpp"

namespace ffpage {

/// Long-time averages of spectral traces of X_A = 2 C_A - I at one N_A.
struct MomentSet {
  Index modes = 0;
  Index subsystem_size = 0;
  SampleSummary tr_x2;
  SampleSummary tr_x3;
  SampleSummary tr_x4;
  SampleSummary tr_x6;

  [[nodiscard]] double fraction() const {
    return static_cast<double>(subsystem_size) / static_cast<double>(modes);
  }
};

struct DynamicalResult {
  PageCurve curve;
  std::vector<MomentSet> moments;  ///< one per curve point
  std::size_t realizations = 0;    ///< times or phase draws averaged over
};

/// Quench from the density wave under `spec`; entropies and moments of the
/// first N_A sites averaged over the time grid (uniform-window times, or
/// phase realizations for the frequency-phase-ensemble scheme).
DynamicalResult dynamical_analysis(const HamiltonianSpec& spec, const TimeGrid& grid,
                                   std::vector<Index> subsystem_sizes);

PageCurve dynamical_page_curve(const HamiltonianSpec& spec, const TimeGrid& grid,
                               std::vector<Index> subsystem_sizes);

/// f - (f^2/2 + f^3/6 + f^4/10) / ln 2, truncated at O(f^5); 0 <= f <= 1/2.
double series_dyn(double f);

/// Long-time average of Tr X_A^{2n} predicted by the contraction rules:
///   n = 1: N_A^2 / N
///   n = 2: 2 N_A^3 / N^2 - N_A^4 / N^3
///   n = 3: (11/2) N_A^4 / N^3 - 8 N_A^5 / N^4 + 4 N_A^6 / N^5   (N_A <= N/2)
/// At N_A = N every order equals N (pure state). n = 3 with N/2 < N_A < N has
/// no closed form and is refused.
double moment_prediction(int n, Index modes, Index subsystem_size);

/// N_A - sum_{n <= order} moment_prediction(n) / (2n (2n - 1) ln 2).
double moment_series_entropy(Index modes, Index subsystem_size, int order);

/// Entropy expanded to fourth order in X_A, with the long-time averaged
/// Tr C_A^p (p = 2, 3, 4) written through the conserved occupations n_k and
/// eta_k = sqrt(n_k (1 - n_k)). Truncated at Tr X_A^4. Needs N_A <= N/2 and a
/// half-filled profile of N modes.
double series_atypical(const OccupationProfile& profile, Index modes, Index subsystem_size);

/// (N_A/N - N_A^2/N^2) sum_k H(n_k): uniformly spread entangled pairs.
double quasiparticle_entropy(const OccupationProfile& profile, Index modes,
                             Index subsystem_size);

/// Saturated thermodynamic-limit density min(f, 1 - f).
double interacting_reference(double f);

/// Closed-form curves on the given N_A grid. series-rfg, series-dyn and
/// interacting-reference give S = N g(f), with f > 1/2 reflected to 1 - f for
/// the series. series-atypical and quasiparticle need `profile`.
PageCurve closed_form_curve(CurveSource source, Index modes, std::vector<Index> subsystem_sizes,
                            const OccupationProfile* profile = nullptr);

}  // namespace ffpage
