#pragma once

#include <span>
#include <vector>

#include "oifuse/timeseries.hpp"

namespace oifuse {

/// LOWESS settings. window_fraction selects ceil(fraction * n) nearest
/// neighbors per fit; robustness_iterations > 0 reweights by bisquare
/// factors of scaled residuals (0 keeps output fully reproducible).
struct LowessConfig {
    double window_fraction = 0.15;
    int robustness_iterations = 0;
};

/// Locally weighted scatterplot smoothing over a complete daily series.
///
/// Each output value is the fitted value at that day of a tricube-weighted
/// local linear regression over the nearest window. The day index is the
/// regression abscissa; equidistant window ties prefer the earlier day.
/// Per-point fits run in parallel; output is independent of thread count.
///
/// Throws NumericError on gaps, fewer than 3 points, or a window below
/// 2 points.
DailySeries lowess(const DailySeries& s, const LowessConfig& cfg);

/// Plain-vector variant used by the kernels and the benchmark.
std::vector<double> lowess_values(std::span<const double> values,
                                  const LowessConfig& cfg);

} // namespace oifuse
