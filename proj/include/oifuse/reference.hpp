#pragma once

#include "oifuse/alignment.hpp"
#include "oifuse/smoothing.hpp"
#include "oifuse/timeseries.hpp"

// Serial reference implementations of the parallel kernels. These are written
// the straightforward way (per-point neighbor sort for LOWESS, series-level
// shift and pairing for the grid search) and are kept for testing and
// benchmarking against the production kernels, which must match them exactly.
namespace oifuse::reference {

DailySeries lowess(const DailySeries& s, const LowessConfig& cfg);

std::vector<double> lowess_values(std::span<const double> values,
                                  const LowessConfig& cfg);

AlignmentFit fit_shift(const DailySeries& source, const DailySeries& target,
                       int max_shift, FitCriterion criterion);

AlignmentFit fit_shift_rescale(const DailySeries& source,
                               const DailySeries& target, int max_shift,
                               FitCriterion criterion);

} // namespace oifuse::reference
