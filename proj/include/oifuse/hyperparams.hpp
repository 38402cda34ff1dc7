#pragma once

#include <span>

#include "oifuse/timeseries.hpp"

namespace oifuse {

enum class EstimateMethod { SameDayPolls, SnapshotCovariance, Manual };

const char* to_string(EstimateMethod m);

/// A variance estimate (%^2) together with how it was obtained and how many
/// samples fed it.
struct ParamEstimate {
    double value = 0.0;
    EstimateMethod method = EstimateMethod::Manual;
    int sample_size = 0;
};

/// Gain interval induced by a background-variance interval at fixed R.
struct GainBounds {
    double low = 0.0;
    double high = 0.0;
    bool degenerate = false; // equal bounds, caller should warn
};

/// Observation-error variance from polls released on the same day, under the
/// assumption that sentiment is constant within a day. Pooled within-day
/// sample variance: sum of within-day squared deviations over sum of
/// (n_d - 1) across all dates with at least two polls.
/// Throws NumericError("R not estimable") when no date has two polls.
ParamEstimate estimate_R_same_day(std::span<const PollRecord> polls, Camp camp);

/// Frozen background variance from state snapshots of a free run: the sample
/// variance 1/(N-1) * sum (x_l - mean)^2. Throws NumericError for N < 2.
ParamEstimate estimate_Pb_snapshots(std::span<const double> states);

/// Kalman-gain interval for a background-variance interval [Pb_low, Pb_high]
/// at observation variance R. Equal bounds are reported as degenerate rather
/// than rejected.
GainBounds gain_bounds(const ParamEstimate& R, const ParamEstimate& Pb_low,
                       const ParamEstimate& Pb_high, double H);

} // namespace oifuse
