#pragma once

#include <vector>

#include "oifuse/timeseries.hpp"

namespace oifuse {

/// Optimal Interpolation parameters for one scalar assimilation run.
/// The background variance is frozen, so a single gain serves every step.
struct OIParams {
    double H = 1.0;   ///< observation scale (dimensionless)
    double R = 0.0;   ///< observation-error variance, %^2
    double P_b = 0.0; ///< frozen background-error variance, %^2
    double x0 = 0.0;  ///< initial state, %; used when the prior lacks day 0
};

/// One assimilated series plus the constants of its run. observed[i] tells
/// whether day i was updated from an observation or passed through.
struct AssimilationResult {
    DailySeries posterior;
    double gain = 0.0;
    double posterior_variance = 0.0;
    std::vector<bool> observed;
    std::size_t observed_days = 0;

    // Innovation diagnostics over observed days. A running innovation mean
    // beyond two standard errors signals filter divergence (biased
    // residuals violate the zero-mean observation noise assumption).
    double innovation_mean = 0.0;
    double innovation_stddev = 0.0;
    bool divergence_warning = false;
};

/// K = P_b * H / (H^2 * P_b + R). Throws NumericError unless P_b > 0 and
/// R > 0.
double kalman_gain(double P_b, double H, double R);

/// Posterior state x + K * (z - H * x).
double update_state(double x_prior, double z, double K, double H);

/// Posterior variance (1 - K * H) * P_b. Throws
/// NumericError("divergent configuration") when the result is negative.
double update_covariance(double P_b, double K, double H);

/// Runs the frozen-covariance update over the prior's date range: on days
/// where obs is present the state moves toward the observation by the single
/// precomputed gain; on missing days the prior passes through unchanged.
/// The prior must be complete apart from an optional missing first day,
/// which params.x0 fills.
AssimilationResult assimilate_series(const DailySeries& prior,
                                     const DailySeries& obs,
                                     const OIParams& params);

} // namespace oifuse
