#pragma once

#include <span>
#include <utility>
#include <vector>

#include "oifuse/timeseries.hpp"

namespace oifuse {

enum class FitCriterion { Rmse, Correlation };

const char* to_string(FitCriterion c);

/// Result of one shift(+rescale) fitting experiment: the target series is
/// approximated by scale * source(d - lag_days) + offset.
struct AlignmentFit {
    int lag_days = 0;
    double scale = 1.0;  // 1 when rescaled == false
    double offset = 0.0; // 0 when rescaled == false
    double criterion_value = 0.0;
    FitCriterion criterion = FitCriterion::Rmse;
    bool rescaled = false;
};

/// Both comparison metrics of a fit, evaluated on complete-case days.
struct FitMetrics {
    double rmse = 0.0;
    double correlation = 0.0;
    std::size_t pair_count = 0;
};

/// Split of the displacement between two measurement streams: the source
/// precedes the latent signal by source_lead days while observations trail
/// it by obs_lag days; the parts sum to total_lag.
struct LagDecomposition {
    int total_lag = 0;
    int source_lead = 0;
    int obs_lag = 0;
};

/// Sample Pearson product-moment correlation of the pairs.
/// Throws NumericError on fewer than 2 pairs or a constant coordinate.
double pearson(std::span<const std::pair<double, double>> pairs);

/// Root mean squared elementwise difference. Throws NumericError on empty
/// or mismatched lengths.
double rmse(std::span<const double> a, std::span<const double> b);

/// Finds the integer shift in [0, max_shift] that best matches
/// shift_days(source, shift) to the target on the target's present days
/// (minimum RMSE or maximum correlation). Shifts with no overlap or an
/// uncomputable criterion are skipped; ties prefer the smaller shift.
/// Candidate shifts are evaluated in parallel with a deterministic
/// reduction. Throws NumericError when every shift is skipped.
AlignmentFit fit_shift(const DailySeries& source, const DailySeries& target,
                       int max_shift, FitCriterion criterion);

/// As fit_shift, but at each candidate shift the scale and offset are the
/// ordinary-least-squares coefficients regressing target on shifted source.
/// For the RMSE criterion the returned shift minimizes the residual RMSE;
/// for the correlation criterion the shift maximizes correlation (which is
/// affine-invariant) and the OLS coefficients at that shift are reported.
/// Throws NumericError("rank deficient") when no shift admits a
/// non-degenerate regression.
AlignmentFit fit_shift_rescale(const DailySeries& source,
                               const DailySeries& target, int max_shift,
                               FitCriterion criterion);

/// RMSE and correlation of scale * source(d - lag) + offset against the
/// target over complete-case days.
FitMetrics evaluate_fit(const DailySeries& source, const DailySeries& target,
                        const AlignmentFit& fit);

/// Splits total_lag using the polls' mean fieldwork-start-to-release span D
/// and the compile time c: observations trail the latent signal by the
/// release-to-fieldwork-midpoint distance round((D + c) / 2); the source
/// leads by the remainder. Throws NumericError("inconsistent decomposition")
/// when the observation lag exceeds total_lag.
LagDecomposition decompose_lag(int total_lag, std::span<const PollRecord> polls,
                               int compile_days);

} // namespace oifuse
