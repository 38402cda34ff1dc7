#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oifuse/timeseries.hpp"

namespace oifuse {

enum class TruthModel { RandomWalk, Ar1, SinePlusTrend };

const char* to_string(TruthModel m);
std::optional<TruthModel> parse_truth_model(std::string_view text);

/// Coefficients of the latent process. Only the fields of the selected
/// model are read: random_walk uses mean (start) and innovation_sigma;
/// ar1 uses mean, persistence and innovation_sigma; sine_plus_trend uses
/// mean, amplitude, period and trend.
struct TruthParams {
    double mean = 50.0;
    double persistence = 0.9;
    double innovation_sigma = 1.0;
    double amplitude = 10.0;
    double period = 60.0;
    double trend = 0.0;
};

/// A latent daily opinion process with two distorted observers:
/// observer A reports affine_scale * truth(d + lead_days) + affine_offset
/// plus Gaussian noise on every day it can see; observer B reports
/// truth(d - lag_days) plus noise on a random obs_b_density subset of days.
/// Generation is fully determined by the seed.
struct SyntheticScenario {
    int n_days = 120;
    TruthModel truth_model = TruthModel::Ar1;
    TruthParams truth_params;
    int lead_days = 14;
    int lag_days = 2;
    double affine_scale = 1.0;
    double affine_offset = 0.0;
    double noise_a = 0.0;
    double noise_b = 0.0;
    double obs_b_density = 1.0;
    std::uint64_t seed = 0;
    Date start_date = Date::from_ymd(2016, 3, 1);
};

struct SyntheticData {
    DailySeries truth;      ///< complete over all n_days
    DailySeries observer_a; ///< missing on the final lead_days slots
    DailySeries observer_b; ///< missing on the first lag_days slots and off-density days
    int clamped_days = 0;   ///< truth values clipped into [5, 95]
};

/// Throws ValidationError when the scenario violates its invariants
/// (n_days > lead + lag + 30, non-negative noise, density in (0,1]).
SyntheticData generate(const SyntheticScenario& scenario);

/// Sample mean and (n-1)-normalized variance of estimate - truth over two
/// complete series covering identical dates. Throws NumericError when the
/// series are misaligned or have gaps.
std::pair<double, double> true_errors(const DailySeries& estimate,
                                      const DailySeries& truth);

/// Multiple same-day survey reports of the truth: for each of `days`
/// consecutive dates, `reports_per_day` independent noisy readings of
/// truth(date - lag_days), packaged as PollRecords (camp share = reading,
/// complement = 100 - reading, no undecideds). Fieldwork dates follow the
/// emitted lag so that decompose_lag recovers it.
std::vector<PollRecord> synthesize_polls(const DailySeries& truth,
                                         int lag_days, int reports_per_day,
                                         double noise_sigma,
                                         std::uint64_t seed);

} // namespace oifuse
