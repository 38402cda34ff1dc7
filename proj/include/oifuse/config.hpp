#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "oifuse/date.hpp"
#include "oifuse/synthetic.hpp"

namespace oifuse {

/// Background-variance presets spanning the plausible range from the
/// poll-snapshot lower bound to the twitter-snapshot upper bound.
inline constexpr double kPbPresetLow = 10.0;
inline constexpr double kPbPresetMid = 45.0;
inline constexpr double kPbPresetHigh = 266.06;

enum class GainPreset { Low, Mid, High };
enum class GainSource { Preset, Value, EstimateTwitter, EstimatePolls };

double preset_background_variance(GainPreset preset);

/// Settings shared by the pipeline subcommands. Every key has a default;
/// a config file only overrides what it names.
struct PipelineConfig {
    Date window_start = Date::from_ymd(2016, 3, 1);
    Date window_end = Date::from_ymd(2016, 6, 23);
    std::optional<Date> align_end; // default: window_end - lag_search_max
    int lag_search_max = 23;
    double lowess_fraction = 0.15;
    int robustness_iterations = 0;
    int compile_days = 1;
    int source_lead = 14;
    int obs_lag = 2;
    GainSource gain_source = GainSource::Preset;
    GainPreset gain_preset = GainPreset::High;
    double pb_value = 0.0;
    std::optional<double> r_value; // overrides same-day-poll estimation
    bool renormalize = false;

    // synth settings
    SyntheticScenario synth;
    int polls_per_day = 2;
    int tweets_per_day = 10000;

    Date align_window_end() const
    {
        return align_end ? *align_end : window_end - lag_search_max;
    }
};

/// Flat key=value config file; '#' starts a comment. Unknown keys and
/// malformed values raise ValidationError.
PipelineConfig load_config(const std::filesystem::path& file);
PipelineConfig parse_config(const std::string& text);

/// Post-parse sanity checks (window order, fraction range, lag bounds).
void validate(const PipelineConfig& config);

} // namespace oifuse
