#include "oifuse/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "oifuse/errors.hpp"

namespace oifuse {
namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ValidationError("config: bad number for " + key + ": " + value);
    return v;
}

std::int64_t to_int(const std::string& key, const std::string& value)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ValidationError("config: bad integer for " + key + ": " + value);
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "1" || value == "true" || value == "yes")
        return true;
    if (value == "0" || value == "false" || value == "no")
        return false;
    throw ValidationError("config: bad boolean for " + key + ": " + value);
}

Date to_date(const std::string& key, const std::string& value)
{
    const auto d = Date::parse(value);
    if (!d)
        throw ValidationError("config: bad date for " + key + ": " + value);
    return *d;
}

} // namespace

double preset_background_variance(GainPreset preset)
{
    switch (preset) {
    case GainPreset::Low: return kPbPresetLow;
    case GainPreset::Mid: return kPbPresetMid;
    case GainPreset::High: return kPbPresetHigh;
    }
    return kPbPresetHigh;
}

PipelineConfig parse_config(const std::string& text)
{
    PipelineConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected key=value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "window_start") {
            config.window_start = to_date(key, value);
        } else if (key == "window_end") {
            config.window_end = to_date(key, value);
        } else if (key == "align_end") {
            config.align_end = to_date(key, value);
        } else if (key == "lag_search_max") {
            config.lag_search_max = static_cast<int>(to_int(key, value));
        } else if (key == "lowess_fraction") {
            config.lowess_fraction = to_double(key, value);
        } else if (key == "robustness_iterations") {
            config.robustness_iterations = static_cast<int>(to_int(key, value));
        } else if (key == "compile_days") {
            config.compile_days = static_cast<int>(to_int(key, value));
        } else if (key == "source_lead") {
            config.source_lead = static_cast<int>(to_int(key, value));
        } else if (key == "obs_lag") {
            config.obs_lag = static_cast<int>(to_int(key, value));
        } else if (key == "gain_source") {
            if (value == "preset")
                config.gain_source = GainSource::Preset;
            else if (value == "value")
                config.gain_source = GainSource::Value;
            else if (value == "estimate_twitter")
                config.gain_source = GainSource::EstimateTwitter;
            else if (value == "estimate_polls")
                config.gain_source = GainSource::EstimatePolls;
            else
                throw ValidationError("config: bad gain_source: " + value);
        } else if (key == "gain_preset") {
            if (value == "low")
                config.gain_preset = GainPreset::Low;
            else if (value == "mid")
                config.gain_preset = GainPreset::Mid;
            else if (value == "high")
                config.gain_preset = GainPreset::High;
            else
                throw ValidationError("config: bad gain_preset: " + value);
        } else if (key == "pb_value") {
            config.pb_value = to_double(key, value);
            config.gain_source = GainSource::Value;
        } else if (key == "r_value") {
            config.r_value = to_double(key, value);
        } else if (key == "renormalize") {
            config.renormalize = to_bool(key, value);
        } else if (key == "seed") {
            config.synth.seed = static_cast<std::uint64_t>(to_int(key, value));
        } else if (key == "synth_days") {
            config.synth.n_days = static_cast<int>(to_int(key, value));
        } else if (key == "truth_model") {
            const auto m = parse_truth_model(value);
            if (!m)
                throw ValidationError("config: bad truth_model: " + value);
            config.synth.truth_model = *m;
        } else if (key == "truth_mean") {
            config.synth.truth_params.mean = to_double(key, value);
        } else if (key == "truth_persistence") {
            config.synth.truth_params.persistence = to_double(key, value);
        } else if (key == "truth_sigma") {
            config.synth.truth_params.innovation_sigma = to_double(key, value);
        } else if (key == "truth_amplitude") {
            config.synth.truth_params.amplitude = to_double(key, value);
        } else if (key == "truth_period") {
            config.synth.truth_params.period = to_double(key, value);
        } else if (key == "truth_trend") {
            config.synth.truth_params.trend = to_double(key, value);
        } else if (key == "lead_days") {
            config.synth.lead_days = static_cast<int>(to_int(key, value));
        } else if (key == "lag_days") {
            config.synth.lag_days = static_cast<int>(to_int(key, value));
        } else if (key == "affine_scale") {
            config.synth.affine_scale = to_double(key, value);
        } else if (key == "affine_offset") {
            config.synth.affine_offset = to_double(key, value);
        } else if (key == "noise_a") {
            config.synth.noise_a = to_double(key, value);
        } else if (key == "noise_b") {
            config.synth.noise_b = to_double(key, value);
        } else if (key == "obs_b_density") {
            config.synth.obs_b_density = to_double(key, value);
        } else if (key == "start_date") {
            config.synth.start_date = to_date(key, value);
        } else if (key == "polls_per_day") {
            config.polls_per_day = static_cast<int>(to_int(key, value));
        } else if (key == "tweets_per_day") {
            config.tweets_per_day = static_cast<int>(to_int(key, value));
        } else {
            throw ValidationError("config: unknown key: " + key);
        }
    }
    validate(config);
    return config;
}

PipelineConfig load_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ValidationError("cannot open config: " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate(const PipelineConfig& config)
{
    if (!(config.window_start < config.window_end))
        throw ValidationError("config: window_start must precede window_end");
    if (config.lag_search_max < 0)
        throw ValidationError("config: lag_search_max must be non-negative");
    if (!(config.lowess_fraction > 0.0 && config.lowess_fraction <= 1.0))
        throw ValidationError("config: lowess_fraction must lie in (0,1]");
    if (config.compile_days < 0)
        throw ValidationError("config: compile_days must be non-negative");
    if (config.source_lead < 0 || config.obs_lag < 0)
        throw ValidationError("config: lags must be non-negative");
    if (config.polls_per_day < 1 || config.tweets_per_day < 1)
        throw ValidationError("config: synth rates must be positive");
}

} // namespace oifuse
