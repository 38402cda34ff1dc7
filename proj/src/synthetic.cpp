#include "oifuse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "oifuse/errors.hpp"

namespace oifuse {
namespace {

constexpr double kTruthFloor = 5.0;
constexpr double kTruthCeil = 95.0;

std::vector<double> generate_truth(const SyntheticScenario& sc,
                                   std::mt19937_64& rng, int& clamped)
{
    const auto n = static_cast<std::size_t>(sc.n_days);
    const TruthParams& p = sc.truth_params;
    std::vector<double> truth(n);
    std::normal_distribution<double> innovation(0.0, 1.0);

    switch (sc.truth_model) {
    case TruthModel::RandomWalk: {
        double x = p.mean;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0)
                x += p.innovation_sigma * innovation(rng);
            truth[i] = x;
        }
        break;
    }
    case TruthModel::Ar1: {
        double x = p.mean;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0)
                x = p.mean + p.persistence * (x - p.mean) +
                    p.innovation_sigma * innovation(rng);
            truth[i] = x;
        }
        break;
    }
    case TruthModel::SinePlusTrend: {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i);
            truth[i] = p.mean +
                       p.amplitude *
                           std::sin(2.0 * std::numbers::pi * t / p.period) +
                       p.trend * t;
        }
        break;
    }
    }

    clamped = 0;
    for (double& x : truth) {
        const double clipped = std::clamp(x, kTruthFloor, kTruthCeil);
        if (clipped != x) {
            x = clipped;
            ++clamped;
        }
    }
    return truth;
}

} // namespace

const char* to_string(TruthModel m)
{
    switch (m) {
    case TruthModel::RandomWalk: return "random_walk";
    case TruthModel::Ar1: return "ar1";
    case TruthModel::SinePlusTrend: return "sine_plus_trend";
    }
    return "ar1";
}

std::optional<TruthModel> parse_truth_model(std::string_view text)
{
    if (text == "random_walk")
        return TruthModel::RandomWalk;
    if (text == "ar1")
        return TruthModel::Ar1;
    if (text == "sine_plus_trend")
        return TruthModel::SinePlusTrend;
    return std::nullopt;
}

SyntheticData generate(const SyntheticScenario& sc)
{
    if (sc.lead_days < 0 || sc.lag_days < 0)
        throw ValidationError("lead_days and lag_days must be non-negative");
    if (sc.n_days <= sc.lead_days + sc.lag_days + 30)
        throw ValidationError("n_days must exceed lead_days + lag_days + 30");
    if (sc.noise_a < 0.0 || sc.noise_b < 0.0)
        throw ValidationError("noise standard deviations must be non-negative");
    if (!(sc.obs_b_density > 0.0 && sc.obs_b_density <= 1.0))
        throw ValidationError("obs_b_density must lie in (0,1]");
    if (!(sc.truth_params.period > 0.0))
        throw ValidationError("truth period must be positive");

    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SyntheticData data;
    const std::vector<double> truth = generate_truth(sc, rng, data.clamped_days);
    const auto n = truth.size();

    std::vector<std::optional<double>> obs_a(n);
    const std::size_t a_last = n - static_cast<std::size_t>(sc.lead_days);
    for (std::size_t i = 0; i < a_last; ++i) {
        double v = sc.affine_scale * truth[i + static_cast<std::size_t>(sc.lead_days)] +
                   sc.affine_offset;
        if (sc.noise_a > 0.0)
            v += sc.noise_a * gauss(rng);
        obs_a[i] = v;
    }

    std::vector<std::optional<double>> obs_b(n);
    for (std::size_t i = static_cast<std::size_t>(sc.lag_days); i < n; ++i) {
        if (uniform(rng) >= sc.obs_b_density)
            continue;
        double v = truth[i - static_cast<std::size_t>(sc.lag_days)];
        if (sc.noise_b > 0.0)
            v += sc.noise_b * gauss(rng);
        obs_b[i] = v;
    }

    data.truth = DailySeries::from_values(sc.start_date, truth);
    data.observer_a = DailySeries(sc.start_date, std::move(obs_a));
    data.observer_b = DailySeries(sc.start_date, std::move(obs_b));
    return data;
}

std::pair<double, double> true_errors(const DailySeries& estimate,
                                      const DailySeries& truth)
{
    if (estimate.start_date() != truth.start_date() ||
        estimate.size() != truth.size() || estimate.empty() ||
        !estimate.is_complete() || !truth.is_complete())
        throw NumericError("misaligned series");

    const auto n = static_cast<double>(estimate.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i)
        mean += *estimate.at_index(i) - *truth.at_index(i);
    mean /= n;

    double sq = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double e = *estimate.at_index(i) - *truth.at_index(i) - mean;
        sq += e * e;
    }
    const double variance = estimate.size() > 1 ? sq / (n - 1.0) : 0.0;
    return {mean, variance};
}

std::vector<PollRecord> synthesize_polls(const DailySeries& truth,
                                         int lag_days, int reports_per_day,
                                         double noise_sigma, std::uint64_t seed)
{
    if (lag_days < 0 || reports_per_day < 1 || noise_sigma < 0.0)
        throw ValidationError("invalid poll synthesis parameters");
    if (!truth.is_complete() || truth.empty())
        throw ValidationError("truth series must be complete");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Fieldwork spans 2*lag - 1 days before a 1-day compile, so the
    // release-to-midpoint distance reproduces lag_days.
    const std::int64_t span = lag_days > 0 ? 2 * lag_days - 1 : 0;
    const std::int64_t compile = lag_days > 0 ? 1 : 0;

    std::vector<PollRecord> polls;
    for (std::size_t i = static_cast<std::size_t>(lag_days); i < truth.size(); ++i) {
        const Date release = truth.start_date() + static_cast<std::int64_t>(i);
        const double sentiment = *truth.at_index(i - static_cast<std::size_t>(lag_days));
        for (int r = 0; r < reports_per_day; ++r) {
            double reading = sentiment;
            if (noise_sigma > 0.0)
                reading += noise_sigma * gauss(rng);
            reading = std::clamp(reading, 0.0, 100.0);
            PollRecord poll;
            poll.pollster = "synthetic-" + std::to_string(r + 1);
            poll.fieldwork_start = release - span;
            poll.fieldwork_end = release - compile;
            poll.release_date = release;
            poll.remain_share = reading;
            poll.leave_share = 100.0 - reading;
            poll.undecided_share = 0.0;
            poll.mode = i % 2 == 0 ? PollMode::Online : PollMode::Phone;
            polls.push_back(std::move(poll));
        }
    }
    return polls;
}

} // namespace oifuse
