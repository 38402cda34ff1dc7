#include "oifuse/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "oifuse/csv.hpp"
#include "oifuse/errors.hpp"
#include "oifuse/smoothing.hpp"
#include "oifuse/synthetic.hpp"

#include <json.hpp>

namespace oifuse::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace files {

std::string series(const char* source, Camp camp)
{
    return std::string("series/") + source + "_" + to_string(camp) + ".csv";
}

std::string run(Camp camp)
{
    return std::string("run_") + to_string(camp) + ".csv";
}

std::string eval_json(Camp camp)
{
    return std::string("eval_") + to_string(camp) + ".json";
}

std::string eval_csv(Camp camp)
{
    return std::string("eval_") + to_string(camp) + ".csv";
}

std::string residual_histogram(Camp camp)
{
    return std::string("residual_histogram_") + to_string(camp) + ".csv";
}

} // namespace files

namespace {

constexpr Camp kCamps[] = {Camp::Remain, Camp::Leave};

void write_text(const fs::path& file, const std::string& text)
{
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot write file: " + file.string());
    out << text;
}

template <typename Record>
ordered_json reject_report(const csv::ReadResult<Record>& result)
{
    ordered_json j;
    j["rows"] = result.total_rows;
    j["accepted"] = result.records.size();
    j["rejected"] = result.rejects.size();
    ordered_json rejects = ordered_json::array();
    for (const auto& r : result.rejects) {
        ordered_json row;
        row["line"] = r.line;
        row["reason"] = r.reason;
        row["raw"] = r.raw;
        rejects.push_back(row);
    }
    j["rejects"] = rejects;
    return j;
}

DailySeries load_series(const fs::path& data_dir, const char* source, Camp camp)
{
    return csv::read_series(data_dir / files::series(source, camp));
}

std::vector<PollRecord> load_poll_records(const fs::path& data_dir)
{
    const fs::path file = data_dir / files::kPollRecords;
    if (!fs::exists(file))
        return {};
    return csv::read_polls(file).records;
}

const char* experiment_name(bool rescaled)
{
    return rescaled ? "smooth_rescale" : "smooth";
}

ordered_json decomposition_json(const LagDecomposition& d)
{
    ordered_json j;
    j["total_lag"] = d.total_lag;
    j["source_lead"] = d.source_lead;
    j["obs_lag"] = d.obs_lag;
    return j;
}

} // namespace

IngestSummary run_ingest(const fs::path& tweets_csv, const fs::path& polls_csv,
                         const fs::path& out_dir)
{
    const auto tweets = csv::read_tweets(tweets_csv);
    const auto polls = csv::read_polls(polls_csv);

    fs::create_directories(out_dir / "series");

    ordered_json report;
    report["tweets"] = reject_report(tweets);
    report["polls"] = reject_report(polls);
    write_text(out_dir / files::kIngestReport, report.dump(2) + "\n");

    if (tweets.records.empty())
        throw ValidationError("no records in " + tweets_csv.string());
    if (polls.records.empty())
        throw ValidationError("no records in " + polls_csv.string());
    const auto reject_rate = [](std::size_t rejected, std::size_t total) {
        return static_cast<double>(rejected) > 0.10 * static_cast<double>(total);
    };
    if (reject_rate(tweets.rejects.size(), tweets.total_rows) ||
        reject_rate(polls.rejects.size(), polls.total_rows))
        throw ValidationError("more than 10% of rows rejected; see " +
                              (out_dir / files::kIngestReport).string());

    for (Camp camp : kCamps) {
        csv::write_series(out_dir / files::series("twitter", camp),
                          aggregate_tweets(tweets.records, camp));
        csv::write_series(out_dir / files::series("polls", camp),
                          poll_daily_series(polls.records, camp));
    }
    csv::write_polls(out_dir / files::kPollRecords, polls.records);

    return IngestSummary{tweets.records.size(), tweets.rejects.size(),
                         polls.records.size(), polls.rejects.size()};
}

AlignSummary run_align(const fs::path& data_dir, const PipelineConfig& config,
                       const fs::path& out_dir)
{
    const auto poll_records = load_poll_records(data_dir);
    fs::create_directories(out_dir);

    AlignSummary summary;
    const Date align_start = config.window_start;
    const Date align_end = config.align_window_end();
    const LowessConfig lowess_cfg{config.lowess_fraction,
                                  config.robustness_iterations};

    for (Camp camp : kCamps) {
        const DailySeries twitter = load_series(data_dir, "twitter", camp);
        const DailySeries polls = load_series(data_dir, "polls", camp);

        // The source stops lag_search_max days early so that every candidate
        // shift compares the same source segment against in-window targets.
        const DailySeries source = lowess(
            interpolate_linear(clip(twitter, align_start, align_end)), lowess_cfg);
        const DailySeries target = clip(polls, align_start, config.window_end);

        const AlignmentFit fits[] = {
            fit_shift_rescale(source, target, config.lag_search_max,
                              FitCriterion::Rmse),
            fit_shift_rescale(source, target, config.lag_search_max,
                              FitCriterion::Correlation),
            fit_shift(source, target, config.lag_search_max, FitCriterion::Rmse),
            fit_shift(source, target, config.lag_search_max,
                      FitCriterion::Correlation),
        };
        for (const auto& fit : fits)
            summary.experiments.push_back(
                {camp, fit.rescaled, fit, evaluate_fit(source, target, fit)});

        // The shift-and-rescale RMSE experiment anchors the decomposition.
        const LagDecomposition decomposition = decompose_lag(
            fits[0].lag_days, poll_records, config.compile_days);
        (camp == Camp::Remain ? summary.decomposition_remain
                              : summary.decomposition_leave) = decomposition;
    }

    std::string table =
        "camp,experiment,criterion,lag_days,scale,offset,rmse,correlation,pairs\n";
    ordered_json jexperiments = ordered_json::array();
    for (const auto& e : summary.experiments) {
        table += std::string(to_string(e.camp)) + ',' + experiment_name(e.rescaled) +
                 ',' + to_string(e.fit.criterion) + ',' +
                 std::to_string(e.fit.lag_days) + ',' + fixed6(e.fit.scale) + ',' +
                 fixed6(e.fit.offset) + ',' + fixed6(e.metrics.rmse) + ',' +
                 fixed6(e.metrics.correlation) + ',' +
                 std::to_string(e.metrics.pair_count) + '\n';
        ordered_json j;
        j["camp"] = to_string(e.camp);
        j["experiment"] = experiment_name(e.rescaled);
        j["criterion"] = to_string(e.fit.criterion);
        j["lag_days"] = e.fit.lag_days;
        j["scale"] = fixed6(e.fit.scale);
        j["offset"] = fixed6(e.fit.offset);
        j["rmse"] = fixed6(e.metrics.rmse);
        j["correlation"] = fixed6(e.metrics.correlation);
        j["pairs"] = e.metrics.pair_count;
        jexperiments.push_back(j);
    }
    write_text(out_dir / files::kAlignmentCsv, table);

    ordered_json report;
    report["window_start"] = align_start.to_string();
    report["window_end"] = align_end.to_string();
    report["experiments"] = jexperiments;
    ordered_json decomposition;
    decomposition["remain"] = decomposition_json(summary.decomposition_remain);
    decomposition["leave"] = decomposition_json(summary.decomposition_leave);
    report["decomposition"] = decomposition;
    write_text(out_dir / files::kAlignmentJson, report.dump(2) + "\n");
    write_text(out_dir / files::kDecomposition, decomposition.dump(2) + "\n");

    return summary;
}

namespace {

struct PreparedCamp {
    DailySeries prior;
    DailySeries obs;
};

PreparedCamp prepare_camp(const fs::path& data_dir, const PipelineConfig& config,
                          Camp camp)
{
    PreparedCamp prepared;
    const DailySeries twitter = load_series(data_dir, "twitter", camp);
    prepared.prior = clip(
        interpolate_linear(shift_days(twitter, config.source_lead)),
        config.window_start, config.window_end);
    if (prepared.prior.empty())
        throw NumericError("no overlap between prior and run window");

    const fs::path polls_file = data_dir / files::series("polls", camp);
    if (fs::exists(polls_file)) {
        const DailySeries polls = csv::read_series(polls_file);
        const DailySeries shifted = shift_days(polls, -config.obs_lag);
        prepared.obs =
            clip(polls.present_count() >= 2 ? interpolate_linear(shifted) : shifted,
                 config.window_start, config.window_end);
    }
    return prepared;
}

ParamEstimate resolve_R(const PipelineConfig& config,
                        const std::vector<PollRecord>& records, Camp camp)
{
    if (config.r_value)
        return ParamEstimate{*config.r_value, EstimateMethod::Manual, 0};
    if (records.empty())
        throw ValidationError(
            "observation variance unavailable: no poll records; set r_value");
    return estimate_R_same_day(records, camp);
}

std::pair<double, std::string> resolve_Pb(const PipelineConfig& config,
                                          const PreparedCamp& prepared)
{
    switch (config.gain_source) {
    case GainSource::Preset: {
        const char* name = config.gain_preset == GainPreset::Low   ? "preset_low"
                           : config.gain_preset == GainPreset::Mid ? "preset_mid"
                                                                   : "preset_high";
        return {preset_background_variance(config.gain_preset), name};
    }
    case GainSource::Value:
        return {config.pb_value, "explicit"};
    case GainSource::EstimateTwitter:
        return {estimate_Pb_snapshots(prepared.prior.present_values()).value,
                "snapshot_twitter"};
    case GainSource::EstimatePolls:
        return {estimate_Pb_snapshots(prepared.obs.present_values()).value,
                "snapshot_polls"};
    }
    throw ValidationError("config: bad gain_source");
}

} // namespace

AssimilateSummary run_assimilate(const fs::path& data_dir,
                                 const PipelineConfig& config,
                                 const fs::path& out_dir)
{
    const auto poll_records = load_poll_records(data_dir);
    fs::create_directories(out_dir);

    AssimilateSummary summary;
    std::vector<PreparedCamp> prepared;
    for (Camp camp : kCamps) {
        PreparedCamp p = prepare_camp(data_dir, config, camp);
        const auto [pb, pb_source] = resolve_Pb(config, p);

        CampAssimilation run;
        run.camp = camp;
        run.R_estimate = resolve_R(config, poll_records, camp);
        run.pb_source = pb_source;
        run.params.H = 1.0;
        run.params.R = run.R_estimate.value;
        run.params.P_b = pb;
        run.params.x0 = p.prior.at_index(0).value_or(0.0);
        run.result = assimilate_series(p.prior, p.obs, run.params);
        summary.camps.push_back(std::move(run));
        prepared.push_back(std::move(p));
    }

    if (config.renormalize) {
        // Posteriors are independent per camp; opt-in rescale to sum to 100.
        auto& remain = summary.camps[0].result.posterior;
        auto& leave = summary.camps[1].result.posterior;
        std::vector<std::optional<double>> r_slots(remain.slots());
        std::vector<std::optional<double>> l_slots(leave.slots());
        for (std::size_t i = 0; i < r_slots.size() && i < l_slots.size(); ++i) {
            if (!r_slots[i] || !l_slots[i])
                continue;
            const double total = *r_slots[i] + *l_slots[i];
            if (total > 0.0) {
                r_slots[i] = *r_slots[i] * 100.0 / total;
                l_slots[i] = *l_slots[i] * 100.0 / total;
            }
        }
        remain = DailySeries(remain.start_date(), std::move(r_slots));
        leave = DailySeries(leave.start_date(), std::move(l_slots));
        summary.renormalized = true;
    }

    ordered_json params;
    params["H"] = fixed6(1.0);
    params["renormalized"] = summary.renormalized;
    ordered_json camps;
    for (std::size_t i = 0; i < summary.camps.size(); ++i) {
        const auto& run = summary.camps[i];
        csv::write_run(out_dir / files::run(run.camp), prepared[i].prior,
                       prepared[i].obs, run.result);
        ordered_json j;
        j["R"] = fixed6(run.params.R);
        j["R_method"] = to_string(run.R_estimate.method);
        j["R_sample_size"] = run.R_estimate.sample_size;
        j["P_b"] = fixed6(run.params.P_b);
        j["P_b_source"] = run.pb_source;
        j["gain"] = fixed6(run.result.gain);
        j["posterior_variance"] = fixed6(run.result.posterior_variance);
        j["x0"] = fixed6(run.params.x0);
        j["observed_days"] = run.result.observed_days;
        j["innovation_mean"] = fixed6(run.result.innovation_mean);
        j["innovation_stddev"] = fixed6(run.result.innovation_stddev);
        j["divergence_warning"] = run.result.divergence_warning;
        camps[to_string(run.camp)] = j;
    }
    params["camps"] = camps;
    write_text(out_dir / files::kParams, params.dump(2) + "\n");

    return summary;
}

EvalSummary run_evaluate(const fs::path& run_dir, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    EvalSummary summary;

    for (Camp camp : kCamps) {
        const fs::path run_file = run_dir / files::run(camp);
        if (!fs::exists(run_file))
            throw ValidationError("missing run artifacts: " + run_file.string());
        const auto rows = csv::read_run(run_file);

        std::vector<std::optional<double>> prior(rows.size());
        std::vector<std::optional<double>> obs(rows.size());
        std::vector<std::optional<double>> posterior(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            prior[i] = rows[i].prior;
            obs[i] = rows[i].observation;
            posterior[i] = rows[i].posterior;
        }
        const Date start = rows.front().date;
        const EvalReport report = full_report(
            DailySeries(start, std::move(posterior)), DailySeries(start, std::move(obs)),
            DailySeries(start, std::move(prior)), rows.front().gain);

        write_text(out_dir / files::eval_json(camp), to_json(report));
        write_text(out_dir / files::eval_csv(camp),
                   eval_csv_header() + eval_csv_row(report));
        std::string hist = "bin_lower,bin_upper,count\n";
        for (const auto& bin : report.residuals.histogram)
            hist += fixed6(bin.lower) + ',' + fixed6(bin.upper) + ',' +
                    std::to_string(bin.count) + '\n';
        write_text(out_dir / files::residual_histogram(camp), hist);

        (camp == Camp::Remain ? summary.remain : summary.leave) = report;
    }
    return summary;
}

SynthSummary run_synth(const PipelineConfig& config, const fs::path& out_dir)
{
    const SyntheticScenario& scenario = config.synth;
    const SyntheticData data = generate(scenario);
    fs::create_directories(out_dir / "series");

    SynthSummary summary;
    summary.clamped_days = data.clamped_days;

    // Observer A becomes classified tweet counts: its value is the Remain
    // share of a fixed daily volume, quantized to whole tweets.
    std::vector<TweetCount> tweets;
    for (std::size_t i = 0; i < data.observer_a.size(); ++i) {
        const auto v = data.observer_a.at_index(i);
        if (!v)
            continue;
        const Date day = data.observer_a.start_date() + static_cast<std::int64_t>(i);
        const double share = std::clamp(*v, 0.0, 100.0);
        const auto total = static_cast<std::int64_t>(config.tweets_per_day);
        const auto remain = static_cast<std::int64_t>(
            std::lround(share / 100.0 * static_cast<double>(total)));
        tweets.push_back({day, Camp::Leave, total - remain});
        tweets.push_back({day, Camp::Remain, remain});
    }
    csv::write_tweets(out_dir / files::kTweets, tweets);
    summary.tweet_rows = tweets.size();

    // Observer B becomes poll records: one record per report per observed
    // day. A single report per day reuses the observer value; multiple
    // reports redraw noise around the underlying sentiment so that within-day
    // variance reflects noise_b.
    std::mt19937_64 rng(scenario.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::int64_t span =
        scenario.lag_days > 0 ? 2 * scenario.lag_days - 1 : 0;
    const std::int64_t compile = scenario.lag_days > 0 ? 1 : 0;

    std::vector<PollRecord> polls;
    for (std::size_t i = 0; i < data.observer_b.size(); ++i) {
        const auto v = data.observer_b.at_index(i);
        if (!v)
            continue;
        const Date release = data.observer_b.start_date() + static_cast<std::int64_t>(i);
        const double sentiment =
            *data.truth.at_index(i - static_cast<std::size_t>(scenario.lag_days));
        for (int r = 0; r < config.polls_per_day; ++r) {
            double reading = config.polls_per_day == 1 ? *v : sentiment;
            if (config.polls_per_day > 1 && scenario.noise_b > 0.0)
                reading += scenario.noise_b * gauss(rng);
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
    csv::write_polls(out_dir / files::kPolls, polls);
    summary.poll_rows = polls.size();

    csv::write_series(out_dir / files::kTruth, data.truth);

    // Derive the normalized series from a read-back of the files just
    // written, so they match an ingest of those files byte for byte.
    const auto tweets_back = csv::read_tweets(out_dir / files::kTweets);
    for (Camp camp : kCamps)
        csv::write_series(out_dir / files::series("twitter", camp),
                          aggregate_tweets(tweets_back.records, camp));
    if (!polls.empty()) {
        const auto polls_back = csv::read_polls(out_dir / files::kPolls);
        for (Camp camp : kCamps)
            csv::write_series(out_dir / files::series("polls", camp),
                              poll_daily_series(polls_back.records, camp));
        csv::write_polls(out_dir / files::kPollRecords, polls_back.records);
    }
    return summary;
}

} // namespace oifuse::pipeline
