#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oifuse/config.hpp"
#include "oifuse/errors.hpp"
#include "oifuse/pipeline.hpp"

namespace {

using oifuse::PipelineConfig;

PipelineConfig load_config_or_default(const std::string& path)
{
    return path.empty() ? PipelineConfig{} : oifuse::load_config(path);
}

void apply_preset(PipelineConfig& config, const std::string& preset)
{
    if (preset.empty())
        return;
    config.gain_source = oifuse::GainSource::Preset;
    if (preset == "low")
        config.gain_preset = oifuse::GainPreset::Low;
    else if (preset == "mid")
        config.gain_preset = oifuse::GainPreset::Mid;
    else if (preset == "high")
        config.gain_preset = oifuse::GainPreset::High;
    else
        throw oifuse::ValidationError("unknown preset: " + preset);
}

void print_experiments(const oifuse::pipeline::AlignSummary& summary)
{
    std::printf("%-7s %-15s %-12s %4s %9s %9s %9s %12s\n", "camp", "experiment",
                "criterion", "lag", "scale", "offset", "rmse", "correlation");
    for (const auto& e : summary.experiments)
        std::printf("%-7s %-15s %-12s %4d %9.4f %9.4f %9.4f %12.4f\n",
                    to_string(e.camp), e.rescaled ? "smooth_rescale" : "smooth",
                    to_string(e.fit.criterion), e.fit.lag_days, e.fit.scale,
                    e.fit.offset, e.metrics.rmse, e.metrics.correlation);
    std::printf("lag decomposition (remain): total %d = source lead %d + obs lag %d\n",
                summary.decomposition_remain.total_lag,
                summary.decomposition_remain.source_lead,
                summary.decomposition_remain.obs_lag);
    std::printf("lag decomposition (leave):  total %d = source lead %d + obs lag %d\n",
                summary.decomposition_leave.total_lag,
                summary.decomposition_leave.source_lead,
                summary.decomposition_leave.obs_lag);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Temporal alignment and optimal-interpolation fusion of "
                 "daily opinion series"};
    app.require_subcommand(1);
    app.fallthrough(); // let subcommands accept --config/--out after their name

    std::string config_path;
    std::string out_dir = "out";
    app.add_option("--config", config_path, "Flat key=value config file")
        ->expected(1);
    app.add_option("--out", out_dir, "Output directory");

    auto* ingest = app.add_subcommand(
        "ingest", "Validate and normalize tweet and poll CSVs");
    std::string tweets_path, polls_path;
    ingest->add_option("--tweets", tweets_path, "Tweet counts CSV")->required();
    ingest->add_option("--polls", polls_path, "Poll records CSV")->required();

    auto* align = app.add_subcommand(
        "align", "Run the four lag-fitting experiments per camp");
    std::string align_data;
    align->add_option("--data", align_data, "Ingested dataset directory")
        ->required();

    auto* assimilate = app.add_subcommand(
        "assimilate", "Fuse the shifted series by optimal interpolation");
    std::string assim_data, preset;
    double pb_override = 0.0, r_override = 0.0;
    bool renormalize = false;
    assimilate->add_option("--data", assim_data, "Ingested dataset directory")
        ->required();
    assimilate->add_option("--preset", preset,
                           "Background-variance preset: low, mid or high");
    auto* pb_opt = assimilate->add_option(
        "--pb", pb_override, "Explicit background variance (overrides preset)");
    auto* r_opt = assimilate->add_option(
        "--r", r_override, "Explicit observation variance (skips estimation)");
    assimilate->add_flag("--renormalize", renormalize,
                         "Rescale the two camps' posteriors to sum to 100");

    auto* evaluate = app.add_subcommand(
        "evaluate", "Score a finished assimilation run");
    std::string run_dir;
    evaluate->add_option("--run", run_dir, "Assimilation run directory")
        ->required();

    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic scenario in the ingestion schema");
    std::uint64_t seed = 0;
    auto* seed_opt = synth->add_option("--seed", seed, "Scenario seed");

    try {
        app.parse(argc, argv);

        if (ingest->parsed()) {
            const auto summary =
                oifuse::pipeline::run_ingest(tweets_path, polls_path, out_dir);
            std::printf("tweets: %zu accepted, %zu rejected\n",
                        summary.tweets_accepted, summary.tweets_rejected);
            std::printf("polls:  %zu accepted, %zu rejected\n",
                        summary.polls_accepted, summary.polls_rejected);
        } else if (align->parsed()) {
            const auto config = load_config_or_default(config_path);
            const auto summary =
                oifuse::pipeline::run_align(align_data, config, out_dir);
            print_experiments(summary);
        } else if (assimilate->parsed()) {
            auto config = load_config_or_default(config_path);
            apply_preset(config, preset);
            if (*pb_opt) {
                config.gain_source = oifuse::GainSource::Value;
                config.pb_value = pb_override;
            }
            if (*r_opt)
                config.r_value = r_override;
            if (renormalize)
                config.renormalize = true;
            const auto summary =
                oifuse::pipeline::run_assimilate(assim_data, config, out_dir);
            for (const auto& camp : summary.camps) {
                std::printf("%s: K=%.6f R=%.6f P_b=%.6f observed %zu days\n",
                            to_string(camp.camp), camp.result.gain, camp.params.R,
                            camp.params.P_b, camp.result.observed_days);
                const auto& posterior = camp.result.posterior;
                if (!posterior.empty())
                    std::printf("%s: final posterior %s = %.6f\n",
                                to_string(camp.camp),
                                posterior.end_date().to_string().c_str(),
                                *posterior.at_index(posterior.size() - 1));
                if (camp.result.divergence_warning)
                    std::fprintf(stderr,
                                 "warning: %s innovation mean %.4f exceeds two "
                                 "standard errors; filter may be biased\n",
                                 to_string(camp.camp), camp.result.innovation_mean);
            }
        } else if (evaluate->parsed()) {
            const auto summary = oifuse::pipeline::run_evaluate(run_dir, out_dir);
            const std::pair<const char*, const oifuse::EvalReport*> reports[] = {
                {"remain", &summary.remain}, {"leave", &summary.leave}};
            for (const auto& [name, report] : reports)
                std::printf("%-7s K=%.3f mse_polls=%.4f mse_twitter=%.4f "
                            "corr_polls=%.4f corr_twitter=%.4f\n",
                            name, report->gain, report->mse_vs_polls,
                            report->mse_vs_twitter, report->corr_vs_polls,
                            report->corr_vs_twitter);
        } else if (synth->parsed()) {
            auto config = load_config_or_default(config_path);
            if (*seed_opt)
                config.synth.seed = seed;
            const auto summary = oifuse::pipeline::run_synth(config, out_dir);
            std::printf("synth: %zu tweet rows, %zu poll rows, %d clamped days\n",
                        summary.tweet_rows, summary.poll_rows,
                        summary.clamped_days);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // help exits 0, usage errors are validation failures
    } catch (const oifuse::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const oifuse::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
