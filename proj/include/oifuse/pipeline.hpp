#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oifuse/alignment.hpp"
#include "oifuse/assimilation.hpp"
#include "oifuse/config.hpp"
#include "oifuse/evaluation.hpp"
#include "oifuse/hyperparams.hpp"

namespace oifuse::pipeline {

/// File names shared between subcommands. Every stage reads only files a
/// previous stage wrote, so stages compose through directories.
namespace files {
inline constexpr const char* kTweets = "tweets.csv";
inline constexpr const char* kPolls = "polls.csv";
inline constexpr const char* kPollRecords = "polls_records.csv";
inline constexpr const char* kTruth = "truth.csv";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kAlignmentCsv = "alignment.csv";
inline constexpr const char* kAlignmentJson = "alignment.json";
inline constexpr const char* kDecomposition = "decomposition.json";
inline constexpr const char* kParams = "params.json";

std::string series(const char* source, Camp camp); // "series/<source>_<camp>.csv"
std::string run(Camp camp);                        // "run_<camp>.csv"
std::string eval_json(Camp camp);
std::string eval_csv(Camp camp);
std::string residual_histogram(Camp camp);
} // namespace files

struct IngestSummary {
    std::size_t tweets_accepted = 0;
    std::size_t tweets_rejected = 0;
    std::size_t polls_accepted = 0;
    std::size_t polls_rejected = 0;
};

/// Validates and normalizes the raw CSVs into per-camp daily series plus a
/// cleaned poll-record file, and writes a validation report listing every
/// rejected row with its reason. Throws ValidationError when either input
/// is empty or rejects exceed 10% of its rows.
IngestSummary run_ingest(const std::filesystem::path& tweets_csv,
                         const std::filesystem::path& polls_csv,
                         const std::filesystem::path& out_dir);

struct AlignExperiment {
    Camp camp = Camp::Remain;
    bool rescaled = false;
    AlignmentFit fit;
    FitMetrics metrics;
};

struct AlignSummary {
    std::vector<AlignExperiment> experiments; // 4 per camp
    LagDecomposition decomposition_remain;
    LagDecomposition decomposition_leave;
};

/// The four fitting experiments per camp (shift and shift+rescale, each
/// optimized by RMSE and by correlation) over the alignment window, plus
/// the lag decomposition derived from the shift-and-rescale RMSE fit.
AlignSummary run_align(const std::filesystem::path& data_dir,
                       const PipelineConfig& config,
                       const std::filesystem::path& out_dir);

struct CampAssimilation {
    Camp camp = Camp::Remain;
    OIParams params;
    AssimilationResult result;
    ParamEstimate R_estimate;
    std::string pb_source;
};

struct AssimilateSummary {
    std::vector<CampAssimilation> camps;
    bool renormalized = false;
};

/// Shifts both sources onto the latent time base (twitter forward by
/// source_lead, polls back by obs_lag), interpolates interior gaps, resolves
/// (H, R, P_b, x0), and runs the frozen-gain update per camp. Days without
/// observations pass the prior through. Writes one trace CSV per camp and a
/// params.json.
AssimilateSummary run_assimilate(const std::filesystem::path& data_dir,
                                 const PipelineConfig& config,
                                 const std::filesystem::path& out_dir);

struct EvalSummary {
    EvalReport remain;
    EvalReport leave;
};

/// Scores a finished run directory: MSE/correlation of the posterior against
/// both sources and residual diagnostics, per camp, as JSON and CSV.
EvalSummary run_evaluate(const std::filesystem::path& run_dir,
                         const std::filesystem::path& out_dir);

struct SynthSummary {
    int clamped_days = 0;
    std::size_t tweet_rows = 0;
    std::size_t poll_rows = 0;
};

/// Generates a synthetic scenario and writes it in the exact schema the
/// ingest stage reads (tweet counts and poll records), alongside the truth
/// series and the normalized per-camp series implied by the written files.
SynthSummary run_synth(const PipelineConfig& config,
                       const std::filesystem::path& out_dir);

} // namespace oifuse::pipeline
