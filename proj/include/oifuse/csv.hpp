#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oifuse/assimilation.hpp"
#include "oifuse/timeseries.hpp"

namespace oifuse {

/// Six-decimal fixed formatting; every numeric CSV field uses it so that
/// identical runs produce byte-identical files.
std::string fixed6(double v);

namespace csv {

struct RowError {
    std::size_t line = 0; // 1-based, including the header
    std::string reason;
    std::string raw;
};

template <typename Record>
struct ReadResult {
    std::vector<Record> records;
    std::vector<RowError> rejects;
    std::size_t total_rows = 0; // data rows, excluding the header
};

/// Tweet rows: `date,camp,count` with ISO-8601 dates and camp in
/// {leave, remain}. Malformed rows are collected, not fatal.
ReadResult<TweetCount> read_tweets(const std::filesystem::path& file);

/// Poll rows:
/// `pollster,fieldwork_start,fieldwork_end,release_date,remain,leave,undecided,mode`.
/// Rows violating PollRecord invariants are collected as rejects.
ReadResult<PollRecord> read_polls(const std::filesystem::path& file);

void write_tweets(const std::filesystem::path& file,
                  std::span<const TweetCount> records);
void write_polls(const std::filesystem::path& file,
                 std::span<const PollRecord> polls);

/// Series files: `date,value`, one row per day, empty value for missing.
DailySeries read_series(const std::filesystem::path& file);
void write_series(const std::filesystem::path& file, const DailySeries& s);

/// Per-day assimilation trace:
/// `date,prior,observation,posterior,observed,gain,posterior_variance`
/// (observation empty on pass-through days).
void write_run(const std::filesystem::path& file, const DailySeries& prior,
               const DailySeries& obs, const AssimilationResult& result);

struct RunRow {
    Date date;
    double prior = 0.0;
    std::optional<double> observation;
    double posterior = 0.0;
    bool observed = false;
    double gain = 0.0;
    double posterior_variance = 0.0;
};

std::vector<RunRow> read_run(const std::filesystem::path& file);

} // namespace csv
} // namespace oifuse
