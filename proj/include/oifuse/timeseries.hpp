#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oifuse/date.hpp"

namespace oifuse {

enum class Camp { Leave, Remain };

const char* to_string(Camp camp);
std::optional<Camp> parse_camp(std::string_view text);

enum class PollMode { Online, Phone };

const char* to_string(PollMode mode);
std::optional<PollMode> parse_poll_mode(std::string_view text);

/// One day's classified tweet volume for one camp.
struct TweetCount {
    Date date;
    Camp camp = Camp::Leave;
    std::int64_t count = 0;
};

/// One published survey. Shares are percentages in [0,100] and must sum to
/// 100 within 0.5 (published polls round to integers). Fieldwork precedes
/// release: fieldwork_start <= fieldwork_end <= release_date.
struct PollRecord {
    std::string pollster;
    Date fieldwork_start;
    Date fieldwork_end;
    Date release_date;
    double remain_share = 0.0;
    double leave_share = 0.0;
    double undecided_share = 0.0;
    PollMode mode = PollMode::Online;

    double share(Camp camp) const
    {
        return camp == Camp::Remain ? remain_share : leave_share;
    }
};

/// Throws ValidationError describing the first violated PollRecord invariant.
void validate(const PollRecord& poll);

/// A date-indexed sequence of daily values with explicit missing entries.
/// Slot i holds the value for start_date + i; slots map bijectively to
/// consecutive calendar days. Immutable after construction.
class DailySeries {
public:
    DailySeries() = default;
    DailySeries(Date start, std::vector<std::optional<double>> values)
        : start_(start), values_(std::move(values)) {}

    static DailySeries from_values(Date start, std::vector<double> values);

    Date start_date() const { return start_; }
    Date end_date() const { return start_ + (size() ? size() - 1 : 0); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const std::vector<std::optional<double>>& slots() const { return values_; }

    /// Value at a calendar date; nullopt when the date is outside the series
    /// range or the slot is missing.
    std::optional<double> at(Date d) const;
    std::optional<double> at_index(std::size_t i) const { return values_[i]; }

    bool is_complete() const;
    std::size_t present_count() const;
    std::optional<Date> first_present() const;
    std::optional<Date> last_present() const;

    /// Present values in date order (snapshot vector for variance estimation).
    std::vector<double> present_values() const;

private:
    Date start_;
    std::vector<std::optional<double>> values_;
};

/// Daily camp support as a percentage of that day's classified tweets:
/// 100 * count(camp, d) / (count(Leave, d) + count(Remain, d)).
/// Days with zero total tweets are missing. Covers [min date, max date]
/// of the input records.
DailySeries aggregate_tweets(std::span<const TweetCount> records, Camp camp);

/// Daily poll series keyed by release date; multiple polls released on the
/// same date are averaged into one value. Individual records stay available
/// for within-day variance estimation.
DailySeries poll_daily_series(std::span<const PollRecord> polls, Camp camp);

/// Fills interior gaps by straight-line interpolation between the bracketing
/// present values. The result spans [first present day, last present day];
/// leading and trailing gaps are never extrapolated.
DailySeries interpolate_linear(const DailySeries& s);

/// Moves every value from date d to date d + delta. No values are created
/// or destroyed.
DailySeries shift_days(const DailySeries& s, std::int64_t delta);

/// Restricts a series to [from, to] (intersection with its range).
DailySeries clip(const DailySeries& s, Date from, Date to);

struct PairedSample {
    Date date;
    double a;
    double b;
};

/// One sample per day where both series are present, in date order.
/// Throws NumericError("no common support") when no such day exists.
std::vector<PairedSample> complete_case_days(const DailySeries& a,
                                             const DailySeries& b);

/// Value pairs of complete_case_days.
std::vector<std::pair<double, double>> complete_case_pairs(const DailySeries& a,
                                                           const DailySeries& b);

} // namespace oifuse
