#include "oifuse/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "oifuse/errors.hpp"

namespace oifuse {

const char* to_string(Camp camp)
{
    return camp == Camp::Leave ? "leave" : "remain";
}

std::optional<Camp> parse_camp(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "leave")
        return Camp::Leave;
    if (lower == "remain")
        return Camp::Remain;
    return std::nullopt;
}

const char* to_string(PollMode mode)
{
    return mode == PollMode::Online ? "online" : "phone";
}

std::optional<PollMode> parse_poll_mode(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "online")
        return PollMode::Online;
    if (lower == "phone")
        return PollMode::Phone;
    return std::nullopt;
}

void validate(const PollRecord& poll)
{
    if (poll.fieldwork_start > poll.fieldwork_end ||
        poll.fieldwork_end > poll.release_date)
        throw ValidationError("poll date order: fieldwork_start <= fieldwork_end <= release_date required");
    for (double s : {poll.remain_share, poll.leave_share, poll.undecided_share}) {
        if (!(s >= 0.0 && s <= 100.0))
            throw ValidationError("poll share range: shares must lie in [0,100]");
    }
    const double sum = poll.remain_share + poll.leave_share + poll.undecided_share;
    if (std::abs(sum - 100.0) > 0.5)
        throw ValidationError("poll share sum: shares must sum to 100 within 0.5");
}

DailySeries DailySeries::from_values(Date start, std::vector<double> values)
{
    std::vector<std::optional<double>> slots(values.size());
    std::transform(values.begin(), values.end(), slots.begin(),
                   [](double v) { return std::optional<double>(v); });
    return DailySeries(start, std::move(slots));
}

std::optional<double> DailySeries::at(Date d) const
{
    const std::int64_t i = d - start_;
    if (i < 0 || i >= static_cast<std::int64_t>(values_.size()))
        return std::nullopt;
    return values_[static_cast<std::size_t>(i)];
}

bool DailySeries::is_complete() const
{
    return std::all_of(values_.begin(), values_.end(),
                       [](const auto& v) { return v.has_value(); });
}

std::size_t DailySeries::present_count() const
{
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(),
                      [](const auto& v) { return v.has_value(); }));
}

std::optional<Date> DailySeries::first_present() const
{
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i])
            return start_ + static_cast<std::int64_t>(i);
    return std::nullopt;
}

std::optional<Date> DailySeries::last_present() const
{
    for (std::size_t i = values_.size(); i-- > 0;)
        if (values_[i])
            return start_ + static_cast<std::int64_t>(i);
    return std::nullopt;
}

std::vector<double> DailySeries::present_values() const
{
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_)
        if (v)
            out.push_back(*v);
    return out;
}

DailySeries aggregate_tweets(std::span<const TweetCount> records, Camp camp)
{
    if (records.empty())
        throw ValidationError("no records");

    Date lo = records.front().date;
    Date hi = records.front().date;
    for (const auto& r : records) {
        if (r.count < 0)
            throw ValidationError("negative tweet count");
        lo = std::min(lo, r.date);
        hi = std::max(hi, r.date);
    }

    const std::size_t n = static_cast<std::size_t>(hi - lo) + 1;
    std::vector<std::int64_t> camp_count(n, 0);
    std::vector<std::int64_t> total_count(n, 0);
    for (const auto& r : records) {
        const auto i = static_cast<std::size_t>(r.date - lo);
        total_count[i] += r.count;
        if (r.camp == camp)
            camp_count[i] += r.count;
    }

    std::vector<std::optional<double>> slots(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (total_count[i] > 0)
            slots[i] = 100.0 * static_cast<double>(camp_count[i]) /
                       static_cast<double>(total_count[i]);
    }
    return DailySeries(lo, std::move(slots));
}

DailySeries poll_daily_series(std::span<const PollRecord> polls, Camp camp)
{
    if (polls.empty())
        throw ValidationError("no records");

    std::map<Date, std::pair<double, int>> by_day; // sum, count
    for (const auto& p : polls) {
        auto& [sum, count] = by_day[p.release_date];
        sum += p.share(camp);
        ++count;
    }

    const Date lo = by_day.begin()->first;
    const Date hi = by_day.rbegin()->first;
    std::vector<std::optional<double>> slots(static_cast<std::size_t>(hi - lo) + 1);
    for (const auto& [date, agg] : by_day)
        slots[static_cast<std::size_t>(date - lo)] = agg.first / agg.second;
    return DailySeries(lo, std::move(slots));
}

DailySeries interpolate_linear(const DailySeries& s)
{
    if (s.present_count() < 2)
        throw NumericError("cannot interpolate: fewer than two present values");

    const Date first = *s.first_present();
    const Date last = *s.last_present();
    const std::size_t n = static_cast<std::size_t>(last - first) + 1;
    const std::size_t offset = static_cast<std::size_t>(first - s.start_date());

    std::vector<std::optional<double>> out(n);
    std::size_t prev = 0; // index of previous present slot, relative to `first`
    out[0] = s.at_index(offset);
    for (std::size_t i = 1; i < n; ++i) {
        const auto v = s.at_index(offset + i);
        if (!v)
            continue;
        out[i] = v;
        // Fill the gap (prev, i) along the straight line between the two.
        const double left = *out[prev];
        const double step = (*v - left) / static_cast<double>(i - prev);
        for (std::size_t j = prev + 1; j < i; ++j)
            out[j] = left + step * static_cast<double>(j - prev);
        prev = i;
    }
    return DailySeries(first, std::move(out));
}

DailySeries shift_days(const DailySeries& s, std::int64_t delta)
{
    return DailySeries(s.start_date() + delta,
                       std::vector<std::optional<double>>(s.slots()));
}

DailySeries clip(const DailySeries& s, Date from, Date to)
{
    if (s.empty() || to < from || to < s.start_date() || s.end_date() < from)
        return DailySeries(from, {});
    const Date lo = std::max(from, s.start_date());
    const Date hi = std::min(to, s.end_date());
    const auto begin = static_cast<std::size_t>(lo - s.start_date());
    const auto count = static_cast<std::size_t>(hi - lo) + 1;
    std::vector<std::optional<double>> slots(s.slots().begin() + begin,
                                             s.slots().begin() + begin + count);
    return DailySeries(lo, std::move(slots));
}

std::vector<PairedSample> complete_case_days(const DailySeries& a,
                                             const DailySeries& b)
{
    std::vector<PairedSample> out;
    if (!a.empty() && !b.empty()) {
        const Date lo = std::max(a.start_date(), b.start_date());
        const Date hi = std::min(a.end_date(), b.end_date());
        for (Date d = lo; d <= hi; ++d) {
            const auto va = a.at(d);
            const auto vb = b.at(d);
            if (va && vb)
                out.push_back({d, *va, *vb});
        }
    }
    if (out.empty())
        throw NumericError("no common support");
    return out;
}

std::vector<std::pair<double, double>> complete_case_pairs(const DailySeries& a,
                                                           const DailySeries& b)
{
    const auto days = complete_case_days(a, b);
    std::vector<std::pair<double, double>> pairs(days.size());
    std::transform(days.begin(), days.end(), pairs.begin(),
                   [](const PairedSample& p) { return std::pair(p.a, p.b); });
    return pairs;
}

} // namespace oifuse
