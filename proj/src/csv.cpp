#include "oifuse/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oifuse/errors.hpp"

namespace oifuse {

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

namespace csv {
namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::optional<double> parse_double(const std::string& text)
{
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(const std::string& text)
{
    std::int64_t v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        return std::nullopt;
    return v;
}

std::ifstream open_input(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ValidationError("cannot open file: " + file.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& file)
{
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot write file: " + file.string());
    return out;
}

std::string strip_cr(std::string line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

} // namespace

ReadResult<TweetCount> read_tweets(const std::filesystem::path& file)
{
    auto in = open_input(file);
    ReadResult<TweetCount> result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 || line.empty())
            continue; // header
        ++result.total_rows;
        const auto fields = split(line);
        auto reject = [&](std::string reason) {
            result.rejects.push_back({line_no, std::move(reason), line});
        };
        if (fields.size() != 3) {
            reject("malformed row: expected 3 fields");
            continue;
        }
        const auto date = Date::parse(fields[0]);
        if (!date) {
            reject("bad date");
            continue;
        }
        const auto camp = parse_camp(fields[1]);
        if (!camp) {
            reject("bad camp label");
            continue;
        }
        const auto count = parse_int(fields[2]);
        if (!count) {
            reject("bad count");
            continue;
        }
        if (*count < 0) {
            reject("negative count");
            continue;
        }
        result.records.push_back({*date, *camp, *count});
    }
    return result;
}

ReadResult<PollRecord> read_polls(const std::filesystem::path& file)
{
    auto in = open_input(file);
    ReadResult<PollRecord> result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 || line.empty())
            continue;
        ++result.total_rows;
        const auto fields = split(line);
        auto reject = [&](std::string reason) {
            result.rejects.push_back({line_no, std::move(reason), line});
        };
        if (fields.size() != 8) {
            reject("malformed row: expected 8 fields");
            continue;
        }
        PollRecord poll;
        poll.pollster = fields[0];
        if (poll.pollster.empty()) {
            reject("empty pollster");
            continue;
        }
        const auto fw_start = Date::parse(fields[1]);
        const auto fw_end = Date::parse(fields[2]);
        const auto release = Date::parse(fields[3]);
        if (!fw_start || !fw_end || !release) {
            reject("bad date");
            continue;
        }
        poll.fieldwork_start = *fw_start;
        poll.fieldwork_end = *fw_end;
        poll.release_date = *release;
        const auto remain = parse_double(fields[4]);
        const auto leave = parse_double(fields[5]);
        const auto undecided = parse_double(fields[6]);
        if (!remain || !leave || !undecided) {
            reject("bad share");
            continue;
        }
        poll.remain_share = *remain;
        poll.leave_share = *leave;
        poll.undecided_share = *undecided;
        const auto mode = parse_poll_mode(fields[7]);
        if (!mode) {
            reject("bad mode");
            continue;
        }
        poll.mode = *mode;
        try {
            validate(poll);
        } catch (const ValidationError& e) {
            reject(e.what());
            continue;
        }
        result.records.push_back(std::move(poll));
    }
    return result;
}

void write_tweets(const std::filesystem::path& file,
                  std::span<const TweetCount> records)
{
    auto out = open_output(file);
    out << "date,camp,count\n";
    for (const auto& r : records)
        out << r.date.to_string() << ',' << to_string(r.camp) << ',' << r.count
            << '\n';
}

void write_polls(const std::filesystem::path& file,
                 std::span<const PollRecord> polls)
{
    auto out = open_output(file);
    out << "pollster,fieldwork_start,fieldwork_end,release_date,remain,leave,"
           "undecided,mode\n";
    for (const auto& p : polls)
        out << p.pollster << ',' << p.fieldwork_start.to_string() << ','
            << p.fieldwork_end.to_string() << ',' << p.release_date.to_string()
            << ',' << fixed6(p.remain_share) << ',' << fixed6(p.leave_share)
            << ',' << fixed6(p.undecided_share) << ',' << to_string(p.mode)
            << '\n';
}

DailySeries read_series(const std::filesystem::path& file)
{
    auto in = open_input(file);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<Date, std::optional<double>>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 || line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != 2)
            throw ValidationError("malformed series row at line " +
                                  std::to_string(line_no));
        const auto date = Date::parse(fields[0]);
        if (!date)
            throw ValidationError("bad date in series at line " +
                                  std::to_string(line_no));
        std::optional<double> value;
        if (!fields[1].empty()) {
            value = parse_double(fields[1]);
            if (!value)
                throw ValidationError("bad value in series at line " +
                                      std::to_string(line_no));
        }
        if (!rows.empty() && *date - rows.back().first != 1)
            throw ValidationError("series days not consecutive at line " +
                                  std::to_string(line_no));
        rows.emplace_back(*date, value);
    }
    if (rows.empty())
        throw ValidationError("no records");
    std::vector<std::optional<double>> slots(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        slots[i] = rows[i].second;
    return DailySeries(rows.front().first, std::move(slots));
}

void write_series(const std::filesystem::path& file, const DailySeries& s)
{
    auto out = open_output(file);
    out << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << (s.start_date() + static_cast<std::int64_t>(i)).to_string() << ',';
        if (const auto v = s.at_index(i))
            out << fixed6(*v);
        out << '\n';
    }
}

void write_run(const std::filesystem::path& file, const DailySeries& prior,
               const DailySeries& obs, const AssimilationResult& result)
{
    auto out = open_output(file);
    out << "date,prior,observation,posterior,observed,gain,posterior_variance\n";
    for (std::size_t i = 0; i < result.posterior.size(); ++i) {
        const Date day = result.posterior.start_date() + static_cast<std::int64_t>(i);
        const auto x = prior.at(day);
        const auto z = obs.at(day);
        out << day.to_string() << ',' << (x ? fixed6(*x) : std::string()) << ','
            << (z ? fixed6(*z) : std::string()) << ','
            << fixed6(*result.posterior.at_index(i)) << ','
            << (result.observed[i] ? 1 : 0) << ',' << fixed6(result.gain) << ','
            << fixed6(result.posterior_variance) << '\n';
    }
}

std::vector<RunRow> read_run(const std::filesystem::path& file)
{
    auto in = open_input(file);
    std::string line;
    std::size_t line_no = 0;
    std::vector<RunRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 || line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != 7)
            throw ValidationError("malformed run row at line " +
                                  std::to_string(line_no));
        RunRow row;
        const auto date = Date::parse(fields[0]);
        const auto prior = parse_double(fields[1]);
        const auto posterior = parse_double(fields[3]);
        const auto observed = parse_int(fields[4]);
        const auto gain = parse_double(fields[5]);
        const auto p_a = parse_double(fields[6]);
        if (!date || !prior || !posterior || !observed || !gain || !p_a)
            throw ValidationError("bad run row at line " + std::to_string(line_no));
        row.date = *date;
        row.prior = *prior;
        if (!fields[2].empty()) {
            const auto z = parse_double(fields[2]);
            if (!z)
                throw ValidationError("bad observation at line " +
                                      std::to_string(line_no));
            row.observation = z;
        }
        row.posterior = *posterior;
        row.observed = *observed != 0;
        row.gain = *gain;
        row.posterior_variance = *p_a;
        rows.push_back(row);
    }
    if (rows.empty())
        throw ValidationError("no records");
    return rows;
}

} // namespace csv
} // namespace oifuse
