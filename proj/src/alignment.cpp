#include "oifuse/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "oifuse/errors.hpp"

namespace oifuse {
namespace {

struct Candidate {
    bool valid = false;
    double criterion_value = 0.0;
    double scale = 1.0;
    double offset = 0.0;
};

struct PairSums {
    std::size_t n = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
};

// Complete-case pairs of (source shifted by t, target), accumulated in
// target date order. Index arithmetic stands in for materializing the
// shifted series; `base` is target.start - source.start.
PairSums pair_sums(const std::vector<std::optional<double>>& src,
                   const std::vector<std::optional<double>>& tgt,
                   std::int64_t base, int t)
{
    PairSums s;
    const auto n_src = static_cast<std::int64_t>(src.size());
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        if (!tgt[j])
            continue;
        const std::int64_t i = static_cast<std::int64_t>(j) + base - t;
        if (i < 0 || i >= n_src || !src[static_cast<std::size_t>(i)])
            continue;
        const double x = *src[static_cast<std::size_t>(i)];
        const double y = *tgt[j];
        ++s.n;
        s.sx += x;
        s.sy += y;
        s.sxx += x * x;
        s.syy += y * y;
        s.sxy += x * y;
    }
    return s;
}

// Second pass over the same pairs: RMSE of scale*x + offset against y.
double residual_rmse(const std::vector<std::optional<double>>& src,
                     const std::vector<std::optional<double>>& tgt,
                     std::int64_t base, int t, double scale, double offset)
{
    double sq = 0.0;
    std::size_t n = 0;
    const auto n_src = static_cast<std::int64_t>(src.size());
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        if (!tgt[j])
            continue;
        const std::int64_t i = static_cast<std::int64_t>(j) + base - t;
        if (i < 0 || i >= n_src || !src[static_cast<std::size_t>(i)])
            continue;
        const double r = scale * *src[static_cast<std::size_t>(i)] + offset - *tgt[j];
        sq += r * r;
        ++n;
    }
    return std::sqrt(sq / static_cast<double>(n));
}

double correlation_from_sums(const PairSums& s)
{
    const double n = static_cast<double>(s.n);
    const double cxx = s.sxx - s.sx * s.sx / n;
    const double cyy = s.syy - s.sy * s.sy / n;
    const double cxy = s.sxy - s.sx * s.sy / n;
    if (cxx <= 0.0 || cyy <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return cxy / std::sqrt(cxx * cyy);
}

Candidate evaluate_candidate(const std::vector<std::optional<double>>& src,
                             const std::vector<std::optional<double>>& tgt,
                             std::int64_t base, int t, FitCriterion criterion,
                             bool rescale)
{
    Candidate c;
    const PairSums s = pair_sums(src, tgt, base, t);
    if (s.n < 2)
        return c;

    if (rescale) {
        const double denom = static_cast<double>(s.n) * s.sxx - s.sx * s.sx;
        if (denom <= 1e-12 * static_cast<double>(s.n) * s.sxx)
            return c; // constant source window, rank deficient at this shift
        c.scale = (static_cast<double>(s.n) * s.sxy - s.sx * s.sy) / denom;
        c.offset = (s.sy - c.scale * s.sx) / static_cast<double>(s.n);
    }

    if (criterion == FitCriterion::Rmse) {
        c.criterion_value = residual_rmse(src, tgt, base, t, c.scale, c.offset);
    } else {
        const double corr = correlation_from_sums(s);
        if (std::isnan(corr))
            return c;
        c.criterion_value = corr;
    }
    c.valid = true;
    return c;
}

AlignmentFit grid_search(const DailySeries& source, const DailySeries& target,
                         int max_shift, FitCriterion criterion, bool rescale)
{
    if (max_shift < 0)
        throw ValidationError("max_shift must be non-negative");
    if (source.empty() || target.empty())
        throw NumericError("no common support");

    const auto& src = source.slots();
    const auto& tgt = target.slots();
    const std::int64_t base = target.start_date() - source.start_date();

    std::vector<Candidate> candidates(static_cast<std::size_t>(max_shift) + 1);
#pragma omp parallel for schedule(static)
    for (int t = 0; t <= max_shift; ++t)
        candidates[static_cast<std::size_t>(t)] =
            evaluate_candidate(src, tgt, base, t, criterion, rescale);

    // Deterministic reduction: ascending scan, strict improvement only,
    // so equal-criterion ties resolve to the smallest shift.
    int best = -1;
    for (int t = 0; t <= max_shift; ++t) {
        const auto& c = candidates[static_cast<std::size_t>(t)];
        if (!c.valid)
            continue;
        if (best < 0) {
            best = t;
            continue;
        }
        const auto& b = candidates[static_cast<std::size_t>(best)];
        const bool better = criterion == FitCriterion::Rmse
                                ? c.criterion_value < b.criterion_value
                                : c.criterion_value > b.criterion_value;
        if (better)
            best = t;
    }
    if (best < 0)
        throw NumericError(rescale ? "rank deficient"
                                   : "no valid shifts: empty overlap everywhere");

    const auto& c = candidates[static_cast<std::size_t>(best)];
    return AlignmentFit{best,         c.scale,   c.offset,
                        c.criterion_value, criterion, rescale};
}

} // namespace

const char* to_string(FitCriterion c)
{
    return c == FitCriterion::Rmse ? "rmse" : "correlation";
}

double pearson(std::span<const std::pair<double, double>> pairs)
{
    if (pairs.size() < 2)
        throw NumericError("pearson needs at least 2 pairs");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pairs) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pairs.size());
    my /= static_cast<double>(pairs.size());
    double cxx = 0.0, cyy = 0.0, cxy = 0.0;
    for (const auto& [x, y] : pairs) {
        cxx += (x - mx) * (x - mx);
        cyy += (y - my) * (y - my);
        cxy += (x - mx) * (y - my);
    }
    if (cxx == 0.0 || cyy == 0.0)
        throw NumericError("zero variance");
    return cxy / std::sqrt(cxx * cyy);
}

double rmse(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw NumericError("rmse length mismatch");
    if (a.empty())
        throw NumericError("rmse of empty sequences");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq / static_cast<double>(a.size()));
}

AlignmentFit fit_shift(const DailySeries& source, const DailySeries& target,
                       int max_shift, FitCriterion criterion)
{
    return grid_search(source, target, max_shift, criterion, false);
}

AlignmentFit fit_shift_rescale(const DailySeries& source,
                               const DailySeries& target, int max_shift,
                               FitCriterion criterion)
{
    return grid_search(source, target, max_shift, criterion, true);
}

FitMetrics evaluate_fit(const DailySeries& source, const DailySeries& target,
                        const AlignmentFit& fit)
{
    const auto pairs = complete_case_pairs(shift_days(source, fit.lag_days), target);
    std::vector<double> fitted(pairs.size());
    std::vector<double> observed(pairs.size());
    std::vector<std::pair<double, double>> transformed(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        fitted[i] = fit.scale * pairs[i].first + fit.offset;
        observed[i] = pairs[i].second;
        transformed[i] = {fitted[i], observed[i]};
    }
    FitMetrics m;
    m.pair_count = pairs.size();
    m.rmse = rmse(fitted, observed);
    m.correlation = pearson(transformed);
    return m;
}

LagDecomposition decompose_lag(int total_lag, std::span<const PollRecord> polls,
                               int compile_days)
{
    if (total_lag < 0)
        throw ValidationError("total_lag must be non-negative");
    if (compile_days < 0)
        throw ValidationError("compile_days must be non-negative");
    if (polls.empty())
        throw ValidationError("no records");

    double span_sum = 0.0;
    for (const auto& p : polls)
        span_sum += static_cast<double>(p.release_date - p.fieldwork_start);
    const double mean_span = span_sum / static_cast<double>(polls.size());

    // Release trails the fieldwork midpoint by D - (D - c)/2 = (D + c)/2:
    // compiling takes c days, so fieldwork spans D - c days and the poll
    // reflects sentiment at its middle.
    const int obs_lag =
        static_cast<int>(std::lround((mean_span + compile_days) / 2.0));
    if (obs_lag > total_lag)
        throw NumericError("inconsistent decomposition: observation lag exceeds total lag");
    return LagDecomposition{total_lag, total_lag - obs_lag, obs_lag};
}

} // namespace oifuse
