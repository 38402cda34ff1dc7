#include "oifuse/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "oifuse/errors.hpp"

namespace oifuse::reference {
namespace {

// Same closed-form weighted fit as the production kernel; the window
// selection route is what differs between the two implementations.
double weighted_linear_at(const std::vector<std::size_t>& window,
                          std::span<const double> y,
                          std::span<const double> robustness,
                          std::span<const double> previous, std::size_t i,
                          double d_max)
{
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t j : window) {
        const double x = static_cast<double>(j) - static_cast<double>(i);
        const double u = std::abs(x) / d_max;
        double w = 0.0;
        if (u < 1.0) {
            const double t = 1.0 - u * u * u;
            w = t * t * t;
        }
        if (!robustness.empty())
            w *= robustness[j];
        if (w <= 0.0)
            continue;
        sw += w;
        swx += w * x;
        swy += w * y[j];
        swxx += w * x * x;
        swxy += w * x * y[j];
    }
    if (sw <= 0.0)
        return previous.empty() ? y[i] : previous[i];
    const double denom = sw * swxx - swx * swx;
    if (denom <= 1e-12 * sw * swxx || swxx == 0.0)
        return swy / sw;
    const double slope = (sw * swxy - swx * swy) / denom;
    return (swy - slope * swx) / sw;
}

std::vector<double> one_pass(std::span<const double> y,
                             std::span<const double> robustness,
                             std::span<const double> previous, std::size_t k)
{
    const std::size_t n = y.size();
    std::vector<double> fitted(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // k nearest by distance; equal distances prefer the earlier day.
        std::sort(order.begin(), order.end(), [i](std::size_t a, std::size_t b) {
            const auto da = a > i ? a - i : i - a;
            const auto db = b > i ? b - i : i - b;
            return da != db ? da < db : a < b;
        });
        std::vector<std::size_t> window(order.begin(),
                                        order.begin() + static_cast<std::ptrdiff_t>(k));
        // Accumulate in day order so results are comparable bit for bit.
        std::sort(window.begin(), window.end());
        double d_max = 0.0;
        for (std::size_t j : window)
            d_max = std::max(d_max, std::abs(static_cast<double>(j) -
                                             static_cast<double>(i)));
        fitted[i] = weighted_linear_at(window, y, robustness, previous, i, d_max);
    }
    return fitted;
}

} // namespace

std::vector<double> lowess_values(std::span<const double> values,
                                  const LowessConfig& cfg)
{
    if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0))
        throw ValidationError("window_fraction must lie in (0,1]");
    if (cfg.robustness_iterations < 0 || cfg.robustness_iterations > 5)
        throw ValidationError("robustness_iterations must lie in [0,5]");
    const std::size_t n = values.size();
    if (n < 3)
        throw NumericError("lowess needs at least 3 points");
    const auto k = std::min<std::size_t>(
        n, static_cast<std::size_t>(
               std::ceil(cfg.window_fraction * static_cast<double>(n))));
    if (k < 2)
        throw NumericError("lowess window too small: covers fewer than 2 points");

    std::vector<double> fitted = one_pass(values, {}, {}, k);
    std::vector<double> robustness;
    for (int it = 0; it < cfg.robustness_iterations; ++it) {
        std::vector<double> abs_resid(n);
        for (std::size_t i = 0; i < n; ++i)
            abs_resid[i] = std::abs(values[i] - fitted[i]);
        std::vector<double> sorted = abs_resid;
        std::sort(sorted.begin(), sorted.end());
        double s = sorted[n / 2];
        if (n % 2 == 0)
            s = 0.5 * (s + sorted[n / 2 - 1]);
        if (s <= 0.0)
            break;
        robustness.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = abs_resid[i] / (6.0 * s);
            if (u < 1.0) {
                const double t = 1.0 - u * u;
                robustness[i] = t * t;
            }
        }
        fitted = one_pass(values, robustness, fitted, k);
    }
    return fitted;
}

DailySeries lowess(const DailySeries& s, const LowessConfig& cfg)
{
    if (!s.is_complete() || s.empty())
        throw NumericError("series has gaps");
    std::vector<double> values(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        values[i] = *s.at_index(i);
    return DailySeries::from_values(s.start_date(),
                                    reference::lowess_values(values, cfg));
}

namespace {

struct Candidate {
    bool valid = false;
    double criterion_value = 0.0;
    double scale = 1.0;
    double offset = 0.0;
};

Candidate evaluate_shift(const DailySeries& source, const DailySeries& target,
                         int t, FitCriterion criterion, bool rescale)
{
    Candidate c;
    std::vector<std::pair<double, double>> pairs;
    try {
        pairs = complete_case_pairs(shift_days(source, t), target);
    } catch (const NumericError&) {
        return c;
    }
    if (pairs.size() < 2)
        return c;

    if (rescale) {
        double mx = 0.0, my = 0.0;
        for (const auto& [x, y] : pairs) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pairs.size());
        my /= static_cast<double>(pairs.size());
        double sxx = 0.0, sxy = 0.0;
        for (const auto& [x, y] : pairs) {
            sxx += (x - mx) * (x - mx);
            sxy += (x - mx) * (y - my);
        }
        if (sxx <= 1e-12 * static_cast<double>(pairs.size()))
            return c;
        c.scale = sxy / sxx;
        c.offset = my - c.scale * mx;
    }

    if (criterion == FitCriterion::Rmse) {
        std::vector<double> fitted(pairs.size()), observed(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            fitted[i] = c.scale * pairs[i].first + c.offset;
            observed[i] = pairs[i].second;
        }
        c.criterion_value = rmse(fitted, observed);
    } else {
        try {
            c.criterion_value = pearson(pairs);
        } catch (const NumericError&) {
            return c;
        }
    }
    c.valid = true;
    return c;
}

} // namespace

static AlignmentFit grid_search(const DailySeries& source,
                                const DailySeries& target, int max_shift,
                                FitCriterion criterion, bool rescale)
{
    if (max_shift < 0)
        throw ValidationError("max_shift must be non-negative");
    std::optional<int> best;
    Candidate best_candidate;
    for (int t = 0; t <= max_shift; ++t) {
        const Candidate c = evaluate_shift(source, target, t, criterion, rescale);
        if (!c.valid)
            continue;
        const bool better =
            !best || (criterion == FitCriterion::Rmse
                          ? c.criterion_value < best_candidate.criterion_value
                          : c.criterion_value > best_candidate.criterion_value);
        if (better) {
            best = t;
            best_candidate = c;
        }
    }
    if (!best)
        throw NumericError(rescale ? "rank deficient"
                                   : "no valid shifts: empty overlap everywhere");
    return AlignmentFit{*best,
                        best_candidate.scale,
                        best_candidate.offset,
                        best_candidate.criterion_value,
                        criterion,
                        rescale};
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

} // namespace oifuse::reference
