#include "oifuse/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "oifuse/errors.hpp"

namespace oifuse {
namespace {

double tricube(double u)
{
    if (u >= 1.0)
        return 0.0;
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

// Weighted linear fit over window [lo, lo+k), evaluated at day index i.
// Abscissas are centered on i, so the fitted value is the intercept. When
// robustness weights empty the whole window, the previous iteration's fit
// stands.
double fit_point(std::span<const double> y, std::span<const double> robustness,
                 std::span<const double> previous, std::size_t i,
                 std::size_t lo, std::size_t k)
{
    const double d_max = std::max<double>(
        static_cast<double>(i - lo), static_cast<double>(lo + k - 1 - i));

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t j = lo; j < lo + k; ++j) {
        const double x = static_cast<double>(j) - static_cast<double>(i);
        double w = tricube(std::abs(x) / d_max);
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
        return swy / sw; // effectively one distinct abscissa
    const double slope = (sw * swxy - swx * swy) / denom;
    return (swy - slope * swx) / sw;
}

// Nearest-k window around i; on ties the earlier day wins.
std::size_t window_start(std::size_t i, std::size_t k, std::size_t n)
{
    std::size_t lo = i >= k - 1 ? i - (k - 1) : 0;
    while (lo + k < n && i - lo > lo + k - i)
        ++lo;
    return lo;
}

std::vector<double> one_pass(std::span<const double> y,
                             std::span<const double> robustness,
                             std::span<const double> previous, std::size_t k)
{
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    std::vector<double> fitted(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        fitted[ui] = fit_point(y, robustness, previous, ui,
                               window_start(ui, k, y.size()), k);
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
        std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
        double s = sorted[n / 2];
        if (n % 2 == 0) {
            const double below =
                *std::max_element(sorted.begin(), sorted.begin() + n / 2);
            s = 0.5 * (s + below);
        }
        if (s <= 0.0)
            break; // perfect fit, nothing left to downweight
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
    return DailySeries::from_values(s.start_date(), lowess_values(values, cfg));
}

} // namespace oifuse
