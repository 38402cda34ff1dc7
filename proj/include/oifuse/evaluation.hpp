#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oifuse/timeseries.hpp"

namespace oifuse {

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    int count = 0;
};

/// Moments and shape diagnostics of the prior-vs-observation residuals.
/// Residuals compare the prior to the observations only, so they are
/// identical for every gain setting.
struct ResidualDiagnostics {
    double mean = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
    std::size_t count = 0;
    bool biased_mean = false; // |mean| > 2 * stddev / sqrt(n)
    bool degenerate = false;  // zero-variance residuals
    std::vector<HistogramBin> histogram; // Sturges' rule bin count
};

/// MSE and correlation of an assimilated series against both sources, plus
/// the residual diagnostics of the run.
struct EvalReport {
    double mse_vs_polls = 0.0;
    double mse_vs_twitter = 0.0;
    double corr_vs_polls = 0.0;
    double corr_vs_twitter = 0.0;
    ResidualDiagnostics residuals;
    double gain = 0.0;
};

/// Mean squared difference over value pairs. Throws NumericError on empty.
double mse(std::span<const std::pair<double, double>> pairs);

/// Residuals z - H*x over doubly-present days of (prior, obs).
/// Throws NumericError with fewer than 8 residuals.
ResidualDiagnostics residual_diagnostics(const DailySeries& prior,
                                         const DailySeries& obs,
                                         double H = 1.0);

/// Populates an EvalReport for one assimilation run: distances and
/// correlations of the assimilated series to the (shifted) poll and twitter
/// series, and the gain-independent residual diagnostics.
EvalReport full_report(const DailySeries& assimilated,
                       const DailySeries& polls_shifted,
                       const DailySeries& twitter_shifted, double gain);

std::string to_json(const EvalReport& report);

/// Flat CSV forms for aggregating reports across runs; six-decimal fixed
/// formatting keeps files byte-stable.
std::string eval_csv_header();
std::string eval_csv_row(const EvalReport& report);

} // namespace oifuse
