#include "oifuse/hyperparams.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "oifuse/assimilation.hpp"
#include "oifuse/errors.hpp"

namespace oifuse {

const char* to_string(EstimateMethod m)
{
    switch (m) {
    case EstimateMethod::SameDayPolls: return "same_day_polls";
    case EstimateMethod::SnapshotCovariance: return "snapshot_covariance";
    case EstimateMethod::Manual: return "manual";
    }
    return "manual";
}

ParamEstimate estimate_R_same_day(std::span<const PollRecord> polls, Camp camp)
{
    std::map<Date, std::vector<double>> by_day;
    for (const auto& p : polls)
        by_day[p.release_date].push_back(p.share(camp));

    double sum_sq_dev = 0.0;
    int dof = 0;
    int samples = 0;
    for (const auto& [date, shares] : by_day) {
        const auto n = shares.size();
        if (n < 2)
            continue; // single-poll days carry no within-day information
        double mean = 0.0;
        for (double s : shares)
            mean += s;
        mean /= static_cast<double>(n);
        for (double s : shares)
            sum_sq_dev += (s - mean) * (s - mean);
        dof += static_cast<int>(n) - 1;
        samples += static_cast<int>(n);
    }
    if (dof == 0)
        throw NumericError("R not estimable: no date has two or more polls");
    return ParamEstimate{sum_sq_dev / dof, EstimateMethod::SameDayPolls, samples};
}

ParamEstimate estimate_Pb_snapshots(std::span<const double> states)
{
    if (states.size() < 2)
        throw NumericError("snapshot variance needs at least 2 states");

    // Welford's online update; the test suite cross-checks it against a
    // naive two-pass computation.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double x : states) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    return ParamEstimate{m2 / static_cast<double>(n - 1),
                         EstimateMethod::SnapshotCovariance,
                         static_cast<int>(n)};
}

GainBounds gain_bounds(const ParamEstimate& R, const ParamEstimate& Pb_low,
                       const ParamEstimate& Pb_high, double H)
{
    GainBounds bounds;
    bounds.low = kalman_gain(Pb_low.value, H, R.value);
    bounds.high = kalman_gain(Pb_high.value, H, R.value);
    if (bounds.low > bounds.high)
        std::swap(bounds.low, bounds.high);
    bounds.degenerate = bounds.low == bounds.high;
    return bounds;
}

} // namespace oifuse
