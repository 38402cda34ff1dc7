#include "oifuse/assimilation.hpp"

#include <algorithm>
#include <cmath>

#include "oifuse/errors.hpp"

namespace oifuse {

double kalman_gain(double P_b, double H, double R)
{
    if (!(P_b > 0.0))
        throw NumericError("kalman_gain: background variance must be positive");
    if (!(R > 0.0))
        throw NumericError("kalman_gain: observation variance must be positive");
    if (H == 0.0)
        throw NumericError("kalman_gain: observation scale must be non-zero");
    return P_b * H / (H * H * P_b + R);
}

double update_state(double x_prior, double z, double K, double H)
{
    return x_prior + K * (z - H * x_prior);
}

double update_covariance(double P_b, double K, double H)
{
    if (!(P_b > 0.0))
        throw NumericError("update_covariance: background variance must be positive");
    const double P_a = (1.0 - K * H) * P_b;
    if (P_a < 0.0)
        throw NumericError("divergent configuration: K * H exceeds 1");
    return P_a;
}

AssimilationResult assimilate_series(const DailySeries& prior,
                                     const DailySeries& obs,
                                     const OIParams& params)
{
    if (prior.empty())
        throw NumericError("no overlap between prior and run window");

    const double K = kalman_gain(params.P_b, params.H, params.R);
    const double P_a = update_covariance(params.P_b, K, params.H);

    AssimilationResult result;
    result.gain = K;
    result.posterior_variance = P_a;
    result.observed.assign(prior.size(), false);

    std::vector<std::optional<double>> posterior(prior.size());
    double innovation_sum = 0.0;
    double innovation_sq = 0.0;

    for (std::size_t i = 0; i < prior.size(); ++i) {
        const Date day = prior.start_date() + static_cast<std::int64_t>(i);
        auto x = prior.at_index(i);
        if (!x) {
            if (i == 0)
                x = params.x0;
            else
                throw NumericError("prior series has gaps");
        }
        const auto z = obs.at(day);
        if (z) {
            posterior[i] = update_state(*x, *z, K, params.H);
            result.observed[i] = true;
            ++result.observed_days;
            const double innovation = *z - params.H * *x;
            innovation_sum += innovation;
            innovation_sq += innovation * innovation;
        } else {
            posterior[i] = *x; // pass-through, no observation this day
        }
    }

    if (result.observed_days > 0) {
        const auto n = static_cast<double>(result.observed_days);
        result.innovation_mean = innovation_sum / n;
        const double var =
            result.observed_days > 1
                ? (innovation_sq - innovation_sum * innovation_sum / n) / (n - 1.0)
                : 0.0;
        result.innovation_stddev = std::sqrt(std::max(0.0, var));
        if (result.observed_days > 1) {
            const double standard_error = result.innovation_stddev / std::sqrt(n);
            result.divergence_warning =
                std::abs(result.innovation_mean) > 2.0 * standard_error;
        }
    }

    result.posterior = DailySeries(prior.start_date(), std::move(posterior));
    return result;
}

} // namespace oifuse
