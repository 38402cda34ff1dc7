#include "oifuse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "oifuse/alignment.hpp"
#include "oifuse/csv.hpp"
#include "oifuse/errors.hpp"

#include <json.hpp>

namespace oifuse {

double mse(std::span<const std::pair<double, double>> pairs)
{
    if (pairs.empty())
        throw NumericError("mse of empty pairing");
    double sq = 0.0;
    for (const auto& [a, b] : pairs)
        sq += (a - b) * (a - b);
    return sq / static_cast<double>(pairs.size());
}

ResidualDiagnostics residual_diagnostics(const DailySeries& prior,
                                         const DailySeries& obs, double H)
{
    const auto days = complete_case_days(prior, obs);
    if (days.size() < 8)
        throw NumericError("too few residuals: need at least 8 doubly-present days");

    std::vector<double> r(days.size());
    std::transform(days.begin(), days.end(), r.begin(),
                   [H](const PairedSample& p) { return p.b - H * p.a; });

    const auto n = static_cast<double>(r.size());
    ResidualDiagnostics d;
    d.count = r.size();
    for (double v : r)
        d.mean += v;
    d.mean /= n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : r) {
        const double c = v - d.mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    d.stddev = std::sqrt(m2 * n / (n - 1.0));
    if (m2 > 0.0) {
        d.skewness = m3 / std::pow(m2, 1.5);
        d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        d.jarque_bera = n / 6.0 *
                        (d.skewness * d.skewness +
                         d.excess_kurtosis * d.excess_kurtosis / 4.0);
    } else {
        d.degenerate = true;
    }
    d.biased_mean = std::abs(d.mean) > 2.0 * d.stddev / std::sqrt(n);

    // Sturges' rule histogram, emitted for plotting parity.
    const int bins = static_cast<int>(std::ceil(std::log2(n))) + 1;
    const double lo = *std::min_element(r.begin(), r.end());
    const double hi = *std::max_element(r.begin(), r.end());
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    d.histogram.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        d.histogram[static_cast<std::size_t>(b)].lower = lo + b * width;
        d.histogram[static_cast<std::size_t>(b)].upper = lo + (b + 1) * width;
    }
    for (double v : r) {
        auto b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++d.histogram[static_cast<std::size_t>(b)].count;
    }
    return d;
}

EvalReport full_report(const DailySeries& assimilated,
                       const DailySeries& polls_shifted,
                       const DailySeries& twitter_shifted, double gain)
{
    EvalReport report;
    report.gain = gain;

    const auto vs_polls = complete_case_pairs(assimilated, polls_shifted);
    const auto vs_twitter = complete_case_pairs(assimilated, twitter_shifted);
    report.mse_vs_polls = mse(vs_polls);
    report.mse_vs_twitter = mse(vs_twitter);
    report.corr_vs_polls = pearson(vs_polls);
    report.corr_vs_twitter = pearson(vs_twitter);
    report.residuals = residual_diagnostics(twitter_shifted, polls_shifted);
    return report;
}

std::string to_json(const EvalReport& report)
{
    nlohmann::ordered_json j;
    j["gain"] = fixed6(report.gain);
    j["mse_vs_polls"] = fixed6(report.mse_vs_polls);
    j["mse_vs_twitter"] = fixed6(report.mse_vs_twitter);
    j["corr_vs_polls"] = fixed6(report.corr_vs_polls);
    j["corr_vs_twitter"] = fixed6(report.corr_vs_twitter);

    nlohmann::ordered_json res;
    res["mean"] = fixed6(report.residuals.mean);
    res["stddev"] = fixed6(report.residuals.stddev);
    res["skewness"] = fixed6(report.residuals.skewness);
    res["excess_kurtosis"] = fixed6(report.residuals.excess_kurtosis);
    res["jarque_bera"] = fixed6(report.residuals.jarque_bera);
    res["count"] = report.residuals.count;
    res["biased_mean"] = report.residuals.biased_mean;
    res["degenerate"] = report.residuals.degenerate;
    j["residuals"] = res;
    return j.dump(2) + "\n";
}

std::string eval_csv_header()
{
    return "gain,mse_vs_polls,mse_vs_twitter,corr_vs_polls,corr_vs_twitter,"
           "residual_mean,residual_stddev,residual_skewness,"
           "residual_excess_kurtosis,residual_count,residual_biased_mean\n";
}

std::string eval_csv_row(const EvalReport& r)
{
    std::ostringstream out;
    out << fixed6(r.gain) << ',' << fixed6(r.mse_vs_polls) << ','
        << fixed6(r.mse_vs_twitter) << ',' << fixed6(r.corr_vs_polls) << ','
        << fixed6(r.corr_vs_twitter) << ',' << fixed6(r.residuals.mean) << ','
        << fixed6(r.residuals.stddev) << ',' << fixed6(r.residuals.skewness)
        << ',' << fixed6(r.residuals.excess_kurtosis) << ','
        << r.residuals.count << ',' << (r.residuals.biased_mean ? 1 : 0)
        << '\n';
    return out.str();
}

} // namespace oifuse
