#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oifuse/alignment.hpp"
#include "oifuse/errors.hpp"
#include "oifuse/reference.hpp"
#include "oifuse/smoothing.hpp"

using namespace oifuse;

namespace {

const Date kStart = Date::from_ymd(2016, 3, 1);

std::vector<std::pair<double, double>> affine_pairs(double a, double b, int n)
{
    std::vector<std::pair<double, double>> pairs;
    for (int i = 1; i <= n; ++i)
        pairs.emplace_back(i, a * i + b);
    return pairs;
}

DailySeries wavy_series(std::size_t n, std::uint64_t seed, double noise_sd)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sd);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = 50.0 +
                    12.0 * std::sin(2.0 * std::numbers::pi *
                                    static_cast<double>(i) / 45.0) +
                    0.05 * static_cast<double>(i) + noise(rng);
    return DailySeries::from_values(kStart, values);
}

} // namespace

TEST_CASE("pearson on exact affine relations")
{
    CHECK(pearson(affine_pairs(2.0, 3.0, 10)) == doctest::Approx(1.0));
    CHECK(pearson(affine_pairs(-1.0, 0.0, 10)) == doctest::Approx(-1.0));

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(pearson(affine_pairs(1.0, 0.0, 1)), NumericError);
        std::vector<std::pair<double, double>> flat = {{1.0, 5.0}, {2.0, 5.0}};
        CHECK_THROWS_AS(pearson(flat), NumericError);
    }

    SUBCASE("invariant under positive affine transforms of one coordinate")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> value(-50.0, 50.0);
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 40; ++i)
            pairs.emplace_back(value(rng), value(rng));
        const double base = pearson(pairs);
        for (double alpha : {0.2, 3.0, 17.5}) {
            auto scaled = pairs;
            for (auto& [x, y] : scaled)
                x = alpha * x + 11.0;
            CHECK(std::abs(pearson(scaled) - base) < 1e-9);
        }
    }
}

TEST_CASE("rmse arithmetic")
{
    CHECK(rmse(std::vector{1.0, 2.0, 3.0}, std::vector{1.0, 2.0, 3.0}) == 0.0);
    CHECK(rmse(std::vector{0.0, 0.0}, std::vector{3.0, 4.0}) ==
          doctest::Approx(std::sqrt(12.5)));
    CHECK_THROWS_AS(rmse(std::vector{1.0}, std::vector{1.0, 2.0}), NumericError);
    CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}),
                    NumericError);

    SUBCASE("zero iff elementwise equal")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> value(-10.0, 10.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> a(8), b(8);
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] = value(rng);
                b[i] = a[i];
            }
            CHECK(rmse(a, b) == 0.0);
            b[trial % 8] += 0.25;
            CHECK(rmse(a, b) > 0.0);
        }
    }
}

TEST_CASE("fit_shift recovers an exact self-shift")
{
    const auto source = wavy_series(90, 21, 0.0);
    for (int k : {0, 3, 7, 19}) {
        const auto target = shift_days(source, k);
        const auto fit = fit_shift(source, target, 23, FitCriterion::Rmse);
        CHECK(fit.lag_days == k);
        CHECK(fit.criterion_value == doctest::Approx(0.0));
        CHECK(fit.scale == 1.0);
        CHECK(fit.offset == 0.0);
        CHECK_FALSE(fit.rescaled);
    }
}

TEST_CASE("fit_shift_rescale recovers an exact affine relation")
{
    const auto source = wavy_series(90, 22, 0.0);
    auto shifted = shift_days(source, 7);
    std::vector<std::optional<double>> target_slots(shifted.slots());
    for (auto& v : target_slots)
        v = 0.5 * *v + 10.0;
    const DailySeries target(shifted.start_date(), std::move(target_slots));

    const auto fit = fit_shift_rescale(source, target, 23, FitCriterion::Rmse);
    CHECK(fit.lag_days == 7);
    CHECK(fit.scale == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(fit.criterion_value == doctest::Approx(0.0));
    CHECK(fit.rescaled);
}

TEST_CASE("rescale never does worse than shift alone on the RMSE criterion")
{
    for (int trial = 0; trial < 10; ++trial) {
        const auto source = wavy_series(80, 100 + trial, 1.0);
        const auto target = shift_days(wavy_series(80, 200 + trial, 2.0), 5);
        const auto plain = fit_shift(source, target, 15, FitCriterion::Rmse);
        const auto rescaled =
            fit_shift_rescale(source, target, 15, FitCriterion::Rmse);
        CHECK(rescaled.criterion_value <= plain.criterion_value + 1e-12);
    }
}

TEST_CASE("correlation criterion reports OLS coefficients at its best shift")
{
    const auto source = wavy_series(90, 23, 0.5);
    auto shifted = shift_days(source, 11);
    std::vector<std::optional<double>> target_slots(shifted.slots());
    for (auto& v : target_slots)
        v = 0.7 * *v - 5.0;
    const DailySeries target(shifted.start_date(), std::move(target_slots));

    const auto fit =
        fit_shift_rescale(source, target, 23, FitCriterion::Correlation);
    CHECK(fit.lag_days == 11);
    CHECK(fit.criterion_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.scale == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(-5.0).epsilon(1e-4));
}

TEST_CASE("shifts without overlap are skipped; all-empty errors")
{
    const auto source = DailySeries::from_values(kStart, {1.0, 2.0, 3.0, 4.0});
    const auto target = DailySeries::from_values(kStart + 50, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(fit_shift(source, target, 5, FitCriterion::Rmse),
                    NumericError);

    SUBCASE("constant source is rank deficient for rescaling")
    {
        const auto flat =
            DailySeries::from_values(kStart, std::vector<double>(30, 42.0));
        const auto wobble = wavy_series(30, 9, 1.0);
        CHECK_THROWS_AS(fit_shift_rescale(flat, wobble, 5, FitCriterion::Rmse),
                        NumericError);
    }
}

TEST_CASE("parallel grid search agrees with the serial reference")
{
    for (int trial = 0; trial < 8; ++trial) {
        const auto source = wavy_series(100, 300 + trial, 1.5);
        auto target = shift_days(wavy_series(100, 400 + trial, 2.0), trial);
        for (auto criterion : {FitCriterion::Rmse, FitCriterion::Correlation}) {
            for (bool rescale : {false, true}) {
                const auto fast =
                    rescale ? fit_shift_rescale(source, target, 23, criterion)
                            : fit_shift(source, target, 23, criterion);
                const auto slow =
                    rescale
                        ? reference::fit_shift_rescale(source, target, 23, criterion)
                        : reference::fit_shift(source, target, 23, criterion);
                CHECK(fast.lag_days == slow.lag_days);
                CHECK(fast.criterion_value ==
                      doctest::Approx(slow.criterion_value).epsilon(1e-9));
                CHECK(fast.scale == doctest::Approx(slow.scale).epsilon(1e-9));
                CHECK(fast.offset ==
                      doctest::Approx(slow.offset).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("lag decomposition follows the fieldwork-midpoint rule")
{
    auto polls_with_span = [](std::int64_t span, int count) {
        std::vector<PollRecord> polls;
        for (int i = 0; i < count; ++i) {
            PollRecord p;
            p.pollster = "p";
            p.release_date = kStart + i;
            p.fieldwork_start = p.release_date - span;
            p.fieldwork_end = span > 0 ? p.release_date - 1 : p.release_date;
            p.remain_share = 50.0;
            p.leave_share = 50.0;
            polls.push_back(p);
        }
        return polls;
    };

    SUBCASE("three-day span with one compile day gives a two-day poll lag")
    {
        const auto d = decompose_lag(16, polls_with_span(3, 5), 1);
        CHECK(d.obs_lag == 2);
        CHECK(d.source_lead == 14);
        CHECK(d.total_lag == 16);
    }

    SUBCASE("instant polls decompose entirely to the source")
    {
        const auto d = decompose_lag(16, polls_with_span(0, 5), 0);
        CHECK(d.obs_lag == 0);
        CHECK(d.source_lead == 16);
    }

    SUBCASE("five-day span with one compile day gives a three-day poll lag")
    {
        // Fieldwork runs 4 days, its midpoint sits 2 days after the start,
        // and the release comes 5 days after the start: lag 3.
        const auto d = decompose_lag(16, polls_with_span(5, 5), 1);
        CHECK(d.obs_lag == 3);
        CHECK(d.source_lead == 13);
    }

    SUBCASE("components are non-negative and sum to the total")
    {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 30; ++trial) {
            const auto span = static_cast<std::int64_t>(rng() % 6);
            const int total = 8 + static_cast<int>(rng() % 20);
            const auto d = decompose_lag(total, polls_with_span(span, 4),
                                         span > 0 ? 1 : 0);
            CHECK(d.obs_lag >= 0);
            CHECK(d.source_lead >= 0);
            CHECK(d.obs_lag + d.source_lead == d.total_lag);
        }
    }

    SUBCASE("lag exceeding the total is inconsistent")
    {
        CHECK_THROWS_AS(decompose_lag(1, polls_with_span(5, 5), 1), NumericError);
    }
}
