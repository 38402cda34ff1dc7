#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oifuse/errors.hpp"
#include "oifuse/reference.hpp"
#include "oifuse/smoothing.hpp"

using namespace oifuse;

namespace {

const Date kStart = Date::from_ymd(2016, 3, 1);

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> value(0.0, 100.0);
    std::vector<double> out(n);
    for (auto& v : out)
        v = value(rng);
    return out;
}

double rms_error(const std::vector<double>& a, const std::vector<double>& b)
{
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq / static_cast<double>(a.size()));
}

} // namespace

TEST_CASE("constant series is reproduced exactly")
{
    const auto s = DailySeries::from_values(kStart, std::vector<double>(30, 50.0));
    for (double fraction : {0.1, 0.15, 0.5, 1.0}) {
        const auto out = lowess(s, {fraction, 0});
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(*out.at_index(i) == doctest::Approx(50.0).epsilon(1e-12));
    }
}

TEST_CASE("globally linear series is reproduced exactly")
{
    std::vector<double> values(40);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = 2.0 * static_cast<double>(i) + 5.0;
    const auto out = lowess(DailySeries::from_values(kStart, values), {0.5, 0});
    for (std::size_t i = 0; i < values.size(); ++i)
        CHECK(std::abs(*out.at_index(i) - values[i]) < 1e-8);
}

TEST_CASE("noisy sine is pulled toward the clean signal")
{
    const std::size_t n = 100;
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> clean(n), noisy(n);
    for (std::size_t i = 0; i < n; ++i) {
        clean[i] = 50.0 + 10.0 * std::sin(2.0 * std::numbers::pi *
                                          static_cast<double>(i) / 40.0);
        noisy[i] = clean[i] + noise(rng);
    }
    const auto smoothed = lowess_values(noisy, {0.15, 0});
    CHECK(rms_error(smoothed, clean) < rms_error(noisy, clean));
}

TEST_CASE("translation and scale equivariance")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = 20 + rng() % 120;
        const auto values = random_values(n, rng);
        const LowessConfig cfg{0.2, trial % 2 == 0 ? 0 : 2};
        const auto base = lowess_values(values, cfg);

        std::vector<double> shifted(values), scaled(values);
        for (auto& v : shifted)
            v += 13.25;
        for (auto& v : scaled)
            v *= 1.75;
        const auto shifted_out = lowess_values(shifted, cfg);
        const auto scaled_out = lowess_values(scaled, cfg);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(shifted_out[i] - (base[i] + 13.25)) < 1e-8);
            CHECK(std::abs(scaled_out[i] - 1.75 * base[i]) < 1e-8);
        }
    }
}

TEST_CASE("errors on bad input")
{
    CHECK_THROWS_AS(lowess_values(std::vector<double>{1.0, 2.0}, {0.5, 0}),
                    NumericError);
    const DailySeries gappy(kStart, {1.0, std::nullopt, 3.0});
    CHECK_THROWS_AS(lowess(gappy, {0.5, 0}), NumericError);
    const auto s = DailySeries::from_values(kStart, {1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(lowess(s, {0.1, 0}), NumericError);  // window of 1 point
    CHECK_THROWS_AS(lowess(s, {0.0, 0}), ValidationError);
    CHECK_THROWS_AS(lowess(s, {1.5, 0}), ValidationError);
    CHECK_THROWS_AS(lowess(s, {0.5, 9}), ValidationError);
}

TEST_CASE("parallel kernel matches the serial reference exactly")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = 10 + rng() % 300;
        const auto values = random_values(n, rng);
        const LowessConfig cfg{0.05 + 0.9 * (trial / 20.0),
                               trial % 3 == 0 ? 2 : 0};
        std::vector<double> parallel, serial;
        try {
            parallel = lowess_values(values, cfg);
        } catch (const NumericError&) {
            CHECK_THROWS_AS(reference::lowess_values(values, cfg), NumericError);
            continue;
        }
        serial = reference::lowess_values(values, cfg);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(parallel[i] == serial[i]); // bit-identical
    }
}

TEST_CASE("robustness iterations pull fits off an outlier")
{
    std::vector<double> values(60);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = 40.0 + 0.2 * static_cast<double>(i);
    values[30] = 95.0; // single wild point

    const auto plain = lowess_values(values, {0.3, 0});
    const auto robust = lowess_values(values, {0.3, 3});
    const double expected = 40.0 + 0.2 * 30.0;
    CHECK(std::abs(robust[30] - expected) < std::abs(plain[30] - expected));
}
