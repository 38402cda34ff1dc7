// Acceptance suite: every release criterion checked end to end, one line of
// output per criterion. Exits non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oifuse/alignment.hpp"
#include "oifuse/assimilation.hpp"
#include "oifuse/evaluation.hpp"
#include "oifuse/hyperparams.hpp"
#include "oifuse/smoothing.hpp"
#include "oifuse/synthetic.hpp"

namespace fs = std::filesystem;
using namespace oifuse;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail)
{
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    if (!pass)
        ++failures;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// --- criterion 1: gain arithmetic on the three reference scenarios ---------

void criterion_gain_arithmetic()
{
    const struct {
        double pb, expected;
    } cases[] = {{266.06, 0.953}, {45.0, 0.775}, {10.0, 0.433}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const double k = kalman_gain(c.pb, 1.0, 13.08);
        pass = pass && std::abs(k - c.expected) <= 0.003;
        detail += fmt(k) + " ";
    }
    report(1, pass, "kalman gain at P_b in {266.06, 45, 10}, R = 13.08",
           "got " + detail + "expected 0.953 0.775 0.433 within 0.003");
}

// --- criterion 2: OI update algebra over random triples --------------------

void criterion_oi_algebra()
{
    std::mt19937_64 rng(20160623);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    std::uniform_real_distribution<double> gain(0.0, 1.0);
    bool bounded = true, limits = true;
    for (int i = 0; i < 10000; ++i) {
        const double x = value(rng), z = value(rng), k = gain(rng);
        const double post = update_state(x, z, k, 1.0);
        bounded = bounded && post >= std::min(x, z) && post <= std::max(x, z);
        limits = limits && std::abs(update_state(x, z, 0.0, 1.0) - x) <= 1e-12 &&
                 std::abs(update_state(x, z, 1.0, 1.0) - z) <= 1e-12;
    }
    report(2, bounded && limits,
           "posterior bounded by prior and observation over 10000 triples",
           std::string("bounds ") + (bounded ? "ok" : "violated") +
               ", K=0/K=1 limits " + (limits ? "exact" : "broken"));
}

// --- criterion 3: lag, scale and offset recovery across seeds --------------

SyntheticScenario recovery_scenario(std::uint64_t seed)
{
    SyntheticScenario sc;
    sc.n_days = 120;
    sc.truth_model = TruthModel::SinePlusTrend;
    sc.truth_params.amplitude = 12.0;
    sc.truth_params.period = 60.0;
    sc.truth_params.trend = 0.05;
    sc.lead_days = 14;
    sc.lag_days = 2;
    sc.affine_scale = 2.0;
    sc.affine_offset = -50.0;
    sc.noise_a = 2.0;
    sc.noise_b = 3.0;
    sc.obs_b_density = 0.6;
    sc.seed = seed;
    return sc;
}

void criterion_lag_recovery()
{
    // Observer A = 2 * truth(d + 14) - 50, so regressing B on shifted A has
    // generative coefficients scale = 1/2 and offset = -(-50)/2 = 25.
    const double expected_scale = 0.5;
    const double expected_offset = 25.0;
    const int seeds = 50;
    int lag_hits = 0, coef_hits = 0;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto data = generate(recovery_scenario(1000 + seed));
        const auto source = lowess(interpolate_linear(data.observer_a), {0.15, 0});
        const auto fit =
            fit_shift_rescale(source, data.observer_b, 23, FitCriterion::Rmse);
        if (fit.lag_days >= 15 && fit.lag_days <= 17)
            ++lag_hits;
        if (std::abs(fit.scale - expected_scale) <= 0.1 &&
            std::abs(fit.offset - expected_offset) <= 5.0)
            ++coef_hits;
    }
    const bool pass = lag_hits >= 45 && coef_hits >= 40;
    report(3, pass, "shift+rescale recovery over 50 seeds",
           "lag in [15,17]: " + std::to_string(lag_hits) +
               "/50 (need 45), coefficients in band: " +
               std::to_string(coef_hits) + "/50 (need 40)");
}

// --- criterion 4: LOWESS exactness and equivariance -------------------------

void criterion_lowess_exactness()
{
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    std::uniform_real_distribution<double> intercept(-50.0, 50.0);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    std::uniform_real_distribution<double> fraction(0.1, 1.0);

    bool linear_ok = true, translate_ok = true, scale_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 20 + rng() % 180;
        const LowessConfig cfg{fraction(rng), 0};

        const double a = slope(rng), b = intercept(rng);
        std::vector<double> line(n);
        for (std::size_t i = 0; i < n; ++i)
            line[i] = a * static_cast<double>(i) + b;
        const auto smoothed_line = lowess_values(line, cfg);
        for (std::size_t i = 0; i < n; ++i)
            linear_ok = linear_ok && std::abs(smoothed_line[i] - line[i]) < 1e-8;

        std::vector<double> noisy(n);
        for (auto& v : noisy)
            v = value(rng);
        const auto base = lowess_values(noisy, cfg);
        auto shifted = noisy;
        for (auto& v : shifted)
            v += 21.5;
        auto scaled = noisy;
        for (auto& v : scaled)
            v *= 2.25;
        const auto shifted_out = lowess_values(shifted, cfg);
        const auto scaled_out = lowess_values(scaled, cfg);
        for (std::size_t i = 0; i < n; ++i) {
            translate_ok =
                translate_ok && std::abs(shifted_out[i] - (base[i] + 21.5)) < 1e-8;
            scale_ok = scale_ok && std::abs(scaled_out[i] - 2.25 * base[i]) < 1e-8;
        }
    }
    report(4, linear_ok && translate_ok && scale_ok,
           "lowess reproduces lines and is translation/scale equivariant",
           std::string("linear ") + (linear_ok ? "ok" : "bad") + ", translation " +
               (translate_ok ? "ok" : "bad") + ", scale " +
               (scale_ok ? "ok" : "bad"));
}

// --- criterion 5: variance estimators against oracles -----------------------

void criterion_variance_estimators()
{
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    bool welford_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> values(2 + rng() % 150);
        for (auto& v : values)
            v = value(rng);
        double mean = 0.0;
        for (double v : values)
            mean += v;
        mean /= static_cast<double>(values.size());
        double sq = 0.0;
        for (double v : values)
            sq += (v - mean) * (v - mean);
        const double oracle = sq / static_cast<double>(values.size() - 1);
        const double got = estimate_Pb_snapshots(values).value;
        welford_ok =
            welford_ok && std::abs(got - oracle) <= 1e-9 * std::max(1.0, oracle);
    }

    // R recovery: 3 reports on each of 58 days, noise sigma 3, 20 seeds.
    const double true_R = 9.0;
    const auto truth = DailySeries::from_values(Date::from_ymd(2016, 3, 1),
                                                std::vector<double>(60, 50.0));
    double mean_estimate = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
        const auto polls = synthesize_polls(truth, 2, 3, 3.0, 9000 + seed);
        mean_estimate += estimate_R_same_day(polls, Camp::Remain).value;
    }
    mean_estimate /= 20.0;
    const bool r_ok = std::abs(mean_estimate - true_R) <= 0.25 * true_R;

    report(5, welford_ok && r_ok, "variance estimators vs oracles",
           std::string("snapshot variance vs two-pass: ") +
               (welford_ok ? "1e-9" : "off") +
               ", same-day R mean over 20 seeds: " + fmt(mean_estimate) +
               " vs 9.0 within 25%");
}

// --- criterion 6: assimilation optimality at the true variances -------------

void criterion_assimilation_optimality()
{
    const double noise_prior = 3.0, noise_obs = 2.0;
    const double P_b = noise_prior * noise_prior;
    const double R = noise_obs * noise_obs;
    const double K = kalman_gain(P_b, 1.0, R);
    const double predicted = (1.0 - K) * P_b;

    double post_var_sum = 0.0, prior_var_sum = 0.0, obs_var_sum = 0.0;
    const int seeds = 50;
    for (int seed = 0; seed < seeds; ++seed) {
        SyntheticScenario sc;
        sc.n_days = 160;
        sc.truth_model = TruthModel::Ar1;
        sc.truth_params.persistence = 0.9;
        sc.truth_params.innovation_sigma = 1.5;
        sc.lead_days = 0;
        sc.lag_days = 0;
        sc.noise_a = noise_prior;
        sc.noise_b = noise_obs;
        sc.obs_b_density = 1.0;
        sc.seed = 2000 + static_cast<std::uint64_t>(seed);
        const auto data = generate(sc);
        const auto run = assimilate_series(data.observer_a, data.observer_b,
                                           {1.0, R, P_b, 0.0});
        post_var_sum += true_errors(run.posterior, data.truth).second;
        prior_var_sum += true_errors(data.observer_a, data.truth).second;
        obs_var_sum += true_errors(data.observer_b, data.truth).second;
    }
    const double post_var = post_var_sum / seeds;
    const double prior_var = prior_var_sum / seeds;
    const double obs_var = obs_var_sum / seeds;
    const bool beats_both = post_var <= prior_var && post_var <= obs_var;
    const bool matches_update =
        std::abs(post_var - predicted) <= 0.15 * predicted;
    report(6, beats_both && matches_update,
           "posterior error variance at the oracle gain",
           "posterior " + fmt(post_var) + " vs prior " + fmt(prior_var) +
               ", obs " + fmt(obs_var) + ", (1-K)P_b " + fmt(predicted));
}

// --- criterion 7: residual statistics do not depend on the gain -------------

void criterion_residual_invariance()
{
    SyntheticScenario sc = recovery_scenario(777);
    sc.lead_days = 0;
    sc.lag_days = 0;
    sc.obs_b_density = 0.8;
    const auto data = generate(sc);

    // Full-precision serialization: identical bytes, not merely close values.
    const auto fingerprint = [](const ResidualDiagnostics& r) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g|%.17g|%zu|%d",
                      r.mean, r.stddev, r.skewness, r.excess_kurtosis,
                      r.jarque_bera, r.count, r.biased_mean ? 1 : 0);
        std::string out(buf);
        for (const auto& bin : r.histogram) {
            std::snprintf(buf, sizeof buf, "|%.17g:%.17g:%d", bin.lower,
                          bin.upper, bin.count);
            out += buf;
        }
        return out;
    };

    std::vector<std::string> snapshots;
    for (double pb : {10.0, 45.0, 266.06}) {
        const auto run = assimilate_series(data.observer_a, data.observer_b,
                                           {1.0, 13.08, pb, 0.0});
        const auto report_k =
            full_report(run.posterior, data.observer_b, data.observer_a, run.gain);
        snapshots.push_back(fingerprint(report_k.residuals));
    }
    const bool pass =
        snapshots[0] == snapshots[1] && snapshots[1] == snapshots[2];
    report(7, pass, "residual statistics byte-identical across gain presets",
           pass ? "three presets, one fingerprint" : "fingerprints differ");
}

// --- criterion 8: correlation and MSE move monotonically in K ---------------

void criterion_directionality()
{
    SyntheticScenario sc;
    sc.n_days = 150;
    sc.truth_model = TruthModel::SinePlusTrend;
    sc.truth_params.amplitude = 12.0;
    sc.truth_params.period = 50.0;
    sc.truth_params.trend = 0.05;
    sc.lead_days = 0;
    sc.lag_days = 0;
    sc.noise_a = 3.0;
    sc.noise_b = 2.0;
    sc.obs_b_density = 0.7;
    sc.seed = 321;
    const auto data = generate(sc);
    const double R = 4.0;

    bool corr_polls_up = true, corr_twitter_down = true, mse_polls_down = true;
    double prev_cp = -2.0, prev_ct = 2.0, prev_mp = 1e18;
    for (int step = 1; step <= 9; ++step) {
        const double k = 0.1 * step;
        const double pb = k * R / (1.0 - k);
        const auto run = assimilate_series(data.observer_a, data.observer_b,
                                           {1.0, R, pb, 0.0});
        const auto rep =
            full_report(run.posterior, data.observer_b, data.observer_a, run.gain);
        corr_polls_up = corr_polls_up && rep.corr_vs_polls > prev_cp;
        corr_twitter_down = corr_twitter_down && rep.corr_vs_twitter < prev_ct;
        mse_polls_down = mse_polls_down && rep.mse_vs_polls < prev_mp;
        prev_cp = rep.corr_vs_polls;
        prev_ct = rep.corr_vs_twitter;
        prev_mp = rep.mse_vs_polls;
    }
    report(8, corr_polls_up && corr_twitter_down && mse_polls_down,
           "monotone trade-off across K in {0.1..0.9}",
           std::string("corr_vs_polls ") + (corr_polls_up ? "up" : "not up") +
               ", corr_vs_twitter " + (corr_twitter_down ? "down" : "not down") +
               ", mse_vs_polls " + (mse_polls_down ? "down" : "not down"));
}

// --- criteria 9 and 10: pipeline speed and determinism ----------------------

int run_cli(const std::string& args)
{
    const std::string command = std::string(OIFUSE_CLI_PATH) + " " + args +
                                " > /dev/null 2> /dev/null";
    return WEXITSTATUS(std::system(command.c_str()));
}

void write_file(const fs::path& file, const std::string& text)
{
    std::ofstream out(file);
    out << text;
}

std::string slurp(const fs::path& file)
{
    std::ifstream in(file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool run_pipeline(const fs::path& root, const std::string& config)
{
    const std::string cfg = (root / "pipeline.cfg").string();
    write_file(root / "pipeline.cfg", config);
    const std::string data = (root / "data").string();
    if (run_cli("synth --config " + cfg + " --out " + data) != 0)
        return false;
    return run_cli("ingest --tweets " + data + "/tweets.csv --polls " + data +
                   "/polls.csv --out " + (root / "ingested").string()) == 0 &&
           run_cli("align --data " + (root / "ingested").string() + " --config " +
                   cfg + " --out " + (root / "align").string()) == 0 &&
           run_cli("assimilate --data " + (root / "ingested").string() +
                   " --config " + cfg + " --preset high --out " +
                   (root / "run").string()) == 0 &&
           run_cli("evaluate --run " + (root / "run").string() + " --out " +
                   (root / "eval").string()) == 0;
}

const char* k120DayConfig = R"(
window_start = 2016-03-01
window_end = 2016-06-28
synth_days = 120
truth_model = sine_plus_trend
truth_amplitude = 12
truth_period = 60
truth_trend = 0.05
lead_days = 14
lag_days = 2
affine_scale = 2
affine_offset = -50
noise_a = 2
noise_b = 3
obs_b_density = 0.7
polls_per_day = 2
seed = 7070
)";

void criterion_performance()
{
    const fs::path root = fs::temp_directory_path() / "oifuse_acceptance_perf";
    fs::remove_all(root);
    fs::create_directories(root);

    // synth sits outside the timed window; the pipeline under test is
    // ingest -> align -> assimilate -> evaluate on the 120-day dataset.
    const std::string cfg = (root / "pipeline.cfg").string();
    write_file(root / "pipeline.cfg", k120DayConfig);
    const std::string data = (root / "data").string();
    bool ok = run_cli("synth --config " + cfg + " --out " + data) == 0;

    const auto start = std::chrono::steady_clock::now();
    ok = ok &&
         run_cli("ingest --tweets " + data + "/tweets.csv --polls " + data +
                 "/polls.csv --out " + (root / "ingested").string()) == 0 &&
         run_cli("align --data " + (root / "ingested").string() + " --config " +
                 cfg + " --out " + (root / "align").string()) == 0 &&
         run_cli("assimilate --data " + (root / "ingested").string() +
                 " --config " + cfg + " --preset high --out " +
                 (root / "run").string()) == 0 &&
         run_cli("evaluate --run " + (root / "run").string() + " --out " +
                 (root / "eval").string()) == 0;
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    fs::remove_all(root);
    report(9, ok && elapsed < 1.0, "ingest->align->assimilate->evaluate on 120 days",
           fmt(elapsed) + "s, budget 1s");
}

void criterion_determinism()
{
    const fs::path a = fs::temp_directory_path() / "oifuse_acceptance_det_a";
    const fs::path b = fs::temp_directory_path() / "oifuse_acceptance_det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    fs::create_directories(a);
    fs::create_directories(b);

    bool ok = run_pipeline(a, k120DayConfig) && run_pipeline(b, k120DayConfig);
    std::size_t compared = 0;
    std::string mismatch;
    if (ok) {
        for (auto it = fs::recursive_directory_iterator(a);
             it != fs::recursive_directory_iterator(); ++it) {
            if (!it->is_regular_file())
                continue;
            const auto relative = fs::relative(it->path(), a);
            const auto twin = b / relative;
            if (!fs::exists(twin) || slurp(it->path()) != slurp(twin)) {
                ok = false;
                mismatch = relative.string();
                break;
            }
            ++compared;
        }
    }
    fs::remove_all(a);
    fs::remove_all(b);
    report(10, ok && compared > 0, "two identical runs produce identical bytes",
           ok ? std::to_string(compared) + " files identical"
              : "mismatch at " + mismatch);
}

} // namespace

int main()
{
    criterion_gain_arithmetic();
    criterion_oi_algebra();
    criterion_lag_recovery();
    criterion_lowess_exactness();
    criterion_variance_estimators();
    criterion_assimilation_optimality();
    criterion_residual_invariance();
    criterion_directionality();
    criterion_performance();
    criterion_determinism();

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
