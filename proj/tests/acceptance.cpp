// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "townsim/scenario.hpp"
#include "townsim/stats.hpp"

using namespace townsim;

namespace {

constexpr std::size_t kReplicates = 20;
constexpr int kMaxLag = 60;
constexpr int kCcfWindow = 60;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
    std::printf("[%s] %2d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_between(const TimeSeries& ts, int first_day, int last_day) {
    double m = 0.0;
    for (const auto& r : ts.rows)
        if (r.day >= first_day && r.day <= last_day)
            m = std::max(m, r.infected);
    return m;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Days without infections carry no mean degree; drop them from both series.
struct Pair {
    std::vector<double> infected, degree;
};
Pair analysis_series(const TimeSeries& ts) {
    Pair p{ts.infected(), ts.mean_degree_infected()};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t t = 0; t < p.infected.size(); ++t)
        if (p.infected[t] == 0.0)
            p.infected[t] = p.degree[t] = nan;
    return p;
}

ScenarioConfig regime(int doses) {
    ScenarioConfig c;
    c.vaccine.max_doses = doses;
    return c;
}

bool conserves(const TimeSeries& ts, std::size_t n) {
    return std::all_of(ts.rows.begin(), ts.rows.end(), [&](const DailyRecord& r) { return r.total() == n; });
}

}  // namespace

int main() {
    std::printf("townsim acceptance suite (%zu replicates per regime)\n", kReplicates);

    // Shared simulation batches.
    std::vector<ReplicateBatch> batches(4);
    double no_vaccine_seconds = 0.0;
    for (int d = 0; d <= 3; ++d) {
        const auto t0 = std::chrono::steady_clock::now();
        batches[d] = run_replicates(regime(d), kReplicates);
        if (d == 0)
            no_vaccine_seconds = seconds_since(t0);
    }
    bool all_conserved = true;
    for (const auto& b : batches)
        for (const auto& ts : b.runs)
            all_conserved = all_conserved && conserves(ts, 10000) && ts.size() == 1081;

    // 1. First wave
    {
        std::vector<double> peaks;
        for (const auto& ts : batches[0].runs)
            peaks.push_back(max_between(ts, 0, 200));
        const double m = median(peaks);
        report(1, "no-vaccine first wave peak in [0.65, 0.95]",
               {m >= 0.65 && m <= 0.95 && no_vaccine_seconds < 60.0,
                fmt("median peak I = %.4f, runtime %.2f s", m, no_vaccine_seconds)});
    }

    // 2. Endemic period
    {
        std::vector<double> periods;
        std::size_t undefined = 0;
        for (const auto& ts : batches[0].runs) {
            const auto inf = ts.infected();
            const auto p = detect_endemic_period(inf);
            if (p)
                periods.push_back(*p);
            else {
                periods.push_back(std::numeric_limits<double>::infinity());
                ++undefined;
            }
        }
        const double m = median(periods);
        report(2, "endemic period median in [160, 280] days",
               {m >= 160.0 && m <= 280.0,
                fmt("median period %.1f days (%.0f of 20 runs with < 2 peaks)", m, double(undefined))});
    }

    std::vector<double> post(4);
    for (int d = 0; d <= 3; ++d) {
        std::vector<double> v;
        for (const auto& ts : batches[d].runs)
            v.push_back(max_between(ts, 301, 1080));
        post[d] = median(v);
    }

    // 3. Three doses contain the disease
    report(3, "three-dose post-day-300 max I <= 0.15 and below no-vaccine",
           {post[3] <= 0.15 && post[3] < post[0],
            fmt("median post-300 max: 3 doses %.4f, no vaccine %.4f", post[3], post[0])});

    // 4. One dose barely matters
    {
        const double rel = post[0] > 0 ? std::abs(post[1] - post[0]) / post[0] : std::abs(post[1]);
        report(4, "one-dose post-day-300 peak within 25% of no-vaccine",
               {rel <= 0.25, fmt("1 dose %.4f vs none %.4f (relative gap %.3f)", post[1], post[0], rel)});
    }

    // 5. Hub infection leads overall infection
    {
        int hits = 0;
        std::vector<double> lag0, lag3;
        for (const auto& ts : batches[0].runs) {
            const auto s = analysis_series(ts);
            const auto ccf = stats::cross_correlation(s.degree, s.infected, kCcfWindow);
            if (ccf.best_negative_lag >= -40 && ccf.best_negative_lag <= -10 && ccf.best_rho >= 0.4)
                ++hits;
            lag0.push_back(std::abs(ccf.best_negative_lag));
        }
        for (const auto& ts : batches[3].runs) {
            const auto s = analysis_series(ts);
            lag3.push_back(std::abs(stats::cross_correlation(s.degree, s.infected, kCcfWindow).best_negative_lag));
        }
        const double m0 = median(lag0), m3 = median(lag3);
        report(5, "<k>_I leads I (lag in [-40,-10], rho >= 0.4) and lead shrinks with doses",
               {hits >= 15 && m3 < m0,
                fmt("%.0f/20 no-vaccine runs in window; median |lag| none %.1f vs 3 doses %.1f", hits, m0, m3)});
    }

    // 6. Granger significance in every regime
    {
        bool ok = true;
        std::ostringstream detail;
        for (int d = 0; d <= 3; ++d) {
            int sig = 0;
            std::vector<double> lags;
            for (const auto& ts : batches[d].runs) {
                const auto s = analysis_series(ts);
                try {
                    const auto g = stats::granger_with_aic(s.infected, s.degree, kMaxLag);
                    sig += g.significant() ? 1 : 0;
                    lags.push_back(g.lag);
                } catch (const std::exception&) {
                }
            }
            ok = ok && sig >= 15;
            detail << d << " doses " << sig << "/20 (median lag " << median(lags) << ")" << (d < 3 ? "; " : "");
        }
        report(6, "Granger p < 0.05 at AIC lag in >= 15/20 runs per regime", {ok, detail.str()});
    }

    // 7. Statistical oracles
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::ostringstream detail;

        // Noiseless AR(2) plus an x term.
        Rng rng(7);
        std::vector<double> x(300), y(300);
        for (auto& v : x)
            v = rng.normal();
        y[0] = 0.3;
        y[1] = -0.2;
        for (std::size_t t = 2; t < y.size(); ++t)
            y[t] = 0.1 + 0.5 * y[t - 1] + 0.3 * y[t - 2] + 0.7 * x[t - 1] - 0.2 * x[t - 2];
        const auto fit = stats::fit_var(y, x, 2);
        const double expected[] = {0.1, 0.5, 0.3, 0.7, -0.2};
        double ols_err = 0.0;
        for (int k = 0; k < 5; ++k)
            ols_err = std::max(ols_err, std::abs(fit.unrestricted.coefficients[k] - expected[k]));
        ok = ok && ols_err <= 1e-8;
        detail << "OLS err " << ols_err;

        double f_err = 0.0;
        const double dfs1[] = {1, 2, 3, 5, 10};
        const double dfs2[] = {5, 30, 200, 1000, 25};
        const double fs[] = {0.05, 0.5, 1.0, 2.5, 8.0, 0.8, 3.5, 1.7, 0.2, 15.0};
        int points = 0;
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 10; ++b) {
                const double d1 = dfs1[a], d2 = dfs2[(a + b) % 5], f = fs[b];
                f_err = std::max(f_err, std::abs(stats::f_cdf(f, d1, d2) - oracle::f_cdf(f, d1, d2)));
                ++points;
            }
        ok = ok && f_err <= 1e-8 && points == 50;
        detail << "; F-CDF err " << f_err << " over " << points << " points";

        bool shift_ok = true;
        for (int d : {1, 7, 25}) {
            std::vector<double> base(400), lagged(400);
            for (auto& v : base)
                v = rng.normal();
            for (std::size_t t = 0; t < 400; ++t)
                lagged[t] = t >= static_cast<std::size_t>(d) ? base[t - d] : std::numeric_limits<double>::quiet_NaN();
            const auto ccf = stats::cross_correlation(base, lagged, 40);
            shift_ok = shift_ok && ccf.best_negative_lag == -d && std::abs(ccf.best_rho - 1.0) < 1e-12;
        }
        ok = ok && shift_ok;
        detail << "; CCF shift " << (shift_ok ? "exact" : "WRONG");

        int rejections = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            Rng r(1000 + trial);
            std::vector<double> a(200), b(200);
            for (std::size_t t = 0; t < 200; ++t) {
                a[t] = r.normal();
                b[t] = r.normal();
            }
            rejections += stats::granger_test(a, b, 2).significant() ? 1 : 0;
        }
        const double size = rejections / 1000.0;
        ok = ok && std::abs(size - 0.05) <= 0.02;
        const double secs = seconds_since(t0);
        ok = ok && secs < 30.0;
        detail << "; null size " << size << "; " << secs << " s";
        report(7, "statistical oracles", {ok, detail.str()});
    }

    // 8. Conservation and determinism
    {
        const auto t0 = std::chrono::steady_clock::now();
        ScenarioConfig c;
        c.days = 300;
        std::ostringstream a, b;
        write_timeseries_csv(a, run_scenario(c));
        write_timeseries_csv(b, run_scenario(c));
        const bool identical = a.str() == b.str();

        ScenarioConfig quiet;
        quiet.rates.beta = 0.0;
        quiet.travel_enabled = false;
        quiet.days = 300;
        const auto q = run_scenario(quiet);
        std::uint32_t max_infected = 0;
        for (const auto& r : q.rows)
            max_infected = std::max(max_infected, r.count(Compartment::Exposed) + r.count(Compartment::Quarantined));
        const bool no_spread = max_infected <= 4 && conserves(q, 10000);
        const double secs = seconds_since(t0);
        report(8, "conservation and determinism",
               {all_conserved && identical && no_spread && secs < 10.0,
                std::string("sum = N on every day of ") + std::to_string(4 * kReplicates) + " runs: " +
                    (all_conserved ? "yes" : "NO") + "; byte-identical CSV: " + (identical ? "yes" : "NO") +
                    "; beta=0 max infected " + std::to_string(max_infected) + fmt("; %.2f s", secs)});
    }

    // 9. Network
    {
        double mean_of_means = 0.0;
        for (std::uint64_t s = 1; s <= 5; ++s)
            mean_of_means += mean_degree(generate_ba(10000, 5.0, s)) / 5.0;
        const auto net = build_network(ScenarioConfig{});
        const double k = mean_degree(net);

        Rng rng(11);
        oracle::DiscretePowerLaw law(2.5, 2);
        std::vector<std::size_t> sample(10000);
        for (auto& v : sample)
            v = law(rng);
        const auto synth = fit_power_law_at(sample, 2);

        const auto deg = net.degrees();
        const auto fit = fit_power_law(deg);
        report(9, "BA mean degree 5 +/- 0.1, synthetic omega 2.5 +/- 0.1, network omega in [1.9, 2.2]",
               {std::abs(k - 5.0) <= 0.1 && std::abs(synth.omega - 2.5) <= 0.1 && fit.omega >= 1.9 &&
                    fit.omega <= 2.2,
                fmt("<k> = %.4f (5-seed mean %.4f); synthetic omega %.4f; ", k, mean_of_means, synth.omega) +
                    fmt("network omega %.4f (kmin %.0f, fitness %.3f)", fit.omega, double(fit.kmin), fit.fitness)});
    }

    // 10. Willingness compounding
    {
        TownState state(10000);
        Rng rng = make_stream(1, Stream::Willingness);
        assign_willingness(state, 0.9, rng);
        std::array<int, 3> counts{};
        for (const auto& a : state.agents) {
            bool chain = true;
            for (int d = 0; d < 3; ++d) {
                chain = chain && a.willing[d];
                counts[d] += chain ? 1 : 0;
            }
        }
        bool ok = true;
        std::ostringstream detail;
        const double p[] = {0.9, 0.81, 0.729};
        for (int d = 0; d < 3; ++d) {
            const double mu = 10000 * p[d], sigma = std::sqrt(10000 * p[d] * (1 - p[d]));
            ok = ok && std::abs(counts[d] - mu) <= 3 * sigma;
            detail << "dose " << d + 1 << ": " << counts[d] << " (expected " << mu << " +/- " << 3 * sigma << ")"
                   << (d < 2 ? "; " : "");
        }
        report(10, "uptake compounding 9000/8100/7290 within 3 sigma", {ok, detail.str()});
    }

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
