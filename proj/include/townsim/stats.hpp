#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace townsim::stats {

/// Lagged Pearson correlation table between two series.
///
/// rho(lag) correlates x[t + lag] with y[t]; a negative lag therefore means x
/// leads y. NaN entries are excluded pairwise, and a lag whose windowed
/// series has zero variance reports NaN.
struct CcfResult {
    std::vector<int> lags;
    std::vector<double> rho;
    int best_negative_lag = 0;
    double best_rho = 0.0;  // NaN when no negative lag is defined

    [[nodiscard]] double at(int lag) const;
};

[[nodiscard]] double pearson_at_lag(std::span<const double> x, std::span<const double> y, int lag);

/// Lags are evaluated concurrently with OpenMP.
[[nodiscard]] CcfResult cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag);

/// Sequential reference for cross_correlation.
[[nodiscard]] CcfResult cross_correlation_serial(std::span<const double> x, std::span<const double> y, int max_lag);

/// Least-squares solution of design * beta = response.
struct OlsFit {
    std::vector<double> coefficients;
    double rss = 0.0;
};

/// design is row-major with `cols` columns. Solved by column-pivoting
/// Householder QR; throws SingularDesign when the design is rank-deficient.
OlsFit ols(std::span<const double> design, std::size_t cols, std::span<const double> response);

/// Nested fits for the Granger comparison at one lag order p.
///   restricted:   y_t = c + sum_j a_j y_{t-j}
///   unrestricted: y_t = c + sum_j a_j y_{t-j} + sum_j b_j x_{t-j}
/// Coefficients are ordered [c, a_1..a_p, (b_1..b_p)].
struct VarFit {
    int lag = 0;
    std::size_t observations = 0;
    OlsFit restricted;
    OlsFit unrestricted;
};

/// Uses every t >= p whose lagged values are all finite.
VarFit fit_var(std::span<const double> y, std::span<const double> x, int p);

/// Same, restricted to rows t >= first_row so several orders share a sample.
VarFit fit_var(std::span<const double> y, std::span<const double> x, int p, std::size_t first_row);

struct LagSelection {
    int lag = 0;
    std::vector<double> aic;  // aic[p - 1] for p = 1..max_lag
    std::size_t observations = 0;
};

/// AIC(p) = n ln(RSS_u / n) + 2 (2p + 1) over a common sample of n rows.
LagSelection select_lag_aic(std::span<const double> y, std::span<const double> x, int max_lag);

struct GrangerResult {
    int lag = 0;
    std::vector<double> aic_by_lag;
    double f_statistic = 0.0;
    double p_value = 1.0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    std::size_t observations = 0;
    int df_num = 0;
    int df_den = 0;

    [[nodiscard]] bool significant(double alpha = 0.05) const { return p_value < alpha; }
};

/// F-test that lags 1..p of x add nothing to the autoregression of y.
GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int p);

/// AIC lag choice followed by the F-test at that lag.
GrangerResult granger_with_aic(std::span<const double> y, std::span<const double> x, int max_lag);

/// F(d1, d2) distribution function and its complement, via the regularized
/// incomplete beta function.
[[nodiscard]] double f_cdf(double f, double d1, double d2);
[[nodiscard]] double f_sf(double f, double d1, double d2);

}  // namespace townsim::stats
