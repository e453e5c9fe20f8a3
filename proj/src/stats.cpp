#include "townsim/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "townsim/errors.hpp"

namespace townsim::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InvalidParameter("series lengths differ");
}

CcfResult finish_ccf(std::vector<int> lags, std::vector<double> rho) {
    CcfResult out;
    out.best_rho = kNaN;
    for (std::size_t k = 0; k < lags.size(); ++k) {
        if (lags[k] >= 0 || std::isnan(rho[k]))
            continue;
        if (std::isnan(out.best_rho) || rho[k] > out.best_rho) {
            out.best_rho = rho[k];
            out.best_negative_lag = lags[k];
        }
    }
    out.lags = std::move(lags);
    out.rho = std::move(rho);
    return out;
}

void check_ccf_args(std::span<const double> x, std::span<const double> y, int max_lag) {
    require_same_length(x, y);
    if (max_lag < 0)
        throw InvalidParameter("max_lag must be non-negative");
    if (x.size() <= 2 * static_cast<std::size_t>(max_lag) + 2)
        throw InvalidParameter("series too short for max_lag " + std::to_string(max_lag));
}

}  // namespace

double CcfResult::at(int lag) const {
    for (std::size_t k = 0; k < lags.size(); ++k)
        if (lags[k] == lag)
            return rho[k];
    throw InvalidParameter("lag " + std::to_string(lag) + " outside the table");
}

double pearson_at_lag(std::span<const double> x, std::span<const double> y, int lag) {
    require_same_length(x, y);
    const auto n = static_cast<long>(x.size());
    // Two passes: means first, then centred moments.
    double sx = 0.0, sy = 0.0;
    long count = 0;
    for (long t = 0; t < n; ++t) {
        const long s = t + lag;
        if (s < 0 || s >= n || std::isnan(x[s]) || std::isnan(y[t]))
            continue;
        sx += x[s];
        sy += y[t];
        ++count;
    }
    if (count < 2)
        return kNaN;
    const double mx = sx / count, my = sy / count;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (long t = 0; t < n; ++t) {
        const long s = t + lag;
        if (s < 0 || s >= n || std::isnan(x[s]) || std::isnan(y[t]))
            continue;
        const double dx = x[s] - mx, dy = y[t] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        return kNaN;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CcfResult cross_correlation_serial(std::span<const double> x, std::span<const double> y, int max_lag) {
    check_ccf_args(x, y, max_lag);
    std::vector<int> lags;
    std::vector<double> rho;
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        lags.push_back(lag);
        rho.push_back(pearson_at_lag(x, y, lag));
    }
    return finish_ccf(std::move(lags), std::move(rho));
}

CcfResult cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag) {
    check_ccf_args(x, y, max_lag);
    const int width = 2 * max_lag + 1;
    std::vector<int> lags(static_cast<std::size_t>(width));
    std::vector<double> rho(static_cast<std::size_t>(width));
#pragma omp parallel for schedule(static)
    for (int k = 0; k < width; ++k) {
        lags[static_cast<std::size_t>(k)] = k - max_lag;
        rho[static_cast<std::size_t>(k)] = pearson_at_lag(x, y, k - max_lag);
    }
    return finish_ccf(std::move(lags), std::move(rho));
}

OlsFit ols(std::span<const double> design, std::size_t cols, std::span<const double> response) {
    if (cols == 0 || design.size() != cols * response.size())
        throw InvalidParameter("design shape does not match response");
    const auto rows = static_cast<Eigen::Index>(response.size());
    if (rows < static_cast<Eigen::Index>(cols))
        throw SingularDesign("fewer observations than regressors");
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        design.data(), rows, static_cast<Eigen::Index>(cols));
    Eigen::Map<const Eigen::VectorXd> yv(response.data(), rows);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(cols))
        throw SingularDesign("regressor matrix is rank-deficient");
    const Eigen::VectorXd beta = qr.solve(yv);

    OlsFit fit;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.rss = (yv - X * beta).squaredNorm();
    return fit;
}

VarFit fit_var(std::span<const double> y, std::span<const double> x, int p, std::size_t first_row) {
    require_same_length(y, x);
    if (p < 1)
        throw InvalidParameter("lag order must be at least 1");
    const auto lag = static_cast<std::size_t>(p);
    first_row = std::max(first_row, lag);

    const std::size_t cols_r = 1 + lag;
    const std::size_t cols_u = 1 + 2 * lag;
    std::vector<double> design_r, design_u, response;
    for (std::size_t t = first_row; t < y.size(); ++t) {
        bool ok = std::isfinite(y[t]);
        for (std::size_t j = 1; ok && j <= lag; ++j)
            ok = std::isfinite(y[t - j]) && std::isfinite(x[t - j]);
        if (!ok)
            continue;
        response.push_back(y[t]);
        design_r.push_back(1.0);
        design_u.push_back(1.0);
        for (std::size_t j = 1; j <= lag; ++j) {
            design_r.push_back(y[t - j]);
            design_u.push_back(y[t - j]);
        }
        for (std::size_t j = 1; j <= lag; ++j)
            design_u.push_back(x[t - j]);
    }
    if (response.size() < 2 * lag + 3)
        throw InsufficientData("need at least 2p + 3 usable observations for lag " + std::to_string(p));

    VarFit fit;
    fit.lag = p;
    fit.observations = response.size();
    fit.restricted = ols(design_r, cols_r, response);
    fit.unrestricted = ols(design_u, cols_u, response);
    return fit;
}

VarFit fit_var(std::span<const double> y, std::span<const double> x, int p) {
    return fit_var(y, x, p, 0);
}

LagSelection select_lag_aic(std::span<const double> y, std::span<const double> x, int max_lag) {
    if (max_lag < 1)
        throw InvalidParameter("max_lag must be at least 1");
    LagSelection sel;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= max_lag; ++p) {
        const VarFit fit = fit_var(y, x, p, static_cast<std::size_t>(max_lag));
        const auto n = static_cast<double>(fit.observations);
        const double aic = n * std::log(fit.unrestricted.rss / n) + 2.0 * (2.0 * p + 1.0);
        sel.aic.push_back(aic);
        sel.observations = fit.observations;
        if (aic < best) {
            best = aic;
            sel.lag = p;
        }
    }
    return sel;
}

GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int p) {
    const VarFit fit = fit_var(y, x, p);
    GrangerResult g;
    g.lag = p;
    g.observations = fit.observations;
    g.rss_restricted = fit.restricted.rss;
    g.rss_unrestricted = fit.unrestricted.rss;
    g.df_num = p;
    g.df_den = static_cast<int>(fit.observations) - 2 * p - 1;
    if (g.df_den < 1)
        throw InvalidDof("residual degrees of freedom below 1");

    const double gain = std::max(0.0, g.rss_restricted - g.rss_unrestricted);
    if (g.rss_unrestricted <= 0.0) {
        g.f_statistic = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        g.p_value = gain > 0.0 ? 0.0 : 1.0;
        return g;
    }
    g.f_statistic = (gain / g.df_num) / (g.rss_unrestricted / g.df_den);
    g.p_value = f_sf(g.f_statistic, g.df_num, g.df_den);
    return g;
}

GrangerResult granger_with_aic(std::span<const double> y, std::span<const double> x, int max_lag) {
    const LagSelection sel = select_lag_aic(y, x, max_lag);
    GrangerResult g = granger_test(y, x, sel.lag);
    g.aic_by_lag = sel.aic;
    return g;
}

double f_cdf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw InvalidParameter("F distribution needs positive degrees of freedom");
    if (!(f > 0.0))
        return 0.0;
    if (std::isinf(f))
        return 1.0;
    return boost::math::ibeta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

double f_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw InvalidParameter("F distribution needs positive degrees of freedom");
    if (!(f > 0.0))
        return 1.0;
    if (std::isinf(f))
        return 0.0;
    return boost::math::ibetac(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

}  // namespace townsim::stats
