// Independent reference computations used only by the test suites.
#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "townsim/rng.hpp"

namespace oracle {

// Regularized incomplete beta I_x(a, b) by tanh-sinh quadrature of the beta
// density in long double. Integrates whichever tail is shorter.
inline long double incomplete_beta(long double a, long double b, long double x) {
    if (x <= 0)
        return 0;
    if (x >= 1)
        return 1;
    const long double log_norm = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    boost::math::quadrature::tanh_sinh<long double> integrator;
    auto integrate_lower = [&](long double aa, long double bb, long double upper) {
        auto density = [=](long double t) {
            if (t <= 0 || t >= 1)
                return 0.0L;
            return std::exp((aa - 1) * std::log(t) + (bb - 1) * std::log1p(-t) - log_norm);
        };
        return integrator.integrate(density, 0.0L, upper);
    };
    if (x <= a / (a + b))
        return integrate_lower(a, b, x);
    return 1 - integrate_lower(b, a, 1 - x);
}

inline double f_cdf(double f, double d1, double d2) {
    if (f <= 0)
        return 0.0;
    const long double x = (long double)d1 * f / ((long double)d1 * f + d2);
    return static_cast<double>(incomplete_beta(d1 / 2.0L, d2 / 2.0L, x));
}

// Least squares through the normal equations X'X b = X'y, Gauss-Jordan with
// partial pivoting in long double. rows x cols, row-major.
inline std::vector<double> normal_equations(const std::vector<double>& X, std::size_t cols,
                                            const std::vector<double>& y) {
    const std::size_t rows = y.size();
    std::vector<long double> A(cols * (cols + 1), 0.0L);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < cols; ++i) {
            for (std::size_t j = 0; j < cols; ++j)
                A[i * (cols + 1) + j] += (long double)X[r * cols + i] * X[r * cols + j];
            A[i * (cols + 1) + cols] += (long double)X[r * cols + i] * y[r];
        }
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < cols; ++r)
            if (std::fabs(A[r * (cols + 1) + c]) > std::fabs(A[piv * (cols + 1) + c]))
                piv = r;
        if (A[piv * (cols + 1) + c] == 0)
            throw std::runtime_error("singular normal equations");
        for (std::size_t k = 0; k <= cols; ++k)
            std::swap(A[c * (cols + 1) + k], A[piv * (cols + 1) + k]);
        for (std::size_t r = 0; r < cols; ++r) {
            if (r == c)
                continue;
            const long double f = A[r * (cols + 1) + c] / A[c * (cols + 1) + c];
            for (std::size_t k = c; k <= cols; ++k)
                A[r * (cols + 1) + k] -= f * A[c * (cols + 1) + k];
        }
    }
    std::vector<double> beta(cols);
    for (std::size_t c = 0; c < cols; ++c)
        beta[c] = static_cast<double>(A[c * (cols + 1) + cols] / A[c * (cols + 1) + c]);
    return beta;
}

// Exact discrete power law on [kmin, kmax_table] by inverse CDF; the mass
// beyond the table is below 1e-9 for omega >= 2.5.
class DiscretePowerLaw {
public:
    DiscretePowerLaw(double omega, std::size_t kmin, std::size_t kmax_table = 1'000'000) : kmin_(kmin) {
        cdf_.reserve(kmax_table - kmin + 1);
        long double total = 0;
        for (std::size_t k = kmin; k <= kmax_table; ++k) {
            total += std::pow((long double)k, -(long double)omega);
            cdf_.push_back(total);
        }
        for (auto& c : cdf_)
            c /= total;
    }

    std::size_t operator()(townsim::Rng& rng) const {
        const long double u = rng.uniform();
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return kmin_ + lo;
    }

private:
    std::size_t kmin_;
    std::vector<long double> cdf_;
};

// Pearson correlation straight from the definition, no NaN handling.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
