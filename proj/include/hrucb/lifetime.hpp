#pragma once
// Reneging-model primitives: standard normal CDF/quantile, the linear link
// that maps a variance score to an outcome variance, legal variance bounds,
// the per-round reneging probability, and the expected-lifetime function.
//
// A user with satisfaction level beta reneges on the first round whose
// outcome r ~ N(u, var) falls below beta, so the per-round failure
// probability is Phi((beta - u) / sqrt(var)) and the lifetime is geometric
// with that parameter.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hrucb {

// Precondition failure (caller error).
inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Numeric postcondition failure (should not happen on valid inputs).
inline void ensure(bool cond, const char* msg) {
    if (!cond) throw std::runtime_error(msg);
}

// Phi(z), absolute error well under 1e-12 (erfc is accurate in both tails,
// no cancellation for z < 0).
inline double std_normal_cdf(double z) {
    require(std::isfinite(z), "std_normal_cdf: non-finite input");
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline double std_normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

// Inverse of std_normal_cdf. Rational initial guess (Acklam) polished with
// Halley steps against the erfc-based CDF. Arguments above 1/2 reflect to
// the lower tail, where Phi has full relative precision, so both tails are
// accurate; past |z| > 35 the initial guess is returned as-is.
inline double std_normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "std_normal_quantile: p must be in (0,1)");
    if (p > 0.5) return -std_normal_quantile(1.0 - p);  // exact subtraction here

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2 && std::abs(x) < 35.0; ++i) {
        const double e = std_normal_cdf(x) - p;
        const double u = e / std_normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

// Known linear link f(z) = slope * z + offset with positive slope, required
// to be nonnegative on the score range [-L, L] it will be evaluated on.
class LinkFunction {
  public:
    LinkFunction(double slope, double offset, double big_l) : slope_(slope), offset_(offset) {
        require(std::isfinite(slope) && slope > 0.0, "link slope must be finite and positive");
        require(std::isfinite(offset), "link offset must be finite");
        require(std::isfinite(big_l) && big_l >= 0.0, "link score bound L must be nonnegative");
        require(value(-big_l) >= 0.0, "link must be nonnegative on [-L, L]");
    }

    double value(double z) const { return slope_ * z + offset_; }
    double inverse(double y) const { return (y - offset_) / slope_; }
    double slope() const { return slope_; }
    double offset() const { return offset_; }

    // offset = slope * L, so slope 1 gives f(z) = z + L.
    static LinkFunction standard(double slope, double big_l) {
        return LinkFunction(slope, slope * big_l, big_l);
    }

  private:
    double slope_;
    double offset_;
};

// Legal outcome-variance range [sigma2_min, sigma2_max]. Estimated variance
// scores are clamped into it before use; true parameters must lie inside it.
struct VarianceBounds {
    double sigma2_min;
    double sigma2_max;

    VarianceBounds(double lo, double hi) : sigma2_min(lo), sigma2_max(hi) {
        require(std::isfinite(lo) && lo > 0.0, "sigma2_min must be finite and positive");
        require(std::isfinite(hi) && hi >= lo, "sigma2_max must be finite and >= sigma2_min");
    }

    double clamp(double v) const { return std::clamp(v, sigma2_min, sigma2_max); }

    // Range of f over scores in [-L, L]; a floor keeps sigma2_min positive
    // for links that touch zero at -L (as the default f(z) = z + L does).
    static VarianceBounds from_link(const LinkFunction& link, double big_l, double floor = 0.05) {
        require(floor > 0.0, "variance floor must be positive");
        return VarianceBounds(std::max(link.value(-big_l), floor), link.value(big_l));
    }
};

// Failure probability at known variance. The mathematical value is strictly
// inside (0,1); double rounding can reach the endpoints, so the result is
// pinned to the nearest representable interior values, which also keeps the
// reciprocal lifetime finite.
inline double reneging_probability_at_variance(double u, double variance, double beta) {
    require(std::isfinite(u) && std::isfinite(beta), "reneging probability: non-finite input");
    require(variance > 0.0, "reneging probability: variance must be positive");
    const double p = std_normal_cdf((beta - u) / std::sqrt(variance));
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::min(std::max(p, lo), hi);
}

// Failure probability at a pre-link variance score w; f(w) is clamped into
// the legal range to guard estimated parameters.
inline double reneging_probability(double u, double w, double beta, const LinkFunction& link,
                                   const VarianceBounds& bounds) {
    require(std::isfinite(w), "reneging probability: non-finite variance score");
    return reneging_probability_at_variance(u, bounds.clamp(link.value(w)), beta);
}

inline double expected_lifetime_at_variance(double u, double variance, double beta) {
    const double h = 1.0 / reneging_probability_at_variance(u, variance, beta);
    ensure(std::isfinite(h) && h >= 1.0, "expected lifetime must be finite and >= 1");
    return h;
}

// Expected lifetime h(u, w) = 1 / P(renege): the mean of the geometric
// stopping time under a fixed action with mean u and variance score w.
inline double expected_lifetime(double u, double w, double beta, const LinkFunction& link,
                                const VarianceBounds& bounds) {
    const double h = 1.0 / reneging_probability(u, w, beta, link, bounds);
    ensure(std::isfinite(h) && h >= 1.0, "expected lifetime must be finite and >= 1");
    return h;
}

}  // namespace hrucb
