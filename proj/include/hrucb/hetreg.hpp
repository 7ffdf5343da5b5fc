#pragma once
// Generalized least squares for the heteroscedastic linear model, plus the
// finite-time confidence radii built on it.
//
// The estimation is two-stage ridge: theta_hat solves the regularized normal
// equations for the outcome means, then phi_hat regresses the link-inverted
// squared residuals on the same contexts. Both solves share the Gram matrix
// V = X'X + lambda*I.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "hrucb/lifetime.hpp"

namespace hrucb {

// Constants that instantiate the confidence radii. c1/c2 are the
// sub-exponential tail constants, c3/c4 scale the exploration width.
struct ConfidenceConfig {
    double delta = 0.1;
    double sigma2_max = 4.0;
    int dim = 4;
    double lambda = 1.0;
    double m_f = 1.0;
    double big_l = 2.0;
    double c1 = 2.0;
    double c2 = 0.5;
    double c3 = 1.0;
    double c4 = 1.0;

    void validate() const {
        require(delta > 0.0 && delta < 1.0, "confidence: delta must be in (0,1)");
        require(sigma2_max > 0.0, "confidence: sigma2_max must be positive");
        require(dim >= 1, "confidence: dim must be >= 1");
        require(lambda > 0.0, "confidence: lambda must be positive");
        require(m_f > 0.0, "confidence: m_f must be positive");
        require(big_l >= 0.0, "confidence: L must be nonnegative");
        require(c1 > 0.0 && c2 > 0.0, "confidence: c1, c2 must be positive");
        require(c3 >= 0.0 && c4 >= 0.0, "confidence: c3, c4 must be nonnegative");
    }
};

// Running regression state: Gram matrix, outcome accumulator, and the stored
// sample list the residual pass re-reads at every fit.
class GlseState {
  public:
    struct Sample {
        Eigen::VectorXd x;
        double r;
    };

    GlseState(int dim, double lambda)
        : dim_(dim),
          lambda_(lambda),
          gram_(Eigen::MatrixXd::Identity(dim, dim) * lambda),
          xr_acc_(Eigen::VectorXd::Zero(dim)),
          theta_hat_(Eigen::VectorXd::Zero(dim)),
          phi_hat_(Eigen::VectorXd::Zero(dim)) {
        require(dim >= 1, "glse: dim must be >= 1");
        require(lambda > 0.0, "glse: lambda must be positive");
    }

    void add_sample(const Eigen::VectorXd& x, double r) {
        require(x.size() == dim_, "glse: context dimension mismatch");
        require(std::isfinite(r), "glse: outcome must be finite");
        require(x.norm() <= 1.0 + 1e-9, "glse: context norm must be <= 1");
        gram_.selfadjointView<Eigen::Lower>().rankUpdate(x);
        gram_ = gram_.selfadjointView<Eigen::Lower>();
        xr_acc_ += r * x;
        samples_.push_back({x, r});
    }

    // Refit (theta_hat, phi_hat) from the stored samples. With no data the
    // ridge solution is the zero vector for both.
    void fit(const LinkFunction& link) {
        if (samples_.empty()) {
            theta_hat_.setZero();
            phi_hat_.setZero();
            fitted_at_ = 0;
            return;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(gram_);
        ensure(llt.info() == Eigen::Success, "glse: Gram factorization failed");

        theta_hat_ = llt.solve(xr_acc_);
        check_solve(theta_hat_, xr_acc_);

        Eigen::VectorXd xy = Eigen::VectorXd::Zero(dim_);
        for (const Sample& s : samples_) {
            const double resid = s.r - theta_hat_.dot(s.x);
            xy += link.inverse(resid * resid) * s.x;
        }
        phi_hat_ = llt.solve(xy);
        check_solve(phi_hat_, xy);
        fitted_at_ = samples_.size();
    }

    // sqrt(x' V^-1 x), the exploration geometry norm.
    double inv_gram_norm(const Eigen::VectorXd& x) const {
        require(x.size() == dim_, "glse: context dimension mismatch");
        Eigen::LLT<Eigen::MatrixXd> llt(gram_);
        ensure(llt.info() == Eigen::Success, "glse: Gram factorization failed");
        const double q = x.dot(llt.solve(x));
        return std::sqrt(std::max(q, 0.0));
    }

    int dim() const { return dim_; }
    double lambda() const { return lambda_; }
    std::size_t n() const { return samples_.size(); }
    const Eigen::MatrixXd& gram() const { return gram_; }
    const Eigen::VectorXd& xr_acc() const { return xr_acc_; }
    const std::vector<Sample>& samples() const { return samples_; }
    const Eigen::VectorXd& theta_hat() const { return theta_hat_; }
    const Eigen::VectorXd& phi_hat() const { return phi_hat_; }
    std::size_t fitted_at() const { return fitted_at_; }

  private:
    void check_solve(const Eigen::VectorXd& sol, const Eigen::VectorXd& rhs) const {
        const double resid = (gram_ * sol - rhs).norm();
        ensure(resid <= 1e-10 * std::max(1.0, rhs.norm()), "glse: solve residual too large");
    }

    int dim_;
    double lambda_;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd xr_acc_;
    std::vector<Sample> samples_;
    Eigen::VectorXd theta_hat_;
    Eigen::VectorXd phi_hat_;
    std::size_t fitted_at_ = 0;
};

// Confidence radius for theta_hat in the V-norm:
// sigma2_max * sqrt(d * ln((n + lambda) / (delta * lambda))) + sqrt(lambda).
inline double alpha1(std::size_t n, const ConfidenceConfig& cfg, double delta) {
    require(delta > 0.0 && delta < 1.0, "alpha1: delta must be in (0,1)");
    const double arg = (static_cast<double>(n) + cfg.lambda) / (delta * cfg.lambda);
    const double rad = cfg.dim * std::log(arg);
    ensure(rad > 0.0, "alpha1: log argument must exceed 1");
    return cfg.sigma2_max * std::sqrt(rad) + std::sqrt(cfg.lambda);
}

// sqrt(2 d sigma2_max^2 ((ln(c1/delta)/c2)^2 + 1)); delta = c1 makes the log
// term vanish.
inline double alpha2(const ConfidenceConfig& cfg, double delta) {
    require(delta > 0.0, "alpha2: delta must be positive");
    const double t = std::log(cfg.c1 / delta) / cfg.c2;
    return std::sqrt(2.0 * cfg.dim * cfg.sigma2_max * cfg.sigma2_max * (t * t + 1.0));
}

// sqrt(2 d sigma2_max ln(d/delta)); requires delta < d for a nonnegative
// radicand.
inline double alpha3(const ConfidenceConfig& cfg, double delta) {
    require(delta > 0.0, "alpha3: delta must be positive");
    require(delta < static_cast<double>(cfg.dim), "alpha3: delta must be below dim");
    return std::sqrt(2.0 * cfg.dim * cfg.sigma2_max * std::log(cfg.dim / delta));
}

// Confidence radius for phi_hat in the V-norm; splits delta three ways over
// its constituent radii.
inline double rho(std::size_t n, const ConfidenceConfig& cfg, double delta) {
    const double d3 = delta / 3.0;
    const double a1 = alpha1(n, cfg, d3);
    return (a1 * (a1 + 2.0 * alpha3(cfg, d3)) + alpha2(cfg, d3)) / cfg.m_f +
           cfg.big_l * cfg.big_l * std::sqrt(cfg.lambda);
}

// Exploration width at a regression sample count: c3 * alpha1(n, delta) +
// c4 * rho(n, delta/n^2). Policies consult it before any data exists, so an
// empty sample set is treated as a single sample.
inline double xi(std::size_t sample_count, const ConfidenceConfig& cfg) {
    const std::size_t n = std::max<std::size_t>(sample_count, 1);
    const double dn = static_cast<double>(n);
    return cfg.c3 * alpha1(n, cfg, cfg.delta) + cfg.c4 * rho(n, cfg, cfg.delta / (dn * dn));
}

// Numeric sup bounds of the expected-lifetime derivatives over a boxed
// domain, gridded by central differences. du_sup and dv_sup bound the first
// partials in the mean and the variance argument; smoothness bounds the
// Hessian spectral norm. They instantiate exploration constants that make
// the lifetime sandwich inequality hold on the whole domain:
// c3 = du_sup + smoothness, c4 = m_f * (dv_sup + smoothness * m_f * L).
struct LifetimeSlopeBounds {
    double du_sup = 0.0;
    double dv_sup = 0.0;
    double smoothness = 0.0;

    double c3() const { return du_sup + smoothness; }
    double c4(double m_f, double big_l) const { return m_f * (dv_sup + smoothness * m_f * big_l); }
};

inline LifetimeSlopeBounds estimate_lifetime_slopes(const VarianceBounds& bounds, double u_lo,
                                                    double u_hi, double beta_lo, double beta_hi,
                                                    int grid = 48) {
    require(u_lo < u_hi && beta_lo <= beta_hi, "slope estimate: bad domain");
    require(grid >= 8, "slope estimate: grid too coarse");
    LifetimeSlopeBounds out;
    const double v_lo = bounds.sigma2_min;
    const double v_hi = bounds.sigma2_max;
    const double hu = (u_hi - u_lo) / (16.0 * grid);
    const double hv = std::min((v_hi - v_lo) / (16.0 * grid), 0.25 * v_lo);
    auto h = [](double u, double v, double beta) {
        return expected_lifetime_at_variance(u, v, beta);
    };
    const int nb = std::max(grid / 4, 1);
    for (int bi = 0; bi <= nb; ++bi) {
        const double beta = beta_lo + (beta_hi - beta_lo) * bi / nb;
        for (int ui = 0; ui <= grid; ++ui) {
            const double u = u_lo + (u_hi - u_lo) * ui / grid;
            for (int vi = 0; vi <= grid; ++vi) {
                const double v = v_lo + (v_hi - v_lo) * vi / grid;
                const double hc = h(u, v, beta);
                const double hu_p = h(u + hu, v, beta), hu_m = h(u - hu, v, beta);
                const double hv_p = h(u, v + hv, beta), hv_m = h(u, v - hv, beta);
                const double du = (hu_p - hu_m) / (2.0 * hu);
                const double dv = (hv_p - hv_m) / (2.0 * hv);
                const double duu = (hu_p - 2.0 * hc + hu_m) / (hu * hu);
                const double dvv = (hv_p - 2.0 * hc + hv_m) / (hv * hv);
                const double duv = (h(u + hu, v + hv, beta) - h(u + hu, v - hv, beta) -
                                    h(u - hu, v + hv, beta) + h(u - hu, v - hv, beta)) /
                                   (4.0 * hu * hv);
                out.du_sup = std::max(out.du_sup, std::abs(du));
                out.dv_sup = std::max(out.dv_sup, std::abs(dv));
                // spectral norm of the symmetric 2x2 Hessian
                const double tr = duu + dvv;
                const double det = duu * dvv - duv * duv;
                const double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
                out.smoothness =
                    std::max({out.smoothness, std::abs(tr / 2.0 + disc), std::abs(tr / 2.0 - disc)});
            }
        }
    }
    return out;
}

}  // namespace hrucb
