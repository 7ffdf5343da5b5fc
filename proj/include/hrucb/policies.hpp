#pragma once
// Decision policies behind one interface: the heteroscedastic UCB policy,
// the true-parameter oracle, and the two mean-based baselines. All policies
// fix one action per user and refit estimates only at user departure, so the
// chosen action is constant across the rounds of an episode.

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "hrucb/env.hpp"
#include "hrucb/hetreg.hpp"
#include "hrucb/lifetime.hpp"

namespace hrucb {

enum class PolicyVariant { hr_ucb, oracle, lin_ucb, sigmamax_ucb };

inline std::optional<PolicyVariant> policy_from_name(std::string_view name) {
    if (name == "hr-ucb") return PolicyVariant::hr_ucb;
    if (name == "oracle") return PolicyVariant::oracle;
    if (name == "lin-ucb") return PolicyVariant::lin_ucb;
    if (name == "sigmamax-ucb") return PolicyVariant::sigmamax_ucb;
    return std::nullopt;
}

inline std::string policy_name(PolicyVariant v) {
    switch (v) {
        case PolicyVariant::hr_ucb: return "hr-ucb";
        case PolicyVariant::oracle: return "oracle";
        case PolicyVariant::lin_ucb: return "lin-ucb";
        case PolicyVariant::sigmamax_ucb: return "sigmamax-ucb";
    }
    return "unknown";
}

struct PolicyConfig {
    ConfidenceConfig conf;
    double gamma_rate = 5.0;   // K in the sample budget Gamma(t) = K*t
    double linucb_alpha = 1.0; // exploration scale of the mean baseline; 0 = greedy

    void validate() const {
        conf.validate();
        require(gamma_rate >= 1.0, "policy: gamma_rate K must be >= 1");
        require(linucb_alpha >= 0.0, "policy: linucb_alpha must be nonnegative");
    }
};

class PolicyState {
  public:
    PolicyState(PolicyVariant variant, const PolicyConfig& cfg, const LinkFunction& link,
                const VarianceBounds& bounds)
        : variant_(variant),
          cfg_(cfg),
          link_(link),
          bounds_(bounds),
          reg_(cfg.conf.dim, cfg.conf.lambda) {
        cfg.validate();
    }

    // The oracle variant scores actions with the true parameters.
    void set_truth(const Eigen::VectorXd& theta_star, const Eigen::VectorXd& phi_star) {
        require(theta_star.size() == reg_.dim() && phi_star.size() == reg_.dim(),
                "policy: truth dimension mismatch");
        theta_truth_ = theta_star;
        phi_truth_ = phi_star;
    }

    // Plug-in expected lifetime plus the exploration width scaled by the
    // inverse-Gram norm of the context.
    double hr_ucb_index(const Eigen::VectorXd& x, double beta) const {
        const double plug_in = expected_lifetime(reg_.theta_hat().dot(x), reg_.phi_hat().dot(x),
                                                 beta, link_, bounds_);
        return plug_in + xi(reg_.n(), cfg_.conf) * reg_.inv_gram_norm(x);
    }

    double index(const Eigen::VectorXd& x, double beta) const {
        switch (variant_) {
            case PolicyVariant::hr_ucb:
                return hr_ucb_index(x, beta);
            case PolicyVariant::oracle:
                require(theta_truth_.size() == reg_.dim(), "policy: oracle needs true parameters");
                return expected_lifetime(theta_truth_.dot(x), phi_truth_.dot(x), beta, link_,
                                         bounds_);
            case PolicyVariant::lin_ucb:
                return reg_.theta_hat().dot(x) + cfg_.linucb_alpha * reg_.inv_gram_norm(x);
            case PolicyVariant::sigmamax_ucb: {
                // Fixed worst-case variance and no variance-uncertainty term
                // in the exploration width.
                const double plug_in = expected_lifetime_at_variance(
                    reg_.theta_hat().dot(x), cfg_.conf.sigma2_max, beta);
                const std::size_t n = std::max<std::size_t>(reg_.n(), 1);
                const double width = cfg_.conf.c3 * alpha1(n, cfg_.conf, cfg_.conf.delta);
                return plug_in + width * reg_.inv_gram_norm(x);
            }
        }
        ensure(false, "policy: unreachable variant");
        return 0.0;
    }

    // Argmax of the variant's index over the user's contexts, ties to the
    // lowest action index.
    int choose_action(const UserInstance& user) const {
        require(user.contexts.rows() >= 1, "policy: empty context set");
        require(user.contexts.cols() == reg_.dim(), "policy: context dimension mismatch");
        int best = 0;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < user.contexts.rows(); ++a) {
            const double value = index(user.contexts.row(a).transpose(), user.beta);
            if (value > best_value) {
                best = a;
                best_value = value;
            }
        }
        return best;
    }

    // Store the round's observation while the sample budget Gamma(t) = K*t
    // of the in-progress user allows; estimates are not refit here.
    void observe(const Eigen::VectorXd& x, double r, long t) {
        require(t >= 1, "policy: user index must be >= 1");
        const auto budget = static_cast<std::size_t>(std::floor(cfg_.gamma_rate * t));
        if (reg_.n() < budget) reg_.add_sample(x, r);
    }

    // Lazy update at user departure: one refit per user.
    void end_user(long t) {
        require(t >= 1, "policy: user index must be >= 1");
        if (variant_ != PolicyVariant::oracle) reg_.fit(link_);
        user_index_ = t;
    }

    PolicyVariant variant() const { return variant_; }
    const PolicyConfig& config() const { return cfg_; }
    const GlseState& regression() const { return reg_; }
    long user_index() const { return user_index_; }

  private:
    PolicyVariant variant_;
    PolicyConfig cfg_;
    LinkFunction link_;
    VarianceBounds bounds_;
    GlseState reg_;
    long user_index_ = 0;
    Eigen::VectorXd theta_truth_;
    Eigen::VectorXd phi_truth_;
};

}  // namespace hrucb
