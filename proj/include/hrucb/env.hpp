#pragma once
// Simulated world: users arrive one at a time with per-action contexts drawn
// uniformly from the unit ball and a satisfaction level drawn uniformly from
// a configured interval. Outcomes are Gaussian with context-dependent
// variance; a user reneges at the first outcome below their level.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hrucb/lifetime.hpp"
#include "hrucb/rng.hpp"

namespace hrucb {

struct EnvironmentParams {
    int dim;
    Eigen::VectorXd theta_star;
    Eigen::VectorXd phi_star;
    LinkFunction link;
    VarianceBounds bounds;
    double big_l;
    int num_actions;
    double beta_low;
    double beta_high;
    double big_b;
    long max_rounds_cap = 1'000'000;

    void validate() const {
        require(dim >= 1, "env: dim must be >= 1");
        require(theta_star.size() == dim && phi_star.size() == dim, "env: parameter dimension mismatch");
        require(theta_star.norm() <= 1.0 + 1e-9, "env: ||theta*|| must be <= 1");
        require(phi_star.norm() <= big_l + 1e-9, "env: ||phi*|| must be <= L");
        require(num_actions >= 1, "env: need at least one action");
        require(beta_low <= beta_high, "env: beta_low must be <= beta_high");
        require(beta_low >= -big_b, "env: beta_low must be >= -B");
        require(big_b > 0.0, "env: B must be positive");
        require(max_rounds_cap >= 1, "env: max_rounds_cap must be >= 1");
        check_variance_range();
    }

  private:
    // The score extremes +-||phi*|| bound the attainable variance; a sampled
    // probe verifies the same on random unit-ball contexts.
    void check_variance_range() const {
        const double s = phi_star.norm();
        auto inside = [&](double v) {
            return v >= bounds.sigma2_min - 1e-12 && v <= bounds.sigma2_max + 1e-12;
        };
        require(inside(link.value(-s)) && inside(link.value(s)),
                "env: f(phi*'x) exits [sigma2_min, sigma2_max] on the unit ball");
        RandomStream probe(0x5eedu);
        for (int i = 0; i < 256; ++i) {
            Eigen::VectorXd g(dim);
            for (int j = 0; j < dim; ++j) g[j] = probe.normal();
            if (g.norm() == 0.0) continue;
            const Eigen::VectorXd x = g / g.norm() * std::pow(probe.uniform01(), 1.0 / dim);
            require(inside(link.value(phi_star.dot(x))),
                    "env: f(phi*'x) exits [sigma2_min, sigma2_max] on the unit ball");
        }
    }
};

// One arriving user: a contexts matrix (one row per action) and a level.
struct UserInstance {
    Eigen::MatrixXd contexts;
    double beta;
};

struct EpisodeResult {
    std::vector<int> action_sequence;
    std::vector<double> outcomes;
    long lifetime = 0;
    bool truncated = false;
};

// Draws one user with a fixed schedule: per action d normals plus one
// uniform (direction and radius of the unit-ball point), then one uniform
// for the level. The draw count never depends on realized values.
inline UserInstance sample_user(RandomStream& rng, const EnvironmentParams& params) {
    UserInstance user;
    user.contexts.resize(params.num_actions, params.dim);
    for (int a = 0; a < params.num_actions; ++a) {
        Eigen::VectorXd g(params.dim);
        for (int j = 0; j < params.dim; ++j) g[j] = rng.normal();
        const double radius = std::pow(rng.uniform01(), 1.0 / params.dim);
        const double norm = g.norm();
        if (norm > 0.0) {
            user.contexts.row(a) = (g / norm * radius).transpose();
        } else {
            user.contexts.row(a).setZero();
        }
    }
    user.beta = rng.uniform(params.beta_low, params.beta_high);
    return user;
}

// One outcome draw at context x: theta*'x + z * sqrt(f(phi*'x)). The true
// variance is used as-is; valid parameters keep it inside the bounds.
inline double sample_outcome(RandomStream& rng, const EnvironmentParams& params,
                             const Eigen::VectorXd& x) {
    require(x.size() == params.dim, "env: context dimension mismatch");
    require(x.norm() <= 1.0 + 1e-9, "env: context norm must be <= 1");
    const double variance = params.link.value(params.phi_star.dot(x));
    ensure(variance >= 0.0, "env: negative true variance, parameters are misconfigured");
    return params.theta_star.dot(x) + rng.normal() * std::sqrt(variance);
}

// Plays rounds until the first outcome below the user's level or the round
// cap. The chooser is queried every round with the 1-based round index.
inline EpisodeResult run_user_episode(RandomStream& rng, const EnvironmentParams& params,
                                      const UserInstance& user,
                                      const std::function<int(long)>& choose) {
    EpisodeResult ep;
    for (long i = 1; i <= params.max_rounds_cap; ++i) {
        const int a = choose(i);
        require(a >= 0 && a < params.num_actions, "env: chooser returned an invalid action index");
        const double r = sample_outcome(rng, params, user.contexts.row(a).transpose());
        ep.action_sequence.push_back(a);
        ep.outcomes.push_back(r);
        if (r < user.beta) {
            ep.lifetime = i;
            return ep;
        }
    }
    ep.lifetime = params.max_rounds_cap;
    ep.truncated = true;
    return ep;
}

// Best fixed action under the true parameters and its expected lifetime.
// Ties resolve to the lowest action index.
inline std::pair<int, double> oracle_best(const EnvironmentParams& params,
                                          const UserInstance& user) {
    int best = 0;
    double best_value = -1.0;
    for (int a = 0; a < params.num_actions; ++a) {
        const Eigen::VectorXd x = user.contexts.row(a).transpose();
        const double value = expected_lifetime(params.theta_star.dot(x), params.phi_star.dot(x),
                                               user.beta, params.link, params.bounds);
        if (value > best_value) {
            best = a;
            best_value = value;
        }
    }
    return {best, best_value};
}

}  // namespace hrucb
