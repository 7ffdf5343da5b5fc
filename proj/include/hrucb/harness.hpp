#pragma once
// Experiment orchestration: seeded multi-trial runs, analytic pseudo-regret
// accounting, aggregation across trials, and CSV/summary persistence.
//
// All policies compared within a trial face the identical user sequence: the
// user stream is derived from the trial seed alone, and each user consumes a
// fixed number of draws, so policy decisions cannot perturb user generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hrucb/env.hpp"
#include "hrucb/policies.hpp"
#include "hrucb/rng.hpp"

namespace hrucb {

struct ExperimentConfig {
    EnvironmentParams env;
    std::vector<std::string> policy_names;
    PolicyConfig policy_cfg;
    long num_users = 3000;
    int num_trials = 5;
    std::uint64_t master_seed = 1;
    std::string output_path;

    void validate() const {
        env.validate();
        policy_cfg.validate();
        require(num_users >= 1, "experiment: num_users must be >= 1");
        require(num_trials >= 1, "experiment: num_trials must be >= 1");
        require(!policy_names.empty(), "experiment: need at least one policy");
        for (const auto& name : policy_names)
            require(policy_from_name(name).has_value(), "experiment: unknown policy name");
    }
};

// Per-trial output: the cumulative pseudo-regret series for one policy. The
// user-stream hash witnesses that compared policies saw identical users.
struct RegretTrace {
    std::string policy;
    int trial = 0;
    std::vector<double> cum_regret;
    long truncation_count = 0;
    std::uint64_t user_stream_hash = 0;
};

inline std::uint64_t hash_mix_double(std::uint64_t h, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
}

inline std::uint64_t hash_user(std::uint64_t h, const UserInstance& user) {
    for (int a = 0; a < user.contexts.rows(); ++a)
        for (int j = 0; j < user.contexts.cols(); ++j)
            h = hash_mix_double(h, user.contexts(a, j));
    return hash_mix_double(h, user.beta);
}

struct PolicySummary {
    std::string policy;
    std::vector<double> mean;
    std::vector<double> stderr_;
    double final_regret_mean = 0.0;
    double final_regret_stderr = 0.0;
    double loglog_slope = 0.0;
    long truncation_count = 0;
};

struct ExperimentResults {
    std::vector<RegretTrace> traces;
    std::vector<PolicySummary> summaries;
};

// Least-squares slope of log(cum_regret) against log(user index) over the
// last half of the run. Nonpositive values are excluded; fewer than two
// usable points give slope 0 (the oracle's flat zero series lands here).
inline double loglog_slope(const std::vector<double>& cum) {
    const std::size_t t_max = cum.size();
    if (t_max < 4) return 0.0;
    const std::size_t t_lo = t_max / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t t = t_lo; t <= t_max; ++t) {
        if (cum[t - 1] <= 0.0) continue;
        const double lx = std::log(static_cast<double>(t));
        const double ly = std::log(cum[t - 1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    const double denom = m * sxx - sx * sx;
    return denom > 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
}

// One policy, one trial. Per-user pseudo-regret is evaluated analytically
// under the true parameters: expected lifetime of the oracle action minus
// that of the chosen action, never from realized lifetimes.
inline RegretTrace run_trial(const ExperimentConfig& cfg, const std::string& policy_name_str,
                             std::uint64_t trial_seed) {
    const auto variant = policy_from_name(policy_name_str);
    require(variant.has_value(), "run_trial: unknown policy name");

    RandomStream user_rng(derive_seed(trial_seed, kUserStreamTag));
    RandomStream outcome_rng(derive_seed(trial_seed, kOutcomeStreamTag));

    PolicyState policy(*variant, cfg.policy_cfg, cfg.env.link, cfg.env.bounds);
    if (*variant == PolicyVariant::oracle) policy.set_truth(cfg.env.theta_star, cfg.env.phi_star);

    RegretTrace trace;
    trace.policy = policy_name_str;
    trace.cum_regret.reserve(cfg.num_users);
    double cum = 0.0;
    for (long t = 1; t <= cfg.num_users; ++t) {
        const UserInstance user = sample_user(user_rng, cfg.env);
        trace.user_stream_hash = hash_user(trace.user_stream_hash, user);
        const int action = policy.choose_action(user);
        const EpisodeResult ep =
            run_user_episode(outcome_rng, cfg.env, user, [action](long) { return action; });
        const Eigen::VectorXd x = user.contexts.row(action).transpose();
        for (double r : ep.outcomes) policy.observe(x, r, t);
        policy.end_user(t);

        const auto [best_action, best_value] = oracle_best(cfg.env, user);
        const double chosen_value =
            action == best_action
                ? best_value
                : expected_lifetime(cfg.env.theta_star.dot(x), cfg.env.phi_star.dot(x), user.beta,
                                    cfg.env.link, cfg.env.bounds);
        cum += best_value - chosen_value;
        trace.cum_regret.push_back(cum);
        if (ep.truncated) ++trace.truncation_count;
    }
    return trace;
}

inline PolicySummary summarize(const std::string& policy,
                               const std::vector<const RegretTrace*>& traces) {
    require(!traces.empty(), "summarize: no traces");
    const std::size_t t_max = traces.front()->cum_regret.size();
    PolicySummary s;
    s.policy = policy;
    s.mean.assign(t_max, 0.0);
    s.stderr_.assign(t_max, 0.0);
    const double m = static_cast<double>(traces.size());
    for (const RegretTrace* tr : traces) {
        require(tr->cum_regret.size() == t_max, "summarize: trace length mismatch");
        for (std::size_t i = 0; i < t_max; ++i) s.mean[i] += tr->cum_regret[i];
        s.truncation_count += tr->truncation_count;
    }
    for (double& v : s.mean) v /= m;
    if (traces.size() > 1) {
        for (std::size_t i = 0; i < t_max; ++i) {
            double ss = 0.0;
            for (const RegretTrace* tr : traces) {
                const double d = tr->cum_regret[i] - s.mean[i];
                ss += d * d;
            }
            s.stderr_[i] = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
        }
    }
    s.final_regret_mean = s.mean.back();
    s.final_regret_stderr = s.stderr_.back();
    s.loglog_slope = loglog_slope(s.mean);
    return s;
}

// Runs every (policy, trial) pair. Trial seeds depend only on the master
// seed and the trial index, so the user streams are common across policies
// and the output is independent of execution order.
inline ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResults results;
    for (const std::string& policy : cfg.policy_names) {
        for (int trial = 0; trial < cfg.num_trials; ++trial) {
            RegretTrace trace = run_trial(cfg, policy, derive_seed(cfg.master_seed, trial));
            trace.trial = trial;
            results.traces.push_back(std::move(trace));
        }
    }
    for (const std::string& policy : cfg.policy_names) {
        std::vector<const RegretTrace*> group;
        for (const RegretTrace& tr : results.traces)
            if (tr.policy == policy) group.push_back(&tr);
        results.summaries.push_back(summarize(policy, group));
    }
    return results;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// results.csv with the fixed schema plus summary.txt with per-policy final
// regret, slope diagnostic, and truncation counts.
inline void write_results(const ExperimentResults& results, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto csv_path = std::filesystem::path(dir) / "results.csv";
    std::ofstream csv(csv_path);
    ensure(csv.good(), "write_results: cannot open results.csv for writing");
    csv << "policy,trial,user_index,cum_regret\n";
    for (const RegretTrace& tr : results.traces) {
        for (std::size_t i = 0; i < tr.cum_regret.size(); ++i) {
            csv << tr.policy << ',' << tr.trial << ',' << (i + 1) << ','
                << format_double(tr.cum_regret[i]) << '\n';
        }
    }
    csv.close();
    ensure(csv.good(), "write_results: failed writing results.csv");

    const auto summary_path = std::filesystem::path(dir) / "summary.txt";
    std::ofstream summary(summary_path);
    ensure(summary.good(), "write_results: cannot open summary.txt for writing");
    for (const PolicySummary& s : results.summaries) {
        summary << '[' << s.policy << "]\n";
        summary << "final_regret_mean = " << format_double(s.final_regret_mean) << '\n';
        summary << "final_regret_stderr = " << format_double(s.final_regret_stderr) << '\n';
        summary << "loglog_slope = " << format_double(s.loglog_slope) << '\n';
        summary << "truncation_count = " << s.truncation_count << "\n\n";
    }
    summary.close();
    ensure(summary.good(), "write_results: failed writing summary.txt");
}

}  // namespace hrucb
