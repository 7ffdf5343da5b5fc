#pragma once
// Fast built-in invariant checks behind the `check` CLI subcommand. Each
// check prints one pass/fail line; the suite returns false if any fail.

#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hrucb/config.hpp"
#include "hrucb/harness.hpp"

namespace hrucb {

namespace selfcheck_detail {

// Elimination solver independent of the Gram/LLT path, for cross-checking
// the regression fit on small instances.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

}  // namespace selfcheck_detail

inline bool run_selfchecks(std::ostream& out) {
    struct Check {
        std::string name;
        std::function<bool()> fn;
    };
    const Settings defaults;
    const LinkFunction link = defaults.make_link();
    const VarianceBounds bounds = defaults.make_bounds();

    std::vector<Check> checks;

    checks.push_back({"link inverse round-trip", [&] {
        for (int i = 0; i <= 200; ++i) {
            const double z = -2.0 + 4.0 * i / 200.0;
            if (std::abs(link.inverse(link.value(z)) - z) > 1e-12) return false;
        }
        return true;
    }});

    checks.push_back({"normal cdf sanity", [&] {
        return std::abs(std_normal_cdf(0.0) - 0.5) < 1e-15 &&
               std::abs(std_normal_cdf(-1.0) - 0.15865525393145705) < 1e-12 &&
               std::abs(std_normal_cdf(1.0) + std_normal_cdf(-1.0) - 1.0) < 1e-14;
    }});

    checks.push_back({"lifetime monotone in mean and level", [&] {
        double prev = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double u = -1.0 + 2.0 * i / 40.0;
            const double h = expected_lifetime(u, 0.0, 0.0, link, bounds);
            if (h < 1.0 || (i > 0 && h <= prev)) return false;
            prev = h;
        }
        prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 40; ++i) {
            const double beta = -1.0 + 2.0 * i / 40.0;
            const double h = expected_lifetime(0.0, 0.0, beta, link, bounds);
            if (h >= prev) return false;
            prev = h;
        }
        return true;
    }});

    checks.push_back({"gram recomputation", [&] {
        RandomStream rng(11);
        GlseState st(3, 0.7);
        for (int i = 0; i < 50; ++i) {
            Eigen::VectorXd x(3);
            for (int j = 0; j < 3; ++j) x[j] = rng.uniform(-0.5, 0.5);
            st.add_sample(x, rng.normal());
        }
        Eigen::MatrixXd expect = 0.7 * Eigen::MatrixXd::Identity(3, 3);
        for (const auto& s : st.samples()) expect += s.x * s.x.transpose();
        return (st.gram() - expect).cwiseAbs().maxCoeff() < 1e-9 && st.n() == 50;
    }});

    checks.push_back({"fit matches elimination solve", [&] {
        RandomStream rng(17);
        for (int rep = 0; rep < 20; ++rep) {
            const int d = 1 + static_cast<int>(rng.uniform01() * 3);
            GlseState st(d, 1.0);
            const int n = 2 + static_cast<int>(rng.uniform01() * 10);
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd x(d);
                for (int j = 0; j < d; ++j) x[j] = rng.uniform(-0.5, 0.5);
                st.add_sample(x, rng.uniform(-2.0, 2.0));
            }
            st.fit(link);
            std::vector<std::vector<double>> a(d, std::vector<double>(d, 0.0));
            std::vector<double> b(d, 0.0);
            for (int i = 0; i < d; ++i) {
                a[i][i] = 1.0;
                for (const auto& s : st.samples()) {
                    b[i] += s.r * s.x[i];
                    for (int j = 0; j < d; ++j) a[i][j] += s.x[i] * s.x[j];
                }
            }
            const auto theta = selfcheck_detail::solve_dense(a, b);
            for (int i = 0; i < d; ++i)
                if (std::abs(theta[i] - st.theta_hat()[i]) > 1e-8) return false;
        }
        return true;
    }});

    checks.push_back({"inverse-gram norm bounded by l2/sqrt(lambda)", [&] {
        RandomStream rng(23);
        GlseState st(4, 2.0);
        for (int i = 0; i < 40; ++i) {
            Eigen::VectorXd x(4);
            for (int j = 0; j < 4; ++j) x[j] = rng.uniform(-0.4, 0.4);
            st.add_sample(x, rng.normal());
            if (st.inv_gram_norm(x) > x.norm() / std::sqrt(2.0) + 1e-12) return false;
        }
        return true;
    }});

    checks.push_back({"confidence radii monotone", [&] {
        const ConfidenceConfig conf = defaults.make_confidence();
        double prev_a = 0.0, prev_r = 0.0, prev_x = 0.0;
        for (std::size_t n = 1; n <= 4096; n *= 4) {
            const double a = alpha1(n, conf, conf.delta);
            const double r = rho(n, conf, conf.delta);
            const double x = xi(n, conf);
            if (a <= prev_a || r <= prev_r || x <= prev_x) return false;
            prev_a = a;
            prev_r = r;
            prev_x = x;
        }
        return alpha1(10, conf, 0.05) > alpha1(10, conf, 0.2);
    }});

    checks.push_back({"sample budget arithmetic", [&] {
        PolicyConfig pc = defaults.make_policy_config();
        pc.gamma_rate = 1.0;
        PolicyState st(PolicyVariant::hr_ucb, pc, link, bounds);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(defaults.dim);
        x[0] = 0.5;
        st.observe(x, 1.0, 1);
        st.observe(x, 1.0, 1);  // at budget, discarded
        if (st.regression().n() != 1) return false;
        st.observe(x, 1.0, 2);
        return st.regression().n() == 2;
    }});

    checks.push_back({"oracle policy has zero regret", [&] {
        Settings s = defaults;
        s.users = 40;
        s.trials = 1;
        s.policies = {"oracle"};
        const ExperimentResults res = run_experiment(s.make_experiment(""));
        for (double v : res.traces.front().cum_regret)
            if (v != 0.0) return false;
        return true;
    }});

    checks.push_back({"trial determinism", [&] {
        Settings s = defaults;
        s.users = 30;
        s.trials = 1;
        const ExperimentConfig cfg = s.make_experiment("");
        const RegretTrace a = run_trial(cfg, "hr-ucb", derive_seed(cfg.master_seed, 0));
        const RegretTrace b = run_trial(cfg, "hr-ucb", derive_seed(cfg.master_seed, 0));
        return a.cum_regret == b.cum_regret;
    }});

    bool all_ok = true;
    for (const Check& c : checks) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            out << "FAIL " << c.name << " (exception: " << e.what() << ")\n";
            all_ok = false;
            continue;
        }
        out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
        all_ok = all_ok && ok;
    }
    return all_ok;
}

}  // namespace hrucb
