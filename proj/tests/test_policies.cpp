#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hrucb/policies.hpp"

using namespace hrucb;

namespace {

EnvironmentParams paper_env() {
    Eigen::VectorXd theta(4), phi(4);
    theta << 0.6, 0.5, 0.5, 0.3;
    phi << 0.5, 0.2, 0.8, 0.9;
    const LinkFunction link = LinkFunction::standard(1.0, 2.0);
    EnvironmentParams env{4,    theta, phi, link, VarianceBounds::from_link(link, 2.0),
                          2.0,  20,    -1.0, 1.0, 1.0};
    env.validate();
    return env;
}

PolicyConfig paper_policy_config(int dim = 4) {
    PolicyConfig pc;
    pc.conf.delta = 0.1;
    pc.conf.sigma2_max = 4.0;
    pc.conf.dim = dim;
    pc.conf.lambda = 1.0;
    pc.conf.m_f = 1.0;
    pc.conf.big_l = 2.0;
    pc.gamma_rate = 5.0;
    return pc;
}

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd x(1);
    x[0] = v;
    return x;
}

}  // namespace

TEST_CASE("policy names round-trip") {
    for (const char* name : {"hr-ucb", "oracle", "lin-ucb", "sigmamax-ucb"}) {
        const auto v = policy_from_name(name);
        REQUIRE(v.has_value());
        REQUIRE(policy_name(*v) == name);
    }
    REQUIRE_FALSE(policy_from_name("nosuch").has_value());
}

TEST_CASE("policy config validates the budget growth rate") {
    PolicyConfig pc = paper_policy_config();
    pc.gamma_rate = 0.5;
    REQUIRE_THROWS_AS(pc.validate(), std::invalid_argument);
}

TEST_CASE("hr-ucb index reduces to the plug-in lifetime without exploration") {
    const LinkFunction link = LinkFunction::standard(1.0, 2.0);
    const VarianceBounds bounds(0.05, 4.0);
    PolicyConfig pc = paper_policy_config(1);
    pc.conf.c3 = 0.0;
    pc.conf.c4 = 0.0;
    PolicyState st(PolicyVariant::hr_ucb, pc, link, bounds);
    st.end_user(1);  // fit on no data: zero estimates
    const double h = expected_lifetime(0.0, 0.0, 0.3, link, bounds);
    REQUIRE(st.hr_ucb_index(vec1(0.8), 0.3) == Catch::Approx(h).margin(1e-12));
}

TEST_CASE("hr-ucb index at the zero context carries no bonus") {
    const LinkFunction link = LinkFunction::standard(1.0, 2.0);
    const VarianceBounds bounds(0.05, 4.0);
    const PolicyConfig pc = paper_policy_config(1);
    PolicyState st(PolicyVariant::hr_ucb, pc, link, bounds);
    const double h = expected_lifetime(0.0, 0.0, -0.2, link, bounds);
    REQUIRE(st.hr_ucb_index(vec1(0.0), -0.2) == Catch::Approx(h).margin(1e-12));
}

TEST_CASE("hr-ucb index on a fresh state is the prior lifetime plus one width") {
    const LinkFunction link = LinkFunction::standard(1.0, 2.0);  // f(0) = 2, no clamp
    const VarianceBounds bounds(0.05, 4.0);
    const PolicyConfig pc = paper_policy_config(1);
    PolicyState st(PolicyVariant::hr_ucb, pc, link, bounds);
    // theta = phi = 0, V = I: h = 1/Phi(0) = 2 and the norm of [1] is 1
    REQUIRE(st.hr_ucb_index(vec1(1.0), 0.0) ==
            Catch::Approx(2.0 + xi(1, pc.conf)).margin(1e-12));
}

TEST_CASE("oracle variant reproduces the environment argmax") {
    const EnvironmentParams env = paper_env();
    PolicyState st(PolicyVariant::oracle, paper_policy_config(), env.link, env.bounds);
    st.set_truth(env.theta_star, env.phi_star);
    RandomStream rng(17);
    for (int i = 0; i < 200; ++i) {
        const UserInstance user = sample_user(rng, env);
        REQUIRE(st.choose_action(user) == oracle_best(env, user).first);
    }
}

TEST_CASE("identical contexts tie to the lowest action index") {
    const EnvironmentParams env = paper_env();
    for (PolicyVariant v : {PolicyVariant::hr_ucb, PolicyVariant::oracle, PolicyVariant::lin_ucb,
                            PolicyVariant::sigmamax_ucb}) {
        PolicyState st(v, paper_policy_config(), env.link, env.bounds);
        st.set_truth(env.theta_star, env.phi_star);
        UserInstance user;
        user.contexts = Eigen::MatrixXd::Zero(3, 4);
        user.contexts.row(0) << 0.2, 0.1, -0.1, 0.3;
        user.contexts.row(1) << 0.2, 0.1, -0.1, 0.3;
        user.contexts.row(2) << 0.2, 0.1, -0.1, 0.3;
        user.beta = 0.1;
        REQUIRE(st.choose_action(user) == 0);
    }
}

TEST_CASE("greedy mean baseline picks the largest predicted mean") {
    const EnvironmentParams env = paper_env();
    PolicyConfig pc = paper_policy_config();
    pc.linucb_alpha = 0.0;
    PolicyState st(PolicyVariant::lin_ucb, pc, env.link, env.bounds);

    // feed samples so theta_hat is nonzero, then verify the argmax
    RandomStream rng(23);
    for (long t = 1; t <= 30; ++t) {
        const UserInstance user = sample_user(rng, env);
        const Eigen::VectorXd x = user.contexts.row(0).transpose();
        st.observe(x, env.theta_star.dot(x) + 0.1 * rng.normal(), t);
        st.end_user(t);
    }
    const UserInstance probe = sample_user(rng, env);
    int best = 0;
    double best_mean = -1e300;
    for (int a = 0; a < probe.contexts.rows(); ++a) {
        const double m = st.regression().theta_hat().dot(probe.contexts.row(a));
        if (m > best_mean) {
            best_mean = m;
            best = a;
        }
    }
    REQUIRE(st.choose_action(probe) == best);
}

TEST_CASE("empty context set is rejected") {
    const EnvironmentParams env = paper_env();
    PolicyState st(PolicyVariant::hr_ucb, paper_policy_config(), env.link, env.bounds);
    UserInstance user;
    user.contexts = Eigen::MatrixXd::Zero(0, 4);
    user.beta = 0.0;
    REQUIRE_THROWS_AS(st.choose_action(user), std::invalid_argument);
}

TEST_CASE("observe respects the sample budget") {
    const EnvironmentParams env = paper_env();
    PolicyConfig pc = paper_policy_config();
    const Eigen::VectorXd x = Eigen::VectorXd::Unit(4, 0) * 0.5;

    pc.gamma_rate = 1.0;
    PolicyState st(PolicyVariant::hr_ucb, pc, env.link, env.bounds);
    st.observe(x, 1.0, 1);
    REQUIRE(st.regression().n() == 1);  // below budget: stored
    st.observe(x, 1.0, 1);
    REQUIRE(st.regression().n() == 1);  // at budget: discarded

    pc.gamma_rate = 5.0;
    PolicyState st5(PolicyVariant::hr_ucb, pc, env.link, env.bounds);
    for (int i = 0; i < 9; ++i) st5.observe(x, 1.0, 2);
    REQUIRE(st5.regression().n() == 9);
    st5.observe(x, 1.0, 2);
    REQUIRE(st5.regression().n() == 10);  // 9 < 10 stored, then at budget
    st5.observe(x, 1.0, 2);
    REQUIRE(st5.regression().n() == 10);
}

TEST_CASE("the sample set never exceeds the budget and grows with users") {
    const EnvironmentParams env = paper_env();
    PolicyConfig pc = paper_policy_config();
    pc.gamma_rate = 2.0;
    PolicyState st(PolicyVariant::hr_ucb, pc, env.link, env.bounds);
    RandomStream urng(29), orng(30);
    for (long t = 1; t <= 40; ++t) {
        const UserInstance user = sample_user(urng, env);
        const int action = st.choose_action(user);
        const Eigen::VectorXd x = user.contexts.row(action).transpose();
        const EpisodeResult ep = run_user_episode(orng, env, user, [&](long) { return action; });
        for (double r : ep.outcomes) st.observe(x, r, t);
        st.end_user(t);
        REQUIRE(st.regression().n() <= static_cast<std::size_t>(2 * t));
        REQUIRE(st.regression().n() >= static_cast<std::size_t>(t));
    }
}

TEST_CASE("end_user refits lazily") {
    const LinkFunction link = LinkFunction::standard(1.0, 2.0);
    const VarianceBounds bounds(0.05, 4.0);
    PolicyState st(PolicyVariant::hr_ucb, paper_policy_config(1), link, bounds);

    st.observe(vec1(1.0), 2.0, 1);
    REQUIRE(st.regression().fitted_at() == 0);  // not refit inside the episode
    st.end_user(1);
    REQUIRE(st.regression().fitted_at() == 1);
    REQUIRE(st.user_index() == 1);
    REQUIRE(st.regression().theta_hat()[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(st.regression().phi_hat()[0] == Catch::Approx(-0.5).margin(1e-12));

    const Eigen::VectorXd theta_before = st.regression().theta_hat();
    const Eigen::VectorXd phi_before = st.regression().phi_hat();
    st.end_user(2);  // no new samples: estimates unchanged
    REQUIRE(st.regression().theta_hat() == theta_before);
    REQUIRE(st.regression().phi_hat() == phi_before);
}

TEST_CASE("chosen action is constant across the rounds of one episode") {
    const EnvironmentParams env = paper_env();
    PolicyState st(PolicyVariant::hr_ucb, paper_policy_config(), env.link, env.bounds);
    RandomStream urng(37), orng(38);
    for (long t = 1; t <= 20; ++t) {
        const UserInstance user = sample_user(urng, env);
        const int action = st.choose_action(user);
        REQUIRE(st.choose_action(user) == action);  // deterministic on a fixed state
        const EpisodeResult ep = run_user_episode(orng, env, user, [&](long) { return action; });
        for (int a : ep.action_sequence) REQUIRE(a == action);
        const Eigen::VectorXd x = user.contexts.row(action).transpose();
        for (double r : ep.outcomes) st.observe(x, r, t);
        st.end_user(t);
    }
}

TEST_CASE("index never decreases when the exploration constants grow") {
    const EnvironmentParams env = paper_env();
    PolicyConfig lo = paper_policy_config();
    lo.conf.c3 = 0.3;
    lo.conf.c4 = 0.2;
    PolicyConfig hi = lo;
    hi.conf.c3 = 0.9;
    hi.conf.c4 = 0.7;

    PolicyState st_lo(PolicyVariant::hr_ucb, lo, env.link, env.bounds);
    PolicyState st_hi(PolicyVariant::hr_ucb, hi, env.link, env.bounds);
    RandomStream urng(41), orng(42);
    for (long t = 1; t <= 15; ++t) {
        const UserInstance user = sample_user(urng, env);
        const int action = st_lo.choose_action(user);
        const Eigen::VectorXd x = user.contexts.row(action).transpose();
        const EpisodeResult ep = run_user_episode(orng, env, user, [&](long) { return action; });
        for (double r : ep.outcomes) {
            st_lo.observe(x, r, t);
            st_hi.observe(x, r, t);
        }
        st_lo.end_user(t);
        st_hi.end_user(t);
        for (int a = 0; a < user.contexts.rows(); ++a) {
            const Eigen::VectorXd probe = user.contexts.row(a).transpose();
            REQUIRE(st_hi.hr_ucb_index(probe, user.beta) >=
                    st_lo.hr_ucb_index(probe, user.beta) - 1e-12);
        }
    }
}

TEST_CASE("lifetime sandwich holds when the confidence events do") {
    // Conditioned form: with exploration constants that dominate the
    // lifetime slopes on the domain, instances whose estimation errors sit
    // inside the confidence radii satisfy
    // 0 <= index - true lifetime <= 2 xi ||x||.
    const EnvironmentParams env = paper_env();
    const VarianceBounds true_range(env.link.value(-env.phi_star.norm()),
                                    env.link.value(env.phi_star.norm()));
    const auto slopes = estimate_lifetime_slopes(true_range, -2.5, 2.5, -1.0, 1.0, 24);

    PolicyConfig pc = paper_policy_config();
    pc.conf.sigma2_max = true_range.sigma2_max;
    pc.conf.c3 = 1.5 * slopes.c3();
    pc.conf.c4 = 1.5 * slopes.c4(1.0, 2.0);

    RandomStream rng(47);
    int conditioned = 0;
    for (int rep = 0; rep < 100; ++rep) {
        PolicyState st(PolicyVariant::hr_ucb, pc, env.link, true_range);
        const int n = 100 + static_cast<int>(rng.uniform01() * 400);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd g(4);
            for (int j = 0; j < 4; ++j) g[j] = rng.normal();
            const Eigen::VectorXd x = g / g.norm() * std::pow(rng.uniform01(), 0.25);
            const double var = env.link.value(env.phi_star.dot(x));
            st.observe(x, env.theta_star.dot(x) + rng.normal() * std::sqrt(var), 1'000'000);
        }
        st.end_user(1);

        const GlseState& reg = st.regression();
        const Eigen::VectorXd dt = reg.theta_hat() - env.theta_star;
        const Eigen::VectorXd dp = reg.phi_hat() - env.phi_star;
        const double nt = std::sqrt(dt.dot(reg.gram() * dt));
        const double np = std::sqrt(dp.dot(reg.gram() * dp));
        const double dn = static_cast<double>(n);
        if (nt > alpha1(n, pc.conf, pc.conf.delta) ||
            np > rho(n, pc.conf, pc.conf.delta / (dn * dn)))
            continue;  // condition on the confidence events
        ++conditioned;

        for (int probe = 0; probe < 10; ++probe) {
            Eigen::VectorXd g(4);
            for (int j = 0; j < 4; ++j) g[j] = rng.normal();
            const Eigen::VectorXd x = g / g.norm() * std::pow(rng.uniform01(), 0.25);
            const double beta = rng.uniform(-1.0, 1.0);
            REQUIRE(std::abs(reg.theta_hat().dot(x)) <= 2.5);  // slope domain covers it
            const double q = st.hr_ucb_index(x, beta);
            const double truth = expected_lifetime(env.theta_star.dot(x), env.phi_star.dot(x),
                                                   beta, env.link, true_range);
            const double width = 2.0 * xi(n, pc.conf) * reg.inv_gram_norm(x);
            REQUIRE(q - truth >= -1e-9);
            REQUIRE(q - truth <= width + 1e-9);
        }
    }
    REQUIRE(conditioned >= 90);  // radii are loose; nearly all instances qualify
}

TEST_CASE("the index is optimistic for most users") {
    const EnvironmentParams env = paper_env();
    const VarianceBounds true_range(env.link.value(-env.phi_star.norm()),
                                    env.link.value(env.phi_star.norm()));
    const auto slopes = estimate_lifetime_slopes(true_range, -2.5, 2.5, -1.0, 1.0, 24);
    PolicyConfig pc = paper_policy_config();
    pc.conf.sigma2_max = true_range.sigma2_max;
    pc.conf.c3 = 1.5 * slopes.c3();
    pc.conf.c4 = 1.5 * slopes.c4(1.0, 2.0);

    EnvironmentParams env_tight = env;
    env_tight.bounds = true_range;
    PolicyState st(PolicyVariant::hr_ucb, pc, env_tight.link, true_range);
    RandomStream urng(53), orng(54);
    int optimistic = 0;
    const int users = 1000;
    for (long t = 1; t <= users; ++t) {
        const UserInstance user = sample_user(urng, env_tight);
        const auto [best, best_value] = oracle_best(env_tight, user);
        if (st.hr_ucb_index(user.contexts.row(best).transpose(), user.beta) >= best_value)
            ++optimistic;
        const int action = st.choose_action(user);
        const Eigen::VectorXd x = user.contexts.row(action).transpose();
        const EpisodeResult ep = run_user_episode(orng, env_tight, user, [&](long) { return action; });
        for (double r : ep.outcomes) st.observe(x, r, t);
        st.end_user(t);
    }
    REQUIRE(optimistic >= static_cast<int>(0.9 * users));
}
