// Command-line front end: parse config, run experiments, emit CSV/summary
// and optional SVG plots.
//
// Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "hrucb/config.hpp"
#include "hrucb/selfcheck.hpp"
#include "hrucb/svg.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    std::string policy;
    std::vector<double> k_list{1.0, 5.0, 10.0};
    bool greedy = false;
    bool emit_svg = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt, hrucb::Settings& s) {
    cmd->add_option("--config", opt.config_path, "config file (key = value lines)");
    cmd->add_option("--set", opt.overrides, "override a config key, e.g. --set delta=0.05");
    cmd->add_option("--users", s.users, "number of simulated users (T)");
    cmd->add_option("--trials", s.trials, "number of independent trials");
    cmd->add_option("--seed", s.seed, "master seed");
    cmd->add_option("--delta", s.delta, "confidence level delta");
    cmd->add_option("--lambda", s.lambda, "ridge regularizer lambda");
    cmd->add_option("--c3", s.c3, "exploration constant C3");
    cmd->add_option("--c4", s.c4, "exploration constant C4");
    cmd->add_option("--out", opt.out, "output directory (default $HRUCB_OUT_DIR or ./hrucb_out)");
    cmd->add_flag("--greedy", opt.greedy, "run the mean baseline greedily (alpha = 0)");
    cmd->add_flag("--emit-svg", opt.emit_svg, "also write a regret.svg chart");
}

// Settings precedence: defaults < --config file < named flags < --set.
hrucb::Settings assemble_settings(const CLI::App* cmd, const CliOptions& opt,
                                  const hrucb::Settings& flag_values) {
    hrucb::Settings s;
    if (!opt.config_path.empty()) hrucb::load_settings_file(s, opt.config_path);
    if (cmd->count("--users")) s.users = flag_values.users;
    if (cmd->count("--trials")) s.trials = flag_values.trials;
    if (cmd->count("--seed")) s.seed = flag_values.seed;
    if (cmd->count("--delta")) s.delta = flag_values.delta;
    if (cmd->count("--lambda")) s.lambda = flag_values.lambda;
    if (cmd->count("--c3")) s.c3 = flag_values.c3;
    if (cmd->count("--c4")) s.c4 = flag_values.c4;
    if (opt.greedy) s.linucb_greedy = true;
    if (opt.emit_svg) s.emit_svg = true;
    for (const std::string& token : opt.overrides) hrucb::apply_override(s, token);
    return s;
}

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("HRUCB_OUT_DIR"); env && *env) return env;
    return "hrucb_out";
}

void persist(const hrucb::ExperimentResults& results, const hrucb::Settings& settings,
             const std::string& out_dir) {
    hrucb::write_results(results, out_dir);
    hrucb::save_settings_file(settings, (std::filesystem::path(out_dir) / "config.txt").string());
    if (settings.emit_svg)
        hrucb::write_regret_svg(results.summaries,
                                (std::filesystem::path(out_dir) / "regret.svg").string());
    std::cout << "wrote " << out_dir << "/results.csv, summary.txt, config.txt";
    if (settings.emit_svg) std::cout << ", regret.svg";
    std::cout << '\n';
    for (const hrucb::PolicySummary& s : results.summaries) {
        std::cout << s.policy << ": final regret " << s.final_regret_mean << " +- "
                  << s.final_regret_stderr << ", log-log slope " << s.loglog_slope << '\n';
    }
}

int run_single(const hrucb::Settings& settings, const std::string& policy,
               const std::string& out_dir) {
    if (!hrucb::policy_from_name(policy)) {
        std::cerr << "error: unknown policy '" << policy
                  << "' (expected hr-ucb | oracle | lin-ucb | sigmamax-ucb)\n";
        return 2;
    }
    hrucb::Settings s = settings;
    s.policies = {policy};
    const auto results = hrucb::run_experiment(s.make_experiment(out_dir));
    persist(results, s, out_dir);
    return 0;
}

int run_compare(const hrucb::Settings& settings, const std::string& out_dir) {
    hrucb::Settings s = settings;
    s.policies = {"hr-ucb", "lin-ucb", "sigmamax-ucb", "oracle"};
    const auto results = hrucb::run_experiment(s.make_experiment(out_dir));
    persist(results, s, out_dir);
    return 0;
}

int run_sweep_k(const hrucb::Settings& settings, const std::vector<double>& k_list,
                const std::string& out_dir) {
    hrucb::require(!k_list.empty(), "sweep-k: need at least one K value");
    hrucb::ExperimentResults combined;
    hrucb::Settings s = settings;
    for (double k : k_list) {
        s.k = k;
        s.policies = {"hr-ucb"};
        auto results = hrucb::run_experiment(s.make_experiment(out_dir));
        char label[48];
        std::snprintf(label, sizeof(label), "hr-ucb-K%g", k);
        for (auto& trace : results.traces) {
            trace.policy = label;
            combined.traces.push_back(std::move(trace));
        }
        results.summaries.front().policy = label;
        combined.summaries.push_back(std::move(results.summaries.front()));
    }
    persist(combined, s, out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heteroscedastic linear bandits with reneging: simulation toolkit"};
    app.require_subcommand(1);

    hrucb::Settings flag_values;  // receives named-flag values during parse
    CliOptions opt;

    CLI::App* cmd_run = app.add_subcommand("run", "run one policy");
    cmd_run->add_option("--policy", opt.policy, "hr-ucb | oracle | lin-ucb | sigmamax-ucb")
        ->required();
    cmd_run->add_option("--k", flag_values.k, "sample budget growth rate K");
    add_common_options(cmd_run, opt, flag_values);

    CLI::App* cmd_compare =
        app.add_subcommand("compare", "run hr-ucb, lin-ucb, sigmamax-ucb and oracle on common users");
    cmd_compare->add_option("--k", flag_values.k, "sample budget growth rate K");
    add_common_options(cmd_compare, opt, flag_values);

    CLI::App* cmd_sweep = app.add_subcommand("sweep-k", "run hr-ucb across several K values");
    cmd_sweep->add_option("--k", opt.k_list, "comma-separated K values")->delimiter(',');
    add_common_options(cmd_sweep, opt, flag_values);

    CLI::App* cmd_check = app.add_subcommand("check", "run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_check->parsed()) return hrucb::run_selfchecks(std::cout) ? 0 : 3;

        const CLI::App* active = cmd_run->parsed()       ? cmd_run
                                 : cmd_compare->parsed() ? cmd_compare
                                                         : cmd_sweep;
        hrucb::Settings settings;
        try {
            settings = assemble_settings(active, opt, flag_values);
            if (!cmd_sweep->parsed() && active->count("--k")) settings.k = flag_values.k;
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
        const std::string out_dir = resolve_out_dir(opt.out);

        if (cmd_run->parsed()) return run_single(settings, opt.policy, out_dir);
        if (cmd_compare->parsed()) return run_compare(settings, out_dir);
        return run_sweep_k(settings, opt.k_list, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 3;
    }
}
