#pragma once
// Flat experiment settings with the simulation-study defaults baked in,
// serialized as a diff-friendly "key = value" file. Every key can be
// overridden from the command line.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hrucb/harness.hpp"

namespace hrucb {

struct Settings {
    int dim = 4;
    std::vector<double> theta_star = {0.6, 0.5, 0.5, 0.3};
    std::vector<double> phi_star = {0.5, 0.2, 0.8, 0.9};
    double link_slope = 1.0;
    double link_offset = 2.0;
    double big_l = 2.0;
    double sigma2_floor = 0.05;
    double sigma2_min = 0.0;  // 0 = derive max(f(-L), sigma2_floor)
    double sigma2_max = 0.0;  // 0 = derive f(L)
    int num_actions = 20;
    double beta_low = -1.0;
    double beta_high = 1.0;
    double big_b = 1.0;
    long max_rounds_cap = 1'000'000;
    long users = 3000;
    int trials = 5;
    std::uint64_t seed = 1;
    double delta = 0.1;
    double lambda = 1.0;
    double k = 5.0;
    double linucb_alpha = 1.0;
    bool linucb_greedy = false;
    double c1 = 2.0;
    double c2 = 0.5;
    double c3 = 1.0;
    double c4 = 1.0;
    std::vector<std::string> policies = {"hr-ucb", "lin-ucb", "sigmamax-ucb", "oracle"};
    bool emit_svg = false;

    LinkFunction make_link() const { return LinkFunction(link_slope, link_offset, big_l); }

    VarianceBounds make_bounds() const {
        const LinkFunction link = make_link();
        if (sigma2_min > 0.0 && sigma2_max > 0.0) return VarianceBounds(sigma2_min, sigma2_max);
        VarianceBounds derived = VarianceBounds::from_link(link, big_l, sigma2_floor);
        if (sigma2_min > 0.0) derived.sigma2_min = sigma2_min;
        if (sigma2_max > 0.0) derived.sigma2_max = sigma2_max;
        return VarianceBounds(derived.sigma2_min, derived.sigma2_max);
    }

    EnvironmentParams make_env() const {
        EnvironmentParams env{dim,
                              Eigen::Map<const Eigen::VectorXd>(theta_star.data(),
                                                                static_cast<long>(theta_star.size())),
                              Eigen::Map<const Eigen::VectorXd>(phi_star.data(),
                                                                static_cast<long>(phi_star.size())),
                              make_link(),
                              make_bounds(),
                              big_l,
                              num_actions,
                              beta_low,
                              beta_high,
                              big_b,
                              max_rounds_cap};
        env.validate();
        return env;
    }

    ConfidenceConfig make_confidence() const {
        ConfidenceConfig conf;
        conf.delta = delta;
        conf.sigma2_max = make_bounds().sigma2_max;
        conf.dim = dim;
        conf.lambda = lambda;
        conf.m_f = link_slope;
        conf.big_l = big_l;
        conf.c1 = c1;
        conf.c2 = c2;
        conf.c3 = c3;
        conf.c4 = c4;
        conf.validate();
        return conf;
    }

    PolicyConfig make_policy_config() const {
        PolicyConfig pc;
        pc.conf = make_confidence();
        pc.gamma_rate = k;
        pc.linucb_alpha = linucb_greedy ? 0.0 : linucb_alpha;
        pc.validate();
        return pc;
    }

    ExperimentConfig make_experiment(const std::string& output_path) const {
        ExperimentConfig cfg{make_env(), policies, make_policy_config(),
                             users,      trials,   seed,
                             output_path};
        cfg.validate();
        return cfg;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_double_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        require(pos == item.size(), "config: malformed number in list");
        out.push_back(v);
    }
    require(!out.empty(), "config: empty list value");
    return out;
}

inline std::vector<std::string> parse_string_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    require(!out.empty(), "config: empty list value");
    return out;
}

inline std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

template <typename T>
inline T parse_scalar(const std::string& value);

template <>
inline double parse_scalar<double>(const std::string& value) {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    require(pos == value.size(), "config: malformed real value");
    return v;
}

template <>
inline long parse_scalar<long>(const std::string& value) {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    require(pos == value.size(), "config: malformed integer value");
    return v;
}

template <>
inline int parse_scalar<int>(const std::string& value) {
    return static_cast<int>(parse_scalar<long>(value));
}

template <>
inline std::uint64_t parse_scalar<std::uint64_t>(const std::string& value) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    require(pos == value.size(), "config: malformed seed value");
    return static_cast<std::uint64_t>(v);
}

template <>
inline bool parse_scalar<bool>(const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    require(false, "config: malformed boolean value");
    return false;
}

}  // namespace detail

// Applies one "key = value" override; throws naming the key when unknown.
inline void set_key(Settings& s, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "dim") s.dim = parse_scalar<int>(value);
    else if (key == "theta_star") s.theta_star = parse_double_list(value);
    else if (key == "phi_star") s.phi_star = parse_double_list(value);
    else if (key == "link_slope") s.link_slope = parse_scalar<double>(value);
    else if (key == "link_offset") s.link_offset = parse_scalar<double>(value);
    else if (key == "big_l") s.big_l = parse_scalar<double>(value);
    else if (key == "sigma2_floor") s.sigma2_floor = parse_scalar<double>(value);
    else if (key == "sigma2_min") s.sigma2_min = parse_scalar<double>(value);
    else if (key == "sigma2_max") s.sigma2_max = parse_scalar<double>(value);
    else if (key == "num_actions") s.num_actions = parse_scalar<int>(value);
    else if (key == "beta_low") s.beta_low = parse_scalar<double>(value);
    else if (key == "beta_high") s.beta_high = parse_scalar<double>(value);
    else if (key == "big_b") s.big_b = parse_scalar<double>(value);
    else if (key == "max_rounds_cap") s.max_rounds_cap = parse_scalar<long>(value);
    else if (key == "users") s.users = parse_scalar<long>(value);
    else if (key == "trials") s.trials = parse_scalar<int>(value);
    else if (key == "seed") s.seed = parse_scalar<std::uint64_t>(value);
    else if (key == "delta") s.delta = parse_scalar<double>(value);
    else if (key == "lambda") s.lambda = parse_scalar<double>(value);
    else if (key == "k") s.k = parse_scalar<double>(value);
    else if (key == "linucb_alpha") s.linucb_alpha = parse_scalar<double>(value);
    else if (key == "linucb_greedy") s.linucb_greedy = parse_scalar<bool>(value);
    else if (key == "c1") s.c1 = parse_scalar<double>(value);
    else if (key == "c2") s.c2 = parse_scalar<double>(value);
    else if (key == "c3") s.c3 = parse_scalar<double>(value);
    else if (key == "c4") s.c4 = parse_scalar<double>(value);
    else if (key == "policies") s.policies = parse_string_list(value);
    else if (key == "emit_svg") s.emit_svg = parse_scalar<bool>(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

// Applies a "key=value" token as passed on the command line.
inline void apply_override(Settings& s, const std::string& token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos, "config: override must look like key=value");
    set_key(s, detail::trim(token.substr(0, eq)), detail::trim(token.substr(eq + 1)));
}

inline void load_settings_file(Settings& s, const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "config: cannot open config file");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config: expected 'key = value' line");
        set_key(s, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline void save_settings_file(const Settings& s, const std::string& path) {
    using namespace detail;
    std::ofstream out(path);
    ensure(out.good(), "config: cannot write config file");
    out << "dim = " << s.dim << '\n';
    out << "theta_star = " << join(s.theta_star) << '\n';
    out << "phi_star = " << join(s.phi_star) << '\n';
    out << "link_slope = " << format_double(s.link_slope) << '\n';
    out << "link_offset = " << format_double(s.link_offset) << '\n';
    out << "big_l = " << format_double(s.big_l) << '\n';
    out << "sigma2_floor = " << format_double(s.sigma2_floor) << '\n';
    out << "sigma2_min = " << format_double(s.sigma2_min) << '\n';
    out << "sigma2_max = " << format_double(s.sigma2_max) << '\n';
    out << "num_actions = " << s.num_actions << '\n';
    out << "beta_low = " << format_double(s.beta_low) << '\n';
    out << "beta_high = " << format_double(s.beta_high) << '\n';
    out << "big_b = " << format_double(s.big_b) << '\n';
    out << "max_rounds_cap = " << s.max_rounds_cap << '\n';
    out << "users = " << s.users << '\n';
    out << "trials = " << s.trials << '\n';
    out << "seed = " << s.seed << '\n';
    out << "delta = " << format_double(s.delta) << '\n';
    out << "lambda = " << format_double(s.lambda) << '\n';
    out << "k = " << format_double(s.k) << '\n';
    out << "linucb_alpha = " << format_double(s.linucb_alpha) << '\n';
    out << "linucb_greedy = " << (s.linucb_greedy ? "true" : "false") << '\n';
    out << "c1 = " << format_double(s.c1) << '\n';
    out << "c2 = " << format_double(s.c2) << '\n';
    out << "c3 = " << format_double(s.c3) << '\n';
    out << "c4 = " << format_double(s.c4) << '\n';
    out << "policies = " << join(s.policies) << '\n';
    out << "emit_svg = " << (s.emit_svg ? "true" : "false") << '\n';
    out.close();
    ensure(out.good(), "config: failed writing config file");
}

}  // namespace hrucb
