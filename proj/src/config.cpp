#include "qfhedge/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qfhedge/errors.hpp"

namespace qfhedge {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    static const char* known[] = {
        "maturity",       "r",        "alpha",          "rho",         "q_mort",
        "a_p",            "b_p",      "lambda_floor_p", "lambda_p0",   "a_i",
        "b_i",            "lambda_floor_i",             "lambda_i0",   "grid_m",
        "grid_i",         "grid_j",   "mc_paths",       "mc_steps",    "seed",
        "n_contracts",    "sweep_rho", "sweep_q",       "hedge_n_insured",
        "hedge_delta",    "hedge_steps",                "out",
    };

    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool recognized = false;
        for (const char* k : known) {
            if (key == k) {
                recognized = true;
                break;
            }
        }
        if (!recognized) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate config key '" + key + "'");
        }
        kv[key] = value;
    }

    RunConfig cfg;
    const auto take = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    const auto set_double = [&](const char* key, double& slot) {
        if (const auto* v = take(key)) slot = parse_double(key, *v);
    };

    set_double("maturity", cfg.market.maturity);
    set_double("r", cfg.market.r);
    set_double("alpha", cfg.market.alpha);
    set_double("rho", cfg.market.rho);
    set_double("q_mort", cfg.market.q_mort);

    set_double("a_p", cfg.pops.insured.a);
    set_double("b_p", cfg.pops.insured.b);
    set_double("lambda_floor_p", cfg.pops.insured.lambda_floor);
    if (const auto* v = take("lambda_p0")) {
        cfg.pops.initial_insured = parse_double("lambda_p0", *v);
        cfg.lambda_p0_given = true;
    }

    // Reference population mirrors the insured one key by key.
    cfg.pops.reference = cfg.pops.insured;
    cfg.pops.initial_reference = cfg.pops.initial_insured;
    set_double("a_i", cfg.pops.reference.a);
    set_double("b_i", cfg.pops.reference.b);
    set_double("lambda_floor_i", cfg.pops.reference.lambda_floor);
    set_double("lambda_i0", cfg.pops.initial_reference);

    set_double("grid_m", cfg.grid_m);
    if (const auto* v = take("grid_i")) cfg.grid_i = static_cast<int>(parse_int("grid_i", *v));
    if (const auto* v = take("grid_j")) cfg.grid_j = static_cast<int>(parse_int("grid_j", *v));

    if (const auto* v = take("mc_paths")) {
        const long long n = parse_int("mc_paths", *v);
        if (n < 1) throw ConfigError("config key 'mc_paths': must be >= 1");
        cfg.mc_paths = static_cast<std::size_t>(n);
    }
    if (const auto* v = take("mc_steps")) cfg.mc_steps = static_cast<int>(parse_int("mc_steps", *v));
    if (const auto* v = take("seed")) {
        cfg.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
    }

    if (const auto* v = take("n_contracts")) {
        cfg.n_contracts.clear();
        for (const auto& item : split_list(*v)) {
            const long long n = parse_int("n_contracts", item);
            if (n < 1) throw ConfigError("config key 'n_contracts': entries must be >= 1");
            cfg.n_contracts.push_back(static_cast<int>(n));
        }
        if (cfg.n_contracts.empty()) {
            throw ConfigError("config key 'n_contracts': empty list");
        }
    }
    if (const auto* v = take("sweep_rho")) {
        for (const auto& item : split_list(*v)) {
            cfg.sweep_rho.push_back(parse_double("sweep_rho", item));
        }
    }
    if (const auto* v = take("sweep_q")) {
        for (const auto& item : split_list(*v)) {
            cfg.sweep_q.push_back(parse_double("sweep_q", item));
        }
    }

    if (const auto* v = take("hedge_n_insured")) {
        cfg.hedge_n_insured = static_cast<int>(parse_int("hedge_n_insured", *v));
    }
    set_double("hedge_delta", cfg.hedge_delta);
    if (const auto* v = take("hedge_steps")) {
        cfg.hedge_steps = static_cast<int>(parse_int("hedge_steps", *v));
    }
    if (const auto* v = take("out")) cfg.out = *v;

    validate(cfg.market, cfg.pops);
    cfg.grid();  // dimension check
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace qfhedge
