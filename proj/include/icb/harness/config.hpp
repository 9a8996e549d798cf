#pragma once

// Experiment configuration: a flat key = value text file with one section
// per component. '#' and ';' start comments, keys are case-sensitive,
// unknown sections or keys are errors so typos cannot pass silently.
//
//   [algorithm]
//   id = lb-prod            # exp3 | wsu-ux | bwsu | lb-prod | ts-prod | ts-omd-ds
//   tuned = true            # derive parameters from (K, horizon)
//   eta = 0.05              # explicit parameters instead of tuned
//   gamma = 0.2             # wsu-ux / bwsu only
//   c0 = 1000               # ts-prod only
//   [environment]
//   id = bernoulli          # bernoulli | switching | uniform | matrix | forecasting
//   means = 0.1,0.6         # bernoulli
//   arms = 2                # switching | uniform | forecasting
//   period = 4000           # switching
//   range = unit            # uniform: unit | symmetric
//   file = losses.csv       # matrix
//   strategic = 0           # forecasting: indices of strategic experts
//   [run]
//   horizon = 10000
//   seeds = 20
//   base_seed = 1
//   checkpoints = geometric # geometric | every-round
//   mode = strict           # strict | scan
//   threads = 1
//   [output]
//   dir = out

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace icb {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Cadence { kGeometric, kEveryRound };
enum class RunMode { kStrict, kScan };

struct Section {
    std::map<std::string, std::string> values;
    mutable std::set<std::string> consumed;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) throw ConfigError("missing required key '" + key + "'");
        consumed.insert(key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        consumed.insert(key);
        return it->second;
    }

    double get_double(const std::string& key) const {
        try {
            return std::stod(get(key));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' is not a number");
        }
    }

    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::int64_t get_int(const std::string& key) const {
        try {
            return std::stoll(get(key));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' is not an integer");
        }
    }

    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("key '" + key + "' is not a boolean");
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(get(key));
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                out.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("key '" + key + "' has a non-numeric entry '" + cell + "'");
            }
        }
        if (out.empty()) throw ConfigError("key '" + key + "' is empty");
        return out;
    }

    std::vector<int> get_int_list(const std::string& key) const {
        std::vector<int> out;
        for (double v : get_double_list(key)) out.push_back(static_cast<int>(v));
        return out;
    }

    // After a component consumed its keys, anything untouched is a typo or
    // a parameter the selected component ignores; both are errors.
    void reject_unconsumed(const std::string& section_name) const {
        for (const auto& [key, value] : values) {
            if (!consumed.count(key)) {
                throw ConfigError("unknown or unused key '" + key + "' in section [" +
                                  section_name + "]");
            }
        }
    }
};

struct ExperimentConfig {
    Section algorithm;
    Section environment;
    Section run;
    Section output;

    std::int64_t horizon() const { return run.get_int_or("horizon", 10000); }
    int seeds() const { return static_cast<int>(run.get_int_or("seeds", 1)); }
    std::uint64_t base_seed() const {
        return static_cast<std::uint64_t>(run.get_int_or("base_seed", 1));
    }
    int threads() const { return static_cast<int>(run.get_int_or("threads", 1)); }

    // Seeds are either an explicit list (`seed_list = 3,5,8`) or the pair
    // (`base_seed`, `seeds`), which expands to base_seed + 0..count-1.
    std::vector<std::uint64_t> seed_values() const {
        std::vector<std::uint64_t> out;
        if (run.has("seed_list")) {
            for (double v : run.get_double_list("seed_list")) {
                out.push_back(static_cast<std::uint64_t>(v));
            }
            if (run.has("seeds") &&
                static_cast<std::size_t>(run.get_int("seeds")) != out.size()) {
                throw ConfigError("seeds disagrees with the length of seed_list");
            }
            return out;
        }
        const int n = seeds();
        if (n < 1) throw ConfigError("seeds must be >= 1");
        const std::uint64_t base = base_seed();
        for (int i = 0; i < n; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
        return out;
    }

    Cadence cadence() const {
        const std::string c = run.get_or("checkpoints", "geometric");
        if (c == "geometric") return Cadence::kGeometric;
        if (c == "every-round") return Cadence::kEveryRound;
        throw ConfigError("checkpoints must be 'geometric' or 'every-round'");
    }

    RunMode mode() const {
        const std::string m = run.get_or("mode", "strict");
        if (m == "strict") return RunMode::kStrict;
        if (m == "scan") return RunMode::kScan;
        throw ConfigError("mode must be 'strict' or 'scan'");
    }

    std::string out_dir() const { return output.get_or("dir", ""); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    Section* current = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            const std::string name = detail::trim(t.substr(1, t.size() - 2));
            if (name == "algorithm") {
                current = &cfg.algorithm;
            } else if (name == "environment") {
                current = &cfg.environment;
            } else if (name == "run") {
                current = &cfg.run;
            } else if (name == "output") {
                current = &cfg.output;
            } else {
                throw ConfigError("unknown section [" + name + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        if (current == nullptr) {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (current->values.count(key)) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        current->values[key] = value;
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace icb
