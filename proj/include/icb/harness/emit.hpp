#pragma once

// Result emission. Four files per run directory:
//
//   regret.csv   one row per (checkpoint, seed):  t,seed,pseudo_regret
//   summary.csv  one row per checkpoint:          t,mean,stderr,n_seeds
//   result.json  canonical result (config echo, trajectories, summary)
//   timing.json  wall-clock per seed — the only volatile output
//
// Everything except timing.json is a pure function of (config, seeds):
// floats are printed with shortest round-trip formatting and files are
// written atomically (temp + rename). result.json parses and re-serializes
// byte-identically.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "icb/harness/runner.hpp"
#include "icb/version.hpp"

namespace icb {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.good()) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + target.string());
}

// Validated before any run starts so runs never waste work on an
// unwritable destination.
inline void ensure_writable_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("output directory '" + dir + "' cannot be created");
    }
    const fs::path probe = fs::path(dir) / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
}

inline nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    for (const auto& [name, section] :
         {std::pair<const char*, const Section*>{"algorithm", &cfg.algorithm},
          {"environment", &cfg.environment},
          {"run", &cfg.run},
          {"output", &cfg.output}}) {
        nlohmann::ordered_json s = nlohmann::ordered_json::object();
        for (const auto& [k, v] : section->values) {
            // thread count is execution machinery, not experiment identity;
            // keeping it out makes serial and parallel runs byte-identical
            if (std::string(name) == "run" && k == "threads") continue;
            s[k] = v;
        }
        j[name] = s;
    }
    return j;
}

inline nlohmann::ordered_json result_to_json(const ExperimentResult& result,
                                             const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["version"] = kVersionString;
    j["config"] = config_echo(cfg);
    j["algorithm"] = result.algorithm_id;
    j["environment"] = result.environment_id;
    j["horizon"] = result.horizon;
    j["base_seed"] = result.base_seed;
    j["mode"] = result.mode;
    j["cadence"] = result.cadence;
    j["checkpoints"] = result.checkpoints;

    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (const auto& traj : result.per_seed) {
        nlohmann::ordered_json s;
        s["seed"] = traj.seed;
        s["failed"] = traj.failed;
        if (traj.failed) s["fail_reason"] = traj.fail_reason;
        s["pseudo_regret"] = traj.pseudo_regret;
        s["realized_regret"] = traj.realized_regret;
        nlohmann::ordered_json breaches = nlohmann::ordered_json::array();
        for (const auto& b : traj.breaches) {
            breaches.push_back({{"algorithm", b.algorithm},
                                {"round", b.round},
                                {"arm", b.arm},
                                {"loss", b.loss},
                                {"detail", b.detail}});
        }
        s["breaches"] = breaches;
        seeds.push_back(s);
    }
    j["per_seed"] = seeds;
    j["summary"] = {{"mean", result.mean},
                    {"stderr", result.stderr_},
                    {"n_seeds", result.per_seed.size()}};
    return j;
}

inline std::string regret_csv(const ExperimentResult& result) {
    std::string out = "t,seed,pseudo_regret\n";
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        for (const auto& traj : result.per_seed) {
            if (c >= traj.pseudo_regret.size()) continue;
            out += std::to_string(result.checkpoints[c]);
            out += ',';
            out += std::to_string(traj.seed);
            out += ',';
            out += format_double(traj.pseudo_regret[c]);
            out += '\n';
        }
    }
    return out;
}

inline std::string summary_csv(const ExperimentResult& result) {
    std::string out = "t,mean,stderr,n_seeds\n";
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        out += std::to_string(result.checkpoints[c]);
        out += ',';
        out += format_double(result.mean[c]);
        out += ',';
        out += format_double(result.stderr_[c]);
        out += ',';
        out += std::to_string(result.per_seed.size());
        out += '\n';
    }
    return out;
}

inline void emit(const ExperimentResult& result, const ExperimentConfig& cfg,
                 const std::string& dir) {
    ensure_writable_dir(dir);
    namespace fs = std::filesystem;
    write_file_atomic((fs::path(dir) / "regret.csv").string(), regret_csv(result));
    write_file_atomic((fs::path(dir) / "summary.csv").string(), summary_csv(result));
    write_file_atomic((fs::path(dir) / "result.json").string(),
                      result_to_json(result, cfg).dump(2) + "\n");

    nlohmann::ordered_json timing;
    timing["wall_seconds_per_seed"] = nlohmann::ordered_json::array();
    for (const auto& traj : result.per_seed) {
        timing["wall_seconds_per_seed"].push_back(traj.wall_seconds);
    }
    write_file_atomic((fs::path(dir) / "timing.json").string(), timing.dump(2) + "\n");
}

}  // namespace icb
