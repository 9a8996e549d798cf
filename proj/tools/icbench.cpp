// icbench: run seeded bandit experiments, verify the per-step identities,
// and report regret scaling across horizons.
//
// Exit codes: 0 success, 1 configuration error, 2 run failure (invariant
// breach in strict mode, or failed verification checks), 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icb/harness/emit.hpp"
#include "icb/harness/runner.hpp"
#include "icb/harness/verify.hpp"
#include "icb/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRunFailure = 2;
constexpr int kExitIo = 3;

struct RunOverrides {
    std::int64_t seeds = -1;
    std::int64_t base_seed = -1;
    std::int64_t threads = -1;
    std::string out_dir;
    std::string mode;
    std::int64_t horizon = -1;
};

void apply_overrides(icb::ExperimentConfig& cfg, const RunOverrides& o) {
    if (o.seeds >= 0) cfg.run.values["seeds"] = std::to_string(o.seeds);
    if (o.base_seed >= 0) cfg.run.values["base_seed"] = std::to_string(o.base_seed);
    if (o.threads >= 0) cfg.run.values["threads"] = std::to_string(o.threads);
    if (o.horizon >= 0) cfg.run.values["horizon"] = std::to_string(o.horizon);
    if (!o.mode.empty()) cfg.run.values["mode"] = o.mode;
    if (!o.out_dir.empty()) cfg.output.values["dir"] = o.out_dir;
}

int do_run(const std::string& config_path, const RunOverrides& overrides) {
    icb::ExperimentConfig cfg = icb::parse_config_file(config_path);
    apply_overrides(cfg, overrides);

    const std::string out_dir = cfg.out_dir();
    if (!out_dir.empty()) icb::ensure_writable_dir(out_dir);

    icb::ExperimentResult result = icb::run(cfg);
    if (!out_dir.empty()) icb::emit(result, cfg, out_dir);

    std::cout << result.algorithm_id << " on " << result.environment_id
              << ", T=" << result.horizon << ", seeds=" << result.per_seed.size()
              << ": mean pseudo-regret " << result.final_mean_regret() << "\n";
    std::int64_t breaches = 0;
    for (const auto& s : result.per_seed) breaches += static_cast<std::int64_t>(s.breaches.size());
    if (breaches > 0) {
        std::cout << "validity breaches recorded: " << breaches << "\n";
    }
    if (result.any_failed()) {
        for (const auto& s : result.per_seed) {
            if (s.failed) {
                std::cerr << "seed " << s.seed << " failed: " << s.fail_reason << "\n";
            }
        }
        return kExitRunFailure;
    }
    return kExitOk;
}

int do_verify(const std::vector<std::string>& suites, const std::string& json_out,
              const icb::VerifyOptions& opt) {
    std::vector<std::string> selected = suites.empty() ? icb::all_suites() : suites;
    std::vector<icb::SuiteResult> results;
    bool all_pass = true;
    for (const auto& name : selected) {
        icb::SuiteResult r = icb::run_suite(name, opt);
        for (const auto& c : r.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << c.name;
            if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        }
        all_pass = all_pass && r.pass();
        results.push_back(std::move(r));
    }
    if (!json_out.empty()) {
        icb::write_file_atomic(json_out, icb::suites_to_json(results).dump(2) + "\n");
    }
    return all_pass ? kExitOk : kExitRunFailure;
}

int do_scale(const std::string& config_path, const std::vector<std::int64_t>& horizons,
             const RunOverrides& overrides) {
    if (horizons.size() < 2) {
        throw icb::ConfigError("scale needs at least two horizons");
    }
    std::vector<icb::ExperimentResult> results;
    for (std::int64_t horizon : horizons) {
        icb::ExperimentConfig cfg = icb::parse_config_file(config_path);
        RunOverrides o = overrides;
        o.horizon = horizon;
        o.out_dir.clear();
        apply_overrides(cfg, o);
        results.push_back(icb::run(cfg));
        if (results.back().any_failed()) {
            std::cerr << "run at T=" << horizon << " failed\n";
            return kExitRunFailure;
        }
        if (!overrides.out_dir.empty()) {
            const auto dir =
                (std::filesystem::path(overrides.out_dir) / ("T" + std::to_string(horizon)))
                    .string();
            icb::emit(results.back(), cfg, dir);
        }
    }
    icb::ScalingReport rep = icb::scaling_report(results);
    for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
        std::cout << "T=" << rep.horizons[i] << ": mean pseudo-regret "
                  << rep.final_mean_regret[i] << "\n";
    }
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
        std::cout << "ratio R(T=" << rep.horizons[i + 1] << ")/R(T=" << rep.horizons[i]
                  << ") = " << rep.ratios[i] << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(icb::kVersionString) +
                 " - incentive-compatible bandit benchmark harness"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    std::string run_config;
    RunOverrides run_overrides;
    run_cmd->add_option("config", run_config, "config file")->required();
    run_cmd->add_option("--seeds", run_overrides.seeds, "number of seeds");
    run_cmd->add_option("--base-seed", run_overrides.base_seed, "base seed");
    run_cmd->add_option("--threads", run_overrides.threads, "worker threads");
    run_cmd->add_option("--out", run_overrides.out_dir, "output directory");
    run_cmd->add_option("--mode", run_overrides.mode, "strict|scan")
        ->check(CLI::IsMember({"strict", "scan"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run oracle suites");
    std::vector<std::string> suites;
    std::string json_out;
    icb::VerifyOptions vopt;
    vopt.threads = 2;
    // CLI defaults are sized for a quick check; the acceptance test binary
    // runs the full battery.
    vopt.simplex_steps = 20000;
    vopt.simplex_seeds = 10;
    verify_cmd->add_option("--suite", suites,
                           "suite selection (moments, ts-moments, affinity, ts-validity, "
                           "perturbation, simplex); default all");
    verify_cmd->add_option("--algorithms", vopt.algorithms,
                           "restrict affinity/simplex suites to these rule ids")
        ->delimiter(',');
    verify_cmd->add_option("--json", json_out, "write a JSON report here");
    verify_cmd->add_option("--cases", vopt.moment_cases, "cases for the moment suites");
    verify_cmd->add_option("--affinity-states", vopt.affinity_states, "fuzzed states per rule");
    verify_cmd->add_option("--simplex-steps", vopt.simplex_steps, "steps per fuzz run");
    verify_cmd->add_option("--simplex-seeds", vopt.simplex_seeds, "fuzz runs per (rule, K)");
    verify_cmd->add_option("--threads", vopt.threads, "worker threads");
    verify_cmd->add_option("--seed", vopt.seed, "battery seed");

    // scale
    auto* scale_cmd = app.add_subcommand("scale", "regret scaling across horizons");
    std::string scale_config;
    std::vector<std::int64_t> horizons;
    RunOverrides scale_overrides;
    scale_cmd->add_option("config", scale_config, "config file")->required();
    scale_cmd->add_option("--horizons", horizons, "comma-separated horizons")
        ->required()
        ->delimiter(',');
    scale_cmd->add_option("--seeds", scale_overrides.seeds, "number of seeds");
    scale_cmd->add_option("--base-seed", scale_overrides.base_seed, "base seed");
    scale_cmd->add_option("--threads", scale_overrides.threads, "worker threads");
    scale_cmd->add_option("--out", scale_overrides.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        vopt.ts_moment_cases = vopt.moment_cases;
        vopt.perturbation_cases = vopt.moment_cases;
        if (run_cmd->parsed()) return do_run(run_config, run_overrides);
        if (verify_cmd->parsed()) return do_verify(suites, json_out, vopt);
        if (scale_cmd->parsed()) return do_scale(scale_config, horizons, scale_overrides);
    } catch (const icb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const icb::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const icb::SimplexBreachError& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return kExitRunFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    return kExitOk;
}
