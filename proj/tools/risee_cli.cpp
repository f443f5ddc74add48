// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links
//
// Command line front end: `risee run` optimizes a single scenario and prints
// a JSON report; `risee sweep` drives the Monte Carlo harness and writes
// CSV + provenance + plot script into an output directory.

#include "risee/ao.hpp"
#include "risee/channel.hpp"
#include "risee/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

risee::Scenario load_or_default(const std::string& path) {
    if (path.empty()) return risee::Scenario{};
    return risee::load_scenario_file(path);
}

const char* status_name(risee::AoStatus st) {
    switch (st) {
        case risee::AoStatus::converged: return "converged";
        case risee::AoStatus::iteration_cap: return "iteration_cap";
        case risee::AoStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

int cmd_run(const std::string& config, const std::string& arch, std::uint64_t trial,
            std::int64_t seed, const std::string& dump_path, bool verbose) {
    risee::Scenario s = load_or_default(config);
    if (!arch.empty()) s.architecture = risee::architecture_from_string(arch);
    if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
    risee::validate(s);

    const risee::ChannelSet cs = risee::draw_channels(s, trial);
    if (!dump_path.empty()) risee::dump_channels(dump_path, {cs});

    const risee::AoResult r = risee::ao_run(cs, s, verbose ? &std::cerr : nullptr);

    nlohmann::json j;
    j["architecture"] = risee::to_string(s.architecture);
    j["trial"] = trial;
    j["status"] = status_name(r.status);
    j["iterations"] = r.iterations;
    j["min_ee"] = r.report.min_ee;
    j["ees"] = std::vector<double>(r.report.ees.data(), r.report.ees.data() + r.report.ees.size());
    j["rates"] =
        std::vector<double>(r.report.rates.data(), r.report.rates.data() + r.report.rates.size());
    j["power_used"] = r.report.power_used;
    j["gp_slack"] = r.report.gp_slack;
    j["min_rate_slack"] = r.report.min_rate_slack;
    j["objective_trace"] = r.report.trace;
    if (!r.note.empty()) j["note"] = r.note;
    std::cout << j.dump(2) << std::endl;
    return r.status == risee::AoStatus::infeasible ? 2 : 0;
}

int cmd_sweep(const std::string& preset, const std::string& config, const std::string& param,
              const std::vector<double>& values, const std::string& archs_csv, int trials,
              int threads, std::int64_t seed, const std::string& out_dir, bool verbose) {
    risee::SweepSpec spec;
    if (preset == "fig1") {
        spec = risee::fig1_preset();
    } else if (preset == "fig2") {
        spec = risee::fig2_preset();
    } else if (!preset.empty()) {
        std::cerr << "unknown preset '" << preset << "' (expected fig1 or fig2)\n";
        return 1;
    }
    if (!config.empty()) spec.base = risee::load_scenario_file(config);
    if (!param.empty()) spec.param = param;
    if (!values.empty()) spec.values = values;
    if (!archs_csv.empty()) {
        spec.archs.clear();
        std::istringstream is(archs_csv);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) spec.archs.push_back(risee::architecture_from_string(tok));
    }
    if (spec.values.empty() || spec.archs.empty()) {
        std::cerr << "sweep needs --preset or both --param/--values (plus --archs)\n";
        return 1;
    }
    if (trials > 0) spec.trials = trials;
    if (threads > 0) spec.threads = threads;
    if (seed >= 0) spec.base.seed = static_cast<std::uint64_t>(seed);

    if (verbose)
        std::cerr << "sweep " << spec.param << " over " << spec.values.size() << " values, "
                  << spec.archs.size() << " architectures, " << spec.trials << " trials, "
                  << spec.threads << " threads\n";
    const risee::SweepResult result = risee::run_sweep(spec);
    const std::string csv = risee::write_outputs(result, out_dir);
    std::cout << csv << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"max-min energy efficiency simulator for RIS-aided MISO broadcast links"};
    app.require_subcommand(1);

    std::string config, arch, dump_path, preset, param, archs_csv, out_dir = "out";
    std::vector<double> values;
    std::uint64_t trial = 0;
    std::int64_t seed = -1;
    int trials = 0, threads = 0;
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "progress log on stderr");

    auto* run = app.add_subcommand("run", "optimize one scenario and print a JSON report");
    run->add_option("--config", config, "scenario JSON file (defaults apply when omitted)");
    run->add_option("--arch", arch, "architecture override: NoRIS|LPD|GPD|GPBD");
    run->add_option("--trial", trial, "Monte Carlo trial index");
    run->add_option("--seed", seed, "seed override");
    run->add_option("--dump-channels", dump_path, "write the drawn channels to this file");

    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep and write CSV outputs");
    sweep->add_option("--preset", preset, "fig1 (vs P_t) or fig2 (vs per-element power)");
    sweep->add_option("--config", config, "base scenario JSON file");
    sweep->add_option("--param", param, "swept parameter: P_t|P_risn_dBm|P_risn|N|P");
    sweep->add_option("--values", values, "grid values (ascending)")->delimiter(',');
    sweep->add_option("--archs", archs_csv, "comma-separated architecture list");
    sweep->add_option("--trials", trials, "Monte Carlo trials per cell");
    sweep->add_option("--threads", threads, "worker threads");
    sweep->add_option("--seed", seed, "seed override");
    sweep->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config, arch, trial, seed, dump_path, verbose);
        return cmd_sweep(preset, config, param, values, archs_csv, trials, threads, seed, out_dir,
                         verbose);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
