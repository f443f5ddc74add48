// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/ao.hpp"
#include "risee/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risee {

// One experiment: sweep a scalar parameter over a sorted grid for a set of
// architectures, averaging the achieved min-EE over paired Monte Carlo
// trials. Channels depend only on (seed, trial), so every cell at the same
// trial index consumes the identical realization.
struct SweepSpec {
    std::string param = "P_t";          // P_t | P_risn_dBm | P_risn | N | P
    std::vector<double> values;
    std::vector<Architecture> archs;
    Scenario base;
    int trials = 50;
    int threads = 1;
};

struct SweepCell {
    Architecture arch = Architecture::NoRIS;
    double value = 0.0;
    double mean_min_ee = 0.0;           // over successful trials only
    double stderr_mean = 0.0;           // sample standard error of the mean
    int ok = 0;                          // successful trials
    int failures = 0;                    // cap/infeasible/exception, excluded
    std::vector<double> trial_min_ee;    // per trial; NaN marks a failure
    std::vector<std::uint64_t> channel_hashes; // per trial
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepCell> cells; // architecture-major, grid order within
};

// Return a copy of base with the swept parameter and architecture applied.
// Throws std::invalid_argument for an unknown parameter name.
Scenario apply_param(const Scenario& base, const std::string& param, double value,
                     Architecture arch);

// Run all (arch, value, trial) tasks on spec.threads workers. Results land in
// preallocated per-task slots and are reduced in index order, so the output
// is bit-identical for any thread count.
SweepResult run_sweep(const SweepSpec& spec);

// CSV with header arch,param,value,mean_min_ee,stderr,trials,failures and one
// row per cell at 12 significant digits.
std::string csv_text(const SweepResult& result);

struct CsvRow {
    std::string arch;
    std::string param;
    double value = 0.0;
    double mean_min_ee = 0.0;
    double stderr_mean = 0.0;
    int trials = 0;
    int failures = 0;
};
std::vector<CsvRow> parse_csv_text(const std::string& text);

// Writes <dir>/ee_vs_<param>.csv, <dir>/provenance.json (full per-trial
// values, hashes, and the base scenario), and <dir>/plot.gp (gnuplot script
// rendering mean-vs-parameter curves with error bars from the CSV).
// Returns the CSV path.
std::string write_outputs(const SweepResult& result, const std::string& dir);

// Experiment presets matching the reported operating points: fig1 sweeps the
// static power P_t over 1..10 W at N=20 elements and 1 dBm per-element
// power; fig2 sweeps the per-element power over -10..20 dBm at N=40 and
// P_t = 3 W. Both use all four architectures and 50 paired trials.
SweepSpec fig1_preset();
SweepSpec fig2_preset();

} // namespace risee
