// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/channel.hpp"
#include "risee/metrics.hpp"
#include "risee/ris.hpp"
#include "risee/scenario.hpp"
#include "risee/steps.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risee {

// One row of the outer-loop trace. Iteration 0 is the initial point. eta is
// the running maximum of the achieved true min-EE (never decreasing);
// beam_eta is the surrogate ratio the Dinkelbach step certified that
// iteration, kept for diagnostics.
struct AoRecord {
    int iteration = 0;
    double min_ee = 0.0;
    double eta = 0.0;
    double beam_eta = 0.0;
    double gp_slack = 0.0;
    double min_rate_slack = 0.0;
    bool beam_accepted = false;
    bool psi_accepted = false;
};

enum class AoStatus { converged, iteration_cap, infeasible };

struct AoResult {
    CMat w;
    RisState state;
    EEReport report;
    std::vector<AoRecord> trace;
    int iterations = 0;
    AoStatus status = AoStatus::iteration_cap;
    std::string note;
};

// Identity surface for the RIS architectures (unit modulus, symmetric, zero
// passivity slack), zero for NoRIS.
RisState initial_state(const Scenario& s);

// Matched filter toward each user's effective channel with an equal power
// split; a unit vector stands in for a numerically zero channel.
CMat matched_filter_init(const ChannelSet& cs, const CMat& psi, const Scenario& s);

// Renormalize a relaxed diagonal to exact unit modulus (zero entries map to
// 1), then keep the better of (normalized, previous) under the true min-EE.
RisState lpd_repair(const CVec& psi_diag_relaxed, const RisState& prev, const ChannelSet& cs,
                    const CMat& w, const Scenario& s);

// Full outer loop: initialize, restore rate feasibility if thresholds are
// violated at the start, then alternate beamformer and surface updates with
// an accept-if-not-worse safeguard until the min-EE change falls below
// algo.ao_tol (relative) or the iteration cap.
AoResult ao_run(const ChannelSet& cs, const Scenario& s, std::ostream* trace_log = nullptr);

} // namespace risee
