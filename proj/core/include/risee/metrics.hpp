// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/channel.hpp"
#include "risee/ris.hpp"
#include "risee/scenario.hpp"

#include <vector>

namespace risee {

// Evaluation of one (w, psi) operating point.
struct EEReport {
    Vec rates;                  // bit/channel use, per user
    Vec ees;                    // bit/channel use/W, per user
    double min_ee = 0.0;        // min over ees (the design objective)
    double min_rate_slack = 0.0;// min_l (rate_l - r_th_l)
    double power_used = 0.0;    // sum_l ||w_l||^2
    double gp_slack = 0.0;      // passivity slack at the incident covariance of w
    std::vector<double> trace;  // optimizer objective history, if any
};

// Treating user l as signal and all others as interference:
// rate = log2(1 + |h_l w_l|^2 / (sigma2 + sum_{j != l} |h_l w_j|^2)).
// h rows are per-user effective channels (L x K), w columns beamformers (K x L).
double user_rate(const CMat& h, const CMat& w, double sigma2, int l);

// rate / (P_c + beta ||w_l||^2); throws if the denominator is not positive.
double user_ee(double rate, const CVec& w_l, double beta, double p_c);

// Full report for beamformers w against the surface state. P_c comes from
// derived_static_power(s), so s.architecture should match state.arch.
EEReport evaluate(const ChannelSet& cs, const RisState& state, const CMat& w, const Scenario& s);

} // namespace risee
