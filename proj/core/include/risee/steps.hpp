// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/channel.hpp"
#include "risee/maxmin.hpp"
#include "risee/ris.hpp"
#include "risee/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risee {

// One beamformer block update: majorize the rates at w_start, then run the
// generalized Dinkelbach iteration on the surrogate max-min EE problem
// (power budget, surrogate rate thresholds, and a convexified global-passivity
// cut when the current Psi amplifies some incident direction).
struct BeamStepResult {
    CMat w;                          // candidate beamformers (w_start on failure)
    double eta = 0.0;                // best surrogate min-EE ratio reached
    int gda_iterations = 0;
    bool ok = false;                 // a certified candidate was produced
    bool certified = false;          // |last parametric optimum| <= gda_tol
    std::vector<double> eta_history; // ratio parameter per GDA iteration
    std::vector<double> value_history; // parametric optimum per GDA iteration
    std::string note;
};

BeamStepResult dinkelbach_beam_step(const ChannelSet& cs, const RisState& state,
                                    const CMat& w_start, const Scenario& s,
                                    std::ostream* trace = nullptr);

// One RIS block update with the beamformers held fixed. EE denominators are
// constants here, so the surrogate problem is a plain max-min solve. For LPD
// the returned diagonal may sit slightly inside the unit circle; the caller
// renormalizes. For GPBD the search runs in a reduced coordinate space (see
// steps.cpp) and the returned matrix is symmetric and certified.
struct PsiStepResult {
    RisState state;
    bool ok = false;
    SolveDiagnostics diag;
    std::string note;
};

PsiStepResult solve_psi_step(const ChannelSet& cs, const RisState& state, const CMat& w,
                             const Scenario& s, std::ostream* trace = nullptr);

} // namespace risee
