// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/types.hpp"

#include <string>

namespace risee {

// Scattering matrix of the surface plus the architecture it must satisfy.
// NoRIS uses psi = 0. Diagonal architectures keep exact zeros off-diagonal.
struct RisState {
    CMat psi;
    Architecture arch = Architecture::LPD;
    double feas_tol = 1e-8;
};

// Covariance of the signal incident on the surface, R = sum_l (F w_l)(F w_l)^H.
// Hermitian positive semidefinite by construction.
struct IncidentCovariance {
    CMat R;
};

// w columns are per-user beamformers (K x L).
IncidentCovariance incident_covariance(const CMat& F, const CMat& w);

// Global-passivity slack tr(R (Psi^H Psi - I)); feasible when <= 0.
// Equals sum_l (||Psi F w_l||^2 - ||F w_l||^2), i.e. reflected minus incident
// power, so it is invariant under unitary left-multiplication of Psi.
double gp_slack(const IncidentCovariance& cov, const CMat& psi);

struct CertifyReport {
    bool pass = false;
    std::string worst;          // description of the worst violated quantity
    double offdiag_max = 0.0;   // largest |off-diagonal| (diagonal architectures)
    double modulus_dev = 0.0;   // max | |psi_nn| - 1 | (LPD)
    double asymmetry = 0.0;     // max |psi - psi^T| entry (GPBD)
    double gp_rel_slack = 0.0;  // gp_slack / tr(R) when tr(R) > 0 (GPD, GPBD)
    double zero_dev = 0.0;      // max |psi| entry (NoRIS)
};

// Check psi against its architecture's feasibility set:
//   NoRIS: psi == 0
//   LPD:   diagonal with exact off-diagonal zeros, | |psi_nn| - 1 | <= feas_tol
//   GPD:   diagonal with exact off-diagonal zeros, gp_slack <= feas_tol*tr(R)
//   GPBD:  symmetric within 1e-12, gp_slack <= feas_tol*tr(R)
// With tr(R) = 0 (no incident power) any psi is globally passive.
CertifyReport certify(const RisState& state, const IncidentCovariance& cov);

} // namespace risee
