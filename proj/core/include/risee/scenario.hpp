// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/types.hpp"

#include <cstdint>
#include <vector>

namespace risee {

// Planar node placement used by the channel synthesizer. Distances are in
// meters; the BS-RIS distance must be nonzero so the path-loss law is finite.
struct Geometry {
    double bs_x = 0.0, bs_y = 0.0;           // base station
    double ris_x = 50.0, ris_y = 0.0;        // reflecting surface
    double user_cx = 60.0, user_cy = 10.0;   // center of the user disk
    double user_radius = 10.0;               // users drawn uniformly in this disk
};

// Distance-based path loss, PL(d)[dB] = ref_db + exp_db*log10(d), with
// separate exponents for the two RIS segments and the direct link. Channels
// are noise-normalized at synthesis: the direct link is divided by the full
// noise floor and each RIS segment by its square root, so every physical path
// is normalized exactly once and sigma2 = 1 is a consistent default.
struct Pathloss {
    double ref_db = 35.0;
    double ris_exp_db = 22.0;     // BS-RIS and RIS-user segments
    double direct_exp_db = 37.0;  // BS-user link
    double noise_floor_dbw = -100.0;
};

// Solver tolerances and iteration caps. These are deliberate defaults; the
// acceptance suite pins its thresholds against them.
struct AlgoParams {
    double ao_tol = 1e-5;      // relative min-EE change that ends the outer loop
    int ao_max_iter = 100;     // outer alternating-optimization cap
    double gda_tol = 1e-7;     // Dinkelbach termination on the parametric value
    int gda_max_iter = 50;     // Dinkelbach iteration cap
    double feas_tol = 1e-8;    // feasibility certification tolerance
    double stat_tol = 1e-6;    // barrier duality-gap target
    double lpd_epsilon = 0.01; // relaxation margin of the linearized unit-modulus cut
};

// Full description of one optimization instance.
//
// Configuration documents are JSON objects whose keys match the field names
// below. Scalars: K, L, N, P, sigma2, beta, P_t, P_ris0, P_risn,
// rician_kappa, seed, architecture ("NoRIS"|"LPD"|"GPD"|"GPBD").
// r_th accepts a scalar (broadcast to all users) or an array of length L.
// dB-suffixed aliases P_dB (budget over sigma2) and P_risn_dBm are converted
// at load time. geometry/pathloss/algo are nested objects with the field
// names of the structs above. Unknown keys are rejected, with the offending
// key named in the error.
struct Scenario {
    int K = 5;                   // transmit antennas
    int L = 5;                   // single-antenna users
    int N = 20;                  // reflecting elements
    double P = 10.0;             // transmit power budget [W]
    double sigma2 = 1.0;         // noise power [W]
    double beta = 1.0;           // power-amplifier inefficiency
    double P_t = 3.0;            // per-user static power (BS share + UE) [W]
    double P_ris0 = 0.01;        // RIS static power [W]
    double P_risn = dbm_to_watt(1.0); // per-element (or per-interconnect) power [W]
    std::vector<double> r_th;    // per-user rate thresholds [bit/use]; empty = zeros
    double rician_kappa = 3.0;   // Rician factor of the RIS segments
    Architecture architecture = Architecture::LPD;
    std::uint64_t seed = 1;
    Geometry geometry;
    Pathloss pathloss;
    AlgoParams algo;
};

// Parse and validate a JSON configuration document. An empty object yields
// the defaults above. Throws std::invalid_argument naming the offending key.
Scenario load_scenario(const std::string& json_text);

// Convenience wrapper reading the document from disk.
Scenario load_scenario_file(const std::string& path);

// Validate invariants (dimensions positive, powers nonnegative, finite
// thresholds, usable geometry). load_scenario calls this; call it again after
// mutating a Scenario by hand. Throws std::invalid_argument.
void validate(const Scenario& s);

// Per-user static power P_c = P_t + P_RIS/L, where the RIS term depends on
// the architecture: diagonal surfaces pay per element, the beyond-diagonal
// surface pays per interconnect of its fully-connected network (N(N-1)/2),
// and NoRIS pays nothing.
double derived_static_power(const Scenario& s);

// Rate thresholds with the empty-default expanded to zeros(L).
std::vector<double> expanded_thresholds(const Scenario& s);

// Serialize (round-trippable through load_scenario); used for provenance.
std::string to_json(const Scenario& s);

} // namespace risee
