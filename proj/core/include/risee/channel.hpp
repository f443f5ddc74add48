// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/scenario.hpp"
#include "risee/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risee {

// One trial's channel realization. Rows of f and g are per-user links.
struct ChannelSet {
    CMat F; // N x K, base station to surface
    CMat f; // L x N, surface to users (row l = user l)
    CMat g; // L x K, direct base station to users
};

// Synthesize the three link groups for (scenario.seed, trial).
//
// The RIS segments are Rician with factor scenario.rician_kappa; the line of
// sight part is the outer product of half-wavelength ULA steering vectors at
// azimuths drawn uniformly in [0, 2pi) from the trial stream. The direct
// links are Rayleigh. Path loss follows scenario.pathloss, noise-normalized
// as documented in Pathloss. Deterministic given (seed, trial); trials are
// order-independent.
ChannelSet draw_channels(const Scenario& s, std::uint64_t trial);

// Effective row channel of user l: h_l(Psi) = f_l * Psi * F + g_l.
// Throws std::invalid_argument on dimension mismatch or l out of range.
CRow effective_channel(const ChannelSet& cs, const CMat& psi, int l);

// ULA steering vector with half-wavelength spacing, entries exp(i*pi*m*sin a).
CVec ula_steering(int m_elements, double azimuth);

// FNV-1a hash over the raw bytes of F, f, g in that order; used by the sweep
// harness to assert that paired trials consume identical channels.
std::uint64_t channel_hash(const ChannelSet& cs);

// Replay file: a text header line "risee-channels v1 trials=T N=n K=k L=l\n"
// followed by tightly packed little-endian float64 pairs (re, im) for each
// record in the order F (row-major), f (row-major), g (row-major).
void dump_channels(const std::string& path, const std::vector<ChannelSet>& sets);
std::vector<ChannelSet> load_channels(const std::string& path);

} // namespace risee
