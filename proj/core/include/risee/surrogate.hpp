// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/channel.hpp"
#include "risee/types.hpp"

namespace risee {

// Concave minorizers of the per-user rates, expanded at the previous block
// iterate. Both surrogates implement the bound
//
//   log(1 + |x|^2/y) >= log(1 + |x0|^2/y0) - g0 + 2 Re{x0^* x}/y0
//                       - g0 * (y + |x|^2) / (y0 + |x0|^2),   g0 = |x0|^2/y0,
//
// applied with x the own-signal term and y the interference-plus-noise power,
// both affine/quadratic in the active block. The bound is tight at the
// expansion point and globally valid, which is what makes the alternating
// updates monotone. Values are returned in bits (log base 2), matching the
// rate metric.

// Minorizer of r_l as a function of the beamformers, channels frozen at the
// expansion surface.
struct BeamSurrogate {
    CMat h;          // L x K effective channels at the expansion surface
    CMat w_ref;      // K x L expansion beamformers
    CVec xbar;       // h_l w_ref,l
    Vec D;           // sigma2 + sum_{j != l} |h_l w_ref,j|^2
    Vec a;           // |xbar|^2 / D (expansion SINR)
    Vec q;           // a / (D + |xbar|^2), weight of the quadratic term
    Vec r_ref_bits;  // rates at the expansion point
    double sigma2 = 1.0;

    // surrogate values (bits) for all users at beamformers w
    Vec eval(const CMat& w) const;
    // gradient of user l's surrogate in the pack_w stacking
    Vec gradient(int l, const CMat& w) const;
};

BeamSurrogate build_beam_surrogate(const ChannelSet& cs, const CMat& psi, const CMat& w_ref,
                                   double sigma2);

// Minorizer of r_l as a function of the surface, beamformers frozen.
struct PsiSurrogate {
    CMat f;          // L x N surface-to-user rows
    CMat U;          // N x L, column j = F w_j
    CMat d;          // L x L direct terms, d(l,j) = g_l w_j
    CMat w_ref;      // the frozen beamformers (K x L)
    CVec ybar;       // h_l(psi_ref) w_l
    Vec D;           // sigma2 + sum_{j != l} |h_l(psi_ref) w_j|^2
    Vec b;           // |ybar|^2 / D
    Vec q;           // b / (D + |ybar|^2)
    Vec r_ref_bits;
    double sigma2 = 1.0;

    Vec eval(const CMat& psi) const;
    // gradient of user l's surrogate in the pack_psi stacking
    Vec gradient(int l, const CMat& psi) const;
};

PsiSurrogate build_psi_surrogate(const ChannelSet& cs, const CMat& psi_ref, const CMat& w,
                                 double sigma2);

// Affine inner cut of the unit-modulus equality for the locally passive
// diagonal surface: 2 Re{psi_ref,n^* psi_n} - |psi_ref,n|^2 >= 1 - epsilon,
// paired with the convex side |psi_n|^2 <= 1. The expansion point satisfies
// the cut with slack epsilon whenever |psi_ref,n| = 1.
struct LpdCut {
    CVec psi_ref; // diagonal of the expansion surface
    double epsilon = 0.01;

    // slack of element n at value psi_n (>= 0 is feasible)
    double slack(int n, cxd psi_n) const {
        const cxd r = psi_ref(n);
        return 2.0 * std::real(std::conj(r) * psi_n) - std::norm(r) - 1.0 + epsilon;
    }
};

LpdCut lpd_linearized_constraint(const CVec& psi_ref_diag, double epsilon);

} // namespace risee
