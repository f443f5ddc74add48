// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/types.hpp"

namespace risee {

// Real stackings shared by surrogate gradients and the convex engine.
//
// Beamformers (K x L): user j occupies the 2K block starting at 2K*j,
// real parts first, imaginary parts second.
// Surface matrices (N x N): column-major real parts of all entries, then
// column-major imaginary parts, total length 2N^2.

inline Vec pack_w(const CMat& w) {
    const Eigen::Index K = w.rows(), L = w.cols();
    Vec x(2 * K * L);
    for (Eigen::Index j = 0; j < L; ++j) {
        x.segment(2 * K * j, K) = w.col(j).real();
        x.segment(2 * K * j + K, K) = w.col(j).imag();
    }
    return x;
}

inline CMat unpack_w(const Vec& x, Eigen::Index K, Eigen::Index L) {
    CMat w(K, L);
    for (Eigen::Index j = 0; j < L; ++j)
        w.col(j) = x.segment(2 * K * j, K) + cxd(0, 1) * x.segment(2 * K * j + K, K);
    return w;
}

inline Vec pack_psi(const CMat& psi) {
    const Eigen::Index n2 = psi.size();
    Vec x(2 * n2);
    x.head(n2) = Eigen::Map<const Vec>(reinterpret_cast<const double*>(psi.data()), 2 * n2)
                     (Eigen::seqN(0, n2, 2));
    x.tail(n2) = Eigen::Map<const Vec>(reinterpret_cast<const double*>(psi.data()), 2 * n2)
                     (Eigen::seqN(1, n2, 2));
    return x;
}

inline CMat unpack_psi(const Vec& x, Eigen::Index N) {
    CMat psi(N, N);
    const Eigen::Index n2 = N * N;
    for (Eigen::Index i = 0; i < n2; ++i) psi.data()[i] = cxd(x(i), x(n2 + i));
    return psi;
}

} // namespace risee
