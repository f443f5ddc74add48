// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/surrogate.hpp"
#include "risee/packing.hpp"

#include <cmath>

namespace risee {

namespace {
constexpr double ln2 = 0.69314718055994530941723212145818;
}

Vec BeamSurrogate::eval(const CMat& w) const {
    const int L = static_cast<int>(h.rows());
    if (w.rows() != h.cols() || w.cols() != L)
        throw std::invalid_argument("BeamSurrogate::eval: beamformer dimensions differ from expansion");
    const CMat s = h * w; // s(l, j) = h_l w_j
    Vec out(L);
    for (int l = 0; l < L; ++l) {
        const double lin = 2.0 * std::real(std::conj(xbar(l)) * s(l, l)) / D(l);
        const double pow_all = s.row(l).squaredNorm();
        out(l) = r_ref_bits(l) + (-a(l) + lin - q(l) * (sigma2 + pow_all)) / ln2;
    }
    return out;
}

Vec BeamSurrogate::gradient(int l, const CMat& w) const {
    const Eigen::Index K = h.cols(), L = h.rows();
    if (l < 0 || l >= L) throw std::invalid_argument("BeamSurrogate::gradient: user out of range");
    const CRow hl = h.row(l);
    // complex gradient per user block (d/dRe + i d/dIm), then packed
    CMat gc = CMat::Zero(K, L);
    for (Eigen::Index j = 0; j < L; ++j) {
        const cxd s = hl * w.col(j);
        gc.col(j) = -2.0 * q(l) * s * hl.adjoint();
        if (j == l) gc.col(j) += (2.0 / D(l)) * xbar(l) * hl.adjoint();
    }
    return pack_w(gc) / ln2;
}

BeamSurrogate build_beam_surrogate(const ChannelSet& cs, const CMat& psi, const CMat& w_ref,
                                   double sigma2) {
    const int L = static_cast<int>(cs.f.rows());
    if (w_ref.cols() != L) throw std::invalid_argument("build_beam_surrogate: w_ref needs L columns");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("build_beam_surrogate: sigma2 must be positive");

    BeamSurrogate bs;
    bs.sigma2 = sigma2;
    bs.w_ref = w_ref;
    bs.h.resize(L, cs.F.cols());
    for (int l = 0; l < L; ++l) bs.h.row(l) = effective_channel(cs, psi, l);

    const CMat s = bs.h * w_ref;
    bs.xbar.resize(L);
    bs.D.resize(L);
    bs.a.resize(L);
    bs.q.resize(L);
    bs.r_ref_bits.resize(L);
    for (int l = 0; l < L; ++l) {
        bs.xbar(l) = s(l, l);
        bs.D(l) = sigma2 + s.row(l).squaredNorm() - std::norm(s(l, l));
        bs.a(l) = std::norm(s(l, l)) / bs.D(l);
        bs.q(l) = bs.a(l) / (bs.D(l) + std::norm(s(l, l)));
        bs.r_ref_bits(l) = std::log2(1.0 + bs.a(l));
    }
    return bs;
}

Vec PsiSurrogate::eval(const CMat& psi) const {
    const int L = static_cast<int>(f.rows());
    if (psi.rows() != f.cols() || psi.cols() != f.cols())
        throw std::invalid_argument("PsiSurrogate::eval: psi dimensions differ from expansion");
    const CMat s = f * (psi * U) + d; // s(l, j) = h_l(psi) w_j
    Vec out(L);
    for (int l = 0; l < L; ++l) {
        const double lin = 2.0 * std::real(std::conj(ybar(l)) * s(l, l)) / D(l);
        const double pow_all = s.row(l).squaredNorm();
        out(l) = r_ref_bits(l) + (-b(l) + lin - q(l) * (sigma2 + pow_all)) / ln2;
    }
    return out;
}

Vec PsiSurrogate::gradient(int l, const CMat& psi) const {
    const Eigen::Index L = f.rows();
    if (l < 0 || l >= L) throw std::invalid_argument("PsiSurrogate::gradient: user out of range");
    const CRow fl = f.row(l);
    const CRow s = fl * (psi * U) + d.row(l); // s(j) = h_l(psi) w_j
    // complex gradient matrix: sum_j coeff_j * conj(f_l)^T conj(u_j)^T
    CVec col_weights = -2.0 * q(l) * s.transpose();
    col_weights(l) += (2.0 / D(l)) * ybar(l);
    const CMat gc = fl.adjoint() * (U.conjugate() * col_weights).transpose();
    return pack_psi(gc) / ln2;
}

PsiSurrogate build_psi_surrogate(const ChannelSet& cs, const CMat& psi_ref, const CMat& w,
                                 double sigma2) {
    const int L = static_cast<int>(cs.f.rows());
    if (w.cols() != L) throw std::invalid_argument("build_psi_surrogate: w needs L columns");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("build_psi_surrogate: sigma2 must be positive");

    PsiSurrogate ps;
    ps.sigma2 = sigma2;
    ps.f = cs.f;
    ps.U = cs.F * w;
    ps.d = cs.g * w;
    ps.w_ref = w;

    CMat h(L, cs.F.cols());
    for (int l = 0; l < L; ++l) h.row(l) = effective_channel(cs, psi_ref, l);
    const CMat s = h * w;

    ps.ybar.resize(L);
    ps.D.resize(L);
    ps.b.resize(L);
    ps.q.resize(L);
    ps.r_ref_bits.resize(L);
    for (int l = 0; l < L; ++l) {
        ps.ybar(l) = s(l, l);
        ps.D(l) = sigma2 + s.row(l).squaredNorm() - std::norm(s(l, l));
        ps.b(l) = std::norm(s(l, l)) / ps.D(l);
        ps.q(l) = ps.b(l) / (ps.D(l) + std::norm(s(l, l)));
        ps.r_ref_bits(l) = std::log2(1.0 + ps.b(l));
    }
    return ps;
}

LpdCut lpd_linearized_constraint(const CVec& psi_ref_diag, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("lpd_linearized_constraint: epsilon must lie in (0, 1]");
    return LpdCut{psi_ref_diag, epsilon};
}

} // namespace risee
