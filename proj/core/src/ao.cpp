// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/ao.hpp"

#include "risee/maxmin.hpp"
#include "risee/packing.hpp"
#include "risee/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace risee {

namespace {

const double kLn2 = std::log(2.0);

// True-side feasibility check, independent of any solver bookkeeping.
bool point_feasible(const ChannelSet& cs, const RisState& state, const CMat& w,
                    const Scenario& s, const EEReport& rep) {
    if (rep.power_used > s.P * (1.0 + s.algo.feas_tol) + s.algo.feas_tol) return false;
    if (rep.min_rate_slack < -s.algo.feas_tol) return false;
    return certify(state, incident_covariance(cs.F, w)).pass;
}

// Raise min_l (r_l - r_th_l) above zero by repeated surrogate max-min solves
// under the power budget alone. Used only when the matched-filter start
// violates a positive threshold.
bool restore_thresholds(const ChannelSet& cs, const RisState& state, CMat& w, const Scenario& s) {
    const int K = static_cast<int>(cs.F.cols());
    const int L = static_cast<int>(cs.f.rows());
    const int n = 2 * K * L;
    const std::vector<double> rth = expanded_thresholds(s);

    auto true_slack = [&](const CMat& wm) {
        const EEReport rep = evaluate(cs, state, wm, s);
        return rep.min_rate_slack;
    };

    double cur = true_slack(w);
    for (int it = 0; it < 30 && cur < 0.0; ++it) {
        const BeamSurrogate sur = build_beam_surrogate(cs, state.psi, w, s.sigma2);
        MaxMinProblem prob;
        prob.dim = n;
        for (int l = 0; l < L; ++l) {
            ConcaveQuadratic o;
            o.g = Vec::Zero(n);
            o.H = Mat::Zero(n, n);
            o.c = sur.r_ref_bits(l) + (-sur.a(l) - sur.q(l) * s.sigma2) / kLn2 -
                  rth[static_cast<size_t>(l)];
            // own-signal linear term
            const CRow hl = sur.h.row(l);
            for (int k = 0; k < K; ++k) {
                const cxd cc = std::conj(sur.xbar(l)) * hl(k) * (2.0 / (sur.D(l) * kLn2));
                o.g(2 * K * l + k) += cc.real();
                o.g(2 * K * l + K + k) += -cc.imag();
            }
            // quadratic interference terms: -q/ln2 * |h_l w_j|^2 for all j
            for (int j = 0; j < L; ++j) {
                const CMat M = hl.adjoint() * hl; // K x K rank one
                const Mat Mr = M.real();
                const Mat Mi = M.imag();
                const double wgt = -2.0 * sur.q(l) / kLn2;
                o.H.block(2 * K * j, 2 * K * j, K, K) += wgt * Mr;
                o.H.block(2 * K * j + K, 2 * K * j + K, K, K) += wgt * Mr;
                o.H.block(2 * K * j, 2 * K * j + K, K, K) += -wgt * Mi;
                o.H.block(2 * K * j + K, 2 * K * j, K, K) += wgt * Mi;
            }
            prob.objectives.push_back(std::move(o));
        }
        ConcaveQuadratic pow;
        pow.c = s.P;
        pow.g = Vec::Zero(n);
        pow.H = -2.0 * Mat::Identity(n, n);
        prob.constraints.push_back(std::move(pow));

        Vec x0 = pack_w(w);
        const double pw = x0.squaredNorm();
        if (!(pw < s.P)) x0 *= std::sqrt((s.P / 2.0) / std::max(pw, 1e-300));
        SolveOptions so;
        so.stat_tol = s.algo.stat_tol;
        so.feas_tol = s.algo.feas_tol;
        const SolveResult r = solve_maxmin(prob, x0, so);
        const CMat cand = unpack_w(r.x, K, L);
        const double slack = true_slack(cand);
        if (slack <= cur + 1e-12) break;
        w = cand;
        cur = slack;
    }
    return cur >= 0.0;
}

// Project an extrapolated surface back onto the architecture's feasible set.
RisState project_surface(const RisState& like, CMat psi, const IncidentCovariance& cov,
                         const Scenario& s) {
    RisState cand = like;
    if (s.architecture == Architecture::LPD) {
        for (Eigen::Index m = 0; m < psi.rows(); ++m) {
            const cxd v = psi(m, m);
            const double mag = std::abs(v);
            psi(m, m) = (mag < 1e-12) ? cxd(1.0, 0.0) : v / mag;
        }
    } else {
        if (s.architecture == Architecture::GPBD)
            psi = 0.5 * (psi + psi.transpose()).eval();
        const double trR = std::real(cov.R.trace());
        if (trR > 0.0) {
            const double slack = gp_slack(cov, psi);
            if (slack > -1e-12 * trR)
                psi *= std::sqrt(std::max(0.0, trR * (1.0 - 1e-10) / (slack + trR)));
        }
    }
    cand.psi = psi;
    return cand;
}

} // namespace

RisState initial_state(const Scenario& s) {
    RisState st;
    st.arch = s.architecture;
    st.feas_tol = s.algo.feas_tol;
    st.psi = (s.architecture == Architecture::NoRIS) ? CMat::Zero(s.N, s.N).eval()
                                                     : CMat::Identity(s.N, s.N).eval();
    return st;
}

CMat matched_filter_init(const ChannelSet& cs, const CMat& psi, const Scenario& s) {
    const int K = static_cast<int>(cs.F.cols());
    const int L = static_cast<int>(cs.f.rows());
    CMat w(K, L);
    const double amp = std::sqrt(s.P / L);
    for (int l = 0; l < L; ++l) {
        const CRow h = effective_channel(cs, psi, l);
        const double mag = h.norm();
        if (mag < 1e-300) {
            w.col(l).setZero();
            w(0, l) = amp;
        } else {
            w.col(l) = amp * h.adjoint() / mag;
        }
    }
    return w;
}

RisState lpd_repair(const CVec& psi_diag_relaxed, const RisState& prev, const ChannelSet& cs,
                    const CMat& w, const Scenario& s) {
    RisState cand = prev;
    CMat psi = CMat::Zero(psi_diag_relaxed.size(), psi_diag_relaxed.size());
    for (Eigen::Index m = 0; m < psi_diag_relaxed.size(); ++m) {
        const cxd v = psi_diag_relaxed(m);
        const double mag = std::abs(v);
        psi(m, m) = (mag < 1e-12) ? cxd(1.0, 0.0) : v / mag;
    }
    cand.psi = psi;
    const double before = evaluate(cs, prev, w, s).min_ee;
    const double after = evaluate(cs, cand, w, s).min_ee;
    return (after >= before) ? cand : prev;
}

AoResult ao_run(const ChannelSet& cs, const Scenario& s, std::ostream* log) {
    AoResult out;
    int it0 = 0;

    // The phase-only feasible set is the passivity boundary restricted to
    // unit-modulus diagonals, so its solution is a valid GPD point. Running
    // that search to convergence first and then releasing the moduli avoids
    // the interior stationary points the ball geometry falls into when both
    // degrees of freedom move from the start; it also makes the GPD result
    // never worse than the LPD result on the same channels.
    if (s.architecture == Architecture::GPD) {
        Scenario sub = s;
        sub.architecture = Architecture::LPD;
        AoResult pre = ao_run(cs, sub, log);
        if (pre.status != AoStatus::infeasible) {
            out.state = pre.state;
            out.state.arch = Architecture::GPD;
            out.w = pre.w;
            out.trace = pre.trace;
            it0 = pre.iterations;
            out.iterations = it0;
            out.note = "continued from the phase-only solution";
        }
    }

    EEReport rep;
    if (out.w.size() == 0) {
        out.state = initial_state(s);
        out.w = matched_filter_init(cs, out.state.psi, s);

        rep = evaluate(cs, out.state, out.w, s);
        if (rep.min_rate_slack < -s.algo.feas_tol) {
            if (!restore_thresholds(cs, out.state, out.w, s)) {
                out.status = AoStatus::infeasible;
                out.note = "rate thresholds unreachable from the initial point";
                out.report = evaluate(cs, out.state, out.w, s);
                return out;
            }
        }
        rep = evaluate(cs, out.state, out.w, s);
        out.trace.push_back({0, rep.min_ee, std::max(0.0, rep.min_ee), 0.0, rep.gp_slack,
                             rep.min_rate_slack, false, false});
    } else {
        rep = evaluate(cs, out.state, out.w, s);
    }

    double cur = rep.min_ee;
    double eta_run = std::max(0.0, cur);
    out.report = rep;

    CMat w_prev_start = out.w;
    CMat psi_prev_start = out.state.psi;

    for (int m = it0 + 1; m <= it0 + s.algo.ao_max_iter; ++m) {
        const double prev = cur;
        const CMat w_iter_start = out.w;
        const CMat psi_iter_start = out.state.psi;
        AoRecord rec;
        rec.iteration = m;

        BeamStepResult bs = dinkelbach_beam_step(cs, out.state, out.w, s);
        rec.beam_eta = bs.eta;
        if (bs.ok) {
            const EEReport cand = evaluate(cs, out.state, bs.w, s);
            if (point_feasible(cs, out.state, bs.w, s, cand) &&
                cand.min_ee >= cur - 1e-12 * std::max(1.0, std::abs(cur))) {
                out.w = bs.w;
                rep = cand;
                cur = rep.min_ee;
                rec.beam_accepted = true;
            }
        }

        if (s.architecture != Architecture::NoRIS) {
            const CMat psi_before = out.state.psi;
            PsiStepResult ps = solve_psi_step(cs, out.state, out.w, s);
            if (ps.ok) {
                RisState cand_state = (s.architecture == Architecture::LPD)
                                          ? lpd_repair(ps.state.psi.diagonal(), out.state, cs,
                                                       out.w, s)
                                          : ps.state;
                const EEReport cand = evaluate(cs, cand_state, out.w, s);
                if (point_feasible(cs, cand_state, out.w, s, cand) &&
                    cand.min_ee >= cur - 1e-12 * std::max(1.0, std::abs(cur))) {
                    out.state = cand_state;
                    rep = cand;
                    cur = rep.min_ee;
                    rec.psi_accepted = true;
                }
            } else if (log) {
                *log << "iter " << m << " surface step skipped: " << ps.note << "\n";
            }

            // The passivity-ball step alone tends to settle into interior
            // stationary points that a unit-modulus search escapes: the
            // normalize-after-solve jump is not an ascent step of the ball
            // geometry and reaches basins the minorizer cannot. Every
            // unit-modulus diagonal is on the passivity boundary, so for GPD
            // the cut-based step is a legal second proposal; the better of
            // the two (by true objective) wins the iteration.
            if (s.architecture == Architecture::GPD) {
                RisState tmp = out.state;
                tmp.arch = Architecture::LPD;
                for (Eigen::Index d = 0; d < tmp.psi.rows(); ++d) {
                    const double mag = std::abs(tmp.psi(d, d));
                    tmp.psi(d, d) = (mag < 1e-12) ? cxd(1.0, 0.0) : tmp.psi(d, d) / mag;
                }
                PsiStepResult ps2 = solve_psi_step(cs, tmp, out.w, s);
                if (ps2.ok) {
                    const RisState cand_state =
                        lpd_repair(ps2.state.psi.diagonal(), out.state, cs, out.w, s);
                    const EEReport cand = evaluate(cs, cand_state, out.w, s);
                    if (point_feasible(cs, cand_state, out.w, s, cand) && cand.min_ee > cur) {
                        out.state = cand_state;
                        rep = cand;
                        cur = rep.min_ee;
                        rec.psi_accepted = true;
                    }
                }
            }

            // The minorizer steps are short but persistently aligned, so a
            // doubling line search along the last surface move often covers
            // many of them at once. Candidates are projected back onto the
            // feasible set and kept only if the true objective improves, so
            // the monotone guarantee is untouched.
            const CMat delta = out.state.psi - psi_before;
            if (rec.psi_accepted && delta.norm() > 0.0) {
                const IncidentCovariance cov = incident_covariance(cs.F, out.w);
                const CMat base = out.state.psi;
                for (double gamma : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                    const RisState cand_state =
                        project_surface(out.state, base + gamma * delta, cov, s);
                    const EEReport cand = evaluate(cs, cand_state, out.w, s);
                    if (!point_feasible(cs, cand_state, out.w, s, cand) || cand.min_ee <= cur)
                        break;
                    out.state = cand_state;
                    rep = cand;
                    cur = rep.min_ee;
                }
            }
        }

        // Same idea across both blocks at once: the alternating updates zigzag
        // between the beam and surface subspaces, and the combined move is the
        // direction the zigzag actually advances along. The second pass uses
        // the move since the previous iteration's start, which cancels any
        // period-two component of the zigzag.
        auto extrapolate_joint = [&](const CMat& w_from, const CMat& psi_from) {
            const CMat dw = out.w - w_from;
            const CMat dpsi = out.state.psi - psi_from;
            if (dw.norm() == 0.0 && dpsi.norm() == 0.0) return;
            const CMat wb = out.w;
            const CMat pb = out.state.psi;
            for (double gamma : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
                CMat w_e = wb + gamma * dw;
                const double pw = w_e.squaredNorm();
                if (pw > s.P) w_e *= std::sqrt(s.P * (1.0 - 1e-12) / pw);
                const IncidentCovariance cov_e = incident_covariance(cs.F, w_e);
                const RisState st_e = project_surface(out.state, pb + gamma * dpsi, cov_e, s);
                const EEReport cand = evaluate(cs, st_e, w_e, s);
                if (!point_feasible(cs, st_e, w_e, s, cand) || cand.min_ee <= cur) break;
                out.w = w_e;
                out.state = st_e;
                rep = cand;
                cur = rep.min_ee;
            }
        };
        extrapolate_joint(w_iter_start, psi_iter_start);
        if (m >= 2) extrapolate_joint(w_prev_start, psi_prev_start);
        w_prev_start = w_iter_start;
        psi_prev_start = psi_iter_start;

        eta_run = std::max(eta_run, cur);
        rec.min_ee = cur;
        rec.eta = eta_run;
        rec.gp_slack = rep.gp_slack;
        rec.min_rate_slack = rep.min_rate_slack;
        out.trace.push_back(rec);
        out.iterations = m;
        if (log)
            *log << "iter " << m << " min_ee=" << cur << " beam=" << rec.beam_accepted
                 << " psi=" << rec.psi_accepted << "\n";

        if (std::abs(cur - prev) <= s.algo.ao_tol * std::max(std::abs(prev), 1e-12)) {
            out.status = AoStatus::converged;
            break;
        }
    }
    if (out.status != AoStatus::converged && out.iterations >= it0 + s.algo.ao_max_iter)
        out.status = AoStatus::iteration_cap;

    out.report = rep;
    out.report.trace.clear();
    for (const auto& r : out.trace) out.report.trace.push_back(r.min_ee);
    return out;
}

} // namespace risee
