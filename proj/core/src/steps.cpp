// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/steps.hpp"

#include "risee/metrics.hpp"
#include "risee/packing.hpp"
#include "risee/surrogate.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace risee {

namespace {

const double kLn2 = std::log(2.0);

// Complex scalar, affine in the packed real variables: s(x) = c0 + sum coef_k x_k.
struct ComplexAffine {
    cxd c0{0.0, 0.0};
    CVec coef;
};

// wgt * |s(x)|^2 accumulated into a quadratic (wgt < 0 keeps it concave).
void add_abs2(ConcaveQuadratic& q, const ComplexAffine& s, double wgt) {
    const Vec vr = s.coef.real();
    const Vec vi = s.coef.imag();
    q.H.noalias() += (2.0 * wgt) * (vr * vr.transpose());
    q.H.noalias() += (2.0 * wgt) * (vi * vi.transpose());
    q.g.noalias() += (2.0 * wgt) * (s.c0.real() * vr + s.c0.imag() * vi);
    q.c += wgt * std::norm(s.c0);
}

// wgt * Re{ conj(cref) * s(x) }, an affine term
void add_real_inner(ConcaveQuadratic& q, cxd cref, const ComplexAffine& s, double wgt) {
    q.c += wgt * std::real(std::conj(cref) * s.c0);
    q.g += wgt * (std::conj(cref) * s.coef).real();
}

// s(x) = row * w_j over the pack_w stacking
ComplexAffine affine_w_row(const CRow& row, int j, int K, int L) {
    ComplexAffine a;
    a.coef = CVec::Zero(2 * K * L);
    for (int k = 0; k < K; ++k) {
        a.coef(2 * K * j + k) = row(k);
        a.coef(2 * K * j + K + k) = cxd(0.0, 1.0) * row(k);
    }
    return a;
}

struct RateConstants {
    cxd anchor;   // own-signal term at the expansion point
    double D;     // interference-plus-noise power at the expansion point
    double a;     // expansion SINR
    double q;     // quadratic weight a / (D + |anchor|^2)
    double r_ref; // expansion rate in bits
    double sigma2;
};

// Surrogate rate of user l as a concave quadratic; row holds the complex
// affines s_lj(x) for j = 0..L-1 over n packed real variables.
ConcaveQuadratic rate_quadratic(const std::vector<ComplexAffine>& row, int l,
                                const RateConstants& rc, int n) {
    ConcaveQuadratic out;
    out.g = Vec::Zero(n);
    out.H = Mat::Zero(n, n);
    out.c = rc.r_ref + (-rc.a - rc.q * rc.sigma2) / kLn2;
    add_real_inner(out, rc.anchor, row[static_cast<size_t>(l)], 2.0 / (rc.D * kLn2));
    for (const auto& s : row) add_abs2(out, s, -rc.q / kLn2);
    return out;
}

bool strictly_feasible(const std::vector<ConcaveQuadratic>& cons, const Vec& x) {
    for (const auto& c : cons)
        if (!(c.value(x) > 0.0)) return false;
    return true;
}

// Pick a strictly feasible barrier start from the candidate list, falling
// back to a phase-I solve anchored at the first candidate.
std::optional<Vec> interior_start(const MaxMinProblem& p, const std::vector<Vec>& candidates) {
    for (const auto& x : candidates)
        if (strictly_feasible(p.constraints, x)) return x;
    if (candidates.empty()) return std::nullopt;
    double scale = 1.0;
    for (const auto& c : p.constraints)
        scale = std::max(scale, std::abs(c.value(candidates.front())));
    return phase1_interior(p, candidates.front(), 1e-10 * scale);
}

ConcaveQuadratic power_budget_constraint(int n, double P) {
    ConcaveQuadratic q;
    q.c = P;
    q.g = Vec::Zero(n);
    q.H = -2.0 * Mat::Identity(n, n);
    return q;
}

} // namespace

BeamStepResult dinkelbach_beam_step(const ChannelSet& cs, const RisState& state,
                                    const CMat& w_start, const Scenario& s,
                                    std::ostream* trace) {
    const int K = static_cast<int>(cs.F.cols());
    const int L = static_cast<int>(cs.f.rows());
    const int n = 2 * K * L;
    BeamStepResult out;
    out.w = w_start;
    if (w_start.rows() != K || w_start.cols() != L)
        throw std::invalid_argument("dinkelbach_beam_step: beamformer shape mismatch");

    const BeamSurrogate sur = build_beam_surrogate(cs, state.psi, w_start, s.sigma2);
    const double P_c = derived_static_power(s);
    const std::vector<double> rth = expanded_thresholds(s);
    const double gda_tol = s.algo.gda_tol;

    // surrogate rates as quadratics over the packed beamformers
    std::vector<ConcaveQuadratic> rate(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        std::vector<ComplexAffine> row;
        row.reserve(static_cast<size_t>(L));
        const CRow hl = sur.h.row(l);
        for (int j = 0; j < L; ++j) row.push_back(affine_w_row(hl, j, K, L));
        RateConstants rc{sur.xbar(l), sur.D(l), sur.a(l), sur.q(l), sur.r_ref_bits(l), s.sigma2};
        rate[static_cast<size_t>(l)] = rate_quadratic(row, l, rc, n);
    }

    MaxMinProblem prob;
    prob.dim = n;
    prob.constraints.push_back(power_budget_constraint(n, s.P));
    // zero thresholds impose nothing; adding them anyway would leave the
    // barrier without a strict interior at a zero-SINR expansion point
    for (int l = 0; l < L; ++l) {
        if (rth[static_cast<size_t>(l)] <= 0.0) continue;
        ConcaveQuadratic thr = rate[static_cast<size_t>(l)];
        thr.c -= rth[static_cast<size_t>(l)];
        prob.constraints.push_back(std::move(thr));
    }

    // Global passivity couples the blocks through R(w). When the current
    // surface amplifies some incident direction, add a convex inner
    // approximation of the slack, tight at w_start, so accepted beamformers
    // never leave the true feasible set.
    const CMat Q =
        cs.F.adjoint() * (state.psi.adjoint() * state.psi - CMat::Identity(cs.F.rows(), cs.F.rows())) *
        cs.F;
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Q + Q.adjoint()));
        const Vec lam = es.eigenvalues();
        const double tol_eig = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
        if (lam.maxCoeff() > tol_eig) {
            ConcaveQuadratic gp;
            gp.c = 0.0;
            gp.g = Vec::Zero(n);
            gp.H = Mat::Zero(n, n);
            CMat Qminus = CMat::Zero(K, K);
            for (int i = 0; i < K; ++i) {
                if (lam(i) < -tol_eig)
                    Qminus.noalias() += (-lam(i)) * es.eigenvectors().col(i) *
                                        es.eigenvectors().col(i).adjoint();
            }
            for (int i = 0; i < K; ++i) {
                if (lam(i) > tol_eig) {
                    const CRow vrow = es.eigenvectors().col(i).adjoint();
                    for (int l = 0; l < L; ++l)
                        add_abs2(gp, affine_w_row(vrow, l, K, L), -lam(i));
                }
            }
            for (int l = 0; l < L; ++l) {
                const CVec z = Qminus * w_start.col(l);
                add_real_inner(gp, cxd(1.0, 0.0), affine_w_row(z.adjoint(), l, K, L), 2.0);
                gp.c -= std::real(w_start.col(l).dot(z));
            }
            prob.constraints.push_back(std::move(gp));
        }
    }

    // strictly feasible start: scalings of w_start toward half the budget
    const Vec xbar = pack_w(w_start);
    const double pw = xbar.squaredNorm();
    std::vector<Vec> candidates;
    candidates.push_back(xbar);
    if (pw > 0.0) {
        const double half = std::sqrt((s.P / 2.0) / pw);
        for (double t : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.6, 1.0})
            candidates.push_back(((1.0 - t) + t * half) * xbar);
    }
    auto x0 = interior_start(prob, candidates);
    if (!x0) {
        out.note = "no strictly feasible start for the beam subproblem";
        return out;
    }

    auto min_ratio = [&](const Vec& x) {
        const CMat wm = unpack_w(x, K, L);
        double m = std::numeric_limits<double>::infinity();
        for (int l = 0; l < L; ++l) {
            const double num = rate[static_cast<size_t>(l)].value(x);
            const double den = P_c + s.beta * wm.col(l).squaredNorm();
            m = std::min(m, num / den);
        }
        return m;
    };

    SolveOptions so;
    so.stat_tol = std::min(s.algo.stat_tol, 0.1 * gda_tol);
    so.feas_tol = s.algo.feas_tol;

    Vec x_cur = *x0;
    Vec best_x = x_cur;
    double best_ratio = std::max(0.0, min_ratio(x_cur));
    double eta = best_ratio;

    for (int t = 0; t < s.algo.gda_max_iter; ++t) {
        std::vector<ConcaveQuadratic> objs(static_cast<size_t>(L));
        for (int l = 0; l < L; ++l) {
            auto& o = objs[static_cast<size_t>(l)];
            o = rate[static_cast<size_t>(l)];
            o.c -= eta * P_c;
            for (int k = 0; k < 2 * K; ++k) o.H(2 * K * l + k, 2 * K * l + k) -= 2.0 * eta * s.beta;
        }
        MaxMinProblem sub = prob;
        sub.objectives = std::move(objs);
        const SolveResult r = solve_maxmin(sub, x_cur, so);
        ++out.gda_iterations;
        out.eta_history.push_back(eta);
        out.value_history.push_back(r.diag.value);
        if (trace)
            *trace << "gda " << t << " eta=" << eta << " value=" << r.diag.value
                   << " newton=" << r.diag.newton_steps << "\n";

        const double rho = min_ratio(r.x);
        if (rho > best_ratio) {
            best_ratio = rho;
            best_x = r.x;
        }
        if (std::abs(r.diag.value) <= gda_tol) {
            out.certified = true;
            break;
        }
        const double eta_next = std::max(eta, best_ratio);
        if (eta_next <= eta + 1e-14 * (1.0 + std::abs(eta))) {
            out.note = "ratio update stalled before certification";
            break;
        }
        eta = eta_next;
        x_cur = r.x;
    }

    out.w = unpack_w(best_x, K, L);
    out.eta = best_ratio;

    // the solver's bookkeeping is not trusted for acceptance: re-check
    const double used = out.w.squaredNorm();
    if (used > s.P * (1.0 + s.algo.feas_tol)) {
        out.note = "candidate exceeded the power budget";
        out.w = w_start;
        return out;
    }
    if (state.arch == Architecture::GPD || state.arch == Architecture::GPBD) {
        const CertifyReport cert = certify(state, incident_covariance(cs.F, out.w));
        if (!cert.pass) {
            out.note = "candidate broke global passivity: " + cert.worst;
            out.w = w_start;
            return out;
        }
    }
    out.ok = true;
    return out;
}

namespace {

// diagonal-surface coordinates: x = [Re diag; Im diag], dimension 2N
std::vector<ComplexAffine> psi_affine_row_diag(const PsiSurrogate& sur, int l, int N, int L) {
    std::vector<ComplexAffine> row(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j) {
        auto& a = row[static_cast<size_t>(j)];
        a.c0 = sur.d(l, j);
        a.coef = CVec::Zero(2 * N);
        for (int m = 0; m < N; ++m) {
            const cxd t = sur.f(l, m) * sur.U(m, j);
            a.coef(m) = t;
            a.coef(N + m) = cxd(0.0, 1.0) * t;
        }
    }
    return row;
}

Vec pack_diag(const CVec& d) {
    const Eigen::Index N = d.size();
    Vec x(2 * N);
    x.head(N) = d.real();
    x.tail(N) = d.imag();
    return x;
}

CVec unpack_diag(const Vec& x) {
    const Eigen::Index N = x.size() / 2;
    return x.head(N) + cxd(0.0, 1.0) * x.tail(N);
}

PsiStepResult psi_step_diagonal(const ChannelSet& cs, const RisState& state, const CMat& w,
                                const Scenario& s, const PsiSurrogate& sur,
                                const IncidentCovariance& cov, std::ostream* trace) {
    const int N = static_cast<int>(cs.F.rows());
    const int L = static_cast<int>(cs.f.rows());
    const int n = 2 * N;
    const bool lpd = state.arch == Architecture::LPD;
    const double P_c = derived_static_power(s);
    const std::vector<double> rth = expanded_thresholds(s);
    const double trR = std::real(cov.R.trace());

    PsiStepResult out;
    out.state = state;

    std::vector<ConcaveQuadratic> rate(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        const auto row = psi_affine_row_diag(sur, l, N, L);
        RateConstants rc{sur.ybar(l), sur.D(l), sur.b(l), sur.q(l), sur.r_ref_bits(l), s.sigma2};
        rate[static_cast<size_t>(l)] = rate_quadratic(row, l, rc, n);
    }

    MaxMinProblem prob;
    prob.dim = n;
    for (int l = 0; l < L; ++l) {
        ConcaveQuadratic o = rate[static_cast<size_t>(l)];
        o.scale(1.0 / (P_c + s.beta * w.col(l).squaredNorm()));
        prob.objectives.push_back(std::move(o));
        if (rth[static_cast<size_t>(l)] <= 0.0) continue;
        ConcaveQuadratic thr = rate[static_cast<size_t>(l)];
        thr.c -= rth[static_cast<size_t>(l)];
        prob.constraints.push_back(std::move(thr));
    }

    const CVec dref = state.psi.diagonal();
    if (lpd) {
        // |psi_n|^2 <= 1 plus the affine inner cut anchored at the current diagonal
        const LpdCut cut = lpd_linearized_constraint(dref, s.algo.lpd_epsilon);
        for (int m = 0; m < N; ++m) {
            ConcaveQuadratic modq;
            modq.c = 1.0;
            modq.g = Vec::Zero(n);
            modq.H = Mat::Zero(n, n);
            modq.H(m, m) = -2.0;
            modq.H(N + m, N + m) = -2.0;
            prob.constraints.push_back(std::move(modq));

            ConcaveQuadratic cutq;
            cutq.c = -std::norm(cut.psi_ref(m)) - 1.0 + cut.epsilon;
            cutq.g = Vec::Zero(n);
            cutq.g(m) = 2.0 * cut.psi_ref(m).real();
            cutq.g(N + m) = 2.0 * cut.psi_ref(m).imag();
            prob.constraints.push_back(std::move(cutq));
        }
    } else {
        ConcaveQuadratic gp;
        gp.c = trR;
        gp.g = Vec::Zero(n);
        gp.H = Mat::Zero(n, n);
        for (int m = 0; m < N; ++m) {
            const double rnn = std::real(cov.R(m, m));
            gp.H(m, m) = -2.0 * rnn;
            gp.H(N + m, N + m) = -2.0 * rnn;
        }
        prob.constraints.push_back(std::move(gp));
    }

    std::vector<Vec> candidates;
    if (lpd) {
        // normalize-then-shrink lands strictly inside both the modulus ball
        // and the cut for any anchor modulus in (0, 1]
        CVec start = dref;
        for (int m = 0; m < N; ++m) {
            const double mag = std::abs(start(m));
            start(m) = (mag < 1e-12) ? cxd(1.0, 0.0) : start(m) / mag;
            start(m) *= 1.0 - s.algo.lpd_epsilon / 4.0;
        }
        candidates.push_back(pack_diag(start));
    } else {
        const Vec xref = pack_diag(dref);
        for (double c : {1.0, 0.99, 0.95, 0.9, 0.7, 0.4, 0.1}) candidates.push_back(c * xref);
    }
    auto x0 = interior_start(prob, candidates);
    if (!x0) {
        out.note = "no strictly feasible start for the surface subproblem";
        return out;
    }

    SolveOptions so;
    so.stat_tol = s.algo.stat_tol;
    so.feas_tol = s.algo.feas_tol;
    so.trace = trace;
    const SolveResult r = solve_maxmin(prob, *x0, so);
    out.diag = r.diag;

    CMat psi_new = CMat::Zero(N, N);
    psi_new.diagonal() = unpack_diag(r.x);
    out.state.psi = psi_new;
    if (lpd) {
        // returned diagonal sits inside the unit circle; the caller's repair
        // step renormalizes before certification
        out.ok = true;
        return out;
    }
    const CertifyReport cert = certify(out.state, cov);
    if (!cert.pass) {
        out.note = "surface candidate failed certification: " + cert.worst;
        out.state = state;
        return out;
    }
    out.ok = true;
    return out;
}

PsiStepResult psi_step_gpbd(const ChannelSet& cs, const RisState& state, const CMat& w,
                            const Scenario& s, const PsiSurrogate& sur,
                            const IncidentCovariance& cov, std::ostream* trace) {
    const int N = static_cast<int>(cs.F.rows());
    const int L = static_cast<int>(cs.f.rows());
    const double P_c = derived_static_power(s);
    const std::vector<double> rth = expanded_thresholds(s);
    const double trR = std::real(cov.R.trace());

    PsiStepResult out;
    out.state = state;

    // All rate and passivity dependence on Psi flows through M = Psi * Tt,
    // where T = F W = Tt * C with Tt of full column rank r. The symmetric
    // completion below recovers Psi from M, so the search runs over the
    // N*r-dimensional M subject to Tt^T M being symmetric, a complex-linear
    // condition eliminated by an orthonormal null-space basis Z. This keeps
    // the Newton dimension at O(N*L) instead of O(N^2).
    const CMat T = sur.U;
    Eigen::JacobiSVD<CMat> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) {
        out.note = "no incident power reaches the surface";
        return out;
    }
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-13 * sv(0)) ++r;
    const CMat Ur = svd.matrixU().leftCols(r);
    const Vec Sr = sv.head(r);
    const CMat Tt = Ur * Sr.asDiagonal();
    const CMat pinv = Sr.cwiseInverse().asDiagonal() * Ur.adjoint(); // r x N
    const CMat Chat = pinv * T;                                      // r x L
    const CMat proj = Ur * Ur.adjoint();                             // N x N

    // null basis of the antisymmetry conditions on Tt^T M
    const int nrows = r * (r - 1) / 2;
    CMat Z;
    if (nrows == 0) {
        Z = CMat::Identity(N * r, N * r);
    } else {
        CMat E = CMat::Zero(nrows, N * r);
        int rowi = 0;
        for (int p = 0; p < r; ++p)
            for (int qd = p + 1; qd < r; ++qd, ++rowi)
                for (int m = 0; m < N; ++m) {
                    E(rowi, m + N * qd) += Tt(m, p);
                    E(rowi, m + N * p) -= Tt(m, qd);
                }
        Eigen::JacobiSVD<CMat> esvd(E, Eigen::ComputeFullV);
        const Vec esv = esvd.singularValues();
        int rankE = 0;
        if (esv.size() > 0 && esv(0) > 0.0) {
            const double cut = std::max<double>(nrows, N * r) * 1e-15 * esv(0);
            for (Eigen::Index i = 0; i < esv.size(); ++i)
                if (esv(i) > cut) ++rankE;
        }
        Z = esvd.matrixV().rightCols(N * r - rankE);
    }
    const int nz = static_cast<int>(Z.cols());

    // complex-linear coefficients of the maps s_lj over the null-space
    // coordinates, one column per (l, j) pair
    CMat coefs(nz, L * L);
    for (int k = 0; k < nz; ++k) {
        const Eigen::Map<const CMat> Zk(Z.col(k).data(), N, r);
        const CMat G = sur.f * (Zk * Chat); // L x L
        for (int l = 0; l < L; ++l)
            for (int j = 0; j < L; ++j) coefs(k, l * L + j) = G(l, j);
    }

    // Second reduction: the rates see zeta only through these L^2 functionals,
    // and passivity is a norm ball, so any component of zeta orthogonal to
    // them is wasted budget and optimally zero. Restricting to the span of
    // the functionals caps the Newton dimension at O(L^2) regardless of N.
    Eigen::JacobiSVD<CMat> vsvd(coefs.conjugate(), Eigen::ComputeThinU);
    const Vec vsv = vsvd.singularValues();
    int p = 0;
    for (Eigen::Index i = 0; i < vsv.size(); ++i)
        if (vsv(i) > 1e-13 * vsv(0)) ++p;
    if (p == 0) {
        out.note = "surface has no influence on the rates";
        return out;
    }
    const CMat B = vsvd.matrixU().leftCols(p); // nz x p, orthonormal
    const CMat red = B.transpose() * coefs;    // p x L^2
    const int n = 2 * p;

    std::vector<std::vector<ComplexAffine>> rows(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        rows[static_cast<size_t>(l)].resize(static_cast<size_t>(L));
        for (int j = 0; j < L; ++j) {
            auto& a = rows[static_cast<size_t>(l)][static_cast<size_t>(j)];
            a.c0 = sur.d(l, j);
            a.coef = CVec::Zero(n);
            for (int k = 0; k < p; ++k) {
                a.coef(k) = red(k, l * L + j);
                a.coef(p + k) = cxd(0.0, 1.0) * red(k, l * L + j);
            }
        }
    }

    MaxMinProblem prob;
    prob.dim = n;
    std::vector<ConcaveQuadratic> rate(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        RateConstants rc{sur.ybar(l), sur.D(l), sur.b(l), sur.q(l), sur.r_ref_bits(l), s.sigma2};
        rate[static_cast<size_t>(l)] = rate_quadratic(rows[static_cast<size_t>(l)], l, rc, n);
    }
    for (int l = 0; l < L; ++l) {
        ConcaveQuadratic o = rate[static_cast<size_t>(l)];
        o.scale(1.0 / (P_c + s.beta * w.col(l).squaredNorm()));
        prob.objectives.push_back(std::move(o));
        if (rth[static_cast<size_t>(l)] <= 0.0) continue;
        ConcaveQuadratic thr = rate[static_cast<size_t>(l)];
        thr.c -= rth[static_cast<size_t>(l)];
        prob.constraints.push_back(std::move(thr));
    }
    {
        // with Z orthonormal, ||M||_F^2 = ||zeta||^2, so global passivity is a ball
        ConcaveQuadratic gp;
        gp.c = trR;
        gp.g = Vec::Zero(n);
        gp.H = -2.0 * Mat::Identity(n, n);
        prob.constraints.push_back(std::move(gp));
    }

    const CMat Mbar = state.psi * Tt;
    const CVec zeta0 = Z.adjoint() * Eigen::Map<const CVec>(Mbar.data(), N * r);
    const CVec xi0 = B.adjoint() * zeta0;
    Vec xref(n);
    xref.head(p) = xi0.real();
    xref.tail(p) = xi0.imag();
    std::vector<Vec> candidates;
    for (double c : {1.0, 0.99, 0.95, 0.9, 0.7, 0.4, 0.1}) candidates.push_back(c * xref);
    auto x0 = interior_start(prob, candidates);
    if (!x0) {
        out.note = "no strictly feasible start for the surface subproblem";
        return out;
    }

    SolveOptions so;
    so.stat_tol = s.algo.stat_tol;
    so.feas_tol = s.algo.feas_tol;
    so.trace = trace;
    const SolveResult sol = solve_maxmin(prob, *x0, so);
    out.diag = sol.diag;

    // symmetric completion anchored at the current surface: only the change
    // demanded by the new M is applied, minimally and symmetrically
    const CVec xi = sol.x.head(p) + cxd(0.0, 1.0) * sol.x.tail(p);
    const CVec mvec = Z * (B * xi);
    const CMat Mnew = Eigen::Map<const CMat>(mvec.data(), N, r);
    const CMat X = Mnew - Mbar;
    CMat delta = X * pinv + pinv.transpose() * X.transpose() *
                                (CMat::Identity(N, N) - proj);
    delta = 0.5 * (delta + delta.transpose()).eval();
    if (!delta.allFinite() || delta.norm() > 1e8 * (1.0 + state.psi.norm())) {
        out.note = "surface completion is ill-conditioned; keeping the previous surface";
        return out;
    }
    CMat psi_new = state.psi + delta;
    psi_new = 0.5 * (psi_new + psi_new.transpose()).eval();

    // rank truncation can leave a sliver of passivity violation; rescaling a
    // symmetric matrix stays in the feasible set, so push it strictly inside
    double slack = gp_slack(cov, psi_new);
    if (slack > -1e-12 * trR) {
        const double c = std::sqrt(std::max(0.0, trR * (1.0 - 1e-10) / (slack + trR)));
        psi_new *= c;
        slack = gp_slack(cov, psi_new);
    }

    out.state.psi = psi_new;
    const CertifyReport cert = certify(out.state, cov);
    if (!cert.pass) {
        out.note = "surface candidate failed certification: " + cert.worst;
        out.state = state;
        return out;
    }
    out.ok = true;
    return out;
}

} // namespace

PsiStepResult solve_psi_step(const ChannelSet& cs, const RisState& state, const CMat& w,
                             const Scenario& s, std::ostream* trace) {
    PsiStepResult out;
    out.state = state;
    if (state.arch == Architecture::NoRIS) {
        out.note = "no surface to optimize";
        return out;
    }
    if (w.rows() != cs.F.cols() || w.cols() != cs.f.rows())
        throw std::invalid_argument("solve_psi_step: beamformer shape mismatch");

    const IncidentCovariance cov = incident_covariance(cs.F, w);
    const double trR = std::real(cov.R.trace());
    if (!(trR > 0.0)) {
        out.note = "no incident power reaches the surface";
        return out;
    }
    const PsiSurrogate sur = build_psi_surrogate(cs, state.psi, w, s.sigma2);
    if (state.arch == Architecture::GPBD) return psi_step_gpbd(cs, state, w, s, sur, cov, trace);
    return psi_step_diagonal(cs, state, w, s, sur, cov, trace);
}

} // namespace risee
