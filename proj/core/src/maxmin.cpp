// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/maxmin.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace risee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const MaxMinProblem& p) {
    if (p.dim <= 0) throw std::invalid_argument("maxmin: dim must be positive");
    if (p.objectives.empty()) throw std::invalid_argument("maxmin: needs at least one objective");
    auto check = [&](const ConcaveQuadratic& q, const char* kind) {
        if (q.g.size() != p.dim)
            throw std::invalid_argument(std::string("maxmin: ") + kind + " gradient size mismatch");
        if (q.H.size() > 0 && (q.H.rows() != p.dim || q.H.cols() != p.dim))
            throw std::invalid_argument(std::string("maxmin: ") + kind + " Hessian size mismatch");
    };
    for (const auto& q : p.objectives) check(q, "objective");
    for (const auto& q : p.constraints) check(q, "constraint");
}

// One barrier term: slack s(x) = value(x) - (epigraph ? t : 0), kept > 0.
struct Term {
    const ConcaveQuadratic* q;
    bool epigraph;
};

} // namespace

SolveResult solve_maxmin(const MaxMinProblem& p, const Vec& x0, const SolveOptions& opts) {
    check_problem(p);
    const int n = p.dim;
    if (x0.size() != n) throw std::invalid_argument("maxmin: start point size mismatch");

    std::vector<Term> terms;
    terms.reserve(p.objectives.size() + p.constraints.size());
    for (const auto& q : p.objectives) terms.push_back({&q, true});
    for (const auto& q : p.constraints) terms.push_back({&q, false});
    const int m_total = static_cast<int>(terms.size());
    const int m_obj = static_cast<int>(p.objectives.size());

    auto min_objective = [&](const Vec& x) {
        double v = kInf;
        for (const auto& q : p.objectives) v = std::min(v, q.value(x));
        return v;
    };
    auto min_constraint = [&](const Vec& x) {
        double v = kInf;
        for (const auto& q : p.constraints) v = std::min(v, q.value(x));
        return p.constraints.empty() ? kInf : v;
    };

    SolveResult res;
    res.x = x0;
    res.diag.value = min_objective(x0);
    res.diag.worst_violation = std::max(0.0, -min_constraint(x0));
    if (!p.constraints.empty() && min_constraint(x0) <= 0.0) {
        res.diag.status = SolveStatus::infeasible_start;
        return res;
    }

    Vec x = x0;
    Vec best_x = x0;
    double best_val = res.diag.value;
    double t = best_val - 0.01 * (1.0 + std::abs(best_val));
    double mu = opts.mu0;

    // scratch buffers reused across Newton steps
    std::vector<double> sval(m_total), sdir(m_total), scurv(m_total);
    std::vector<Vec> grads(m_total);
    Vec grad_x(n), dx(n);
    Mat A(n + 1, n + 1);
    Vec rhs(n + 1), step(n + 1);

    int total_newton = 0;
    double central_t = t;
    bool hit_cap = false;

    for (int stage = 0; stage < opts.max_stages; ++stage) {
        res.diag.stages = stage + 1;
        // Intermediate stages only need approximate centering to keep the
        // path-following steps in the quadratic-convergence region; the final
        // stage is centered tightly so the m/mu gap bound is trustworthy.
        const bool final_stage = m_total / mu <= opts.stat_tol;
        const double newton_tol = final_stage ? 1e-10 * (1.0 + mu) : 1e-2;

        for (int it = 0; it < opts.max_newton_per_stage; ++it) {
            ++total_newton;
            // slacks, gradients, and the Newton system A = -hess(Phi)
            grad_x.setZero();
            double grad_t = mu;
            A.setZero();
            double a_tt = 0.0;
            Vec a_xt = Vec::Zero(n);
            bool bad_slack = false;
            for (int i = 0; i < m_total; ++i) {
                const auto& q = *terms[i].q;
                Vec gi = q.g;
                double vi = q.c + q.g.dot(x);
                if (q.H.size() > 0) {
                    Vec Hx = q.H * x;
                    vi += 0.5 * x.dot(Hx);
                    gi += Hx;
                }
                double s = terms[i].epigraph ? vi - t : vi;
                if (!(s > 0.0) || !std::isfinite(s)) {
                    bad_slack = true;
                    break;
                }
                sval[i] = s;
                grads[i] = gi;
                const double inv_s = 1.0 / s;
                const double inv_s2 = inv_s * inv_s;
                grad_x += inv_s * gi;
                if (q.H.size() > 0)
                    A.topLeftCorner(n, n) -= inv_s * q.H;
                A.topLeftCorner(n, n).selfadjointView<Eigen::Lower>().rankUpdate(gi, inv_s2);
                if (terms[i].epigraph) {
                    grad_t -= inv_s;
                    a_xt -= inv_s2 * gi;
                    a_tt += inv_s2;
                }
            }
            if (bad_slack) {
                // line search guards should prevent this; treat as stalled
                hit_cap = true;
                break;
            }
            A.topLeftCorner(n, n) = A.topLeftCorner(n, n).selfadjointView<Eigen::Lower>();
            A.block(0, n, n, 1) = a_xt;
            A.block(n, 0, 1, n) = a_xt.transpose();
            A(n, n) = a_tt;
            rhs.head(n) = grad_x;
            rhs(n) = grad_t;

            // factor with escalating ridge on breakdown
            double ridge = 0.0;
            Eigen::LLT<Mat> llt;
            for (int attempt = 0; attempt < 8; ++attempt) {
                Mat Ar = A;
                if (ridge > 0.0) Ar.diagonal().array() += ridge;
                llt.compute(Ar);
                if (llt.info() == Eigen::Success) break;
                ridge = (ridge == 0.0) ? 1e-12 * (1.0 + A.diagonal().maxCoeff()) : ridge * 100.0;
            }
            if (llt.info() != Eigen::Success) {
                hit_cap = true;
                break;
            }
            step = llt.solve(rhs);
            dx = step.head(n);
            const double dt = step(n);
            const double decrement2 = rhs.dot(step);
            if (decrement2 <= newton_tol) break;

            // slack along the ray is an exact quadratic; precompute coefficients
            for (int i = 0; i < m_total; ++i) {
                const auto& q = *terms[i].q;
                sdir[i] = grads[i].dot(dx) - (terms[i].epigraph ? dt : 0.0);
                scurv[i] = (q.H.size() > 0) ? 0.5 * dx.dot(q.H * dx) : 0.0;
            }
            auto slack_at = [&](int i, double a) { return sval[i] + a * (sdir[i] + a * scurv[i]); };
            auto phi_delta = [&](double a) {
                double d = mu * a * dt;
                for (int i = 0; i < m_total; ++i) d += std::log(slack_at(i, a) / sval[i]);
                return d;
            };

            double alpha = 1.0;
            for (int guard = 0; guard < 120; ++guard) {
                bool ok = true;
                for (int i = 0; i < m_total; ++i)
                    if (!(slack_at(i, alpha) > 0.0)) {
                        ok = false;
                        break;
                    }
                if (ok && phi_delta(alpha) >= 0.25 * alpha * decrement2) break;
                alpha *= 0.6;
            }
            if (alpha < 1e-14) break;

            x += alpha * dx;
            t += alpha * dt;

            double minf = kInf;
            for (int i = 0; i < m_obj; ++i) minf = std::min(minf, slack_at(i, alpha) + t);
            if (minf > best_val) {
                best_val = minf;
                best_x = x;
            }
            if (opts.target_value && best_val >= *opts.target_value) {
                res.x = best_x;
                res.diag.status = SolveStatus::converged;
                res.diag.newton_steps = total_newton;
                res.diag.value = best_val;
                res.diag.gap = m_total / mu;
                res.diag.worst_violation = std::max(0.0, -min_constraint(best_x));
                return res;
            }
        }
        central_t = t;
        if (opts.trace)
            *opts.trace << "stage " << stage << " mu=" << mu << " t=" << t << " best=" << best_val
                        << " newton=" << total_newton << "\n";
        if (hit_cap) break;
        if (final_stage) {
            res.diag.status = SolveStatus::converged;
            break;
        }
        mu *= opts.mu_factor;
    }
    if (res.diag.status != SolveStatus::converged) res.diag.status = SolveStatus::iteration_cap;

    res.x = best_x;
    res.diag.newton_steps = total_newton;
    res.diag.value = best_val;
    res.diag.gap = std::max(0.0, central_t + m_total / mu - best_val);
    res.diag.worst_violation = std::max(0.0, -min_constraint(best_x));
    return res;
}

std::optional<Vec> phase1_interior(const MaxMinProblem& p, const Vec& x0, double margin,
                                   const SolveOptions& opts) {
    if (p.constraints.empty()) return x0;
    MaxMinProblem aux;
    aux.dim = p.dim;
    aux.objectives = p.constraints;
    SolveOptions o = opts;
    o.target_value = margin;
    o.stat_tol = std::max(opts.stat_tol, 1e-4); // only interiority is needed here
    SolveResult r = solve_maxmin(aux, x0, o);
    if (r.diag.value >= margin) return r.x;
    return std::nullopt;
}

} // namespace risee
