// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include "risee/types.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace risee {

// f(x) = c + g'x + x'Hx/2 with H negative semidefinite (empty H = affine).
// The epigraph solver relies on concavity; builders must respect it.
struct ConcaveQuadratic {
    double c = 0.0;
    Vec g;
    Mat H;

    double value(const Vec& x) const {
        double v = c + g.dot(x);
        if (H.size() > 0) v += 0.5 * x.dot(H * x);
        return v;
    }
    Vec grad(const Vec& x) const {
        if (H.size() > 0) return g + H * x;
        return g;
    }
    void scale(double s) {
        c *= s;
        g *= s;
        if (H.size() > 0) H *= s;
    }
};

// maximize min_l objectives[l](x)  subject to  constraints[i](x) >= 0
struct MaxMinProblem {
    int dim = 0;
    std::vector<ConcaveQuadratic> objectives;
    std::vector<ConcaveQuadratic> constraints;
};

enum class SolveStatus { converged, iteration_cap, infeasible_start };

struct SolveDiagnostics {
    SolveStatus status = SolveStatus::iteration_cap;
    int newton_steps = 0;
    int stages = 0;
    double value = 0.0;           // min_l f_l at the returned point
    double gap = 0.0;             // m_total / mu at exit, bounds the suboptimality
    double worst_violation = 0.0; // max(0, -min_i g_i) at the returned point
};

struct SolveOptions {
    double stat_tol = 1e-6;          // stop once m_total / mu <= stat_tol
    double feas_tol = 1e-8;
    int max_stages = 25;
    int max_newton_per_stage = 80;
    double mu0 = 1.0;
    double mu_factor = 10.0;
    // early exit once min_l f_l reaches this (used by the phase-I wrapper)
    std::optional<double> target_value;
    std::ostream* trace = nullptr;
};

struct SolveResult {
    Vec x;
    SolveDiagnostics diag;
};

// Epigraph reformulation (max t s.t. f_l >= t, g_i >= 0) solved by a
// path-following log barrier with damped Newton steps and analytic Hessians.
// Requires x0 strictly feasible for the constraints; returns the best
// feasible iterate seen, so the value never drops below min_l f_l(x0).
SolveResult solve_maxmin(const MaxMinProblem& p, const Vec& x0, const SolveOptions& opts = {});

// Seek a point with min_i constraints[i] >= margin by running the epigraph
// solver on the slacks themselves (needs no feasible start). Returns nothing
// if no such point was found.
std::optional<Vec> phase1_interior(const MaxMinProblem& p, const Vec& x0, double margin,
                                   const SolveOptions& opts = {});

} // namespace risee
