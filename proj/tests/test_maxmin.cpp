// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "risee/maxmin.hpp"
#include "risee/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace risee;

namespace {

// f(x) = c - ||x - center||^2
ConcaveQuadratic bowl(double c, const Vec& center) {
    ConcaveQuadratic q;
    const int n = static_cast<int>(center.size());
    q.H = -2.0 * Mat::Identity(n, n);
    q.g = 2.0 * center;
    q.c = c - center.squaredNorm();
    return q;
}

ConcaveQuadratic affine(double c, const Vec& g) {
    ConcaveQuadratic q;
    q.c = c;
    q.g = g;
    return q;
}

// box [lo, hi]^n as affine slacks
std::vector<ConcaveQuadratic> box(int n, double lo, double hi) {
    std::vector<ConcaveQuadratic> out;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1.0;
        out.push_back(affine(-lo, e));  // x_i - lo >= 0
        out.push_back(affine(hi, -e));  // hi - x_i >= 0
    }
    return out;
}

} // namespace

TEST_CASE("a single bowl inside a box peaks at its center value") {
    MaxMinProblem p;
    p.dim = 2;
    Vec center(2);
    center << 0.3, -0.2;
    p.objectives.push_back(bowl(1.7, center));
    p.constraints = box(2, -1.0, 1.0);

    const SolveResult r = solve_maxmin(p, Vec::Zero(2), {});
    CHECK(r.diag.status == SolveStatus::converged);
    CHECK(std::abs(r.diag.value - 1.7) < 1e-6);
    CHECK((r.x - center).norm() < 1e-3);
    CHECK(r.diag.worst_violation == 0.0);
}

TEST_CASE("two crossing lines balance at the midpoint") {
    // f1 = x, f2 = 1 - x on [0, 1]: the min is maximized at x = 1/2, value 1/2
    MaxMinProblem p;
    p.dim = 1;
    Vec up(1), dn(1);
    up << 1.0;
    dn << -1.0;
    p.objectives.push_back(affine(0.0, up));
    p.objectives.push_back(affine(1.0, dn));
    p.constraints = box(1, 0.0, 1.0);

    Vec x0(1);
    x0 << 0.2;
    const SolveResult r = solve_maxmin(p, x0, {});
    CHECK(r.diag.status == SolveStatus::converged);
    CHECK(std::abs(r.diag.value - 0.5) < 1e-6);
    CHECK(std::abs(r.x(0) - 0.5) < 1e-5);
}

TEST_CASE("random three-bowl instances agree with a dense grid") {
    TrialRng rng(2024, 0);
    for (int inst = 0; inst < 3; ++inst) {
        MaxMinProblem p;
        p.dim = 2;
        std::vector<Vec> centers;
        std::vector<double> tops;
        for (int k = 0; k < 3; ++k) {
            Vec c(2);
            c << rng.uniform() * 1.2 - 0.6, rng.uniform() * 1.2 - 0.6;
            const double top = 0.5 + rng.uniform();
            centers.push_back(c);
            tops.push_back(top);
            p.objectives.push_back(bowl(top, c));
        }
        p.constraints = box(2, -1.0, 1.0);

        // exhaustive reference on a 1e-3 grid over the box
        double best = -1e300;
        for (int i = 0; i <= 2000; ++i)
            for (int j = 0; j <= 2000; ++j) {
                Vec x(2);
                x << -1.0 + 1e-3 * i, -1.0 + 1e-3 * j;
                double m = 1e300;
                for (int k = 0; k < 3; ++k)
                    m = std::min(m, tops[k] - (x - centers[k]).squaredNorm());
                best = std::max(best, m);
            }

        const SolveResult r = solve_maxmin(p, Vec::Zero(2), {});
        CHECK(r.diag.status == SolveStatus::converged);
        CHECK(std::abs(r.diag.value - best) < 2e-3);
    }
}

TEST_CASE("the returned value never falls below the start") {
    TrialRng rng(5, 3);
    for (int inst = 0; inst < 5; ++inst) {
        MaxMinProblem p;
        p.dim = 3;
        for (int k = 0; k < 4; ++k) {
            Vec c(3);
            c << rng.gaussian() * 0.3, rng.gaussian() * 0.3, rng.gaussian() * 0.3;
            p.objectives.push_back(bowl(rng.uniform(), c));
        }
        p.constraints = box(3, -2.0, 2.0);

        const Vec x0 = Vec::Zero(3);
        double start = 1e300;
        for (const auto& f : p.objectives) start = std::min(start, f.value(x0));

        const SolveResult r = solve_maxmin(p, x0, {});
        CHECK(r.diag.value >= start - 1e-12);
        // every objective at the exit point is at least the reported value
        for (const auto& f : p.objectives) CHECK(f.value(r.x) >= r.diag.value - 1e-9);
    }
}

TEST_CASE("a start outside the constraints is reported, not silently used") {
    MaxMinProblem p;
    p.dim = 1;
    Vec g(1);
    g << 1.0;
    p.objectives.push_back(affine(0.0, g));
    p.constraints = box(1, 0.0, 1.0);

    Vec x0(1);
    x0 << 3.0;
    const SolveResult r = solve_maxmin(p, x0, {});
    CHECK(r.diag.status == SolveStatus::infeasible_start);
}

TEST_CASE("phase one digs an interior point out of the slacks") {
    MaxMinProblem p;
    p.dim = 2;
    p.constraints = box(2, 0.4, 0.6);

    Vec x0(2);
    x0 << -5.0, 5.0; // far outside the tiny box
    const auto pt = phase1_interior(p, x0, 1e-3);
    REQUIRE(pt.has_value());
    for (const auto& c : p.constraints) CHECK(c.value(*pt) >= 1e-3 * 0.99);

    // an empty box has no interior to find
    MaxMinProblem bad = p;
    Vec e(2);
    e << 1.0, 0.0;
    bad.constraints.push_back(affine(-2.0, e));  // x_0 >= 2 contradicts x_0 <= 0.6
    CHECK_FALSE(phase1_interior(bad, x0, 1e-3).has_value());
}

TEST_CASE("target value short-circuits the descent") {
    MaxMinProblem p;
    p.dim = 2;
    p.objectives.push_back(bowl(5.0, Vec::Zero(2)));
    p.constraints = box(2, -1.0, 1.0);

    SolveOptions opts;
    opts.target_value = 4.0;
    Vec x0(2);
    x0 << 0.9, 0.9;
    const SolveResult r = solve_maxmin(p, x0, opts);
    CHECK(r.diag.value >= 4.0);
}

TEST_CASE("the duality-style exit gap is honored on convergence") {
    MaxMinProblem p;
    p.dim = 2;
    Vec c1(2), c2(2);
    c1 << 0.5, 0.0;
    c2 << -0.5, 0.0;
    p.objectives.push_back(bowl(1.0, c1));
    p.objectives.push_back(bowl(1.2, c2));
    p.constraints = box(2, -1.0, 1.0);

    SolveOptions opts;
    opts.stat_tol = 1e-7;
    const SolveResult r = solve_maxmin(p, Vec::Zero(2), opts);
    CHECK(r.diag.status == SolveStatus::converged);
    CHECK(r.diag.gap <= 1e-7);

    // optimum sits where the two bowls tie along the x axis:
    // 1 - (x-0.5)^2 = 1.2 - (x+0.5)^2  =>  x = 0.1, value 1 - 0.16 = 0.84
    CHECK(std::abs(r.diag.value - 0.84) < 1e-5);
    CHECK(std::abs(r.x(0) - 0.1) < 1e-4);
}
