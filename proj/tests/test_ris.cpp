// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "risee/ris.hpp"

#include <cmath>
#include <complex>

using namespace risee;

namespace {

CMat diag2(cxd a, cxd b) {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("incident covariance is the sum of per-user outer products") {
    CMat F(2, 2);
    F << cxd(1, 0), cxd(0, 1), cxd(2, 0), cxd(0, 0);
    CMat w(2, 2);
    w << cxd(1, 0), cxd(0, 0), cxd(0, 0), cxd(1, 0);

    const IncidentCovariance cov = incident_covariance(F, w);
    CMat want = CMat::Zero(2, 2);
    for (int l = 0; l < 2; ++l) {
        const CVec x = F * w.col(l);
        want += x * x.adjoint();
    }
    CHECK(std::abs((cov.R - want).norm()) <= 1e-15);
    // Hermitian by construction
    CHECK(std::abs((cov.R - cov.R.adjoint()).norm()) <= 1e-15);
}

TEST_CASE("passivity slack matches hand-computed traces") {
    IncidentCovariance cov;
    cov.R = CMat::Identity(2, 2);

    // tr(Psi^H Psi - I) with Psi = diag(sqrt(2), 0): (2 - 1) + (0 - 1) = 0
    CHECK(std::abs(gp_slack(cov, diag2(std::sqrt(2.0), 0.0))) <= 1e-14);

    // diag(1.5, 0.1): (2.25 - 1) + (0.01 - 1) = 0.26
    CHECK(gp_slack(cov, diag2(1.5, 0.1)) == doctest::Approx(0.26).epsilon(1e-13));

    // any unitary is exactly on the boundary
    CMat u(2, 2);
    const double c = std::cos(0.3), s = std::sin(0.3);
    u << cxd(c, 0), cxd(-s, 0), cxd(s, 0), cxd(c, 0);
    CHECK(std::abs(gp_slack(cov, u)) <= 1e-14);

    // weighting by R: with R = diag(3, 1) and Psi = diag(2, 0) the slack is
    // 3*(4-1) + 1*(0-1) = 8
    cov.R = diag2(3.0, 1.0);
    CHECK(gp_slack(cov, diag2(2.0, 0.0)) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("certification enforces each architecture's feasibility set") {
    IncidentCovariance cov;
    cov.R = CMat::Identity(2, 2);

    SUBCASE("NoRIS wants the zero matrix") {
        RisState st;
        st.arch = Architecture::NoRIS;
        st.psi = CMat::Zero(2, 2);
        CHECK(certify(st, cov).pass);
        st.psi(0, 1) = cxd(1e-6, 0);
        CHECK_FALSE(certify(st, cov).pass);
    }

    SUBCASE("LPD wants unit-modulus diagonal") {
        RisState st;
        st.arch = Architecture::LPD;
        st.psi = diag2(std::exp(cxd(0, 0.4)), std::exp(cxd(0, -1.1)));
        CHECK(certify(st, cov).pass);

        // modulus drift beyond the tolerance fails
        RisState bad = st;
        bad.psi(0, 0) *= 1.001;
        const CertifyReport r = certify(bad, cov);
        CHECK_FALSE(r.pass);
        CHECK(r.modulus_dev == doctest::Approx(0.001).epsilon(1e-6));

        // any off-diagonal speck fails
        RisState od = st;
        od.psi(1, 0) = cxd(1e-13, 0);
        CHECK_FALSE(certify(od, cov).pass);
    }

    SUBCASE("GPD wants diagonal plus global passivity") {
        RisState st;
        st.arch = Architecture::GPD;
        st.psi = diag2(1.2, 0.5); // slack = 0.44 + (-0.75) < 0
        CHECK(certify(st, cov).pass);

        st.psi = diag2(1.5, 0.1); // slack = 0.26 > 0
        CHECK_FALSE(certify(st, cov).pass);
    }

    SUBCASE("GPBD wants symmetry plus global passivity") {
        RisState st;
        st.arch = Architecture::GPBD;
        CMat m(2, 2);
        m << cxd(0.3, 0.1), cxd(0.2, -0.4), cxd(0.2, -0.4), cxd(0.0, 0.5);
        st.psi = m;
        CHECK(certify(st, cov).pass);

        RisState asym = st;
        asym.psi(0, 1) += cxd(1e-9, 0);
        CHECK_FALSE(certify(asym, cov).pass);

        RisState loud = st;
        loud.psi = m * 10.0; // reflects far more power than arrives
        CHECK_FALSE(certify(loud, cov).pass);
    }

    SUBCASE("zero incident power makes passivity vacuous") {
        cov.R = CMat::Zero(2, 2);
        RisState st;
        st.arch = Architecture::GPBD;
        st.psi = CMat::Identity(2, 2) * 100.0;
        CHECK(certify(st, cov).pass);
    }
}

TEST_CASE("feasibility sets nest from phase-only up to fully connected") {
    IncidentCovariance cov;
    cov.R = CMat::Identity(3, 3) * 0.7;

    // unit-modulus diagonal: passes LPD, sits exactly on the passivity
    // boundary, and is trivially symmetric
    RisState st;
    st.psi = CMat::Zero(3, 3);
    for (int n = 0; n < 3; ++n) st.psi(n, n) = std::exp(cxd(0, 0.3 * n));

    st.arch = Architecture::LPD;
    CHECK(certify(st, cov).pass);
    st.arch = Architecture::GPD;
    CHECK(certify(st, cov).pass);
    st.arch = Architecture::GPBD;
    CHECK(certify(st, cov).pass);

    // a strictly passive diagonal passes GPD and GPBD but not LPD
    RisState inner = st;
    inner.psi *= 0.9;
    inner.arch = Architecture::LPD;
    CHECK_FALSE(certify(inner, cov).pass);
    inner.arch = Architecture::GPD;
    CHECK(certify(inner, cov).pass);
    inner.arch = Architecture::GPBD;
    CHECK(certify(inner, cov).pass);
}
