// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/ris.hpp"

#include <cmath>
#include <sstream>

namespace risee {

IncidentCovariance incident_covariance(const CMat& F, const CMat& w) {
    if (F.cols() != w.rows()) {
        std::ostringstream os;
        os << "incident_covariance: F is " << F.rows() << "x" << F.cols() << " but w has "
           << w.rows() << " rows";
        throw std::invalid_argument(os.str());
    }
    const CMat t = F * w; // column l = F w_l
    CMat R = t * t.adjoint();
    R = 0.5 * (R + R.adjoint().eval()); // scrub roundoff asymmetry
    return {std::move(R)};
}

double gp_slack(const IncidentCovariance& cov, const CMat& psi) {
    if (cov.R.rows() != psi.rows() || cov.R.cols() != psi.cols() || psi.rows() != psi.cols())
        throw std::invalid_argument("gp_slack: R and psi must be square with equal size");
    const CMat q = psi.adjoint() * psi;
    const cxd tr = (cov.R * q).trace() - cov.R.trace();
    return tr.real();
}

namespace {

double offdiag_max_abs(const CMat& psi) {
    double m = 0.0;
    for (Eigen::Index r = 0; r < psi.rows(); ++r)
        for (Eigen::Index c = 0; c < psi.cols(); ++c)
            if (r != c) m = std::max(m, std::abs(psi(r, c)));
    return m;
}

} // namespace

CertifyReport certify(const RisState& state, const IncidentCovariance& cov) {
    const CMat& psi = state.psi;
    if (psi.rows() != psi.cols()) throw std::invalid_argument("certify: psi must be square");
    if (cov.R.rows() != psi.rows() || cov.R.cols() != psi.cols())
        throw std::invalid_argument("certify: R and psi sizes differ");

    CertifyReport rep;
    const double tr_r = cov.R.trace().real();

    switch (state.arch) {
        case Architecture::NoRIS: {
            rep.zero_dev = psi.cwiseAbs().maxCoeff();
            rep.pass = rep.zero_dev == 0.0;
            if (!rep.pass) rep.worst = "psi must be zero without a surface";
            break;
        }
        case Architecture::LPD: {
            rep.offdiag_max = offdiag_max_abs(psi);
            for (Eigen::Index n = 0; n < psi.rows(); ++n)
                rep.modulus_dev = std::max(rep.modulus_dev, std::abs(std::abs(psi(n, n)) - 1.0));
            if (rep.offdiag_max != 0.0) rep.worst = "off-diagonal entries present";
            else if (rep.modulus_dev > state.feas_tol) rep.worst = "unit-modulus deviation";
            rep.pass = rep.worst.empty();
            break;
        }
        case Architecture::GPD: {
            rep.offdiag_max = offdiag_max_abs(psi);
            const double slack = gp_slack(cov, psi);
            rep.gp_rel_slack = tr_r > 0.0 ? slack / tr_r : 0.0;
            if (rep.offdiag_max != 0.0) rep.worst = "off-diagonal entries present";
            else if (tr_r > 0.0 && slack > state.feas_tol * tr_r) rep.worst = "global passivity violated";
            rep.pass = rep.worst.empty();
            break;
        }
        case Architecture::GPBD: {
            rep.asymmetry = (psi - psi.transpose()).cwiseAbs().maxCoeff();
            const double slack = gp_slack(cov, psi);
            rep.gp_rel_slack = tr_r > 0.0 ? slack / tr_r : 0.0;
            if (rep.asymmetry > 1e-12) rep.worst = "asymmetry";
            else if (tr_r > 0.0 && slack > state.feas_tol * tr_r) rep.worst = "global passivity violated";
            rep.pass = rep.worst.empty();
            break;
        }
    }
    return rep;
}

} // namespace risee
