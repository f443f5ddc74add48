// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/metrics.hpp"

#include <cmath>

namespace risee {

double user_rate(const CMat& h, const CMat& w, double sigma2, int l) {
    if (h.cols() != w.rows()) throw std::invalid_argument("user_rate: h and w dimensions differ");
    if (l < 0 || l >= h.rows()) throw std::invalid_argument("user_rate: user index out of range");
    if (w.cols() != h.rows()) throw std::invalid_argument("user_rate: one beamformer per user required");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("user_rate: sigma2 must be positive");

    double sig = 0.0, itf = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double p = std::norm(cxd(h.row(l) * w.col(j)));
        if (j == l) sig = p;
        else itf += p;
    }
    return std::log2(1.0 + sig / (sigma2 + itf));
}

double user_ee(double rate, const CVec& w_l, double beta, double p_c) {
    const double den = p_c + beta * w_l.squaredNorm();
    if (!(den > 0.0)) throw std::invalid_argument("user_ee: nonpositive power denominator");
    return rate / den;
}

EEReport evaluate(const ChannelSet& cs, const RisState& state, const CMat& w, const Scenario& s) {
    const int L = static_cast<int>(cs.f.rows());
    if (w.cols() != L) throw std::invalid_argument("evaluate: w must have one column per user");

    CMat h(L, cs.F.cols());
    for (int l = 0; l < L; ++l) h.row(l) = effective_channel(cs, state.psi, l);

    const double p_c = derived_static_power(s);
    const auto thresholds = expanded_thresholds(s);

    EEReport rep;
    rep.rates.resize(L);
    rep.ees.resize(L);
    rep.min_rate_slack = std::numeric_limits<double>::infinity();
    for (int l = 0; l < L; ++l) {
        rep.rates(l) = user_rate(h, w, s.sigma2, l);
        rep.ees(l) = user_ee(rep.rates(l), w.col(l), s.beta, p_c);
        rep.min_rate_slack = std::min(rep.min_rate_slack, rep.rates(l) - thresholds[l]);
    }
    rep.min_ee = rep.ees.minCoeff();
    rep.power_used = w.squaredNorm();
    rep.gp_slack = gp_slack(incident_covariance(cs.F, w), state.psi);
    return rep;
}

} // namespace risee
