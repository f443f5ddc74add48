// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/channel.hpp"
#include "risee/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace risee {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

double dist(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

// amplitude gain of a link: sqrt(10^(-PL(d)/10) / noise_share)
double amp_gain(const Pathloss& pl, double d, bool direct) {
    const double d_eff = std::max(d, 1.0); // clamp inside the far-field reference distance
    const double loss_db = pl.ref_db + (direct ? pl.direct_exp_db : pl.ris_exp_db) * std::log10(d_eff);
    // noise normalization: the direct link carries the full floor, each RIS
    // segment half of it (in dB), so cascaded paths are normalized once
    const double floor_db = direct ? pl.noise_floor_dbw : 0.5 * pl.noise_floor_dbw;
    return std::pow(10.0, -(loss_db + floor_db) / 20.0);
}

void fill_cn(TrialRng& rng, CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.cgaussian();
}

} // namespace

CVec ula_steering(int m_elements, double azimuth) {
    CVec a(m_elements);
    const double phase_step = M_PI * std::sin(azimuth);
    for (int m = 0; m < m_elements; ++m) a(m) = std::polar(1.0, phase_step * m);
    return a;
}

ChannelSet draw_channels(const Scenario& s, std::uint64_t trial) {
    TrialRng rng(s.seed, trial);
    const auto& geo = s.geometry;
    const auto& pl = s.pathloss;

    // draw order is part of the reproducibility contract: user positions,
    // BS-RIS link, then per user the RIS-user and direct links
    std::vector<double> ux(s.L), uy(s.L);
    for (int l = 0; l < s.L; ++l) {
        const double r = geo.user_radius * std::sqrt(rng.uniform());
        const double ang = two_pi * rng.uniform();
        ux[l] = geo.user_cx + r * std::cos(ang);
        uy[l] = geo.user_cy + r * std::sin(ang);
    }

    const double kap = s.rician_kappa;
    const double los_w = std::sqrt(kap / (1.0 + kap));
    const double nlos_w = std::sqrt(1.0 / (1.0 + kap));

    ChannelSet cs;

    const double g_F = amp_gain(pl, dist(geo.bs_x, geo.bs_y, geo.ris_x, geo.ris_y), false);
    const double aoa = two_pi * rng.uniform(); // at the surface
    const double aod = two_pi * rng.uniform(); // at the base station
    CMat Fw(s.N, s.K);
    fill_cn(rng, Fw);
    cs.F = g_F * (los_w * (ula_steering(s.N, aoa) * ula_steering(s.K, aod).transpose()) + nlos_w * Fw);

    cs.f.resize(s.L, s.N);
    cs.g.resize(s.L, s.K);
    for (int l = 0; l < s.L; ++l) {
        const double g_f = amp_gain(pl, dist(geo.ris_x, geo.ris_y, ux[l], uy[l]), false);
        const double ang = two_pi * rng.uniform();
        CMat row(1, s.N);
        fill_cn(rng, row);
        cs.f.row(l) = g_f * (los_w * ula_steering(s.N, ang).transpose() + nlos_w * row);

        const double g_g = amp_gain(pl, dist(geo.bs_x, geo.bs_y, ux[l], uy[l]), true);
        CMat grow(1, s.K);
        fill_cn(rng, grow);
        cs.g.row(l) = g_g * grow;
    }
    return cs;
}

CRow effective_channel(const ChannelSet& cs, const CMat& psi, int l) {
    const Eigen::Index N = cs.F.rows();
    if (psi.rows() != N || psi.cols() != N) {
        std::ostringstream os;
        os << "effective_channel: psi is " << psi.rows() << "x" << psi.cols()
           << ", expected " << N << "x" << N;
        throw std::invalid_argument(os.str());
    }
    if (cs.f.cols() != N || cs.f.rows() != cs.g.rows() || cs.g.cols() != cs.F.cols())
        throw std::invalid_argument("effective_channel: inconsistent channel dimensions");
    if (l < 0 || l >= cs.f.rows())
        throw std::invalid_argument("effective_channel: user index out of range");
    return cs.f.row(l) * psi * cs.F + cs.g.row(l);
}

std::uint64_t channel_hash(const ChannelSet& cs) {
    static_assert(std::endian::native == std::endian::little, "hash/dump assume little-endian");
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const CMat& m) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
        const size_t n = sizeof(cxd) * static_cast<size_t>(m.size());
        for (size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    mix(cs.F);
    mix(cs.f);
    mix(cs.g);
    return h;
}

namespace {

void write_mat(std::ofstream& out, const CMat& m) {
    // row-major (re, im) pairs regardless of Eigen's storage order
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double parts[2] = {m(r, c).real(), m(r, c).imag()};
            out.write(reinterpret_cast<const char*>(parts), sizeof(parts));
        }
}

void read_mat(std::ifstream& in, CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double parts[2];
            in.read(reinterpret_cast<char*>(parts), sizeof(parts));
            m(r, c) = {parts[0], parts[1]};
        }
}

} // namespace

void dump_channels(const std::string& path, const std::vector<ChannelSet>& sets) {
    static_assert(std::endian::native == std::endian::little, "dump format is little-endian");
    if (sets.empty()) throw std::invalid_argument("dump_channels: nothing to write");
    const Eigen::Index N = sets[0].F.rows(), K = sets[0].F.cols(), L = sets[0].f.rows();
    for (const auto& cs : sets)
        if (cs.F.rows() != N || cs.F.cols() != K || cs.f.rows() != L || cs.f.cols() != N ||
            cs.g.rows() != L || cs.g.cols() != K)
            throw std::invalid_argument("dump_channels: records have mixed dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_channels: cannot open " + path);
    out << "risee-channels v1 trials=" << sets.size() << " N=" << N << " K=" << K << " L=" << L
        << "\n";
    for (const auto& cs : sets) {
        write_mat(out, cs.F);
        write_mat(out, cs.f);
        write_mat(out, cs.g);
    }
    if (!out) throw std::runtime_error("dump_channels: write failed on " + path);
}

std::vector<ChannelSet> load_channels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_channels: cannot open " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, ver;
    hs >> magic >> ver;
    if (magic != "risee-channels" || ver != "v1")
        throw std::runtime_error("load_channels: bad header in " + path);
    size_t trials = 0;
    Eigen::Index N = 0, K = 0, L = 0;
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("load_channels: bad header token " + tok);
        const std::string name = tok.substr(0, eq);
        const long val = std::stol(tok.substr(eq + 1));
        if (name == "trials") trials = static_cast<size_t>(val);
        else if (name == "N") N = val;
        else if (name == "K") K = val;
        else if (name == "L") L = val;
        else throw std::runtime_error("load_channels: unknown header field " + name);
    }
    if (trials == 0 || N < 1 || K < 1 || L < 1)
        throw std::runtime_error("load_channels: incomplete header in " + path);

    std::vector<ChannelSet> sets(trials);
    for (auto& cs : sets) {
        cs.F.resize(N, K);
        cs.f.resize(L, N);
        cs.g.resize(L, K);
        read_mat(in, cs.F);
        read_mat(in, cs.f);
        read_mat(in, cs.g);
    }
    if (!in) throw std::runtime_error("load_channels: truncated file " + path);
    return sets;
}

} // namespace risee
