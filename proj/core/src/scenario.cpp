// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace risee {

using nlohmann::json;

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::NoRIS: return "NoRIS";
        case Architecture::LPD: return "LPD";
        case Architecture::GPD: return "GPD";
        case Architecture::GPBD: return "GPBD";
    }
    throw std::invalid_argument("architecture: unknown enum value");
}

Architecture architecture_from_string(const std::string& s) {
    if (s == "NoRIS") return Architecture::NoRIS;
    if (s == "LPD") return Architecture::LPD;
    if (s == "GPD") return Architecture::GPD;
    if (s == "GPBD") return Architecture::GPBD;
    throw std::invalid_argument("architecture: expected NoRIS|LPD|GPD|GPBD, got \"" + s + "\"");
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw std::invalid_argument(key + ": " + what);
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) bad_key(key, "expected an integer");
    return v.get<int>();
}

void parse_geometry(const json& obj, Geometry& g) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string key = "geometry." + it.key();
        if (it.key() == "bs_x") g.bs_x = as_number(*it, key);
        else if (it.key() == "bs_y") g.bs_y = as_number(*it, key);
        else if (it.key() == "ris_x") g.ris_x = as_number(*it, key);
        else if (it.key() == "ris_y") g.ris_y = as_number(*it, key);
        else if (it.key() == "user_cx") g.user_cx = as_number(*it, key);
        else if (it.key() == "user_cy") g.user_cy = as_number(*it, key);
        else if (it.key() == "user_radius") g.user_radius = as_number(*it, key);
        else bad_key(key, "unknown key");
    }
}

void parse_pathloss(const json& obj, Pathloss& p) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string key = "pathloss." + it.key();
        if (it.key() == "ref_db") p.ref_db = as_number(*it, key);
        else if (it.key() == "ris_exp_db") p.ris_exp_db = as_number(*it, key);
        else if (it.key() == "direct_exp_db") p.direct_exp_db = as_number(*it, key);
        else if (it.key() == "noise_floor_dbw") p.noise_floor_dbw = as_number(*it, key);
        else bad_key(key, "unknown key");
    }
}

void parse_algo(const json& obj, AlgoParams& a) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string key = "algo." + it.key();
        if (it.key() == "ao_tol") a.ao_tol = as_number(*it, key);
        else if (it.key() == "ao_max_iter") a.ao_max_iter = as_int(*it, key);
        else if (it.key() == "gda_tol") a.gda_tol = as_number(*it, key);
        else if (it.key() == "gda_max_iter") a.gda_max_iter = as_int(*it, key);
        else if (it.key() == "feas_tol") a.feas_tol = as_number(*it, key);
        else if (it.key() == "stat_tol") a.stat_tol = as_number(*it, key);
        else if (it.key() == "lpd_epsilon") a.lpd_epsilon = as_number(*it, key);
        else bad_key(key, "unknown key");
    }
}

} // namespace

Scenario load_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("configuration root: expected a JSON object");

    Scenario s;
    bool have_P = false, have_P_dB = false, have_risn = false, have_risn_dbm = false;

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const json& v = *it;
        if (key == "K") s.K = as_int(v, key);
        else if (key == "L") s.L = as_int(v, key);
        else if (key == "N") s.N = as_int(v, key);
        else if (key == "P") { s.P = as_number(v, key); have_P = true; }
        else if (key == "P_dB") { as_number(v, key); have_P_dB = true; }
        else if (key == "sigma2") s.sigma2 = as_number(v, key);
        else if (key == "beta") s.beta = as_number(v, key);
        else if (key == "P_t") s.P_t = as_number(v, key);
        else if (key == "P_ris0") s.P_ris0 = as_number(v, key);
        else if (key == "P_risn") { s.P_risn = as_number(v, key); have_risn = true; }
        else if (key == "P_risn_dBm") { as_number(v, key); have_risn_dbm = true; }
        else if (key == "r_th") {
            if (v.is_number()) s.r_th.assign(1, v.get<double>());
            else if (v.is_array()) {
                s.r_th.clear();
                for (const auto& e : v) s.r_th.push_back(as_number(e, key));
            } else bad_key(key, "expected a number or an array");
        }
        else if (key == "rician_kappa") s.rician_kappa = as_number(v, key);
        else if (key == "architecture") {
            if (!v.is_string()) bad_key(key, "expected a string");
            s.architecture = architecture_from_string(v.get<std::string>());
        }
        else if (key == "seed") {
            if (!v.is_number_integer()) bad_key(key, "expected an integer");
            s.seed = v.get<std::uint64_t>();
        }
        else if (key == "geometry") {
            if (!v.is_object()) bad_key(key, "expected an object");
            parse_geometry(v, s.geometry);
        }
        else if (key == "pathloss") {
            if (!v.is_object()) bad_key(key, "expected an object");
            parse_pathloss(v, s.pathloss);
        }
        else if (key == "algo") {
            if (!v.is_object()) bad_key(key, "expected an object");
            parse_algo(v, s.algo);
        }
        else bad_key(key, "unknown key");
    }

    if (have_P && have_P_dB) bad_key("P_dB", "conflicts with P; give one of them");
    if (have_risn && have_risn_dbm) bad_key("P_risn_dBm", "conflicts with P_risn; give one of them");
    // dB aliases are resolved after all scalars are read so they may combine
    // with a non-default sigma2 in the same document
    if (have_P_dB) s.P = s.sigma2 * db_to_linear(doc.at("P_dB").get<double>());
    if (have_risn_dbm) s.P_risn = dbm_to_watt(doc.at("P_risn_dBm").get<double>());

    // broadcast a scalar threshold to all users
    if (s.r_th.size() == 1 && s.L > 1) s.r_th.assign(static_cast<size_t>(s.L), s.r_th[0]);

    validate(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open configuration file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

void validate(const Scenario& s) {
    if (s.K < 1) bad_key("K", "must be >= 1");
    if (s.L < 1) bad_key("L", "must be >= 1");
    if (s.N < 1) bad_key("N", "must be >= 1");
    if (!(s.P > 0.0) || !std::isfinite(s.P)) bad_key("P", "must be positive and finite");
    if (!(s.sigma2 > 0.0) || !std::isfinite(s.sigma2)) bad_key("sigma2", "must be positive and finite");
    if (s.beta < 0.0 || !std::isfinite(s.beta)) bad_key("beta", "must be >= 0 and finite");
    if (s.P_t < 0.0 || !std::isfinite(s.P_t)) bad_key("P_t", "must be >= 0 and finite");
    if (s.P_ris0 < 0.0 || !std::isfinite(s.P_ris0)) bad_key("P_ris0", "must be >= 0 and finite");
    if (s.P_risn < 0.0 || !std::isfinite(s.P_risn)) bad_key("P_risn", "must be >= 0 and finite");
    if (!s.r_th.empty() && s.r_th.size() != static_cast<size_t>(s.L))
        bad_key("r_th", "length must equal L (or be a scalar)");
    for (double t : s.r_th)
        if (t < 0.0 || !std::isfinite(t)) bad_key("r_th", "entries must be >= 0 and finite");
    if (s.rician_kappa < 0.0 || !std::isfinite(s.rician_kappa))
        bad_key("rician_kappa", "must be >= 0 and finite");
    if (s.geometry.user_radius < 0.0) bad_key("geometry.user_radius", "must be >= 0");
    const double dx = s.geometry.bs_x - s.geometry.ris_x;
    const double dy = s.geometry.bs_y - s.geometry.ris_y;
    if (dx * dx + dy * dy <= 0.0) bad_key("geometry.ris_x", "RIS must not sit on the base station");
    if (!(s.algo.ao_tol > 0.0)) bad_key("algo.ao_tol", "must be positive");
    if (s.algo.ao_max_iter < 1) bad_key("algo.ao_max_iter", "must be >= 1");
    if (!(s.algo.gda_tol > 0.0)) bad_key("algo.gda_tol", "must be positive");
    if (s.algo.gda_max_iter < 1) bad_key("algo.gda_max_iter", "must be >= 1");
    if (!(s.algo.feas_tol > 0.0)) bad_key("algo.feas_tol", "must be positive");
    if (!(s.algo.stat_tol > 0.0)) bad_key("algo.stat_tol", "must be positive");
    if (!(s.algo.lpd_epsilon > 0.0) || s.algo.lpd_epsilon > 1.0)
        bad_key("algo.lpd_epsilon", "must lie in (0, 1]");
}

double derived_static_power(const Scenario& s) {
    double p_ris = 0.0;
    switch (s.architecture) {
        case Architecture::NoRIS:
            p_ris = 0.0;
            break;
        case Architecture::LPD:
        case Architecture::GPD:
            p_ris = s.P_ris0 + static_cast<double>(s.N) * s.P_risn;
            break;
        case Architecture::GPBD: {
            const double interconnects = 0.5 * static_cast<double>(s.N) * (s.N - 1);
            p_ris = s.P_ris0 + interconnects * s.P_risn;
            break;
        }
    }
    return s.P_t + p_ris / static_cast<double>(s.L);
}

std::vector<double> expanded_thresholds(const Scenario& s) {
    if (s.r_th.empty()) return std::vector<double>(static_cast<size_t>(s.L), 0.0);
    return s.r_th;
}

std::string to_json(const Scenario& s) {
    json j;
    j["K"] = s.K;
    j["L"] = s.L;
    j["N"] = s.N;
    j["P"] = s.P;
    j["sigma2"] = s.sigma2;
    j["beta"] = s.beta;
    j["P_t"] = s.P_t;
    j["P_ris0"] = s.P_ris0;
    j["P_risn"] = s.P_risn;
    j["r_th"] = expanded_thresholds(s);
    j["rician_kappa"] = s.rician_kappa;
    j["architecture"] = to_string(s.architecture);
    j["seed"] = s.seed;
    j["geometry"] = {{"bs_x", s.geometry.bs_x},       {"bs_y", s.geometry.bs_y},
                     {"ris_x", s.geometry.ris_x},     {"ris_y", s.geometry.ris_y},
                     {"user_cx", s.geometry.user_cx}, {"user_cy", s.geometry.user_cy},
                     {"user_radius", s.geometry.user_radius}};
    j["pathloss"] = {{"ref_db", s.pathloss.ref_db},
                     {"ris_exp_db", s.pathloss.ris_exp_db},
                     {"direct_exp_db", s.pathloss.direct_exp_db},
                     {"noise_floor_dbw", s.pathloss.noise_floor_dbw}};
    j["algo"] = {{"ao_tol", s.algo.ao_tol},           {"ao_max_iter", s.algo.ao_max_iter},
                 {"gda_tol", s.algo.gda_tol},         {"gda_max_iter", s.algo.gda_max_iter},
                 {"feas_tol", s.algo.feas_tol},       {"stat_tol", s.algo.stat_tol},
                 {"lpd_epsilon", s.algo.lpd_epsilon}};
    return j.dump(2);
}

} // namespace risee
