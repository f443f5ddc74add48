// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#include "risee/sweep.hpp"

#include "risee/channel.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace risee {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

Scenario apply_param(const Scenario& base, const std::string& param, double value,
                     Architecture arch) {
    Scenario s = base;
    s.architecture = arch;
    if (param == "P_t") {
        s.P_t = value;
    } else if (param == "P_risn_dBm") {
        s.P_risn = dbm_to_watt(value);
    } else if (param == "P_risn") {
        s.P_risn = value;
    } else if (param == "N") {
        s.N = static_cast<int>(value);
    } else if (param == "P") {
        s.P = value;
    } else {
        throw std::invalid_argument("apply_param: unknown parameter '" + param + "'");
    }
    validate(s);
    return s;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw std::invalid_argument("run_sweep: empty value grid");
    if (!std::is_sorted(spec.values.begin(), spec.values.end()))
        throw std::invalid_argument("run_sweep: value grid must be sorted ascending");
    if (spec.archs.empty()) throw std::invalid_argument("run_sweep: no architectures");
    if (spec.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");

    const size_t n_cells = spec.archs.size() * spec.values.size();
    const size_t n_tasks = n_cells * static_cast<size_t>(spec.trials);
    std::vector<double> values(n_tasks, kNaN);
    std::vector<std::uint64_t> hashes(n_tasks, 0);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            const size_t cell = i / static_cast<size_t>(spec.trials);
            const std::uint64_t trial = i % static_cast<size_t>(spec.trials);
            const Architecture arch = spec.archs[cell / spec.values.size()];
            const double value = spec.values[cell % spec.values.size()];
            try {
                const Scenario s = apply_param(spec.base, spec.param, value, arch);
                const ChannelSet cs = draw_channels(s, trial);
                hashes[i] = channel_hash(cs);
                const AoResult r = ao_run(cs, s);
                if (r.status == AoStatus::converged) values[i] = r.report.min_ee;
            } catch (const std::exception&) {
                // leave NaN: counted as a failure, never aborts the sweep
            }
        }
    };

    const int n_threads = std::max(1, spec.threads);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads - 1));
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepResult out;
    out.spec = spec;
    out.cells.resize(n_cells);
    for (size_t c = 0; c < n_cells; ++c) {
        SweepCell& cell = out.cells[c];
        cell.arch = spec.archs[c / spec.values.size()];
        cell.value = spec.values[c % spec.values.size()];
        cell.trial_min_ee.assign(values.begin() + static_cast<long>(c) * spec.trials,
                                 values.begin() + static_cast<long>(c + 1) * spec.trials);
        cell.channel_hashes.assign(hashes.begin() + static_cast<long>(c) * spec.trials,
                                   hashes.begin() + static_cast<long>(c + 1) * spec.trials);
        // two-pass mean and standard error over the successful trials
        double sum = 0.0;
        for (double v : cell.trial_min_ee) {
            if (std::isnan(v)) {
                ++cell.failures;
            } else {
                ++cell.ok;
                sum += v;
            }
        }
        if (cell.ok > 0) cell.mean_min_ee = sum / cell.ok;
        if (cell.ok > 1) {
            double ss = 0.0;
            for (double v : cell.trial_min_ee)
                if (!std::isnan(v)) ss += (v - cell.mean_min_ee) * (v - cell.mean_min_ee);
            cell.stderr_mean = std::sqrt(ss / (static_cast<double>(cell.ok) *
                                               (static_cast<double>(cell.ok) - 1.0)));
        }
    }
    return out;
}

std::string csv_text(const SweepResult& result) {
    std::ostringstream os;
    os << "arch,param,value,mean_min_ee,stderr,trials,failures\n";
    for (const auto& c : result.cells) {
        os << to_string(c.arch) << ',' << result.spec.param << ',' << fmt12(c.value) << ','
           << fmt12(c.mean_min_ee) << ',' << fmt12(c.stderr_mean) << ',' << c.ok << ','
           << c.failures << '\n';
    }
    return os.str();
}

std::vector<CsvRow> parse_csv_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("parse_csv_text: empty document");
    if (line != "arch,param,value,mean_min_ee,stderr,trials,failures")
        throw std::invalid_argument("parse_csv_text: unexpected header '" + line + "'");
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        CsvRow row;
        auto next_field = [&]() {
            if (!std::getline(ls, field, ','))
                throw std::invalid_argument("parse_csv_text: truncated row '" + line + "'");
            return field;
        };
        row.arch = next_field();
        row.param = next_field();
        row.value = std::stod(next_field());
        row.mean_min_ee = std::stod(next_field());
        row.stderr_mean = std::stod(next_field());
        row.trials = std::stoi(next_field());
        row.failures = std::stoi(next_field());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string write_outputs(const SweepResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string csv_path = (fs::path(dir) / ("ee_vs_" + result.spec.param + ".csv")).string();
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("write_outputs: cannot open " + csv_path);
        f << csv_text(result);
    }
    {
        nlohmann::json j;
        j["version"] = version_string;
        j["param"] = result.spec.param;
        j["values"] = result.spec.values;
        j["trials"] = result.spec.trials;
        j["seed"] = result.spec.base.seed;
        j["base_scenario"] = nlohmann::json::parse(to_json(result.spec.base));
        j["csv"] = fs::path(csv_path).filename().string();
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& c : result.cells) {
            nlohmann::json jc;
            jc["arch"] = to_string(c.arch);
            jc["value"] = c.value;
            jc["mean_min_ee"] = c.mean_min_ee;
            jc["stderr"] = c.stderr_mean;
            jc["trials"] = c.ok;
            jc["failures"] = c.failures;
            nlohmann::json tv = nlohmann::json::array();
            for (double v : c.trial_min_ee) {
                if (std::isnan(v))
                    tv.push_back(nullptr);
                else
                    tv.push_back(v);
            }
            jc["trial_min_ee"] = std::move(tv);
            std::vector<std::string> hx;
            hx.reserve(c.channel_hashes.size());
            for (auto h : c.channel_hashes) {
                char buf[24];
                std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
                hx.emplace_back(buf);
            }
            jc["channel_hashes"] = std::move(hx);
            cells.push_back(std::move(jc));
        }
        j["cells"] = std::move(cells);
        std::ofstream f((fs::path(dir) / "provenance.json").string(), std::ios::binary);
        if (!f) throw std::runtime_error("write_outputs: cannot open provenance.json");
        f << j.dump(2) << '\n';
    }
    {
        std::ofstream f((fs::path(dir) / "plot.gp").string(), std::ios::binary);
        if (!f) throw std::runtime_error("write_outputs: cannot open plot.gp");
        f << "# gnuplot script: mean min-EE vs " << result.spec.param << " per architecture\n"
          << "set datafile separator ','\n"
          << "set key top right\n"
          << "set xlabel '" << result.spec.param << "'\n"
          << "set ylabel 'average max-min EE [bit/J]'\n"
          << "set grid\n"
          << "csv = '" << fs::path(csv_path).filename().string() << "'\n"
          << "archs = 'NoRIS LPD GPD GPBD'\n"
          << "plot for [a in archs] csv using (strcol(1) eq a ? $3 : NaN):4:5 "
             "with yerrorlines title a\n";
    }
    return csv_path;
}

SweepSpec fig1_preset() {
    SweepSpec spec;
    spec.param = "P_t";
    spec.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    spec.archs = {Architecture::NoRIS, Architecture::LPD, Architecture::GPD, Architecture::GPBD};
    spec.trials = 50;
    spec.base = Scenario{};
    spec.base.N = 20;
    spec.base.P_risn = dbm_to_watt(1.0);
    return spec;
}

SweepSpec fig2_preset() {
    SweepSpec spec;
    spec.param = "P_risn_dBm";
    spec.values = {-10, -5, 0, 5, 10, 15, 20};
    spec.archs = {Architecture::NoRIS, Architecture::LPD, Architecture::GPD, Architecture::GPBD};
    spec.trials = 50;
    spec.base = Scenario{};
    spec.base.N = 40;
    spec.base.P_t = 3.0;
    return spec;
}

} // namespace risee
