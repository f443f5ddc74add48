// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "risee/channel.hpp"
#include "risee/scenario.hpp"
#include "risee/sweep.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace risee;

namespace {

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.base = load_scenario("{}");
    spec.base.K = 2;
    spec.base.L = 2;
    spec.base.N = 3;
    spec.param = "P_t";
    spec.values = {2.0, 4.0};
    spec.archs = {Architecture::NoRIS, Architecture::LPD};
    spec.trials = 3;
    spec.threads = 1;
    return spec;
}

} // namespace

TEST_CASE("parameter application rewrites the right field") {
    const Scenario base = load_scenario("{}");

    CHECK(apply_param(base, "P_t", 7.0, Architecture::GPD).P_t == 7.0);
    CHECK(apply_param(base, "P_risn", 0.2, Architecture::LPD).P_risn == 0.2);
    CHECK(apply_param(base, "P", 5.0, Architecture::LPD).P == 5.0);
    CHECK(apply_param(base, "N", 8.0, Architecture::LPD).N == 8);
    CHECK(apply_param(base, "P_risn_dBm", 1.0, Architecture::LPD).P_risn ==
          doctest::Approx(0.0012589254117941673).epsilon(1e-15));
    CHECK(apply_param(base, "P_t", 7.0, Architecture::GPD).architecture == Architecture::GPD);

    CHECK_THROWS_AS(apply_param(base, "bandwidth", 1.0, Architecture::LPD),
                    std::invalid_argument);
}

TEST_CASE("sweeps are bit-identical across thread counts and repeats") {
    SweepSpec spec = tiny_spec();
    const SweepResult once = run_sweep(spec);
    const SweepResult again = run_sweep(spec);
    spec.threads = 4;
    const SweepResult threaded = run_sweep(spec);

    const std::string a = csv_text(once);
    CHECK(a == csv_text(again));
    CHECK(a == csv_text(threaded));

    REQUIRE(once.cells.size() == threaded.cells.size());
    for (std::size_t i = 0; i < once.cells.size(); ++i) {
        REQUIRE(once.cells[i].trial_min_ee.size() == threaded.cells[i].trial_min_ee.size());
        for (std::size_t t = 0; t < once.cells[i].trial_min_ee.size(); ++t)
            CHECK(once.cells[i].trial_min_ee[t] == threaded.cells[i].trial_min_ee[t]);
    }
}

TEST_CASE("paired trials consume identical channels in every cell") {
    const SweepResult res = run_sweep(tiny_spec());
    REQUIRE(res.cells.size() == 4);
    for (const auto& cell : res.cells) {
        REQUIRE(cell.channel_hashes.size() == 3);
        // same (seed, trial) as the reference cell regardless of arch or value
        for (std::size_t t = 0; t < 3; ++t)
            CHECK(cell.channel_hashes[t] == res.cells[0].channel_hashes[t]);
    }

    // and those hashes are the ones of a fresh draw
    const Scenario s0 = apply_param(tiny_spec().base, "P_t", 2.0, Architecture::NoRIS);
    for (std::size_t t = 0; t < 3; ++t)
        CHECK(res.cells[0].channel_hashes[t] == channel_hash(draw_channels(s0, t)));
}

TEST_CASE("failed trials are counted and kept out of the mean") {
    SweepSpec spec = tiny_spec();
    spec.values = {2.0};
    spec.archs = {Architecture::LPD};
    spec.base.r_th = {50.0, 50.0}; // impossible floor: every trial infeasible
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.cells.size() == 1);
    CHECK(res.cells[0].ok == 0);
    CHECK(res.cells[0].failures == 3);
    for (double v : res.cells[0].trial_min_ee) CHECK(std::isnan(v));

    // the CSV keeps the bookkeeping visible
    const auto rows = parse_csv_text(csv_text(res));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].trials == 0);
    CHECK(rows[0].failures == 3);
}

TEST_CASE("CSV round-trips the statistics exactly at 12 digits") {
    const SweepResult res = run_sweep(tiny_spec());
    const std::string text = csv_text(res);
    const auto rows = parse_csv_text(text);
    REQUIRE(rows.size() == res.cells.size());

    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].arch == to_string(res.cells[i].arch));
        CHECK(rows[i].param == res.spec.param);
        CHECK(rows[i].value == doctest::Approx(res.cells[i].value).epsilon(1e-11));
        CHECK(rows[i].mean_min_ee ==
              doctest::Approx(res.cells[i].mean_min_ee).epsilon(1e-11));
        CHECK(rows[i].stderr_mean ==
              doctest::Approx(res.cells[i].stderr_mean).epsilon(1e-11));
        CHECK(rows[i].trials == res.cells[i].ok);
        CHECK(rows[i].failures == res.cells[i].failures);

        // the mean is reproducible from the per-trial values
        double sum = 0.0;
        int n = 0;
        for (double v : res.cells[i].trial_min_ee)
            if (!std::isnan(v)) {
                sum += v;
                ++n;
            }
        REQUIRE(n == res.cells[i].ok);
        if (n > 0) CHECK(rows[i].mean_min_ee == doctest::Approx(sum / n).epsilon(1e-11));
    }
}

TEST_CASE("single-trial single-cell sweeps degenerate cleanly") {
    SweepSpec spec = tiny_spec();
    spec.values = {3.0};
    spec.archs = {Architecture::LPD};
    spec.trials = 1;
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.cells.size() == 1);
    CHECK(res.cells[0].ok == 1);
    CHECK(res.cells[0].stderr_mean == 0.0); // no spread from one sample
    CHECK(res.cells[0].mean_min_ee == res.cells[0].trial_min_ee[0]);
}

TEST_CASE("an empty grid is rejected loudly but renders as a bare header") {
    SweepSpec spec = tiny_spec();
    spec.values.clear();
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);

    SweepResult empty;
    empty.spec = spec;
    CHECK(csv_text(empty) == "arch,param,value,mean_min_ee,stderr,trials,failures\n");
}

TEST_CASE("output files land where promised and parse back") {
    const SweepResult res = run_sweep(tiny_spec());
    const std::string dir = "sweep_out_test";
    const std::string csv_path = write_outputs(res, dir);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::stringstream buf;
    buf << csv.rdbuf();
    CHECK(buf.str() == csv_text(res));

    std::ifstream prov(dir + "/provenance.json");
    REQUIRE(prov.good());
    nlohmann::json j;
    prov >> j; // throws if malformed
    CHECK(j.contains("base_scenario"));
    CHECK(j.contains("cells"));
    CHECK(j["cells"].size() == res.cells.size());

    std::ifstream plot(dir + "/plot.gp");
    CHECK(plot.good());

    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment presets pin their operating points") {
    const SweepSpec f1 = fig1_preset();
    CHECK(f1.param == "P_t");
    CHECK(f1.base.N == 20);
    CHECK(f1.values.front() == 1.0);
    CHECK(f1.values.back() == 10.0);
    CHECK(f1.archs.size() == 4);
    CHECK(f1.trials == 50);

    const SweepSpec f2 = fig2_preset();
    CHECK(f2.param == "P_risn_dBm");
    CHECK(f2.base.N == 40);
    CHECK(f2.base.P_t == 3.0);
    CHECK(f2.values.front() == -10.0);
    CHECK(f2.values.back() == 20.0);
    CHECK(f2.archs.size() == 4);
    CHECK(f2.trials == 50);
}
