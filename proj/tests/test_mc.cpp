#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rlp/lp_core.hpp"
#include "rlp/mc_harness.hpp"

using namespace rlp;
using mc::CMode;
using mc::GaussianStream;
using mc::McEstimate;
using mc::TrialConfig;

TEST_CASE("gaussian_stream determinism") {
    const auto s1 = mc::gaussian_stream(123, 7, 1000);
    const auto s2 = mc::gaussian_stream(123, 7, 1000);
    CHECK(s1 == s2);  // bitwise

    const auto other_trial = mc::gaussian_stream(123, 8, 1000);
    CHECK(s1 != other_trial);
    const auto other_seed = mc::gaussian_stream(124, 7, 1000);
    CHECK(s1 != other_seed);

    // prefix property: a longer draw starts with the shorter one
    const auto prefix = mc::gaussian_stream(123, 7, 10);
    for (int i = 0; i < 10; ++i) CHECK(prefix[i] == s1[i]);
}

TEST_CASE("gaussian_stream child seeds spread out") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t t = 0; t < 1000; ++t)
        seeds.insert(GaussianStream(42, t).child_seed());
    CHECK(seeds.size() == 1000);
}

TEST_CASE("gaussian_stream moments") {
    const std::size_t n = 1'000'000;
    const auto v = mc::gaussian_stream(2024, 0, n);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));

    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::fabs(var - 1.0) < 0.01);

    // tails present but sane
    double max_abs = 0.0;
    for (double x : v) max_abs = std::max(max_abs, std::fabs(x));
    CHECK(max_abs > 3.5);
    CHECK(max_abs < 9.0);
}

TEST_CASE("trial config validation") {
    TrialConfig cfg;
    cfg.trials = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.trials = 2;
    cfg.alpha = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.alpha = 20.0;
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n = 50000;  // m*n = 1e6 * 5e4 > 1e8
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n = 50;
    CHECK_NOTHROW(cfg.validate());
    // Vector rhs must match m
    cfg.rhs = theory::RhsModel::vector(std::vector<double>(10, 1.0), 50);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.rhs = theory::RhsModel::vector(std::vector<double>(1000, 1.0), 50);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("run_trials is reproducible and parallel-invariant") {
    TrialConfig cfg;
    cfg.alpha = 8.0;
    cfg.n = 10;
    cfg.trials = 24;
    cfg.master_seed = 5;

    const McEstimate par1 = mc::run_trials(cfg);
    const McEstimate par2 = mc::run_trials(cfg);
    const McEstimate ser = mc::run_trials_serial(cfg);

    CHECK(par1.values == par2.values);
    CHECK(par1.values == ser.values);  // scheduling-independent, bitwise
    CHECK(par1.mean == ser.mean);
    CHECK(par1.std_error == ser.std_error);
    REQUIRE(par1.rows.size() == ser.rows.size());
    for (std::size_t i = 0; i < par1.rows.size(); ++i) {
        CHECK(par1.rows[i].seed == ser.rows[i].seed);
        CHECK(par1.rows[i].status == ser.rows[i].status);
        CHECK(par1.rows[i].value == ser.rows[i].value);
    }
}

TEST_CASE("estimate accounting and magnitude convention") {
    TrialConfig cfg;
    cfg.alpha = 10.0;
    cfg.n = 8;
    cfg.trials = 30;
    cfg.master_seed = 11;
    const McEstimate est = mc::run_trials(cfg);

    CHECK(static_cast<std::int64_t>(est.values.size()) + est.unbounded_count +
              est.infeasible_count + est.failure_count ==
          cfg.trials);
    for (double v : est.values) CHECK(v >= 0.0);
    double mean = 0.0;
    for (double v : est.values) mean += v;
    mean /= static_cast<double>(est.values.size());
    CHECK(std::fabs(mean - est.mean) < 1e-12);
    CHECK(est.std_error >= 0.0);
}

TEST_CASE("mixed statuses are counted, not imputed") {
    // a = -1 in one dimension: trials split between Optimal (both rows
    // negative), Unbounded (both positive), and Infeasible (mixed signs)
    TrialConfig cfg;
    cfg.alpha = 2.0;
    cfg.n = 1;
    cfg.trials = 64;
    cfg.master_seed = 3;
    cfg.rhs = theory::RhsModel::constant(-1.0);
    const McEstimate est = mc::run_trials(cfg);
    CHECK(est.unbounded_count > 0);
    CHECK(est.infeasible_count > 0);
    CHECK(est.values.size() > 0);
    CHECK(static_cast<std::int64_t>(est.values.size()) + est.unbounded_count +
              est.infeasible_count + est.failure_count ==
          cfg.trials);
    CHECK(est.warning);  // far more than 10% non-Optimal
    CHECK(!est.warning_text.empty());
}

TEST_CASE("one-dimensional trials match the closed form") {
    // n = 1, c = 1: min x over {A_i x <= a_i} is the largest lower bound
    // a_i / A_i over rows with A_i < 0; no negative row means unbounded.
    TrialConfig cfg;
    cfg.alpha = 20.0;
    cfg.n = 1;
    cfg.trials = 10;
    cfg.master_seed = 7;
    const McEstimate est = mc::run_trials(cfg);
    for (const auto& row : est.rows) {
        const lp::LpInstance inst = mc::materialize_instance(cfg, row.trial);
        double lower = -std::numeric_limits<double>::infinity();
        for (std::int64_t i = 0; i < inst.m; ++i)
            if (inst.A[i] < 0.0) lower = std::max(lower, inst.a[i] / inst.A[i]);
        if (std::isinf(lower)) {
            CHECK(row.status == lp::SolveStatus::Unbounded);
        } else {
            REQUIRE(row.status == lp::SolveStatus::Optimal);
            CHECK(std::fabs(row.value - std::fabs(lower)) <= 1e-12 * std::fabs(lower));
        }
    }
}

TEST_CASE("trials agree with vertex enumeration within the oracle guard") {
    TrialConfig cfg;
    cfg.alpha = 12.0;  // m = 12 <= 16
    cfg.n = 1;
    cfg.trials = 10;
    cfg.master_seed = 19;
    const McEstimate est = mc::run_trials(cfg);
    for (const auto& row : est.rows) {
        const lp::LpInstance inst = mc::materialize_instance(cfg, row.trial);
        const lp::LpSolution oracle = lp::vertex_enumerate(inst);
        CHECK(oracle.status == row.status);
        if (row.status == lp::SolveStatus::Optimal)
            CHECK(std::fabs(row.value - std::fabs(oracle.objective)) <= 1e-12);
    }
}

TEST_CASE("fixed-axis and random-sphere objectives estimate the same number") {
    TrialConfig fixed;
    fixed.alpha = 12.0;
    fixed.n = 16;
    fixed.trials = 80;
    fixed.master_seed = 21;
    TrialConfig sphere = fixed;
    sphere.c_mode = CMode::RandomSphere;
    const McEstimate ef = mc::run_trials(fixed);
    const McEstimate es = mc::run_trials(sphere);
    const double gap = std::fabs(ef.mean - es.mean);
    const double combined =
        std::sqrt(ef.std_error * ef.std_error + es.std_error * es.std_error);
    CHECK(gap < 3.0 * combined);
}

TEST_CASE("csv export shape and determinism") {
    TrialConfig cfg;
    cfg.alpha = 6.0;
    cfg.n = 4;
    cfg.trials = 5;
    cfg.master_seed = 2;
    const McEstimate est = mc::run_trials(cfg);

    std::ostringstream os1, os2;
    mc::write_trials_csv(est, os1);
    mc::write_trials_csv(mc::run_trials_serial(cfg), os2);
    CHECK(os1.str() == os2.str());  // byte-identical across scheduling

    std::istringstream is(os1.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "trial,seed,m,n,alpha,status,objective_magnitude");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == cfg.trials);
}

TEST_CASE("concentration_report") {
    TrialConfig small;
    small.alpha = 20.0;
    small.n = 5;
    small.trials = 60;
    small.master_seed = 17;
    TrialConfig large = small;
    large.n = 40;

    const auto rep = mc::concentration_report(small, large);
    CHECK(rep.std_small == rep.small_n.sample_std());
    CHECK(rep.std_large == rep.large_n.sample_std());
    CHECK(rep.decreasing);
    CHECK(rep.std_large < rep.std_small);

    // identical configurations give identical spreads
    TrialConfig same = small;
    same.n = 6;
    const auto rep2 = mc::concentration_report(small, same);
    const auto rep3 = mc::concentration_report(small, same);
    CHECK(rep2.std_small == rep3.std_small);
    CHECK(rep2.std_large == rep3.std_large);

    CHECK_THROWS_AS(mc::concentration_report(large, small), std::invalid_argument);
    TrialConfig mismatched = large;
    mismatched.alpha = 10.0;
    CHECK_THROWS_AS(mc::concentration_report(small, mismatched), std::invalid_argument);
}

TEST_CASE("materialized instances respect the rhs model") {
    TrialConfig cfg;
    cfg.alpha = 4.0;
    cfg.n = 5;
    cfg.trials = 2;
    cfg.master_seed = 9;

    SUBCASE("constant") {
        cfg.rhs = theory::RhsModel::constant(2.5);
        const auto inst = mc::materialize_instance(cfg, 0);
        for (double v : inst.a) CHECK(v == 2.5);
    }
    SUBCASE("atoms") {
        cfg.rhs = theory::RhsModel::atoms({0.5, 2.0}, {0.25, 0.75});
        const auto inst = mc::materialize_instance(cfg, 0);
        int lo = 0, hi = 0;
        for (double v : inst.a) {
            const bool is_lo = v == 0.5, is_hi = v == 2.0;
            CHECK((is_lo || is_hi));
            lo += is_lo;
            hi += is_hi;
        }
        CHECK(lo + hi == inst.m);
    }
    SUBCASE("gaussian rhs varies per trial") {
        cfg.rhs = theory::RhsModel::gaussian(1.0, 0.25);
        const auto i0 = mc::materialize_instance(cfg, 0);
        const auto i1 = mc::materialize_instance(cfg, 1);
        CHECK(i0.a != i1.a);
    }
    SUBCASE("objective norm is sqrt(n) in both modes") {
        for (CMode mode : {CMode::FixedAxis, CMode::RandomSphere}) {
            cfg.c_mode = mode;
            const auto inst = mc::materialize_instance(cfg, 0);
            double norm = 0.0;
            for (double v : inst.c) norm += v * v;
            CHECK(std::fabs(std::sqrt(norm) - std::sqrt(static_cast<double>(cfg.n))) < 1e-12);
        }
    }
}
