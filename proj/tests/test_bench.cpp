#include "bitsync/bench.hpp"

#include "bitsync/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace bitsync;

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::interactive, Algorithm::single_round,
                        Algorithm::single_burst, Algorithm::multi_burst,
                        Algorithm::distance_mode})
        CHECK(algorithm_from_string(to_string(a)) == a);
    CHECK_THROWS_AS(algorithm_from_string("bogus"), ParamOutOfRange);
}

TEST_CASE("trials are reproducible and independent of execution order") {
    BenchConfig cfg;
    cfg.n = 20000;
    cfg.d = 5;
    cfg.i = 5;
    cfg.params.m_a = 20;
    cfg.params.m_h = 20;
    cfg.seed = 77;
    TrialResult a3 = run_trial(cfg, 3);
    TrialResult a0 = run_trial(cfg, 0);
    TrialResult b3 = run_trial(cfg, 3);
    CHECK(a3.stats.bits_e2d == b3.stats.bits_e2d);
    CHECK(a3.stats.bits_d2e == b3.stats.bits_d2e);
    CHECK(a3.stats.rounds == b3.stats.rounds);
    // different trial index gives a different instance (overwhelmingly)
    CHECK(a0.stats.bits_e2d != a3.stats.bits_e2d);
    CHECK(a3.exact);
    CHECK(a3.d == 5);
    CHECK(a3.i == 5);
    CHECK(a3.m_a == 20);
}

TEST_CASE("interactive trial with oracle hashes always reconstructs") {
    BenchConfig cfg;
    cfg.n = 10000;
    cfg.d = 4;
    cfg.i = 4;
    cfg.oracle = true;
    for (std::uint64_t t = 0; t < 5; ++t) {
        TrialResult r = run_trial(cfg, t);
        CHECK(r.exact);
        CHECK_FALSE(r.failed);
        CHECK(r.final_norm_hd == 0.0);
    }
}

TEST_CASE("single_round trial reports the deterministic reply width") {
    BenchConfig cfg;
    cfg.algorithm = Algorithm::single_round;
    cfg.n = 50000;
    cfg.piece_len = 500;
    cfg.d = 10;
    cfg.i = 10;
    cfg.params.m_a = 15;
    cfg.params.m_h = 25;
    TrialResult r = run_trial(cfg, 0);
    CHECK(r.exact);
    CHECK(r.stats.bits_d2e == 100);
    CHECK(r.m_a == 15);
    CHECK(r.m_h == 25);
}

TEST_CASE("single_burst trial synchronizes and charges only burst bits") {
    BenchConfig cfg;
    cfg.algorithm = Algorithm::single_burst;
    cfg.n = 100000;
    cfg.B = 100;
    for (std::uint64_t t = 0; t < 4; ++t) {
        TrialResult r = run_trial(cfg, t);
        REQUIRE(r.exact);
        CHECK(r.bursts == 1);
        CHECK(r.stats.burst_invocations == 1);
        // Theorem-3 shape: 2 log2(1 + n/B) + 3(B - 2) plus integer rounding
        CHECK(r.stats.bits_e2d < 400);
    }
}

TEST_CASE("multi_burst trial enables guess-and-check") {
    BenchConfig cfg;
    cfg.algorithm = Algorithm::multi_burst;
    cfg.n = 200000;
    cfg.burst_count = 2;
    cfg.random_edits = 6;
    cfg.params.m_a = 20;
    cfg.params.m_h = 20;
    TrialResult r = run_trial(cfg, 1);
    CHECK(r.exact);
    CHECK(r.bursts == 2);
    CHECK(r.d + r.i == 6);
    CHECK(r.stats.burst_invocations >= 1);
}

TEST_CASE("distance_mode trial counts substitutions against d0, not failure") {
    BenchConfig cfg;
    cfg.algorithm = Algorithm::distance_mode;
    cfg.n = 100000;
    cfg.d = 2;
    cfg.i = 2;
    cfg.s = 10;
    cfg.params.m_a = 10;
    cfg.params.m_h = 40;
    cfg.params.hash.d0 = 0.02;
    TrialResult r = run_trial(cfg, 0);
    CHECK_FALSE(r.failed);
    CHECK(r.stats.outcome == Outcome::synced_within_d0);
    // residual disagreement stays well inside the d0 = 2% target
    CHECK(r.final_norm_hd <= 0.002);
}

TEST_CASE("summary and CSV surfaces") {
    BenchConfig cfg;
    cfg.n = 20000;
    cfg.d = 3;
    cfg.i = 3;
    std::vector<TrialResult> results;
    for (std::uint64_t t = 0; t < 6; ++t)
        results.push_back(run_trial(cfg, t));
    BenchSummary s = summarize(results);
    CHECK(s.trials == 6);
    CHECK(s.failure_rate == 0.0);
    CHECK(s.mean_total_bits > 0);
    CHECK(s.mean_bits_e2d + s.mean_bits_d2e == doctest::Approx(s.mean_total_bits));

    CHECK(csv_header() ==
          "trial,n,d,i,s,bursts,m_a,m_h,rounds,bits_e2d,bits_d2e,anchors,hashes,"
          "syndromes,pieces_full,outcome");
    std::string row = csv_row(cfg, 0, results[0]);
    // 16 columns, first is the trial index
    CHECK(std::count(row.begin(), row.end(), ',') == 15);
    CHECK(row.rfind("0,20000,3,3,0,0,", 0) == 0);
    std::istringstream check(row);
    CHECK(row.find("synced") != std::string::npos);
}
