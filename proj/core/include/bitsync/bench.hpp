#pragma once

#include "bitsync/bitseq.hpp"
#include "bitsync/edit.hpp"
#include "bitsync/protocol.hpp"
#include "bitsync/rng.hpp"
#include "bitsync/single_round.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bitsync {

enum class Algorithm { interactive, single_round, single_burst, multi_burst, distance_mode };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name); // throws ParamOutOfRange

/// One benchmark scenario: how to make (x, y) and which algorithm to run.
/// Everything a trial consumes is derived from (config, seed, trial index).
struct BenchConfig {
    Algorithm algorithm = Algorithm::interactive;
    std::size_t n = 1'000'000;

    // isolated edit mix (exact counts)
    std::size_t d = 0, i = 0, s = 0;
    // isolated edits of per-trial random kind (deletion or insertion)
    std::size_t random_edits = 0;

    // burst mix: burst_count bursts of uniform length in [burst_min, burst_max],
    // each of per-trial random kind
    std::size_t burst_count = 0;
    std::size_t burst_min = 80, burst_max = 200;
    // single_burst algorithm: the one burst's exact length
    std::size_t B = 1000;

    SyncParams params;             // interactive / multi_burst / distance_mode
    std::size_t piece_len = 1000;  // single_round
    double window_scale = 2.0;     // single_round

    bool oracle = false; // replace hashes with the ground-truth equality hook

    std::uint64_t trials = 1;
    std::uint64_t seed = kDefaultSeed;
};

struct TrialResult {
    SyncStats stats;
    bool exact = false;        // reconstructed == x
    bool failed = false;       // mode-appropriate failure flag
    double final_norm_hd = 0;  // hamming(reconstructed, x) / n
    // realized scenario, for reporting
    std::size_t d = 0, i = 0, s = 0, bursts = 0;
    std::size_t m_a = 0, m_h = 0;
};

// Runs one trial; the rng stream is derived from (cfg.seed, trial) so trials
// are order- and parallelism-independent.
TrialResult run_trial(const BenchConfig& cfg, std::uint64_t trial);

struct BenchSummary {
    std::uint64_t trials = 0;
    double mean_total_bits = 0, stddev_total_bits = 0;
    double mean_bits_e2d = 0, mean_bits_d2e = 0;
    double mean_anchor_bits = 0;
    double mean_anchors = 0, mean_hashes = 0, mean_syndromes = 0;
    double mean_pieces_full = 0, mean_rounds = 0;
    double mean_final_norm_hd = 0;
    double failure_rate = 0;
};

BenchSummary summarize(const std::vector<TrialResult>& results);

// Fixed CSV surface: trial,n,d,i,s,bursts,m_a,m_h,rounds,bits_e2d,bits_d2e,
// anchors,hashes,syndromes,pieces_full,outcome
std::string csv_header();
std::string csv_row(const BenchConfig& cfg, std::uint64_t trial, const TrialResult& r);

} // namespace bitsync
