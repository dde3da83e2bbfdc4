#include "bitsync/bench.hpp"

#include "bitsync/burst.hpp"
#include "bitsync/errors.hpp"

#include <cmath>
#include <sstream>

namespace bitsync {

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::interactive: return "interactive";
    case Algorithm::single_round: return "single_round";
    case Algorithm::single_burst: return "single_burst";
    case Algorithm::multi_burst: return "multi_burst";
    case Algorithm::distance_mode: return "distance_mode";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (Algorithm a : {Algorithm::interactive, Algorithm::single_round,
                        Algorithm::single_burst, Algorithm::multi_burst,
                        Algorithm::distance_mode})
        if (name == to_string(a))
            return a;
    throw ParamOutOfRange("unknown algorithm: " + name);
}

TrialResult run_trial(const BenchConfig& cfg, std::uint64_t trial) {
    if (cfg.n == 0)
        throw ParamOutOfRange("n must be positive");
    SplitMix rng(mix(cfg.seed, trial));
    const std::uint64_t x_seed = rng.next();
    const std::uint64_t script_seed = rng.next();
    const std::uint64_t hash_seed = rng.next();
    const std::uint64_t kind_seed = rng.next();
    SplitMix kinds(kind_seed);

    TrialResult r;
    BitSeq x = BitSeq::random(cfg.n, x_seed);

    // realized edit mix
    std::size_t d = cfg.d, i = cfg.i;
    for (std::size_t k = 0; k < cfg.random_edits; ++k)
        (kinds.next() & 1 ? d : i)++;
    std::vector<BurstSpec> bursts;
    if (cfg.algorithm == Algorithm::single_burst) {
        bursts.push_back({cfg.B, (kinds.next() & 1) != 0});
    } else {
        for (std::size_t k = 0; k < cfg.burst_count; ++k) {
            std::size_t len =
                cfg.burst_min + kinds.below(cfg.burst_max - cfg.burst_min + 1);
            bursts.push_back({len, (kinds.next() & 1) != 0});
        }
    }
    EditScript script = random_script(cfg.n, d, i, cfg.s, bursts, script_seed);
    BitSeq y = apply(x, script);
    r.d = d;
    r.i = i;
    r.s = cfg.s;
    r.bursts = bursts.size();

    SyncParams params = cfg.params;
    params.hash.seed = hash_seed;
    if (cfg.algorithm == Algorithm::multi_burst)
        params.burst_mode = true;
    if (cfg.algorithm == Algorithm::distance_mode &&
        params.hash.mode != HashMode::distance_sketch) {
        params.hash.mode = HashMode::distance_sketch;
        if (params.hash.kappa_s == 0)
            params.hash.kappa_s = 50;
    }
    if (cfg.oracle)
        params.reference = &x;

    switch (cfg.algorithm) {
    case Algorithm::interactive:
    case Algorithm::multi_burst:
    case Algorithm::distance_mode: {
        SyncParams resolved = resolve_params(params, cfg.n);
        r.m_a = resolved.m_a;
        r.m_h = resolved.m_h;
        auto out = run_sync(x, y, params);
        r.stats = out.stats;
        r.exact = out.reconstructed == x;
        r.final_norm_hd = out.reconstructed.size() == cfg.n
                              ? static_cast<double>(out.reconstructed.hamming(x)) / cfg.n
                              : 1.0;
        break;
    }
    case Algorithm::single_round: {
        PiecePlan plan;
        plan.piece_len = cfg.piece_len;
        plan.m_a = params.m_a;
        plan.m_h = params.m_h;
        plan.hash = params.hash;
        plan.window_scale = cfg.window_scale;
        plan.reference = params.reference;
        auto out = run_single_round(x, y, plan);
        r.m_a = plan.m_a ? plan.m_a : 2 * static_cast<std::size_t>(std::ceil(std::log2(cfg.n)));
        r.m_h = plan.m_h ? plan.m_h : r.m_a;
        r.stats = out.stats;
        r.exact = out.reconstructed == x;
        r.final_norm_hd = out.reconstructed.size() == cfg.n
                              ? static_cast<double>(out.reconstructed.hamming(x)) / cfg.n
                              : 1.0;
        break;
    }
    case Algorithm::single_burst: {
        auto [reconstructed, bs] = run_single_burst(x, y, cfg.B, bursts[0].is_delete);
        r.stats.bits_e2d = bs.bits_e2d;
        r.stats.bits_d2e = bs.bits_d2e;
        r.stats.wire_bytes_e2d = bs.wire_bytes_e2d;
        r.stats.wire_bytes_d2e = bs.wire_bytes_d2e;
        r.stats.rounds = 2;
        r.stats.burst_invocations = 1;
        r.stats.burst_bits = bs.bits_e2d;
        r.exact = reconstructed == x;
        r.stats.outcome = r.exact ? Outcome::synced : Outcome::failed;
        r.final_norm_hd = r.exact ? 0.0 : 1.0;
        break;
    }
    }

    r.failed = cfg.algorithm == Algorithm::distance_mode
                   ? r.stats.outcome == Outcome::failed
                   : !r.exact;
    return r;
}

BenchSummary summarize(const std::vector<TrialResult>& results) {
    BenchSummary s;
    s.trials = results.size();
    if (results.empty())
        return s;
    double sum = 0, sum2 = 0;
    for (const TrialResult& r : results) {
        double total = static_cast<double>(r.stats.bits_e2d + r.stats.bits_d2e);
        sum += total;
        sum2 += total * total;
        s.mean_bits_e2d += static_cast<double>(r.stats.bits_e2d);
        s.mean_bits_d2e += static_cast<double>(r.stats.bits_d2e);
        s.mean_anchor_bits += static_cast<double>(r.stats.anchor_bits);
        s.mean_anchors += static_cast<double>(r.stats.anchors_sent);
        s.mean_hashes += static_cast<double>(r.stats.hashes_sent);
        s.mean_syndromes += static_cast<double>(r.stats.syndromes_sent);
        s.mean_pieces_full += static_cast<double>(r.stats.pieces_sent_full);
        s.mean_rounds += static_cast<double>(r.stats.rounds);
        s.mean_final_norm_hd += r.final_norm_hd;
        if (r.failed)
            s.failure_rate += 1;
    }
    double inv = 1.0 / static_cast<double>(results.size());
    s.mean_total_bits = sum * inv;
    double var = sum2 * inv - s.mean_total_bits * s.mean_total_bits;
    s.stddev_total_bits = var > 0 ? std::sqrt(var) : 0.0;
    s.mean_bits_e2d *= inv;
    s.mean_bits_d2e *= inv;
    s.mean_anchor_bits *= inv;
    s.mean_anchors *= inv;
    s.mean_hashes *= inv;
    s.mean_syndromes *= inv;
    s.mean_pieces_full *= inv;
    s.mean_rounds *= inv;
    s.mean_final_norm_hd *= inv;
    s.failure_rate *= inv;
    return s;
}

std::string csv_header() {
    return "trial,n,d,i,s,bursts,m_a,m_h,rounds,bits_e2d,bits_d2e,anchors,hashes,"
           "syndromes,pieces_full,outcome";
}

std::string csv_row(const BenchConfig& cfg, std::uint64_t trial, const TrialResult& r) {
    std::ostringstream out;
    out << trial << ',' << cfg.n << ',' << r.d << ',' << r.i << ',' << r.s << ','
        << r.bursts << ',' << r.m_a << ',' << r.m_h << ',' << r.stats.rounds << ','
        << r.stats.bits_e2d << ',' << r.stats.bits_d2e << ',' << r.stats.anchors_sent
        << ',' << r.stats.hashes_sent << ',' << r.stats.syndromes_sent << ','
        << r.stats.pieces_sent_full << ',' << to_string(r.stats.outcome);
    return out.str();
}

} // namespace bitsync
