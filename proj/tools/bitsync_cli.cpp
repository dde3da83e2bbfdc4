#include "bitsync/bench.hpp"
#include "bitsync/bounds.hpp"
#include "bitsync/burst.hpp"
#include "bitsync/edit.hpp"
#include "bitsync/errors.hpp"
#include "bitsync/protocol.hpp"
#include "bitsync/rng.hpp"
#include "bitsync/single_round.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace bitsync;
using nlohmann::json;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BITSYNC_SEED"))
        return std::strtoull(env, nullptr, 0);
    return kDefaultSeed;
}

json stats_to_json(const SyncStats& s) {
    return json{{"rounds", s.rounds},
                {"bits_e2d", s.bits_e2d},
                {"bits_d2e", s.bits_d2e},
                {"wire_bytes_e2d", s.wire_bytes_e2d},
                {"wire_bytes_d2e", s.wire_bytes_d2e},
                {"anchors_sent", s.anchors_sent},
                {"hashes_sent", s.hashes_sent},
                {"syndromes_sent", s.syndromes_sent},
                {"pieces_sent_full", s.pieces_sent_full},
                {"burst_invocations", s.burst_invocations},
                {"anchor_bits", s.anchor_bits},
                {"hash_bits", s.hash_bits},
                {"syndrome_bits", s.syndrome_bits},
                {"full_piece_bits", s.full_piece_bits},
                {"burst_bits", s.burst_bits},
                {"abort_bits", s.abort_bits},
                {"outcome", to_string(s.outcome)}};
}

struct ParamFlags {
    std::size_t m_a = 0, m_h = 0;
    double window_scale = 2.0, small_piece_factor = 2.0, abort_fraction = 0.5;
    std::size_t b0 = 50, t_burst = 2;
    bool burst_mode = false;
    bool sketch = false;
    double kappa = 0, d0 = 0.02;

    void add_to(CLI::App* app) {
        app->add_option("--ma", m_a, "anchor length m_a (0 = 2*ceil(log2 n))");
        app->add_option("--mh", m_h, "hash length m_h (0 = 2*ceil(log2 n))");
        app->add_option("--window-scale", window_scale, "anchor window scale");
        app->add_option("--small-piece", small_piece_factor, "full-send threshold factor");
        app->add_option("--alpha", abort_fraction, "abort budget fraction");
        app->add_option("--b0", b0, "burst hypothesis threshold B0");
        app->add_option("--t-burst", t_burst, "rounds of stable offset before a burst guess");
        app->add_flag("--burst-mode", burst_mode, "enable burst guess-and-check");
        app->add_flag("--sketch", sketch, "use distance sketches instead of exact hashes");
        app->add_option("--kappa", kappa, "sketch density parameter (0 = 1/d0)");
        app->add_option("--d0", d0, "distance-mode target normalized distance");
    }

    SyncParams to_params(std::uint64_t seed) const {
        SyncParams p;
        p.m_a = m_a;
        p.m_h = m_h;
        p.window_scale = window_scale;
        p.small_piece_factor = small_piece_factor;
        p.abort_fraction = abort_fraction;
        p.burst_threshold = b0;
        p.burst_rounds = t_burst;
        p.burst_mode = burst_mode;
        p.hash.seed = seed;
        p.hash.d0 = d0;
        p.hash.kappa_s = kappa;
        if (sketch)
            p.hash.mode = HashMode::distance_sketch;
        return p;
    }
};

int cmd_gen(const std::string& out_dir, std::size_t n, std::size_t d, std::size_t i,
            std::size_t s, std::size_t burst_count, std::size_t burst_min,
            std::size_t burst_max, std::uint64_t seed, bool text_mode) {
    SplitMix rng(seed);
    BitSeq x = BitSeq::random(n, rng.next());
    std::vector<BurstSpec> bursts;
    SplitMix kinds(rng.next());
    for (std::size_t k = 0; k < burst_count; ++k)
        bursts.push_back({burst_min + kinds.below(burst_max - burst_min + 1),
                          (kinds.next() & 1) != 0});
    EditScript script = random_script(n, d, i, s, bursts, rng.next());
    BitSeq y = apply(x, script);

    write_bits_file(out_dir + "/x.bits", x, text_mode);
    write_bits_file(out_dir + "/y.bits", y, text_mode);
    std::ofstream sf(out_dir + "/script.txt");
    if (!sf)
        throw std::runtime_error("cannot write " + out_dir + "/script.txt");
    sf << script.serialize();
    std::cout << "wrote " << out_dir << "/{x.bits,y.bits,script.txt}  |x|=" << x.size()
              << " |y|=" << y.size() << "\n";
    return 0;
}

int cmd_sync(const std::string& x_path, const std::string& y_path,
             const std::string& mode, const ParamFlags& flags, std::size_t piece_len,
             std::uint64_t seed, bool text_mode) {
    BitSeq x = read_bits_file(x_path, text_mode);
    BitSeq y = read_bits_file(y_path, text_mode);
    Algorithm alg = algorithm_from_string(mode);
    SyncParams params = flags.to_params(seed);

    BitSeq reconstructed;
    SyncStats stats;
    switch (alg) {
    case Algorithm::interactive:
    case Algorithm::multi_burst:
    case Algorithm::distance_mode: {
        if (alg == Algorithm::multi_burst)
            params.burst_mode = true;
        if (alg == Algorithm::distance_mode)
            params.hash.mode = HashMode::distance_sketch;
        auto r = run_sync(x, y, params);
        reconstructed = std::move(r.reconstructed);
        stats = r.stats;
        break;
    }
    case Algorithm::single_round: {
        PiecePlan plan;
        plan.piece_len = piece_len;
        plan.m_a = params.m_a;
        plan.m_h = params.m_h;
        plan.hash = params.hash;
        plan.window_scale = params.window_scale;
        auto r = run_single_round(x, y, plan);
        reconstructed = std::move(r.reconstructed);
        stats = r.stats;
        break;
    }
    case Algorithm::single_burst: {
        if (x.size() == y.size())
            throw ParamOutOfRange("single_burst needs |x| != |y|");
        bool is_delete = y.size() < x.size();
        std::size_t B = is_delete ? x.size() - y.size() : y.size() - x.size();
        auto [rec, bs] = run_single_burst(x, y, B, is_delete);
        reconstructed = std::move(rec);
        stats.bits_e2d = bs.bits_e2d;
        stats.bits_d2e = bs.bits_d2e;
        stats.wire_bytes_e2d = bs.wire_bytes_e2d;
        stats.wire_bytes_d2e = bs.wire_bytes_d2e;
        stats.rounds = 2;
        stats.burst_invocations = 1;
        stats.outcome = Outcome::synced;
        break;
    }
    }

    bool verified = reconstructed == x;
    if (!verified && stats.outcome != Outcome::synced_within_d0)
        stats.outcome = Outcome::failed;

    std::cout << "outcome        " << to_string(stats.outcome) << "\n"
              << "verified       " << (verified ? "yes" : "no") << "\n"
              << "rounds         " << stats.rounds << "\n"
              << "bits e->d      " << stats.bits_e2d << "\n"
              << "bits d->e      " << stats.bits_d2e << "\n"
              << "wire bytes     " << stats.wire_bytes_e2d << " / " << stats.wire_bytes_d2e
              << "\n"
              << "anchors        " << stats.anchors_sent << "\n"
              << "hashes         " << stats.hashes_sent << "\n"
              << "syndromes      " << stats.syndromes_sent << "\n"
              << "full pieces    " << stats.pieces_sent_full << "\n"
              << "burst runs     " << stats.burst_invocations << "\n";
    json record = stats_to_json(stats);
    record["n"] = x.size();
    record["y_len"] = y.size();
    record["verified"] = verified;
    record["algorithm"] = mode;
    std::cout << record.dump() << "\n";
    return (verified || stats.outcome == Outcome::synced_within_d0) ? 0 : 1;
}

int cmd_bench(BenchConfig cfg, const std::string& output) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!output.empty() && output != "-") {
        file.open(output);
        if (!file)
            throw std::runtime_error("cannot write " + output);
        out = &file;
    }
    *out << csv_header() << "\n";
    std::vector<TrialResult> results;
    results.reserve(cfg.trials);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        results.push_back(run_trial(cfg, t));
        *out << csv_row(cfg, t, results.back()) << "\n";
    }
    BenchSummary s = summarize(results);
    *out << "# summary trials=" << s.trials << " mean_total_bits=" << s.mean_total_bits
         << " stddev_total_bits=" << s.stddev_total_bits
         << " mean_bits_e2d=" << s.mean_bits_e2d << " mean_bits_d2e=" << s.mean_bits_d2e
         << " mean_pieces_full=" << s.mean_pieces_full << " mean_rounds=" << s.mean_rounds
         << " mean_final_norm_hd=" << s.mean_final_norm_hd
         << " failure_rate=" << s.failure_rate << "\n";
    if (out != &std::cout)
        std::cerr << "bench: " << cfg.trials << " trials, mean total "
                  << s.mean_total_bits << " bits ("
                  << 100.0 * s.mean_total_bits / static_cast<double>(cfg.n)
                  << "% of n), failure rate " << s.failure_rate << "\n";
    return 0;
}

int cmd_bounds(int theorem, const std::map<std::string, double>& params,
               const std::string& stats_csv) {
    BoundReport report = thm_bounds(theorem, params);
    std::cout << report.name << " = " << report.value << " bits\n";
    for (const auto& [k, v] : report.extras)
        std::cout << "  " << k << " = " << v << "\n";
    if (!stats_csv.empty()) {
        std::ifstream in(stats_csv);
        if (!in)
            throw std::runtime_error("cannot read " + stats_csv);
        std::string line;
        std::getline(in, line); // header
        double sum_e2d = 0, sum_d2e = 0, rows = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream ls(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ls, field, ','))
                fields.push_back(field);
            if (fields.size() < 11)
                continue;
            sum_e2d += std::strtod(fields[9].c_str(), nullptr);
            sum_d2e += std::strtod(fields[10].c_str(), nullptr);
            rows += 1;
        }
        if (rows > 0) {
            double mean_e2d = sum_e2d / rows, mean_d2e = sum_d2e / rows;
            std::cout << "measured mean bits_e2d = " << mean_e2d
                      << (mean_e2d <= report.value ? "  (within bound)"
                                                   : "  (EXCEEDS bound)")
                      << "\n";
            auto n21 = report.extras.find("N21");
            if (n21 != report.extras.end())
                std::cout << "measured mean bits_d2e = " << mean_d2e
                          << (mean_d2e <= n21->second ? "  (within bound)"
                                                      : "  (EXCEEDS bound)")
                          << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VT-code based binary string synchronization"};
    app.require_subcommand(1);
    std::uint64_t seed = default_seed();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a deterministic (x, y, script) corpus");
    std::string out_dir = ".";
    std::size_t n = 1000000, d = 0, i = 0, s = 0;
    std::size_t burst_count = 0, burst_min = 80, burst_max = 200;
    bool text_mode = false;
    gen->add_option("--out", out_dir, "output directory");
    gen->add_option("--n", n, "length of x")->required();
    gen->add_option("--d", d, "deletions");
    gen->add_option("--i", i, "insertions");
    gen->add_option("--s", s, "substitutions");
    gen->add_option("--bursts", burst_count, "number of random-kind bursts");
    gen->add_option("--burst-min", burst_min, "minimum burst length");
    gen->add_option("--burst-max", burst_max, "maximum burst length");
    gen->add_option("--seed", seed, "rng seed (default $BITSYNC_SEED)");
    gen->add_flag("--text", text_mode, "write '0'/'1' text files instead of packed bytes");

    // sync
    auto* sync = app.add_subcommand("sync", "synchronize two bit files in-process");
    std::string x_path, y_path, mode = "interactive";
    std::size_t piece_len = 1000;
    ParamFlags flags;
    sync->add_option("--x", x_path, "encoder-side file")->required();
    sync->add_option("--y", y_path, "decoder-side file")->required();
    sync->add_option("--mode", mode,
                     "interactive|single_round|single_burst|multi_burst|distance_mode");
    sync->add_option("--piece-len", piece_len, "single_round piece length");
    sync->add_option("--seed", seed, "hash seed (default $BITSYNC_SEED)");
    sync->add_flag("--text", text_mode, "files are '0'/'1' text");
    flags.add_to(sync);

    // bench
    auto* bench = app.add_subcommand("bench", "run repeated trials, emit CSV + summary");
    BenchConfig cfg;
    std::string alg_name = "interactive", output;
    bench->add_option("--algorithm", alg_name,
                      "interactive|single_round|single_burst|multi_burst|distance_mode");
    bench->add_option("--n", cfg.n, "length of x");
    bench->add_option("--d", cfg.d, "deletions");
    bench->add_option("--i", cfg.i, "insertions");
    bench->add_option("--s", cfg.s, "substitutions");
    bench->add_option("--edits", cfg.random_edits, "isolated edits of random kind");
    bench->add_option("--bursts", cfg.burst_count, "random-kind bursts");
    bench->add_option("--burst-min", cfg.burst_min, "minimum burst length");
    bench->add_option("--burst-max", cfg.burst_max, "maximum burst length");
    bench->add_option("--B", cfg.B, "single_burst burst length");
    bench->add_option("--piece-len", cfg.piece_len, "single_round piece length");
    bench->add_option("--trials", cfg.trials, "trial count");
    bench->add_option("--seed", cfg.seed, "rng seed (default $BITSYNC_SEED)");
    bench->add_option("--output", output, "CSV path ('-' or empty = stdout)");
    bench->add_flag("--oracle", cfg.oracle, "ground-truth hash oracle");
    ParamFlags bench_flags;
    bench_flags.add_to(bench);

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate theorem bounds");
    int theorem = 1;
    double b_n = 1e6, b_t = 100, b_c = 2, b_a = 0.5, b_b = 0.25, b_ca = 1, b_ch = 2,
           b_B = 1000;
    std::string stats_csv;
    bounds->add_option("--thm", theorem, "theorem number (1, 2, or 3)")->required();
    bounds->add_option("--n", b_n, "string length");
    bounds->add_option("--t", b_t, "edit count (thm 1)");
    bounds->add_option("--c", b_c, "hash-length constant c (thm 1)");
    bounds->add_option("--a", b_a, "piece exponent a (thm 2)");
    bounds->add_option("--b", b_b, "edit exponent b (thm 2)");
    bounds->add_option("--ca", b_ca, "anchor constant c_a (thm 2)");
    bounds->add_option("--ch", b_ch, "hash constant c_h (thm 2)");
    bounds->add_option("--B", b_B, "burst length (thm 3)");
    bounds->add_option("--stats", stats_csv, "bench CSV to compare against the bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            cfg.seed = seed; // shared flag storage
            return cmd_gen(out_dir, n, d, i, s, burst_count, burst_min, burst_max, seed,
                           text_mode);
        }
        if (sync->parsed())
            return cmd_sync(x_path, y_path, mode, flags, piece_len, seed, text_mode);
        if (bench->parsed()) {
            cfg.algorithm = algorithm_from_string(alg_name);
            cfg.params = bench_flags.to_params(cfg.seed);
            cfg.window_scale = bench_flags.window_scale;
            return cmd_bench(cfg, output);
        }
        if (bounds->parsed()) {
            std::map<std::string, double> params;
            switch (theorem) {
            case 1: params = {{"n", b_n}, {"t", b_t}, {"c", b_c}}; break;
            case 2:
                params = {{"n", b_n}, {"a", b_a}, {"b", b_b}, {"c_a", b_ca}, {"c_h", b_ch}};
                break;
            case 3: params = {{"n", b_n}, {"B", b_B}}; break;
            default: throw ParamOutOfRange("theorem must be 1, 2, or 3");
            }
            return cmd_bounds(theorem, params, stats_csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
