#pragma once

#include "bitsync/bitseq.hpp"

#include <cstdint>

namespace bitsync {

enum class HashMode { exact_h3, distance_sketch };

struct HashSpec {
    HashMode mode = HashMode::exact_h3;
    std::size_t m_h = 1;
    double kappa_s = 0; // 0 = default 1/d0 (distance mode only)
    double d0 = 0.02;   // distance mode only
    std::uint64_t seed = 0;
};

// Effective sketch density parameter (kappa_s, defaulting to 1/d0).
double resolved_kappa(const HashSpec& spec);

/// Substring identity in X-coordinates; both parties must present the same
/// context for corresponding segments so they derive the same hash matrix.
struct HashContext {
    std::size_t start = 0;
    std::size_t len = 0;

    bool operator==(const HashContext&) const = default;
};

struct Digest {
    BitSeq bits;                 // exactly m_h bits
    std::size_t subject_len = 0; // length of the hashed string

    bool operator==(const Digest&) const = default;
};

// f(x) = x.Q over GF(2); Q rows derived lazily from (seed, context, row).
Digest h3_hash(const BitSeq& x, const HashSpec& spec, HashContext ctx);

// g(x) = x.R over GF(2); R entries i.i.d. Bernoulli(kappa_s / (2 |x|)).
Digest sketch(const BitSeq& x, const HashSpec& spec, HashContext ctx);

// Mode dispatch to h3_hash or sketch.
Digest digest(const BitSeq& x, const HashSpec& spec, HashContext ctx);

// Normalized Hamming-distance estimate in [0, 1] from two sketches of
// length-n strings; saturates to 1 when the XOR density exceeds the
// invertible range.
double estimate_distance(const Digest& dx, const Digest& dy, std::size_t n,
                         const HashSpec& spec);

// Exact mode: digest equality. Distance mode: estimate_distance < d0.
bool accept(const Digest& dx, const Digest& dy, std::size_t n, const HashSpec& spec);

} // namespace bitsync
