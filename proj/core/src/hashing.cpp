#include "bitsync/hashing.hpp"

#include "bitsync/errors.hpp"
#include "bitsync/rng.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace bitsync {

double resolved_kappa(const HashSpec& spec) {
    return spec.kappa_s > 0 ? spec.kappa_s : 1.0 / spec.d0;
}

namespace {

std::uint64_t matrix_key(const HashSpec& spec, HashContext ctx) {
    return mix(mix(spec.seed, ctx.start), ctx.len);
}

BitSeq words_to_bits(const std::vector<std::uint64_t>& acc, std::size_t m) {
    BitSeq out(m);
    for (std::size_t j = 0; j < m; ++j)
        if ((acc[j >> 6] >> (j & 63)) & 1u)
            out.set_bit(j, true);
    return out;
}

} // namespace

Digest h3_hash(const BitSeq& x, const HashSpec& spec, HashContext ctx) {
    std::size_t m = spec.m_h;
    std::uint64_t key = matrix_key(spec, ctx);
    std::size_t nwords = (m + 63) / 64;
    std::vector<std::uint64_t> acc(nwords, 0);

    // XOR row Q_i into the accumulator for every set bit i of x.
    const auto& words = x.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
        std::uint64_t w = words[k];
        while (w != 0) {
            std::size_t i = (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
            w &= w - 1;
            std::uint64_t row_key = mix(key, i);
            if (nwords == 1) {
                acc[0] ^= splitmix64(row_key);
            } else {
                SplitMix rs(row_key);
                for (std::size_t j = 0; j < nwords; ++j)
                    acc[j] ^= rs.next();
            }
        }
    }
    if ((m & 63) != 0)
        acc[nwords - 1] &= (1ull << (m & 63)) - 1;
    return {words_to_bits(acc, m), x.size()};
}

Digest sketch(const BitSeq& x, const HashSpec& spec, HashContext ctx) {
    std::size_t m = spec.m_h;
    std::size_t n = x.size();
    double q = n == 0 ? 0.0 : resolved_kappa(spec) / (2.0 * static_cast<double>(n));
    if (q > 1.0)
        throw DensityOutOfRange("sketch density exceeds 1");

    std::uint64_t key = matrix_key(spec, ctx);
    std::size_t nwords = (m + 63) / 64;
    std::vector<std::uint64_t> acc(nwords, 0);
    double log1mq = q < 1.0 ? std::log1p(-q) : 0.0;

    const auto& words = x.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
        std::uint64_t w = words[k];
        while (w != 0) {
            std::size_t i = (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
            w &= w - 1;
            if (q <= 0.0)
                continue;
            SplitMix rs(mix(key, i));
            if (q >= 1.0) {
                for (std::size_t j = 0; j < nwords; ++j)
                    acc[j] = ~acc[j];
                continue;
            }
            // Geometric skipping over the sparse Bernoulli(q) row.
            double u = rs.next_unit();
            double pos = std::floor(std::log1p(-u) / log1mq);
            while (pos < static_cast<double>(m)) {
                std::size_t j = static_cast<std::size_t>(pos);
                acc[j >> 6] ^= 1ull << (j & 63);
                u = rs.next_unit();
                pos += 1.0 + std::floor(std::log1p(-u) / log1mq);
            }
        }
    }
    if ((m & 63) != 0)
        acc[nwords - 1] &= (1ull << (m & 63)) - 1;
    return {words_to_bits(acc, m), n};
}

Digest digest(const BitSeq& x, const HashSpec& spec, HashContext ctx) {
    return spec.mode == HashMode::exact_h3 ? h3_hash(x, spec, ctx) : sketch(x, spec, ctx);
}

namespace {

double estimate_from_zbar(double zbar, std::size_t n, const HashSpec& spec) {
    if (zbar <= 0.0)
        return 0.0;
    if (n == 0)
        return 1.0;
    double kappa = resolved_kappa(spec);
    double ratio = 1.0 - kappa / static_cast<double>(n);
    if (ratio <= 0.0)
        return zbar > 0.0 ? 1.0 : 0.0;
    double threshold = 0.5 * (1.0 - std::pow(ratio, static_cast<double>(n)));
    if (zbar > threshold)
        return 1.0;
    double est = std::log1p(-2.0 * zbar) / std::log(ratio) / static_cast<double>(n);
    return est < 0.0 ? 0.0 : (est > 1.0 ? 1.0 : est);
}

double digest_zbar(const Digest& dx, const Digest& dy) {
    std::size_t m = dx.bits.size();
    if (m != dy.bits.size() || m == 0)
        throw DomainError("estimate_distance: digest length mismatch");
    return static_cast<double>(dx.bits.hamming(dy.bits)) / static_cast<double>(m);
}

} // namespace

double estimate_distance(const Digest& dx, const Digest& dy, std::size_t n,
                         const HashSpec& spec) {
    return estimate_from_zbar(digest_zbar(dx, dy), n, spec);
}

bool accept(const Digest& dx, const Digest& dy, std::size_t n, const HashSpec& spec) {
    if (spec.mode == HashMode::exact_h3)
        return dx == dy;
    // The plug-in estimate is noisy at small m: strings that disagree almost
    // everywhere still land under d0 with probability ~exp(-2 m (z* - 1/2)^2)
    // (about 1% at m = 40), which dominates the residual distance if accepted.
    // Accept on an upper confidence limit of the parity-mismatch rate instead
    // of its point estimate; borderline pieces just split one level further.
    std::size_t m = dx.bits.size();
    if (m != dy.bits.size() || m == 0)
        throw DomainError("accept: digest length mismatch");
    double zbar = digest_zbar(dx, dy);
    double z_hi = zbar + 2.0 * std::sqrt(zbar * (1.0 - zbar) / static_cast<double>(m)) +
                  0.5 / static_cast<double>(m);
    return estimate_from_zbar(z_hi, n, spec) < spec.d0;
}

} // namespace bitsync
