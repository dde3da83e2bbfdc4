#pragma once

#include "bitsync/bitseq.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bitsync {

enum class EditKind { Delete, Insert, Substitute, BurstDelete, BurstInsert };

struct BurstSpec {
    std::size_t length;
    bool is_delete;
};

/// One edit event. Positions index the string as edited so far (sequential
/// replay semantics); events are stored in application order.
struct EditEvent {
    EditKind kind;
    std::size_t pos;
    bool bit = false;    // Insert payload
    BitSeq payload;      // BurstInsert payload
    std::size_t len = 0; // BurstDelete length

    bool operator==(const EditEvent&) const = default;
};

struct EditScript {
    std::vector<EditEvent> events;

    std::size_t deletions() const;
    std::size_t insertions() const;
    std::size_t substitutions() const;

    std::string serialize() const;
    static EditScript parse(const std::string& text);

    bool operator==(const EditScript&) const = default;
};

BitSeq apply(const BitSeq& x, const EditScript& script);

// Replays the script against x to build the exact inverse (apply(apply(x, s),
// inverse_script(x, s)) == x).
EditScript inverse_script(const BitSeq& x, const EditScript& script);

/// Uniformly random non-colliding edit positions over x, emitted in
/// sequential-replay form. Bursts occupy disjoint intervals.
EditScript random_script(std::size_t n, std::size_t d, std::size_t i, std::size_t s,
                         const std::vector<BurstSpec>& bursts, std::uint64_t seed);

} // namespace bitsync
