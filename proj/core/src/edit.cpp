#include "bitsync/edit.hpp"

#include "bitsync/errors.hpp"
#include "bitsync/rng.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace bitsync {

std::size_t EditScript::deletions() const {
    std::size_t n = 0;
    for (const auto& e : events) {
        if (e.kind == EditKind::Delete)
            n += 1;
        else if (e.kind == EditKind::BurstDelete)
            n += e.len;
    }
    return n;
}

std::size_t EditScript::insertions() const {
    std::size_t n = 0;
    for (const auto& e : events) {
        if (e.kind == EditKind::Insert)
            n += 1;
        else if (e.kind == EditKind::BurstInsert)
            n += e.payload.size();
    }
    return n;
}

std::size_t EditScript::substitutions() const {
    std::size_t n = 0;
    for (const auto& e : events)
        if (e.kind == EditKind::Substitute)
            ++n;
    return n;
}

std::string EditScript::serialize() const {
    std::ostringstream out;
    for (const auto& e : events) {
        switch (e.kind) {
        case EditKind::Delete:
            out << "D " << e.pos << '\n';
            break;
        case EditKind::Insert:
            out << "I " << e.pos << ' ' << (e.bit ? 1 : 0) << '\n';
            break;
        case EditKind::Substitute:
            out << "S " << e.pos << '\n';
            break;
        case EditKind::BurstDelete:
            out << "BD " << e.pos << ' ' << e.len << '\n';
            break;
        case EditKind::BurstInsert:
            out << "BI " << e.pos << ' ' << e.payload.to_string() << '\n';
            break;
        }
    }
    return out.str();
}

EditScript EditScript::parse(const std::string& text) {
    EditScript script;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        EditEvent e;
        if (op == "D") {
            e.kind = EditKind::Delete;
            ls >> e.pos;
        } else if (op == "I") {
            e.kind = EditKind::Insert;
            int b;
            ls >> e.pos >> b;
            e.bit = b != 0;
        } else if (op == "S") {
            e.kind = EditKind::Substitute;
            ls >> e.pos;
        } else if (op == "BD") {
            e.kind = EditKind::BurstDelete;
            ls >> e.pos >> e.len;
        } else if (op == "BI") {
            e.kind = EditKind::BurstInsert;
            std::string bits;
            ls >> e.pos >> bits;
            e.payload = BitSeq::parse(bits);
        } else {
            throw DomainError("EditScript::parse: unknown op '" + op + "'");
        }
        if (!ls)
            throw DomainError("EditScript::parse: malformed line '" + line + "'");
        script.events.push_back(std::move(e));
    }
    return script;
}

namespace {

BitSeq apply_event(const BitSeq& cur, const EditEvent& e) {
    switch (e.kind) {
    case EditKind::Delete:
        if (e.pos >= cur.size())
            throw PositionOutOfRange("delete position out of range");
        return concat(cur.slice(0, e.pos), cur.slice(e.pos + 1, cur.size() - e.pos - 1));
    case EditKind::Insert: {
        if (e.pos > cur.size())
            throw PositionOutOfRange("insert position out of range");
        BitSeq out = cur.slice(0, e.pos);
        out.push_back(e.bit);
        out.append(cur.slice(e.pos, cur.size() - e.pos));
        return out;
    }
    case EditKind::Substitute: {
        if (e.pos >= cur.size())
            throw PositionOutOfRange("substitute position out of range");
        BitSeq out = cur;
        out.set_bit(e.pos, !out.bit(e.pos));
        return out;
    }
    case EditKind::BurstDelete:
        if (e.pos + e.len > cur.size())
            throw PositionOutOfRange("burst delete out of range");
        return concat(cur.slice(0, e.pos), cur.slice(e.pos + e.len, cur.size() - e.pos - e.len));
    case EditKind::BurstInsert: {
        if (e.pos > cur.size())
            throw PositionOutOfRange("burst insert position out of range");
        BitSeq out = cur.slice(0, e.pos);
        out.append(e.payload);
        out.append(cur.slice(e.pos, cur.size() - e.pos));
        return out;
    }
    }
    throw DomainError("unreachable");
}

} // namespace

BitSeq apply(const BitSeq& x, const EditScript& script) {
    BitSeq cur = x;
    for (const auto& e : script.events)
        cur = apply_event(cur, e);
    return cur;
}

EditScript inverse_script(const BitSeq& x, const EditScript& script) {
    BitSeq cur = x;
    std::vector<EditEvent> inverse;
    inverse.reserve(script.events.size());
    for (const auto& e : script.events) {
        EditEvent inv;
        switch (e.kind) {
        case EditKind::Delete:
            inv = {EditKind::Insert, e.pos, cur.bit(e.pos), {}, 0};
            break;
        case EditKind::Insert:
            inv = {EditKind::Delete, e.pos, false, {}, 0};
            break;
        case EditKind::Substitute:
            inv = {EditKind::Substitute, e.pos, false, {}, 0};
            break;
        case EditKind::BurstDelete:
            inv = {EditKind::BurstInsert, e.pos, false, cur.slice(e.pos, e.len), 0};
            break;
        case EditKind::BurstInsert:
            inv = {EditKind::BurstDelete, e.pos, false, {}, e.payload.size()};
            break;
        }
        inverse.push_back(std::move(inv));
        cur = apply_event(cur, e);
    }
    std::reverse(inverse.begin(), inverse.end());
    return {std::move(inverse)};
}

EditScript random_script(std::size_t n, std::size_t d, std::size_t i, std::size_t s,
                         const std::vector<BurstSpec>& bursts, std::uint64_t seed) {
    std::size_t burst_del = 0;
    for (const auto& b : bursts)
        if (b.is_delete)
            burst_del += b.length;
    if (d + burst_del > n)
        throw TooManyEdits("more deletions than bits");

    SplitMix rng(mix(seed, 0x73637269u));

    // Burst intervals first (they need room), then point edits avoiding them.
    struct Interval {
        std::size_t start, len;
        bool is_delete;
        BitSeq payload;
    };
    std::vector<Interval> intervals;
    auto overlaps = [&](std::size_t start, std::size_t len) {
        for (const auto& iv : intervals)
            if (start < iv.start + iv.len && iv.start < start + len)
                return true;
        return false;
    };
    for (const auto& b : bursts) {
        if (b.length == 0 || b.length > n)
            throw BadBurstLength("burst length out of range");
        std::size_t start;
        std::size_t attempts = 0;
        do {
            start = static_cast<std::size_t>(rng.below(n - b.length + 1));
            if (++attempts > 10000)
                throw TooManyEdits("cannot place non-overlapping bursts");
        } while (overlaps(start, b.length));
        Interval iv{start, b.length, b.is_delete, {}};
        if (!b.is_delete)
            iv.payload = BitSeq::random(b.length, rng.next());
        intervals.push_back(std::move(iv));
    }

    std::unordered_set<std::size_t> used;
    auto in_interval = [&](std::size_t p) {
        for (const auto& iv : intervals)
            if (p >= iv.start && p < iv.start + iv.len)
                return true;
        return false;
    };
    auto sample_point = [&]() {
        for (std::size_t attempts = 0; attempts < 100000; ++attempts) {
            std::size_t p = static_cast<std::size_t>(rng.below(n));
            if (!used.contains(p) && !in_interval(p)) {
                used.insert(p);
                return p;
            }
        }
        throw TooManyEdits("cannot place non-colliding edits");
    };

    // X-position plan, then one ascending pass to sequential-replay form.
    struct Planned {
        std::size_t xpos;
        EditEvent e;
    };
    std::vector<Planned> plan;
    for (const auto& iv : intervals) {
        EditEvent e;
        if (iv.is_delete)
            e = {EditKind::BurstDelete, 0, false, {}, iv.len};
        else
            e = {EditKind::BurstInsert, 0, false, iv.payload, 0};
        plan.push_back({iv.start, std::move(e)});
    }
    for (std::size_t k = 0; k < d; ++k)
        plan.push_back({sample_point(), {EditKind::Delete, 0, false, {}, 0}});
    for (std::size_t k = 0; k < i; ++k)
        plan.push_back({sample_point(), {EditKind::Insert, 0, (rng.next() & 1u) != 0, {}, 0}});
    for (std::size_t k = 0; k < s; ++k)
        plan.push_back({sample_point(), {EditKind::Substitute, 0, false, {}, 0}});

    std::sort(plan.begin(), plan.end(),
              [](const Planned& a, const Planned& b) { return a.xpos < b.xpos; });

    EditScript script;
    std::ptrdiff_t delta = 0;
    for (auto& p : plan) {
        p.e.pos = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p.xpos) + delta);
        switch (p.e.kind) {
        case EditKind::Delete:
            delta -= 1;
            break;
        case EditKind::Insert:
            delta += 1;
            break;
        case EditKind::Substitute:
            break;
        case EditKind::BurstDelete:
            delta -= static_cast<std::ptrdiff_t>(p.e.len);
            break;
        case EditKind::BurstInsert:
            delta += static_cast<std::ptrdiff_t>(p.e.payload.size());
            break;
        }
        script.events.push_back(std::move(p.e));
    }
    return script;
}

} // namespace bitsync
