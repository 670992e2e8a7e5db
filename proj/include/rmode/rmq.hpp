#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmode/errors.hpp"
#include "rmode/probe.hpp"
#include "rmode/serialize.hpp"

namespace rmode {

enum class TieBreak : std::uint8_t { Leftmost = 0, Rightmost = 1 };

/// Range maximum query over a static sequence: sparse table over the argmax
/// of each 32-element block, constant work per query. Values are retained.
class RmqIndex {
public:
    using value_type = std::int32_t;

    RmqIndex() = default;

    explicit RmqIndex(std::vector<value_type> values, TieBreak tie = TieBreak::Leftmost)
        : values_(std::move(values)), tie_(tie) {
        build_table();
    }

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] TieBreak tie_break() const noexcept { return tie_; }
    [[nodiscard]] value_type value(std::size_t i) const { return values_.at(i); }

    /// Index of a maximum of values[l..r] (inclusive), ties per tie_break().
    [[nodiscard]] std::size_t query(std::size_t l, std::size_t r) const {
        if (l > r || r >= values_.size())
            throw RangeError("RmqIndex::query: bad range [" + std::to_string(l) + "," + std::to_string(r) + "] for size " + std::to_string(values_.size()));
        probe::tick();
        return raw_query(l, r);
    }

    struct Report {
        std::vector<std::size_t> indices;  // discovery order
        std::size_t calls = 0;             // invocations of the range recursion, empty ranges included
    };

    /// All k in [l, r] for which `holds(k)` is true, where `holds(k)` must
    /// answer "values[k] >= t" for a fixed threshold t. The recursion explores
    /// the argmax of a range and stops as soon as the maximum fails the test,
    /// so it performs at most 2 * |output| + 1 calls.
    template <std::predicate<std::size_t> Pred>
    [[nodiscard]] Report threshold_report(std::int64_t l, std::int64_t r, Pred&& holds) const {
        Report out;
        if (l <= r && (l < 0 || r >= static_cast<std::int64_t>(values_.size())))
            throw RangeError("RmqIndex::threshold_report: range out of bounds");
        std::vector<std::pair<std::int64_t, std::int64_t>> stack;
        stack.emplace_back(l, r);
        while (!stack.empty()) {
            const auto [x, y] = stack.back();
            stack.pop_back();
            ++out.calls;
            if (x > y) continue;
            const std::size_t id = raw_query(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
            if (!holds(id)) continue;
            out.indices.push_back(id);
            const auto sid = static_cast<std::int64_t>(id);
            stack.emplace_back(sid + 1, y);
            stack.emplace_back(x, sid - 1);
        }
        return out;
    }

    /// Threshold report against the stored values.
    [[nodiscard]] Report threshold_report(std::int64_t l, std::int64_t r, std::int64_t t) const {
        return threshold_report(l, r, [&](std::size_t k) { return values_[k] >= t; });
    }

    [[nodiscard]] std::size_t size_in_bits() const noexcept {
        std::size_t bits = values_.size() * 32 + 64;
        for (const auto& level : table_) bits += level.size() * 32;
        return bits;
    }

    void serialize(io::Writer& w) const {
        w.put<std::uint8_t>(static_cast<std::uint8_t>(tie_));
        w.put_vec(values_);
    }

    static RmqIndex deserialize(io::Reader& r) {
        const auto tie = r.get<std::uint8_t>();
        if (tie > 1) throw CorruptIndex("RmqIndex: bad tie-break tag");
        return RmqIndex(r.get_vec<value_type>(), static_cast<TieBreak>(tie));
    }

private:
    [[nodiscard]] std::size_t pick(std::size_t a, std::size_t b) const noexcept {
        if (values_[a] != values_[b]) return values_[a] > values_[b] ? a : b;
        return tie_ == TieBreak::Leftmost ? std::min(a, b) : std::max(a, b);
    }

    static constexpr std::size_t kBlock = 32;

    [[nodiscard]] std::size_t scan(std::size_t l, std::size_t r) const noexcept {
        std::size_t best = l;
        for (std::size_t i = l + 1; i <= r; ++i) best = pick(best, i);
        return best;
    }

    // Ranges touching at most two blocks are scanned (<= 64 cells); longer
    // ranges combine the two partial blocks with a sparse table over block argmaxes.
    [[nodiscard]] std::size_t raw_query(std::size_t l, std::size_t r) const noexcept {
        const std::size_t bl = l / kBlock, br = r / kBlock;
        if (br <= bl + 1) return scan(l, r);
        std::size_t best = pick(scan(l, (bl + 1) * kBlock - 1), scan(br * kBlock, r));
        const std::size_t lo = bl + 1, hi = br - 1;
        const auto k = static_cast<std::size_t>(std::bit_width(hi - lo + 1) - 1);
        const auto& level = table_[k];
        return pick(best, pick(level[lo], level[hi + 1 - (std::size_t{1} << k)]));
    }

    void build_table() {
        const std::size_t n = values_.size();
        table_.clear();
        if (n == 0) return;
        const std::size_t nb = (n + kBlock - 1) / kBlock;
        table_.emplace_back(nb);
        for (std::size_t b = 0; b < nb; ++b) table_[0][b] = static_cast<std::uint32_t>(scan(b * kBlock, std::min(n, (b + 1) * kBlock) - 1));
        for (std::size_t k = 1; (std::size_t{1} << k) <= nb; ++k) {
            const std::size_t half = std::size_t{1} << (k - 1);
            const auto& prev = table_[k - 1];
            std::vector<std::uint32_t> level(nb - (std::size_t{1} << k) + 1);
            for (std::size_t i = 0; i < level.size(); ++i) level[i] = static_cast<std::uint32_t>(pick(prev[i], prev[i + half]));
            table_.push_back(std::move(level));
        }
    }

    std::vector<value_type> values_;
    TieBreak tie_ = TieBreak::Leftmost;
    std::vector<std::vector<std::uint32_t>> table_;
};

}  // namespace rmode
