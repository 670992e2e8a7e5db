#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmode/bitvec.hpp"
#include "rmode/mode_index.hpp"
#include "rmode/rmq.hpp"

namespace rmode {

enum class Strategy : std::uint8_t { Rmq = 0, Bits = 1, Leftmost = 2, Hybrid = 3 };

inline const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Rmq: return "rmq";
        case Strategy::Bits: return "bits";
        case Strategy::Leftmost: return "leftmost";
        case Strategy::Hybrid: return "hybrid";
    }
    return "?";
}

struct EnumConfig {
    ModeConfig mode;
    std::size_t n2_cap = 4096;  // build the n^2-bit table only up to this n
    bool hybrid = true;
    std::optional<std::size_t> hybrid_threshold;  // default ceil(n^(1 - epsilon))
    TieBreak tie = TieBreak::Leftmost;
};

/// All modes of a range, as symbols and as their rightmost in-range positions.
struct Enumeration {
    std::uint32_t freq = 0;
    std::vector<std::size_t> positions;  // mode index set, ascending
    std::vector<std::uint32_t> symbols;  // ascending
    std::size_t rmq_calls = 0;           // threshold-report recursion calls
    std::size_t iterations = 0;          // leftmost-narrowing or bit-walk loop iterations
};

/// Positions split by whether their symbol is frequent (>= threshold).
struct HybridSplit {
    std::size_t threshold = 0;
    BitVec marker;  // 1 = high-frequency symbol
    std::vector<std::uint32_t> high;
    std::vector<std::uint32_t> low;
};

inline HybridSplit split_by_frequency(const Text& text, std::size_t threshold) {
    HybridSplit out;
    out.threshold = threshold;
    BitVec::Builder b(text.size());
    for (std::size_t p = 0; p < text.size(); ++p) {
        const bool high = text.occ(text[p]).size() >= threshold;
        b.push_back(high);
        (high ? out.high : out.low).push_back(text[p]);
    }
    out.marker = std::move(b).build();
    return out;
}

inline std::size_t hybrid_threshold(std::size_t n, Fraction epsilon) { return ceil_pow(n, 1.0 - epsilon.value()); }

/// Range mode enumeration over a Text.
///
/// H[g][j] is the largest k with f(k, j) = g and S[j] a mode of [k, j] (-1 if
/// none). For a query with g = f(l, r) every t in [b, r], b = min{t : f(l, t) >= g},
/// has f(l, t) = g, and t belongs to the mode index set iff H[g][t] >= l, i.e.
/// iff S[t] occurs g times in [l, t]. Only RMQ structures over H are kept; the
/// threshold test itself goes through the occurrence lists.
class EnumIndex {
public:
    struct Sizes {
        ModeIndex::Sizes mode;
        std::size_t rmq = 0, bits = 0, hybrid = 0;
    };

    EnumIndex() = default;

    EnumIndex(Text text, EnumConfig cfg) : cfg_(cfg), mode_(std::move(text), cfg.mode) {
        cfg_.mode = mode_.config();
        const Text& s = mode_.text();
        const std::size_t n = s.size();
        const std::uint32_t m = s.max_freq();

        std::vector<std::vector<RmqIndex::value_type>> h(m, std::vector<RmqIndex::value_type>(n, -1));
        std::vector<std::uint32_t> count(s.sigma(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            std::uint32_t f = 0;
            for (std::size_t k = j + 1; k-- > 0;) {
                f = std::max(f, ++count[s[k]]);
                if (count[s[j]] == f && h[f - 1][j] < 0) h[f - 1][j] = static_cast<RmqIndex::value_type>(k);
            }
            for (std::size_t k = 0; k <= j; ++k) count[s[k]] = 0;
        }
        rmqs_.reserve(m);
        for (auto& seq : h) rmqs_.emplace_back(std::move(seq), cfg_.tie);

        if (n <= cfg_.n2_cap) {
            bits_.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                BitVec::Builder b(n);
                b.append(false, i);
                std::uint32_t f = 0;
                for (std::size_t j = i; j < n; ++j) {
                    const std::uint32_t c = ++count[s[j]];
                    f = std::max(f, c);
                    b.push_back(c == f);
                }
                for (std::size_t j = i; j < n; ++j) count[s[j]] = 0;
                bits_.push_back(std::move(b).build());
            }
        }

        if (cfg_.hybrid) {
            const std::size_t threshold = cfg_.hybrid_threshold.value_or(hybrid_threshold(n, cfg_.mode.epsilon));
            cfg_.hybrid_threshold = threshold;
            HybridSplit split = split_by_frequency(s, threshold);
            marker_ = std::move(split.marker);
            if (!split.high.empty()) {
                ModeConfig hc = cfg_.mode;
                hc.backend = Backend::Blocks;
                high_ = std::make_unique<ModeIndex>(Text(std::move(split.high), s.sigma()), hc);
            }
            if (!split.low.empty()) {
                EnumConfig lc = cfg_;
                lc.hybrid = false;
                lc.n2_cap = 0;
                lc.hybrid_threshold.reset();
                lc.mode.level.reset();
                low_ = std::make_unique<EnumIndex>(Text(std::move(split.low), s.sigma()), lc);
            }
        }
    }

    [[nodiscard]] const ModeIndex& mode_index() const noexcept { return mode_; }
    [[nodiscard]] const Text& text() const noexcept { return mode_.text(); }
    [[nodiscard]] const EnumConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] bool has_bits() const noexcept { return !bits_.empty(); }
    [[nodiscard]] bool has_hybrid() const noexcept { return cfg_.hybrid; }
    [[nodiscard]] const RmqIndex& h_rmq(std::uint32_t g) const { return rmqs_.at(g - 1); }
    [[nodiscard]] const BitVec& bits_row(std::size_t i) const { return bits_.at(i); }
    [[nodiscard]] const BitVec& hybrid_marker() const noexcept { return marker_; }

    [[nodiscard]] Enumeration enumerate(std::size_t l, std::size_t r, Strategy strategy) const {
        text().check_range(l, r);
        Enumeration out;
        switch (strategy) {
            case Strategy::Rmq: out = by_rmq(l, r); break;
            case Strategy::Bits: out = by_bits(l, r); break;
            case Strategy::Leftmost: out = by_leftmost(mode_, l, r); break;
            case Strategy::Hybrid: out = by_hybrid(l, r); break;
        }
        std::sort(out.positions.begin(), out.positions.end());
        std::sort(out.symbols.begin(), out.symbols.end());
        return out;
    }

    [[nodiscard]] std::vector<std::uint32_t> modes(std::size_t l, std::size_t r, Strategy strategy = Strategy::Rmq) const {
        return enumerate(l, r, strategy).symbols;
    }

    [[nodiscard]] std::vector<std::size_t> mode_index_set(std::size_t l, std::size_t r, Strategy strategy = Strategy::Rmq) const {
        return enumerate(l, r, strategy).positions;
    }

    [[nodiscard]] Sizes sizes() const {
        Sizes z;
        z.mode = mode_.sizes();
        for (const auto& q : rmqs_) z.rmq += q.size_in_bits();
        for (const auto& b : bits_) z.bits += b.size_in_bits();
        if (cfg_.hybrid) {
            z.hybrid = marker_.size_in_bits();
            if (high_) {
                const auto hs = high_->sizes();
                z.hybrid += hs.text + hs.blocks;
            }
            if (low_) {
                const auto ls = low_->sizes();
                z.hybrid += ls.mode.text + ls.mode.blocks + ls.mode.boundary + ls.mode.sk + ls.mode.table + ls.rmq;
            }
        }
        return z;
    }

    /// Everything after the text, in file order.
    void serialize_components(io::Writer& w) const {
        mode_.serialize_components(w);
        w.put<std::uint64_t>(rmqs_.size());
        for (const auto& q : rmqs_) q.serialize(w);
        w.put<std::uint8_t>(bits_.empty() ? 0 : 1);
        for (const auto& b : bits_) b.serialize(w);
        w.put<std::uint8_t>(cfg_.hybrid ? 1 : 0);
        if (!cfg_.hybrid) return;
        w.put<std::uint64_t>(*cfg_.hybrid_threshold);
        marker_.serialize(w);
        w.put<std::uint8_t>(high_ ? 1 : 0);
        if (high_) {
            high_->text().serialize(w);
            high_->serialize_components(w);
        }
        w.put<std::uint8_t>(low_ ? 1 : 0);
        if (low_) {
            low_->text().serialize(w);
            low_->serialize_components(w);
        }
    }

    static EnumIndex deserialize_components(Text text, EnumConfig cfg, io::Reader& r, int depth = 0) {
        if (depth > 1) throw CorruptIndex("hybrid index nested too deep");
        EnumIndex e;
        e.cfg_ = cfg;
        e.mode_ = ModeIndex::deserialize_components(std::move(text), cfg.mode, r);
        const std::size_t n = e.text().size();
        const auto count = r.get<std::uint64_t>();
        if (count != e.text().max_freq()) throw CorruptIndex("H sequence count does not match max frequency");
        for (std::uint64_t g = 0; g < count; ++g) {
            e.rmqs_.push_back(RmqIndex::deserialize(r));
            if (e.rmqs_.back().size() != n) throw CorruptIndex("H sequence length mismatch");
        }
        if (r.get<std::uint8_t>() == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                e.bits_.push_back(BitVec::deserialize(r));
                if (e.bits_.back().size() != n) throw CorruptIndex("mode bit row length mismatch");
            }
        }
        e.cfg_.hybrid = r.get<std::uint8_t>() == 1;
        if (!e.cfg_.hybrid) return e;
        e.cfg_.hybrid_threshold = r.get<std::uint64_t>();
        e.marker_ = BitVec::deserialize(r);
        if (e.marker_.size() != n) throw CorruptIndex("hybrid marker length mismatch");
        if (r.get<std::uint8_t>() == 1) {
            ModeConfig hc = e.cfg_.mode;
            hc.backend = Backend::Blocks;
            Text t = Text::deserialize(r);
            e.high_ = std::make_unique<ModeIndex>(ModeIndex::deserialize_components(std::move(t), hc, r));
        }
        if (r.get<std::uint8_t>() == 1) {
            EnumConfig lc = e.cfg_;
            lc.hybrid = false;
            Text t = Text::deserialize(r);
            e.low_ = std::make_unique<EnumIndex>(deserialize_components(std::move(t), lc, r, depth + 1));
        }
        if ((e.high_ ? e.high_->size() : 0) != e.marker_.ones() || (e.low_ ? e.low_->text().size() : 0) != e.marker_.zeros())
            throw CorruptIndex("hybrid sub-index sizes do not match marker");
        return e;
    }

private:
    [[nodiscard]] Enumeration by_rmq(std::size_t l, std::size_t r) const {
        Enumeration out;
        const Text& s = text();
        const std::uint32_t g = mode_.freq(l, r);
        out.freq = g;
        const std::size_t b = *mode_.first_reaching(l, g);
        auto report = rmqs_[g - 1].threshold_report(static_cast<std::int64_t>(b), static_cast<std::int64_t>(r),
                                                    [&](std::size_t id) { return s.occurs_at_least_before(id, g, l); });
        out.rmq_calls = report.calls;
        out.positions = std::move(report.indices);
        for (std::size_t p : out.positions) out.symbols.push_back(s[p]);
        return out;
    }

    [[nodiscard]] Enumeration by_bits(std::size_t l, std::size_t r) const {
        if (bits_.empty()) throw ConfigError("bits strategy unavailable: n=" + std::to_string(text().size()) + " exceeds n2 cap " + std::to_string(cfg_.n2_cap));
        Enumeration out;
        const std::uint32_t g = mode_.freq(l, r);
        out.freq = g;
        const std::size_t b = *mode_.first_reaching(l, g);
        const BitVec& row = bits_[l];
        for (std::size_t ones = row.rank1(r + 1); ones > 0; --ones) {
            ++out.iterations;
            const std::size_t x = row.select1(ones);
            if (x < b) break;
            out.positions.push_back(x);
            out.symbols.push_back(text()[x]);
        }
        return out;
    }

    static Enumeration by_leftmost(const ModeIndex& idx, std::size_t l, std::size_t r) {
        Enumeration out;
        const Text& s = idx.text();
        const std::uint32_t f = idx.leftmost_mode(l, r).freq;
        out.freq = f;
        for (std::size_t x = l;;) {
            ++out.iterations;
            const auto [i, freq] = idx.leftmost_mode(x, r);
            if (freq < f) break;
            const std::uint32_t c = s[i];
            out.symbols.push_back(c);
            out.positions.push_back(s.occ(c)[s.rank_at(i) + f - 1]);
            if (i == r) break;
            x = i + 1;
        }
        return out;
    }

    [[nodiscard]] Enumeration by_hybrid(std::size_t l, std::size_t r) const {
        if (!cfg_.hybrid) throw ConfigError("hybrid strategy unavailable: index built without the frequency split");
        Enumeration high, low;
        const std::size_t h_lo = marker_.rank1(l), h_hi = marker_.rank1(r + 1);
        if (h_hi > h_lo) {
            high = by_leftmost(*high_, h_lo, h_hi - 1);
            for (auto& p : high.positions) p = marker_.select1(p + 1);
        }
        const std::size_t z_lo = l - h_lo, z_hi = r + 1 - h_hi;
        if (z_hi > z_lo) {
            low = low_->enumerate(z_lo, z_hi - 1, Strategy::Rmq);
            for (auto& p : low.positions) p = marker_.select0(p + 1);
        }
        Enumeration out;
        out.freq = std::max(high.freq, low.freq);
        out.rmq_calls = low.rmq_calls;
        out.iterations = high.iterations;
        for (const Enumeration* side : {&high, &low}) {
            if (side->freq != out.freq || side->freq == 0) continue;
            out.positions.insert(out.positions.end(), side->positions.begin(), side->positions.end());
            out.symbols.insert(out.symbols.end(), side->symbols.begin(), side->symbols.end());
        }
        return out;
    }

    EnumConfig cfg_;
    ModeIndex mode_;
    std::vector<RmqIndex> rmqs_;
    std::vector<BitVec> bits_;
    BitVec marker_;
    std::unique_ptr<ModeIndex> high_;
    std::unique_ptr<EnumIndex> low_;
};

}  // namespace rmode
