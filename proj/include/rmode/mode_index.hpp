#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rmode/boundary.hpp"
#include "rmode/sk_index.hpp"
#include "rmode/text.hpp"

namespace rmode {

enum class Backend : std::uint8_t { Oracle = 0, Boundary = 1, Sk = 2, Blocks = 3 };

inline const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Oracle: return "oracle";
        case Backend::Boundary: return "boundary";
        case Backend::Sk: return "sk";
        case Backend::Blocks: return "blocks";
    }
    return "?";
}

/// Rational parameter in [0, 1/2], kept exact for serialization.
struct Fraction {
    std::uint32_t num = 1;
    std::uint32_t den = 2;

    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    static Fraction parse(const std::string& s) {
        Fraction f;
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                f.num = static_cast<std::uint32_t>(std::stoul(s));
                f.den = 1;
            } else {
                f.num = static_cast<std::uint32_t>(std::stoul(s.substr(0, slash)));
                f.den = static_cast<std::uint32_t>(std::stoul(s.substr(slash + 1)));
            }
        } catch (const std::exception&) {
            throw ConfigError("epsilon must be P/Q, got '" + s + "'");
        }
        if (f.den == 0 || 2 * static_cast<std::uint64_t>(f.num) > f.den) throw ConfigError("epsilon must lie in [0, 1/2], got '" + s + "'");
        return f;
    }
};

/// ceil(n^e), at least 1; tolerant to floating error at exact powers.
inline std::size_t ceil_pow(std::size_t n, double e) {
    if (n <= 1) return 1;
    const double v = std::pow(static_cast<double>(n), e);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(v - 1e-9)));
}

struct ModeConfig {
    Backend backend = Backend::Boundary;
    Fraction epsilon{1, 2};
    std::optional<std::uint32_t> level;  // S_k level; default_level(n, m) when unset
    ValueSearch search = ValueSearch::BinarySearch;
    std::size_t table_cap = 8192;        // largest n for backends that sweep the full table
};

/// Mode frequency, one mode, and leftmost mode position for every span of
/// whole blocks [i*s, (j+1)*s - 1].
class BlockTables {
public:
    BlockTables() = default;

    BlockTables(const Text& text, std::size_t block_size) : s_(block_size) {
        const std::size_t n = text.size();
        nb_ = (n + s_ - 1) / s_;
        freq_.assign(nb_ * nb_, 0);
        mode_.assign(nb_ * nb_, 0);
        leftmost_.assign(nb_ * nb_, 0);
        std::vector<std::uint32_t> count(text.sigma(), 0);
        for (std::size_t bi = 0; bi < nb_; ++bi) {
            std::uint32_t f = 0, mode = 0;
            std::size_t li = 0;
            for (std::size_t p = bi * s_; p < n; ++p) {
                const std::uint32_t c = text[p];
                const std::uint32_t cnt = ++count[c];
                const std::size_t first = text.occ(c)[text.rank_at(p) + 1 - cnt];
                if (cnt > f) {
                    f = cnt;
                    mode = c;
                    li = first;
                } else if (cnt == f) {
                    li = std::min(li, first);
                }
                if ((p + 1) % s_ == 0 || p + 1 == n) {
                    const std::size_t at = bi * nb_ + p / s_;
                    freq_[at] = f;
                    mode_[at] = mode;
                    leftmost_[at] = static_cast<std::uint32_t>(li);
                }
            }
            for (std::size_t p = bi * s_; p < n; ++p) count[text[p]] = 0;
        }
    }

    [[nodiscard]] std::size_t block_size() const noexcept { return s_; }
    [[nodiscard]] std::size_t blocks() const noexcept { return nb_; }
    [[nodiscard]] std::uint32_t freq(std::size_t bi, std::size_t bj) const { return freq_[bi * nb_ + bj]; }
    [[nodiscard]] std::uint32_t mode(std::size_t bi, std::size_t bj) const { return mode_[bi * nb_ + bj]; }
    [[nodiscard]] std::size_t leftmost(std::size_t bi, std::size_t bj) const { return leftmost_[bi * nb_ + bj]; }

    [[nodiscard]] std::size_t size_in_bits() const noexcept { return nb_ * (nb_ + 1) / 2 * 3 * 32 + 128; }

    void serialize(io::Writer& w) const {
        w.put<std::uint64_t>(s_);
        w.put<std::uint64_t>(nb_);
        w.put_vec(freq_);
        w.put_vec(mode_);
        w.put_vec(leftmost_);
    }

    static BlockTables deserialize(io::Reader& r) {
        BlockTables b;
        b.s_ = r.get<std::uint64_t>();
        b.nb_ = r.get<std::uint64_t>();
        if (b.s_ == 0 || b.nb_ > (std::uint64_t{1} << 20)) throw CorruptIndex("BlockTables: bad header");
        b.freq_ = r.get_vec<std::uint32_t>();
        b.mode_ = r.get_vec<std::uint32_t>();
        b.leftmost_ = r.get_vec<std::uint32_t>();
        const std::size_t cells = b.nb_ * b.nb_;
        if (b.freq_.size() != cells || b.mode_.size() != cells || b.leftmost_.size() != cells) throw CorruptIndex("BlockTables: size mismatch");
        return b;
    }

private:
    std::size_t s_ = 1;
    std::size_t nb_ = 0;
    std::vector<std::uint32_t> freq_;
    std::vector<std::uint32_t> mode_;
    std::vector<std::uint32_t> leftmost_;
};

/// Range mode queries over a Text with a pluggable frequency backend.
///
/// The full-table backends answer f(l, r) from the transformed table
/// C'[i][j] = f(n-1-i, j) - 1 (FreqTable::cell_of owns the mapping); the
/// blocks backend uses the block decomposition scan.
class ModeIndex {
public:
    struct SymbolFreq {
        std::uint32_t symbol = 0;
        std::uint32_t freq = 0;
    };
    struct PositionFreq {
        std::size_t position = 0;
        std::uint32_t freq = 0;
    };
    struct Baseline {
        std::uint32_t symbol = 0;
        std::uint32_t freq = 0;
        std::size_t probes = 0;  // occurrence-list lookups and in-block scan steps
    };
    struct Sizes {
        std::size_t text = 0, blocks = 0, boundary = 0, sk = 0, table = 0;
    };

    ModeIndex() = default;

    ModeIndex(Text text, ModeConfig cfg) : text_(std::move(text)), cfg_(cfg) {
        const std::size_t n = text_.size();
        if (n == 0) throw BuildError("empty input");
        blocks_ = BlockTables(text_, ceil_pow(n, cfg_.epsilon.value()));
        if (cfg_.backend == Backend::Blocks) return;
        if (n > cfg_.table_cap)
            throw BuildError(std::string("backend '") + backend_name(cfg_.backend) + "' needs the full frequency table; n=" + std::to_string(n) +
                             " exceeds cap " + std::to_string(cfg_.table_cap));
        FreqTable table(text_);
        const Ims2View view = table.transformed_view();
        boundary_.emplace(view);
        if (cfg_.backend == Backend::Sk) {
            if (!cfg_.level) cfg_.level = SkIndex::default_level(n, view.m);
            sk_.emplace(view, *cfg_.level);
        }
        if (cfg_.backend == Backend::Oracle) table_.emplace(std::move(table));
    }

    ModeIndex(const std::vector<std::uint32_t>& symbols, std::uint32_t sigma, ModeConfig cfg) : ModeIndex(Text(symbols, sigma), cfg) {}

    [[nodiscard]] const Text& text() const noexcept { return text_; }
    [[nodiscard]] const ModeConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const BlockTables& blocks() const noexcept { return blocks_; }
    [[nodiscard]] const BoundarySet* boundary() const noexcept { return boundary_ ? &*boundary_ : nullptr; }
    [[nodiscard]] const SkIndex* sk() const noexcept { return sk_ ? &*sk_ : nullptr; }
    [[nodiscard]] std::size_t size() const noexcept { return text_.size(); }
    [[nodiscard]] std::uint32_t max_freq() const noexcept { return text_.max_freq(); }

    /// f(l, r) together with the backend's probe count for it.
    [[nodiscard]] std::pair<std::uint32_t, std::size_t> freq_probed(std::size_t l, std::size_t r) const {
        text_.check_range(l, r);
        const auto [i, j] = FreqTable::cell_of(text_.size(), l, r);
        switch (cfg_.backend) {
            case Backend::Oracle: return {(*table_)(l, r), 1};
            case Backend::Boundary: {
                const auto v = boundary_->value(i, j, cfg_.search);
                return {v.level + 1, v.probes};
            }
            case Backend::Sk: {
                const probe::Scope scope;
                const std::uint32_t v = sk_->access(i, j);
                return {v + 1, static_cast<std::size_t>(scope.count())};
            }
            case Backend::Blocks: {
                const auto b = mode_block_baseline(l, r);
                return {b.freq, b.probes};
            }
        }
        throw ConfigError("unknown backend");
    }

    [[nodiscard]] std::uint32_t freq(std::size_t l, std::size_t r) const { return freq_probed(l, r).first; }

    /// Some mode of [l, r] and its frequency.
    [[nodiscard]] SymbolFreq mode(std::size_t l, std::size_t r) const {
        text_.check_range(l, r);
        if (!boundary_) {
            const auto b = mode_block_baseline(l, r);
            return {b.symbol, b.freq};
        }
        const std::uint32_t f = freq(l, r);
        if (f == 1) return {text_[l], 1};
        // a mode of the shortest prefix [l, x] already reaching f is a mode of [l, r]
        const std::size_t x = *first_reaching(l, f);
        return {text_[x], f};
    }

    /// min{ t >= l : f(l, t) >= g }, or nullopt if f(l, n-1) < g.
    [[nodiscard]] std::optional<std::size_t> first_reaching(std::size_t l, std::uint32_t g) const {
        const std::size_t n = text_.size();
        if (l >= n) throw RangeError("first_reaching: l out of range");
        if (g <= 1) return l;
        if (g > text_.max_freq()) return std::nullopt;
        if (boundary_) return boundary_->min_row_at_least(FreqTable::cell_of(n, l, l).first, g - 1);
        std::size_t lo = l, hi = n;  // f(l, .) is non-decreasing
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (freq(l, mid) >= g) hi = mid;
            else lo = mid + 1;
        }
        if (lo == n) return std::nullopt;
        return lo;
    }

    /// Smallest position in [l, r] whose symbol is a mode, with the mode frequency.
    [[nodiscard]] PositionFreq leftmost_mode(std::size_t l, std::size_t r) const {
        text_.check_range(l, r);
        const std::size_t s = blocks_.block_size();
        const std::size_t bl = l / s, br = r / s;
        std::uint32_t f = 0;
        std::size_t li = std::numeric_limits<std::size_t>::max();
        std::size_t prefix_end = r, suffix_begin = r + 1;
        if (br >= bl + 2) {
            f = blocks_.freq(bl + 1, br - 1);
            li = blocks_.leftmost(bl + 1, br - 1);
            prefix_end = (bl + 1) * s - 1;
            suffix_begin = br * s;
        }
        for (std::size_t i = l; i <= prefix_end; ++i) {
            const std::uint32_t c = text_[i];
            const std::uint32_t k = text_.rank_at(i);
            if (k > 0 && text_.occ(c)[k - 1] >= l) continue;  // not the first occurrence in range
            if (!text_.occurs_at_least_after(i, f, r)) continue;
            bool grew = false;
            while (text_.occurs_at_least_after(i, f + 1, r)) {
                ++f;
                grew = true;
            }
            li = grew ? i : std::min(li, i);
        }
        for (std::size_t i = suffix_begin; i <= r; ++i) {
            const std::uint32_t c = text_[i];
            const std::uint32_t k = text_.rank_at(i);
            const auto& occ = text_.occ(c);
            if (k + 1 < occ.size() && occ[k + 1] <= r) continue;  // not the last occurrence in range
            if (!text_.occurs_at_least_before(i, f, l)) continue;
            bool grew = false;
            while (text_.occurs_at_least_before(i, f + 1, l)) {
                ++f;
                grew = true;
            }
            const std::size_t first = occ[k + 1 - f];
            li = grew ? first : std::min(li, first);
        }
        return {li, f};
    }

    /// Plain block-decomposition query: span answer from the tables, then
    /// prefix and suffix candidates counted through the occurrence lists.
    [[nodiscard]] Baseline mode_block_baseline(std::size_t l, std::size_t r) const {
        text_.check_range(l, r);
        const std::size_t s = blocks_.block_size();
        const std::size_t bl = l / s, br = r / s;
        Baseline out;
        if (bl == br) {
            std::unordered_map<std::uint32_t, std::uint32_t> count;
            for (std::size_t i = l; i <= r; ++i) {
                ++out.probes;
                const std::uint32_t cnt = ++count[text_[i]];
                if (cnt > out.freq) {
                    out.freq = cnt;
                    out.symbol = text_[i];
                }
            }
            return out;
        }
        if (br > bl + 1) {
            out.freq = blocks_.freq(bl + 1, br - 1);
            out.symbol = blocks_.mode(bl + 1, br - 1);
        }
        for (std::size_t i = l; i < (bl + 1) * s; ++i) {
            const auto& occ = text_.occ(text_[i]);
            const std::size_t k = text_.rank_at(i);
            while (++out.probes, k + out.freq < occ.size() && occ[k + out.freq] <= r) {
                ++out.freq;
                out.symbol = text_[i];
            }
        }
        for (std::size_t i = br * s; i <= r; ++i) {
            const auto& occ = text_.occ(text_[i]);
            const std::size_t k = text_.rank_at(i);
            while (++out.probes, k >= out.freq && occ[k - out.freq] >= l) {
                ++out.freq;
                out.symbol = text_[i];
            }
        }
        return out;
    }

    [[nodiscard]] Sizes sizes() const {
        Sizes z;
        z.text = text_.size_in_bits();
        z.blocks = blocks_.size_in_bits();
        if (boundary_) z.boundary = boundary_->size_in_bits();
        if (sk_) z.sk = sk_->size_in_bits();
        if (table_) z.table = table_->n() * table_->n() * 16;
        return z;
    }

    /// Components after the text, in file order.
    void serialize_components(io::Writer& w) const {
        w.put<std::uint8_t>(boundary_ ? 1 : 0);
        if (boundary_) boundary_->serialize(w);
        w.put<std::uint8_t>(sk_ ? 1 : 0);
        if (sk_) sk_->serialize(w);
        blocks_.serialize(w);
    }

    static ModeIndex deserialize_components(Text text, ModeConfig cfg, io::Reader& r) {
        ModeIndex idx;
        idx.text_ = std::move(text);
        idx.cfg_ = cfg;
        if (r.get<std::uint8_t>() == 1) idx.boundary_.emplace(BoundarySet::deserialize(r));
        if (r.get<std::uint8_t>() == 1) idx.sk_.emplace(SkIndex::deserialize(r));
        idx.blocks_ = BlockTables::deserialize(r);
        const std::size_t n = idx.text_.size();
        if (idx.boundary_ && (idx.boundary_->n() != n || idx.boundary_->m() != std::max<std::uint32_t>(idx.text_.max_freq(), 1)))
            throw CorruptIndex("boundary set does not match text");
        if (idx.sk_ && idx.sk_->n() != n) throw CorruptIndex("sk index does not match text");
        if (idx.blocks_.blocks() != (n + idx.blocks_.block_size() - 1) / idx.blocks_.block_size()) throw CorruptIndex("block tables do not match text");
        switch (cfg.backend) {
            case Backend::Oracle: idx.table_.emplace(idx.text_); break;
            case Backend::Boundary:
                if (!idx.boundary_) throw CorruptIndex("boundary backend without boundary set");
                break;
            case Backend::Sk:
                if (!idx.sk_ || !idx.boundary_) throw CorruptIndex("sk backend without sk index");
                break;
            case Backend::Blocks: break;
        }
        return idx;
    }

private:
    Text text_;
    ModeConfig cfg_;
    BlockTables blocks_;
    std::optional<FreqTable> table_;
    std::optional<BoundarySet> boundary_;
    std::optional<SkIndex> sk_;
};

}  // namespace rmode
