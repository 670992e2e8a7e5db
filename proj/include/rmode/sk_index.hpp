#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmode/bitvec.hpp"
#include "rmode/ims2_view.hpp"
#include "rmode/monotone.hpp"

namespace rmode {

/// Per-recursion-level build record.
struct SkLevelStats {
    std::uint32_t level = 0;
    std::size_t n = 0;
    std::uint32_t m = 0;
    std::size_t t = 0;
    std::size_t u = 0;
    std::size_t nonflat = 0;
    std::uint64_t height_sum = 0;          // sum of d over all u*u blocks
    std::uint64_t nonflat_height_sum = 0;  // sum of d over non-flat blocks
};

/// Recursive block representation of an IMS2(n, m) array.
///
/// Level 0 keeps every column as a MonotoneSeq. Level k splits the array into
/// u x u blocks of side t, keeps the block origins E (itself a level k-1 index,
/// or per-row sequences when u <= m) and stores a difference array F only for
/// non-flat blocks. Flatness is decided without a u x u flag matrix: a block
/// (i, j) is labelled (E[i][j], i - j + u - 1), a label that no two non-flat
/// blocks share; K marks used labels and I_x / J_x map a label back to its block.
class SkIndex {
public:
    using Accessor = std::function<std::uint32_t(std::size_t, std::size_t)>;

    SkIndex() = default;

    SkIndex(const Ims2View& view, std::uint32_t level) {
        view.validate();
        build(view.at, view.n, view.m, level, &stats_);
    }

    /// Level giving the loglog(n/m) access-time trade-off.
    static std::uint32_t default_level(std::size_t n, std::uint32_t m) {
        if (n == 0 || m == 0) return 0;
        return default_level_log2(std::log2(static_cast<double>(n) / static_cast<double>(m)));
    }

    /// Same, from log2(n/m) directly (for ratios beyond double range).
    static std::uint32_t default_level_log2(double log2_ratio) {
        if (!(log2_ratio >= 2.0)) return 0;
        const double l3 = std::log2(std::log2(log2_ratio));
        return l3 <= 0 ? 0 : static_cast<std::uint32_t>(std::floor(l3 + 1e-12));
    }

    /// Block side for an n x n array with m levels at recursion level >= 1.
    static std::size_t block_side(std::size_t n, std::uint32_t m, std::uint32_t level) {
        if (level == 0 || n <= m) return 1;
        const double exponent = std::pow(0.5, std::pow(2.0, static_cast<double>(level - 1)));
        const double t = std::ceil(std::pow(static_cast<double>(n) / static_cast<double>(m), exponent) - 1e-9);
        return std::clamp<std::size_t>(static_cast<std::size_t>(t), 1, n);
    }

    [[nodiscard]] std::uint32_t level() const noexcept { return level_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t block() const noexcept { return t_; }
    [[nodiscard]] std::size_t grid() const noexcept { return u_; }
    [[nodiscard]] const std::vector<SkLevelStats>& stats() const noexcept { return stats_; }

    [[nodiscard]] std::uint32_t access(std::size_t i, std::size_t j) const {
        check(i, j);
        return raw_access(i, j);
    }

    /// Whether block (bi, bj) holds a single value.
    [[nodiscard]] bool is_flat(std::size_t bi, std::size_t bj) const {
        if (level_ == 0) throw ConfigError("level-0 index has no blocks");
        if (bi >= u_ || bj >= u_) throw RangeError("SkIndex::is_flat: block outside grid");
        return !nonflat_payload(bi, bj, origin(bi, bj)).has_value();
    }

    [[nodiscard]] std::size_t nonflat_count() const noexcept { return payloads_.size(); }

    [[nodiscard]] std::size_t size_in_bits() const {
        std::size_t bits = 5 * 64;
        for (const auto& c : columns_) bits += c.size_in_bits();
        for (const auto& r : e_rows_) bits += r.size_in_bits();
        if (e_rec_) bits += e_rec_->size_in_bits();
        bits += flags_.size_in_bits() + offsets_.size_in_bits();
        for (const auto& s : rows_of_label_) bits += s.size_in_bits();
        for (const auto& s : cols_of_label_) bits += s.size_in_bits();
        for (const auto& p : payloads_) {
            bits += 32;
            for (const auto& r : p.rows) bits += r.size_in_bits();
            if (p.rec) bits += p.rec->size_in_bits();
        }
        return bits;
    }

    void serialize(io::Writer& w) const {
        w.put<std::uint32_t>(level_);
        w.put<std::uint64_t>(n_);
        w.put<std::uint32_t>(m_);
        w.put<std::uint64_t>(t_);
        w.put<std::uint64_t>(u_);
        if (level_ == 0) {
            for (const auto& c : columns_) c.serialize(w);
            return;
        }
        w.put<std::uint8_t>(e_rec_ ? 1 : 0);
        if (e_rec_) e_rec_->serialize(w);
        else for (const auto& r : e_rows_) r.serialize(w);
        flags_.serialize(w);
        for (const auto& s : rows_of_label_) s.serialize(w);
        for (const auto& s : cols_of_label_) s.serialize(w);
        offsets_.serialize(w);
        w.put<std::uint64_t>(payloads_.size());
        for (const auto& p : payloads_) {
            w.put<std::uint32_t>(p.height);
            w.put<std::uint8_t>(p.rec ? 1 : 0);
            if (p.rec) p.rec->serialize(w);
            else for (const auto& r : p.rows) r.serialize(w);
        }
    }

    static SkIndex deserialize(io::Reader& r, std::uint32_t depth = 0) {
        if (depth > 64) throw CorruptIndex("SkIndex: nesting too deep");
        SkIndex s;
        s.level_ = r.get<std::uint32_t>();
        s.n_ = r.get<std::uint64_t>();
        s.m_ = r.get<std::uint32_t>();
        s.t_ = r.get<std::uint64_t>();
        s.u_ = r.get<std::uint64_t>();
        if (s.n_ > (std::uint64_t{1} << 32) || s.m_ == 0 || s.level_ > 64) throw CorruptIndex("SkIndex: bad header");
        if (s.level_ == 0) {
            for (std::size_t j = 0; j < s.n_; ++j) s.columns_.push_back(MonotoneSeq::deserialize(r));
            return s;
        }
        if (s.t_ == 0 || s.u_ != (s.n_ + s.t_ - 1) / s.t_) throw CorruptIndex("SkIndex: bad block geometry");
        const auto e_tag = r.get<std::uint8_t>();
        if (e_tag == 1) s.e_rec_ = std::make_unique<SkIndex>(deserialize(r, depth + 1));
        else for (std::size_t i = 0; i < s.u_; ++i) s.e_rows_.push_back(MonotoneSeq::deserialize(r));
        s.flags_ = BitVec::deserialize(r);
        if (s.flags_.size() != s.m_ * (2 * s.u_ - 1)) throw CorruptIndex("SkIndex: bad label table");
        for (std::uint32_t x = 0; x < s.m_; ++x) s.rows_of_label_.push_back(MonotoneSeq::deserialize(r));
        for (std::uint32_t x = 0; x < s.m_; ++x) s.cols_of_label_.push_back(MonotoneSeq::deserialize(r));
        s.offsets_ = MonotoneSeq::deserialize(r);
        const auto count = r.get<std::uint64_t>();
        if (count != s.flags_.ones()) throw CorruptIndex("SkIndex: payload count mismatch");
        for (std::uint64_t q = 0; q < count; ++q) {
            Payload p;
            p.height = r.get<std::uint32_t>();
            if (r.get<std::uint8_t>() == 1) p.rec = std::make_unique<SkIndex>(deserialize(r, depth + 1));
            else for (std::size_t x = 0; x < s.t_; ++x) p.rows.push_back(MonotoneSeq::deserialize(r));
            s.payloads_.push_back(std::move(p));
        }
        return s;
    }

private:
    struct Payload {
        std::uint32_t height = 0;
        std::vector<MonotoneSeq> rows;  // used when t <= height
        std::unique_ptr<SkIndex> rec;   // level k-1 index otherwise
    };

    void check(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw RangeError("SkIndex::access: cell (" + std::to_string(i) + "," + std::to_string(j) + ") outside " + std::to_string(n_) + "x" + std::to_string(n_));
    }

    [[nodiscard]] std::uint32_t origin(std::size_t bi, std::size_t bj) const {
        if (e_rec_) return e_rec_->raw_access(bi, bj);
        return static_cast<std::uint32_t>(e_rows_[bi].access(bj));
    }

    [[nodiscard]] std::optional<std::size_t> nonflat_payload(std::size_t bi, std::size_t bj, std::uint32_t e) const {
        const std::size_t y = bi + u_ - 1 - bj;
        const std::size_t label = static_cast<std::size_t>(e) * (2 * u_ - 1) + y;
        if (!flags_.access(label)) return std::nullopt;
        if (rows_of_label_[e].access(y) != bi || cols_of_label_[e].access(y) != bj) return std::nullopt;
        return static_cast<std::size_t>(offsets_.access(label));
    }

    [[nodiscard]] std::uint32_t raw_access(std::size_t i, std::size_t j) const {
        if (level_ == 0) return static_cast<std::uint32_t>(columns_[j].access(i));
        const std::size_t bi = i / t_;
        const std::size_t bj = j / t_;
        const std::uint32_t e = origin(bi, bj);
        const auto slot = nonflat_payload(bi, bj, e);
        if (!slot) return e;
        const Payload& p = payloads_[*slot];
        const std::size_t x = i % t_;
        const std::size_t y = j % t_;
        return e + (p.rec ? p.rec->raw_access(x, y) : static_cast<std::uint32_t>(p.rows[x].access(y)));
    }

    void build(const Accessor& at, std::size_t n, std::uint32_t m, std::uint32_t level, std::vector<SkLevelStats>* stats) {
        level_ = level;
        n_ = n;
        m_ = m;
        std::vector<std::uint64_t> buf;
        if (level == 0) {
            columns_.reserve(n);
            buf.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t i = 0; i < n; ++i) buf[i] = at(i, j);
                columns_.emplace_back(buf, m);
            }
            return;
        }
        t_ = block_side(n, m, level);
        u_ = (n + t_ - 1) / t_;
        const std::size_t t = t_;
        const std::size_t u = u_;

        std::vector<std::uint32_t> origins(u * u);
        for (std::size_t bi = 0; bi < u; ++bi)
            for (std::size_t bj = 0; bj < u; ++bj) origins[bi * u + bj] = at(bi * t, bj * t);

        if (u > m) {
            e_rec_ = std::make_unique<SkIndex>();
            e_rec_->build([&origins, u](std::size_t i, std::size_t j) { return origins[i * u + j]; }, u, m, level - 1, stats);
        } else {
            buf.resize(u);
            for (std::size_t bi = 0; bi < u; ++bi) {
                for (std::size_t bj = 0; bj < u; ++bj) buf[bj] = origins[bi * u + bj];
                e_rows_.emplace_back(buf, m);
            }
        }

        struct Block {
            std::size_t label, bi, bj;
            std::uint32_t height;
        };
        SkLevelStats st{level, n, m, t, u, 0, 0, 0};
        std::vector<Block> nonflat;
        const std::size_t diagonals = 2 * u - 1;
        for (std::size_t bi = 0; bi < u; ++bi) {
            for (std::size_t bj = 0; bj < u; ++bj) {
                const std::uint32_t e = origins[bi * u + bj];
                const std::uint32_t corner = at(std::min(n, (bi + 1) * t) - 1, std::min(n, (bj + 1) * t) - 1);
                const std::uint32_t d = corner - e + 1;
                st.height_sum += d;
                if (d > 1) {
                    st.nonflat_height_sum += d;
                    nonflat.push_back({static_cast<std::size_t>(e) * diagonals + (bi + u - 1 - bj), bi, bj, d});
                }
            }
        }
        st.nonflat = nonflat.size();
        if (stats) stats->push_back(st);

        std::sort(nonflat.begin(), nonflat.end(), [](const Block& a, const Block& b) { return a.label < b.label; });
        for (std::size_t q = 1; q < nonflat.size(); ++q)
            if (nonflat[q].label == nonflat[q - 1].label) throw BuildError("SkIndex: two non-flat blocks share a label; input is not IMS2");

        const std::size_t labels = static_cast<std::size_t>(m) * diagonals;
        std::vector<std::uint64_t> flag_words((labels + 63) / 64, 0);
        for (const auto& b : nonflat) flag_words[b.label / 64] |= std::uint64_t{1} << (b.label % 64);
        flags_ = BitVec(std::move(flag_words), labels);

        // Unused labels repeat the previous block so I_x stays non-decreasing
        // and J_x non-increasing.
        std::vector<std::uint64_t> is(diagonals), js(diagonals);
        std::size_t q = 0;
        for (std::uint32_t x = 0; x < m; ++x) {
            std::uint64_t last_i = 0, last_j = u - 1;
            for (std::size_t y = 0; y < diagonals; ++y) {
                if (q < nonflat.size() && nonflat[q].label == static_cast<std::size_t>(x) * diagonals + y) {
                    last_i = nonflat[q].bi;
                    last_j = nonflat[q].bj;
                    ++q;
                }
                is[y] = last_i;
                js[y] = last_j;
            }
            rows_of_label_.emplace_back(is, u, Direction::Increasing);
            cols_of_label_.emplace_back(js, u, Direction::Decreasing);
        }

        std::vector<std::uint64_t> offsets(labels);
        q = 0;
        for (std::size_t label = 0; label < labels; ++label) {
            while (q < nonflat.size() && nonflat[q].label < label) ++q;
            offsets[label] = q;
        }
        offsets_ = MonotoneSeq(offsets, nonflat.size() + 1);

        payloads_.reserve(nonflat.size());
        for (const auto& b : nonflat) {
            const std::size_t r0 = b.bi * t, c0 = b.bj * t;
            const std::size_t r_last = std::min(n, r0 + t) - 1, c_last = std::min(n, c0 + t) - 1;
            const std::uint32_t e = origins[b.bi * u + b.bj];
            // ragged edge blocks are padded by clamping to the last real row/column
            Accessor diff = [&at, r0, c0, r_last, c_last, e](std::size_t x, std::size_t y) {
                return at(std::min(r0 + x, r_last), std::min(c0 + y, c_last)) - e;
            };
            Payload p;
            p.height = b.height;
            if (t <= b.height) {
                buf.resize(t);
                for (std::size_t x = 0; x < t; ++x) {
                    for (std::size_t y = 0; y < t; ++y) buf[y] = diff(x, y);
                    p.rows.emplace_back(buf, b.height);
                }
            } else {
                p.rec = std::make_unique<SkIndex>();
                p.rec->build(diff, t, b.height, level - 1, stats);
            }
            payloads_.push_back(std::move(p));
        }
    }

    std::uint32_t level_ = 0;
    std::size_t n_ = 0;
    std::uint32_t m_ = 1;
    std::size_t t_ = 1;
    std::size_t u_ = 0;
    std::vector<MonotoneSeq> columns_;
    std::vector<MonotoneSeq> e_rows_;
    std::unique_ptr<SkIndex> e_rec_;
    BitVec flags_;
    std::vector<MonotoneSeq> rows_of_label_;
    std::vector<MonotoneSeq> cols_of_label_;
    MonotoneSeq offsets_;
    std::vector<Payload> payloads_;
    std::vector<SkLevelStats> stats_;
};

}  // namespace rmode
