#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmode/bitvec.hpp"
#include "rmode/ims2_view.hpp"
#include "rmode/probe.hpp"
#include "rmode/serialize.hpp"

namespace rmode {

enum class ValueSearch : std::uint8_t { BinarySearch = 0, TwoStage = 1 };

/// Level boundaries of an IMS2(n, m) array, one 2n-bit lattice path per level.
///
/// For level k and row i let cut_k(i) = min{ j : A[i][j] >= k } (n if none).
/// Column monotonicity makes cut_k non-increasing in i, so the path starting at
/// the top-right corner (row 0, column n) is encoded row by row: emit one 1-bit
/// for every column the cut moves left, then one 0-bit to advance to the next
/// row, and finally 1-bits down to column 0. Each path holds n zeros and n
/// ones, and cut_k(i) = n - (select0(i + 1) - i).
///
/// All m paths are concatenated into one bit-vector, so path k occupies bits
/// [2nk, 2n(k+1)) and its (i+1)-th zero is the (kn + i + 1)-th zero overall.
///
/// Per row, coarse marks store the cut of every level q*w + 1 (w = ceil(log2 n))
/// as fixed-width integers, bracketing a cell's value within a window of w levels.
class BoundarySet {
public:
    struct Value {
        std::uint32_t level = 0;
        std::uint32_t probes = 0;  // level comparisons plus coarse lookups
    };

    BoundarySet() = default;

    explicit BoundarySet(const Ims2View& view) : n_(view.n), m_(view.m) {
        view.validate();
        step_ = n_ <= 2 ? 1 : static_cast<std::uint32_t>(std::bit_width(n_ - 1));
        // cuts[k * n + i] = cut_k(i)
        std::vector<std::uint32_t> cuts(static_cast<std::size_t>(m_) * n_, static_cast<std::uint32_t>(n_));
        for (std::size_t i = 0; i < n_; ++i) {
            cuts[i] = 0;
            std::uint32_t reached = 0;
            for (std::size_t j = 0; j < n_ && reached + 1 < m_; ++j) {
                const std::uint32_t v = view(i, j);
                for (std::uint32_t k = reached + 1; k <= v; ++k) cuts[static_cast<std::size_t>(k) * n_ + i] = static_cast<std::uint32_t>(j);
                reached = std::max(reached, v);
            }
        }
        BitVec::Builder b(2 * n_ * m_);
        for (std::uint32_t k = 0; k < m_; ++k) {
            std::size_t col = n_;
            for (std::size_t i = 0; i < n_; ++i) {
                const std::size_t c = cuts[static_cast<std::size_t>(k) * n_ + i];
                b.append(true, col - c);
                b.push_back(false);
                col = c;
            }
            b.append(true, col);
        }
        paths_ = std::move(b).build();

        per_row_ = m_ <= 1 ? 0 : (m_ - 2) / step_ + 1;
        width_ = static_cast<std::uint32_t>(std::bit_width(n_));
        marks_.assign((n_ * per_row_ * width_ + 63) / 64, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t q = 0; q < per_row_; ++q) put_mark(i * per_row_ + q, cuts[(1 + q * step_) * n_ + i]);
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
    [[nodiscard]] std::uint32_t step() const noexcept { return step_; }
    [[nodiscard]] std::size_t marks_per_row() const noexcept { return per_row_; }

    /// The 2n bits of path k, copied out.
    [[nodiscard]] BitVec path(std::uint32_t k) const {
        check_level(k);
        BitVec::Builder b(2 * n_);
        for (std::size_t p = 2 * n_ * k; p < 2 * n_ * (k + 1); ++p) b.push_back(paths_.raw_access(p));
        return std::move(b).build();
    }

    /// A[i][j] >= k, one select probe on path k.
    [[nodiscard]] bool at_least(std::size_t i, std::size_t j, std::uint32_t k) const {
        check_cell(i, j);
        check_level(k);
        return j >= cut(i, k);
    }

    /// min{ x : A[r][x] >= h }, or nullopt when row r never reaches h.
    [[nodiscard]] std::optional<std::size_t> min_row_at_least(std::size_t r, std::uint32_t h) const {
        check_cell(r, 0);
        check_level(h);
        const std::size_t c = cut(r, h);
        if (c == n_) return std::nullopt;
        return c;
    }

    /// h, a multiple of step(), with h - step() < A[r][c] <= h.
    [[nodiscard]] std::uint32_t coarse_upper(std::size_t r, std::size_t c) const {
        check_cell(r, c);
        return coarse(r, c).level;
    }

    [[nodiscard]] Value value(std::size_t i, std::size_t j, ValueSearch search = ValueSearch::BinarySearch) const {
        check_cell(i, j);
        Value out;
        std::uint32_t lo = 0;
        std::uint32_t hi = m_ - 1;
        if (search == ValueSearch::TwoStage) {
            const Value h_probes = coarse(i, j);
            const std::uint32_t h = h_probes.level;
            out.probes += h_probes.probes;
            lo = h + 1 > step_ ? h + 1 - step_ : 0;
            hi = std::min(h, m_ - 1);
        }
        while (lo < hi) {
            const std::uint32_t mid = lo + (hi - lo + 1) / 2;
            ++out.probes;
            if (j >= cut(i, mid)) lo = mid;
            else hi = mid - 1;
        }
        out.level = lo;
        return out;
    }

    /// Row cuts of path k, recovered by walking the bits.
    [[nodiscard]] std::vector<std::size_t> decode_path(std::uint32_t k) const {
        check_level(k);
        std::vector<std::size_t> cuts;
        std::size_t col = n_;
        for (std::size_t pos = 2 * n_ * k; pos < 2 * n_ * (k + 1); ++pos) {
            if (paths_.raw_access(pos)) {
                if (col == 0) throw CorruptIndex("boundary path walks past column 0");
                --col;
            } else {
                cuts.push_back(col);
            }
        }
        return cuts;
    }

    [[nodiscard]] std::size_t paths_bits() const noexcept { return paths_.size_in_bits(); }
    [[nodiscard]] std::size_t marks_bits() const noexcept { return marks_.size() * 64 + 2 * 32; }
    [[nodiscard]] std::size_t size_in_bits() const noexcept { return paths_bits() + marks_bits() + 3 * 64; }

    void serialize(io::Writer& w) const {
        w.put<std::uint64_t>(n_);
        w.put<std::uint32_t>(m_);
        w.put<std::uint32_t>(step_);
        paths_.serialize(w);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(per_row_));
        w.put<std::uint32_t>(width_);
        w.put_vec(marks_);
    }

    static BoundarySet deserialize(io::Reader& r) {
        BoundarySet b;
        b.n_ = r.get<std::uint64_t>();
        b.m_ = r.get<std::uint32_t>();
        b.step_ = r.get<std::uint32_t>();
        if (b.n_ > (std::uint64_t{1} << 32) || b.m_ == 0 || b.step_ == 0) throw CorruptIndex("BoundarySet: bad header");
        b.paths_ = BitVec::deserialize(r);
        if (b.paths_.size() != 2 * b.n_ * b.m_) throw CorruptIndex("BoundarySet: path length mismatch");
        for (std::uint32_t k = 1; k <= b.m_; ++k)
            if (b.paths_.raw_rank1(2 * b.n_ * k) != b.n_ * k) throw CorruptIndex("BoundarySet: malformed path");
        b.per_row_ = r.get<std::uint32_t>();
        b.width_ = r.get<std::uint32_t>();
        if (b.per_row_ != (b.m_ <= 1 ? 0 : (b.m_ - 2) / b.step_ + 1) || b.width_ != std::bit_width(b.n_)) throw CorruptIndex("BoundarySet: bad mark layout");
        b.marks_ = r.get_vec<std::uint64_t>();
        if (b.marks_.size() != (b.n_ * b.per_row_ * b.width_ + 63) / 64) throw CorruptIndex("BoundarySet: mark size mismatch");
        return b;
    }

private:
    [[nodiscard]] std::size_t cut(std::size_t i, std::uint32_t k) const {
        probe::tick();
        return n_ - (paths_.raw_select0(static_cast<std::size_t>(k) * n_ + i + 1) - 2 * n_ * k - i);
    }

    [[nodiscard]] std::size_t get_mark(std::size_t idx) const noexcept {
        const std::size_t bit = idx * width_;
        const std::size_t w = bit / 64, off = bit % 64;
        std::uint64_t v = marks_[w] >> off;
        if (off + width_ > 64) v |= marks_[w + 1] << (64 - off);
        return static_cast<std::size_t>(v & ((std::uint64_t{1} << width_) - 1));
    }

    void put_mark(std::size_t idx, std::uint64_t v) noexcept {
        const std::size_t bit = idx * width_;
        const std::size_t w = bit / 64, off = bit % 64;
        marks_[w] |= v << off;
        if (off + width_ > 64) marks_[w + 1] |= v >> (64 - off);
    }

    /// Number of marks in row r at or left of column c, times the step, by
    /// binary search over the row's increasing marks (one probe per read).
    [[nodiscard]] Value coarse(std::size_t r, std::size_t c) const {
        Value out;
        std::size_t lo = 0, hi = per_row_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            probe::tick();
            ++out.probes;
            if (get_mark(r * per_row_ + mid) <= c) lo = mid + 1;
            else hi = mid;
        }
        out.level = static_cast<std::uint32_t>(lo) * step_;
        return out;
    }

    void check_cell(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw RangeError("BoundarySet: cell (" + std::to_string(i) + "," + std::to_string(j) + ") outside " + std::to_string(n_) + "x" + std::to_string(n_));
    }
    void check_level(std::uint32_t k) const {
        if (k >= m_) throw RangeError("BoundarySet: level " + std::to_string(k) + " >= m=" + std::to_string(m_));
    }

    std::size_t n_ = 0;
    std::uint32_t m_ = 1;
    std::uint32_t step_ = 1;
    BitVec paths_;
    std::size_t per_row_ = 0;
    std::uint32_t width_ = 0;
    std::vector<std::uint64_t> marks_;
};

}  // namespace rmode
