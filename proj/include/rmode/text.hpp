#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmode/errors.hpp"
#include "rmode/ims2_view.hpp"
#include "rmode/serialize.hpp"

namespace rmode {

/// Symbol sequence with per-symbol occurrence lists and per-position ranks.
class Text {
public:
    Text() = default;

    Text(std::vector<std::uint32_t> symbols, std::uint32_t sigma) : symbols_(std::move(symbols)), sigma_(sigma) {
        if (symbols_.empty()) throw BuildError("empty input");
        occ_.assign(sigma_, {});
        rank_at_.resize(symbols_.size());
        for (std::size_t p = 0; p < symbols_.size(); ++p) {
            const std::uint32_t c = symbols_[p];
            if (c >= sigma_) throw BuildError("symbol id " + std::to_string(c) + " at position " + std::to_string(p) + " >= sigma " + std::to_string(sigma_));
            rank_at_[p] = static_cast<std::uint32_t>(occ_[c].size());
            occ_[c].push_back(static_cast<std::uint32_t>(p));
        }
        for (const auto& o : occ_) m_ = std::max<std::uint32_t>(m_, static_cast<std::uint32_t>(o.size()));
    }

    /// Ids assigned in order of first appearance.
    static Text from_string(const std::string& s) {
        std::vector<std::int32_t> id(256, -1);
        std::vector<std::uint32_t> syms;
        std::uint32_t sigma = 0;
        for (unsigned char ch : s) {
            if (id[ch] < 0) id[ch] = static_cast<std::int32_t>(sigma++);
            syms.push_back(static_cast<std::uint32_t>(id[ch]));
        }
        return Text(std::move(syms), sigma);
    }

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] std::uint32_t sigma() const noexcept { return sigma_; }
    [[nodiscard]] std::uint32_t max_freq() const noexcept { return m_; }
    [[nodiscard]] std::uint32_t operator[](std::size_t p) const { return symbols_[p]; }
    [[nodiscard]] const std::vector<std::uint32_t>& symbols() const noexcept { return symbols_; }
    [[nodiscard]] const std::vector<std::uint32_t>& occ(std::uint32_t c) const { return occ_.at(c); }
    [[nodiscard]] std::uint32_t rank_at(std::size_t p) const { return rank_at_[p]; }

    /// S[id] occurs at least g times in [l, id].
    [[nodiscard]] bool occurs_at_least_before(std::size_t id, std::uint32_t g, std::size_t l) const {
        const std::uint32_t k = rank_at_[id];
        if (g == 0) return true;
        if (k + 1 < g) return false;
        return occ_[symbols_[id]][k + 1 - g] >= l;
    }

    /// S[p] occurs at least g times in [p, r].
    [[nodiscard]] bool occurs_at_least_after(std::size_t p, std::uint32_t g, std::size_t r) const {
        if (g == 0) return true;
        const auto& o = occ_[symbols_[p]];
        const std::size_t idx = rank_at_[p] + static_cast<std::size_t>(g) - 1;
        return idx < o.size() && o[idx] <= r;
    }

    void check_range(std::size_t l, std::size_t r) const {
        if (l > r || r >= symbols_.size())
            throw RangeError("invalid range [" + std::to_string(l) + "," + std::to_string(r) + "] for n=" + std::to_string(symbols_.size()));
    }

    [[nodiscard]] std::size_t size_in_bits() const noexcept {
        // occurrence lists and ranks; the symbols themselves are the input
        return symbols_.size() * 2 * 32 + 64;
    }

    void serialize(io::Writer& w) const {
        w.put<std::uint32_t>(sigma_);
        w.put_vec(symbols_);
    }

    static Text deserialize(io::Reader& r) {
        const auto sigma = r.get<std::uint32_t>();
        auto syms = r.get_vec<std::uint32_t>();
        try {
            return Text(std::move(syms), sigma);
        } catch (const BuildError& e) {
            throw CorruptIndex(std::string("text: ") + e.what());
        }
    }

private:
    std::vector<std::uint32_t> symbols_;
    std::uint32_t sigma_ = 0;
    std::vector<std::vector<std::uint32_t>> occ_;
    std::vector<std::uint32_t> rank_at_;
    std::uint32_t m_ = 0;
};

/// All range-mode frequencies f(l, r), l <= r, from an O(n^2) sweep.
class FreqTable {
public:
    FreqTable() = default;

    explicit FreqTable(const Text& text) : n_(text.size()), m_(text.max_freq()) {
        if (m_ > 0xFFFF) throw BuildError("frequency table supports max frequency <= 65535");
        cells_.assign(n_ * n_, 0);
        std::vector<std::uint32_t> count(text.sigma(), 0);
        for (std::size_t l = 0; l < n_; ++l) {
            std::uint32_t best = 0;
            for (std::size_t r = l; r < n_; ++r) {
                best = std::max(best, ++count[text[r]]);
                cells_[l * n_ + r] = static_cast<std::uint16_t>(best);
            }
            for (std::size_t r = l; r < n_; ++r) count[text[r]] = 0;
        }
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
    [[nodiscard]] std::uint32_t operator()(std::size_t l, std::size_t r) const { return cells_[l * n_ + r]; }

    /// Cell of the transformed table holding f(l, r) - 1.
    static std::pair<std::size_t, std::size_t> cell_of(std::size_t n, std::size_t l, std::size_t r) noexcept { return {n - 1 - l, r}; }

    /// Transformed table C'[i][j] = f(n-1-i, j) - 1 (0 when j < n-1-i), in IMS2(n, m).
    /// The view borrows *this.
    [[nodiscard]] Ims2View transformed_view() const {
        const std::size_t n = n_;
        return Ims2View{n_, std::max<std::uint32_t>(m_, 1),
                        [this, n](std::size_t i, std::size_t j) -> std::uint32_t {
                            const std::size_t l = n - 1 - i;
                            return j < l ? 0 : (*this)(l, j) - 1;
                        },
                        "C'[i][j] = f(n-1-i, j) - 1, rows reversed, values shifted to 0"};
    }

private:
    std::size_t n_ = 0;
    std::uint32_t m_ = 0;
    std::vector<std::uint16_t> cells_;
};

}  // namespace rmode
