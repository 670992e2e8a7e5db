#pragma once

#include <cstdint>
#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rmode/errors.hpp"

namespace rmode {

/// Read-only n x n array, non-decreasing along rows and columns, values in [0, m).
struct Ims2View {
    std::size_t n = 0;
    std::uint32_t m = 1;
    std::function<std::uint32_t(std::size_t, std::size_t)> at;
    std::string provenance;

    [[nodiscard]] std::uint32_t operator()(std::size_t i, std::size_t j) const { return at(i, j); }

    /// Throws BuildError naming the first offending cell.
    void validate() const {
        if (m == 0) throw BuildError("Ims2View: m must be positive");
        std::vector<std::uint32_t> prev(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t left = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint32_t v = at(i, j);
                auto cell = [&] { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
                if (v >= m) throw BuildError("Ims2View: value " + std::to_string(v) + " >= m at " + cell());
                if (j > 0 && v < left) throw BuildError("Ims2View: row not monotone at " + cell());
                if (i > 0 && v < prev[j]) throw BuildError("Ims2View: column not monotone at " + cell());
                left = v;
                prev[j] = v;
            }
        }
    }
};

/// Dense row-major IMS2 array; owns its storage and hands out views.
class DenseIms2 {
public:
    DenseIms2() = default;
    DenseIms2(std::size_t n, std::uint32_t m) : n_(n), m_(m), cells_(n * n, 0) {}

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
    [[nodiscard]] std::uint32_t& at(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
    [[nodiscard]] std::uint32_t at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    /// The view borrows *this.
    [[nodiscard]] Ims2View view(std::string provenance = "dense") const {
        return Ims2View{n_, m_, [this](std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }, std::move(provenance)};
    }

    static DenseIms2 from_view(const Ims2View& v) {
        DenseIms2 d(v.n, v.m);
        for (std::size_t i = 0; i < v.n; ++i)
            for (std::size_t j = 0; j < v.n; ++j) d.at(i, j) = v(i, j);
        return d;
    }

private:
    std::size_t n_ = 0;
    std::uint32_t m_ = 1;
    std::vector<std::uint32_t> cells_;
};

/// Random staircase in IMS2(n, m): each cell is the max of its upper and left
/// neighbours, bumped by one with probability `step` (clamped to m - 1).
/// step < 0 picks a rate so the main diagonal roughly spans [0, m).
inline DenseIms2 random_staircase(std::size_t n, std::uint32_t m, std::uint64_t seed, double step = -1.0) {
    DenseIms2 d(n, m);
    if (n == 0) return d;
    if (step < 0) step = std::min(1.0, static_cast<double>(m) / (2.0 * static_cast<double>(n)));
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bump(step);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::uint32_t base = 0;
            if (i > 0) base = std::max(base, d.at(i - 1, j));
            if (j > 0) base = std::max(base, d.at(i, j - 1));
            if (bump(rng) && base + 1 < m) ++base;
            d.at(i, j) = base;
        }
    }
    return d;
}

}  // namespace rmode
