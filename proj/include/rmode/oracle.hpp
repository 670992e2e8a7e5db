#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "rmode/errors.hpp"

// Brute-force reference answers computed by direct counting. Nothing here
// touches the index structures; every test compares against these.
namespace rmode::oracle {

using Symbols = std::vector<std::uint32_t>;

inline std::map<std::uint32_t, std::uint32_t> counts(const Symbols& s, std::size_t l, std::size_t r) {
    if (l > r || r >= s.size()) throw RangeError("oracle: invalid range");
    std::map<std::uint32_t, std::uint32_t> c;
    for (std::size_t i = l; i <= r; ++i) ++c[s[i]];
    return c;
}

inline std::uint32_t freq_naive(const Symbols& s, std::size_t l, std::size_t r) {
    std::uint32_t best = 0;
    for (const auto& [sym, cnt] : counts(s, l, r)) best = std::max(best, cnt);
    return best;
}

inline std::set<std::uint32_t> modes_naive(const Symbols& s, std::size_t l, std::size_t r) {
    const auto c = counts(s, l, r);
    std::uint32_t best = 0;
    for (const auto& [sym, cnt] : c) best = std::max(best, cnt);
    std::set<std::uint32_t> out;
    for (const auto& [sym, cnt] : c)
        if (cnt == best) out.insert(sym);
    return out;
}

inline std::size_t leftmost_naive(const Symbols& s, std::size_t l, std::size_t r) {
    const auto m = modes_naive(s, l, r);
    for (std::size_t x = l; x <= r; ++x)
        if (m.count(s[x])) return x;
    throw RangeError("oracle: unreachable");
}

inline std::set<std::size_t> mode_index_set_naive(const Symbols& s, std::size_t l, std::size_t r) {
    const auto m = modes_naive(s, l, r);
    std::set<std::size_t> out;
    std::set<std::uint32_t> seen;
    for (std::size_t x = r + 1; x-- > l;) {
        if (m.count(s[x]) && seen.insert(s[x]).second) out.insert(x);
    }
    return out;
}

/// Full matrix f[l][r] for l <= r (0 below the diagonal); O(n^2) map updates.
inline std::vector<std::vector<std::uint32_t>> freq_matrix(const Symbols& s) {
    const std::size_t n = s.size();
    std::vector<std::vector<std::uint32_t>> f(n, std::vector<std::uint32_t>(n, 0));
    for (std::size_t l = 0; l < n; ++l) {
        std::map<std::uint32_t, std::uint32_t> c;
        std::uint32_t best = 0;
        for (std::size_t r = l; r < n; ++r) {
            best = std::max(best, ++c[s[r]]);
            f[l][r] = best;
        }
    }
    return f;
}

/// B[i][j] = 1 iff i <= j and S[j] is a mode of [i, j].
inline std::vector<std::vector<bool>> b_naive(const Symbols& s) {
    const std::size_t n = s.size();
    std::vector<std::vector<bool>> b(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) b[i][j] = modes_naive(s, i, j).count(s[j]) > 0;
    return b;
}

/// H[g][j] for g in 1..m (index 0 unused): max{k : f(k,j) = g and B[k][j] = 1} or -1.
inline std::vector<std::vector<std::int64_t>> h_naive(const Symbols& s) {
    const std::size_t n = s.size();
    if (n == 0) return {};
    const std::uint32_t m = freq_naive(s, 0, n - 1);
    const auto f = freq_matrix(s);
    const auto b = b_naive(s);
    std::vector<std::vector<std::int64_t>> h(m + 1, std::vector<std::int64_t>(n, -1));
    for (std::uint32_t g = 1; g <= m; ++g)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k <= j; ++k)
                if (f[k][j] == g && b[k][j]) h[g][j] = static_cast<std::int64_t>(k);
    return h;
}

}  // namespace rmode::oracle
