#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

/// Symbol ids 0..sigma-1, uniform or Zipf(s) by rank.
inline std::vector<std::uint32_t> random_symbols(std::size_t n, std::uint32_t sigma, bool zipf, std::uint64_t seed, double s = 1.2) {
    std::mt19937_64 rng(seed);
    std::vector<double> w(sigma);
    for (std::uint32_t c = 0; c < sigma; ++c) w[c] = zipf ? 1.0 / std::pow(c + 1.0, s) : 1.0;
    std::discrete_distribution<std::uint32_t> pick(w.begin(), w.end());
    std::vector<std::uint32_t> out(n);
    for (auto& x : out) x = pick(rng);
    return out;
}

/// Letters a..g mapped to ids 0..6, so the figure string has sigma = 7.
inline std::vector<std::uint32_t> letters(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (char ch : s) out.push_back(static_cast<std::uint32_t>(ch - 'a'));
    return out;
}

inline const std::string kFigure = "abcbfcdaacfbcgba";

}  // namespace testing_support
