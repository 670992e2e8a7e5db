#pragma once

#include <cstdint>

namespace rmode::probe {

// One tick per public base-structure operation (bit-vector access/rank/select,
// monotone-sequence access/bound). Thread-local so concurrent readers do not
// interfere with each other's counts.
inline thread_local std::uint64_t counter = 0;

inline void tick() noexcept { ++counter; }

/// Counts probes issued on the current thread since construction.
class Scope {
public:
    Scope() noexcept : start_(counter) {}
    [[nodiscard]] std::uint64_t count() const noexcept { return counter - start_; }

private:
    std::uint64_t start_;
};

}  // namespace rmode::probe
