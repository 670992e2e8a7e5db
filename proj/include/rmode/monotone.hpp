#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmode/bitvec.hpp"

namespace rmode {

enum class Direction : std::uint8_t { Increasing = 0, Decreasing = 1 };

/// Monotone integer sequence in [0, u) with constant-probe access and bound.
///
/// The increasing form sets bit A[i] + i of an (n + u)-bit vector (unary gap
/// encoding). Decreasing sequences are stored as u - 1 - A[i].
class MonotoneSeq {
public:
    MonotoneSeq() = default;

    MonotoneSeq(std::span<const std::uint64_t> values, std::uint64_t universe, Direction dir = Direction::Increasing)
        : dir_(dir), n_(values.size()), u_(universe) {
        BitVec::Builder b(n_ + u_);
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::uint64_t raw = values[i];
            if (raw >= u_) throw BuildError("MonotoneSeq: value " + std::to_string(raw) + " at " + std::to_string(i) + " outside universe " + std::to_string(u_));
            const std::uint64_t v = dir_ == Direction::Increasing ? raw : u_ - 1 - raw;
            if (i > 0 && v < prev) throw BuildError("MonotoneSeq: sequence not monotone at index " + std::to_string(i));
            b.append(false, v - prev);
            b.push_back(true);
            prev = v;
        }
        b.append(false, u_ - prev);
        bits_ = std::move(b).build();
    }

    MonotoneSeq(const std::vector<std::uint64_t>& values, std::uint64_t universe, Direction dir = Direction::Increasing)
        : MonotoneSeq(std::span<const std::uint64_t>(values), universe, dir) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t universe() const noexcept { return u_; }
    [[nodiscard]] Direction direction() const noexcept { return dir_; }

    [[nodiscard]] std::uint64_t access(std::size_t i) const {
        if (i >= n_) throw RangeError("MonotoneSeq::access: index " + std::to_string(i) + " >= size " + std::to_string(n_));
        probe::tick();
        return raw_access(i);
    }

    /// #{ j : A[j] > v }
    [[nodiscard]] std::size_t bound(std::int64_t v) const {
        probe::tick();
        if (dir_ == Direction::Increasing) return n_ - count_le(v);
        // A[j] > v  <=>  u-1-A[j] < u-1-v  <=>  B[j] <= u-2-v
        return count_le(static_cast<std::int64_t>(u_) - 2 - v);
    }

    /// min{ j : A[j] >= v }, increasing sequences only.
    [[nodiscard]] std::optional<std::size_t> first_at_least(std::int64_t v) const {
        if (dir_ != Direction::Increasing) throw ConfigError("first_at_least requires an increasing sequence");
        probe::tick();
        const std::size_t j = count_le(v - 1);
        if (j == n_) return std::nullopt;
        return j;
    }

    [[nodiscard]] std::uint64_t raw_access(std::size_t i) const noexcept {
        const std::uint64_t v = bits_.raw_select1(i + 1) - i;
        return dir_ == Direction::Increasing ? v : u_ - 1 - v;
    }

    [[nodiscard]] std::vector<std::uint64_t> to_vector() const {
        std::vector<std::uint64_t> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = raw_access(i);
        return out;
    }

    [[nodiscard]] std::size_t size_in_bits() const noexcept { return bits_.size_in_bits() + 3 * 64; }

    void serialize(io::Writer& w) const {
        w.put<std::uint8_t>(static_cast<std::uint8_t>(dir_));
        w.put<std::uint64_t>(n_);
        w.put<std::uint64_t>(u_);
        bits_.serialize(w);
    }

    static MonotoneSeq deserialize(io::Reader& r) {
        MonotoneSeq s;
        const auto d = r.get<std::uint8_t>();
        if (d > 1) throw CorruptIndex("MonotoneSeq: bad direction tag");
        s.dir_ = static_cast<Direction>(d);
        s.n_ = r.get<std::uint64_t>();
        s.u_ = r.get<std::uint64_t>();
        s.bits_ = BitVec::deserialize(r);
        if (s.bits_.size() != s.n_ + s.u_ || s.bits_.ones() != s.n_) throw CorruptIndex("MonotoneSeq: inconsistent encoding");
        return s;
    }

private:
    // #{ j : stored[j] <= v } on the increasing encoding.
    [[nodiscard]] std::size_t count_le(std::int64_t v) const noexcept {
        if (v < 0) return 0;
        if (static_cast<std::uint64_t>(v) + 1 >= u_) return n_;
        const std::size_t zero_pos = bits_.raw_select0(static_cast<std::size_t>(v) + 1);
        return zero_pos - static_cast<std::size_t>(v);
    }

    Direction dir_ = Direction::Increasing;
    std::size_t n_ = 0;
    std::uint64_t u_ = 0;
    BitVec bits_;
};

}  // namespace rmode
