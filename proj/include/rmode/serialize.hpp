#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "rmode/errors.hpp"

namespace rmode::io {

// Little-endian primitive encoding shared by every serializable component.
// The writer keeps a running FNV-1a hash so the index file can append a
// checksum over everything written.
class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) hash_ = (hash_ ^ p[i]) * 1099511628211ULL;
        os_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(len));
        if (!os_) throw std::runtime_error("write failed");
    }

    template <typename T>
    void put(T value) {
        static_assert(std::is_unsigned_v<T>);
        unsigned char buf[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
        bytes(buf, sizeof(T));
    }

    void put_i64(std::int64_t v) { put(static_cast<std::uint64_t>(v)); }

    template <typename T>
    void put_vec(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        for (const T& x : v) put(static_cast<std::make_unsigned_t<T>>(x));
    }

    void put_string(const std::string& s) {
        put<std::uint64_t>(s.size());
        bytes(s.data(), s.size());
    }

    [[nodiscard]] std::uint64_t hash() const noexcept { return hash_; }

private:
    std::ostream& os_;
    std::uint64_t hash_ = 14695981039346656037ULL;
};

class Reader {
public:
    explicit Reader(std::istream& is) : is_(is) {}

    void bytes(void* data, std::size_t len) {
        is_.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
        if (static_cast<std::size_t>(is_.gcount()) != len) throw CorruptIndex("unexpected end of index data");
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) hash_ = (hash_ ^ p[i]) * 1099511628211ULL;
    }

    template <typename T>
    T get() {
        static_assert(std::is_unsigned_v<T>);
        unsigned char buf[sizeof(T)];
        bytes(buf, sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
        return v;
    }

    std::int64_t get_i64() { return static_cast<std::int64_t>(get<std::uint64_t>()); }

    // `limit` guards allocations against corrupted length fields.
    template <typename T>
    std::vector<T> get_vec(std::uint64_t limit = std::uint64_t{1} << 34) {
        const auto len = get<std::uint64_t>();
        if (len > limit) throw CorruptIndex("vector length out of bounds");
        std::vector<T> v;
        v.reserve(static_cast<std::size_t>(len));
        for (std::uint64_t i = 0; i < len; ++i) v.push_back(static_cast<T>(get<std::make_unsigned_t<T>>()));
        return v;
    }

    std::string get_string(std::uint64_t limit = std::uint64_t{1} << 32) {
        const auto len = get<std::uint64_t>();
        if (len > limit) throw CorruptIndex("string length out of bounds");
        std::string s(static_cast<std::size_t>(len), '\0');
        if (len > 0) bytes(s.data(), s.size());
        return s;
    }

    [[nodiscard]] std::uint64_t hash() const noexcept { return hash_; }

private:
    std::istream& is_;
    std::uint64_t hash_ = 14695981039346656037ULL;
};

}  // namespace rmode::io
