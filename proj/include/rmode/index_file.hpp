#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmode/enumerate.hpp"

namespace rmode {

enum class Tokenization : std::uint8_t { Bytes = 0, Lines = 1, U32le = 2 };

/// Symbol ids plus the token each id renders as. Ids follow first appearance.
struct TokenizedInput {
    Tokenization mode = Tokenization::Bytes;
    std::vector<std::uint32_t> symbols;
    std::vector<std::string> dictionary;
};

inline TokenizedInput tokenize(const std::string& data, Tokenization mode) {
    TokenizedInput out;
    out.mode = mode;
    std::unordered_map<std::string, std::uint32_t> ids;
    auto add = [&](std::string tok) {
        auto [it, fresh] = ids.try_emplace(tok, static_cast<std::uint32_t>(out.dictionary.size()));
        if (fresh) out.dictionary.push_back(std::move(tok));
        out.symbols.push_back(it->second);
    };
    switch (mode) {
        case Tokenization::Bytes:
            for (char ch : data) add(std::string(1, ch));
            break;
        case Tokenization::Lines: {
            std::size_t start = 0;
            while (start < data.size()) {
                std::size_t end = data.find('\n', start);
                if (end == std::string::npos) end = data.size();
                std::string line = data.substr(start, end - start);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                add(std::move(line));
                start = end + 1;
            }
            break;
        }
        case Tokenization::U32le:
            if (data.size() % 4 != 0) throw BuildError("u32le input length is not a multiple of 4");
            for (std::size_t i = 0; i < data.size(); i += 4) {
                std::uint32_t v = 0;
                for (std::size_t b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[i + b])) << (8 * b);
                add(std::to_string(v));
            }
            break;
    }
    return out;
}

/// On-disk index: "RMODE1", header, text with dictionary, the enumeration
/// index components, then an FNV-1a 64 checksum of all preceding bytes.
/// All integers little-endian.
struct IndexFile {
    static constexpr char kMagic[6] = {'R', 'M', 'O', 'D', 'E', '1'};
    static constexpr std::uint32_t kNoLevel = 0xFFFFFFFFu;

    Tokenization mode = Tokenization::Bytes;
    std::vector<std::string> dictionary;
    EnumIndex index;

    static void write(std::ostream& os, const EnumIndex& index, Tokenization mode, const std::vector<std::string>& dictionary) {
        io::Writer w(os);
        const Text& text = index.text();
        const EnumConfig& cfg = index.config();
        w.bytes(kMagic, sizeof kMagic);
        w.put<std::uint64_t>(text.size());
        w.put<std::uint32_t>(text.sigma());
        w.put<std::uint32_t>(text.max_freq());
        w.put<std::uint8_t>(static_cast<std::uint8_t>(cfg.mode.backend));
        w.put<std::uint32_t>(cfg.mode.epsilon.num);
        w.put<std::uint32_t>(cfg.mode.epsilon.den);
        w.put<std::uint32_t>(cfg.mode.level.value_or(kNoLevel));
        w.put<std::uint64_t>(cfg.mode.table_cap);
        w.put<std::uint64_t>(cfg.n2_cap);
        w.put<std::uint8_t>(static_cast<std::uint8_t>(cfg.mode.search));
        w.put<std::uint8_t>(static_cast<std::uint8_t>(cfg.tie));
        w.put<std::uint8_t>(static_cast<std::uint8_t>(mode));
        w.put<std::uint64_t>(dictionary.size());
        for (const auto& tok : dictionary) w.put_string(tok);
        text.serialize(w);
        index.serialize_components(w);
        const std::uint64_t sum = w.hash();
        w.put(sum);
    }

    static void save(const std::string& path, const EnumIndex& index, Tokenization mode, const std::vector<std::string>& dictionary) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
        write(os, index, mode, dictionary);
    }

    static IndexFile parse(const std::string& bytes) {
        if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw CorruptIndex("checksum/magic mismatch (bad magic)");
        const std::size_t body = bytes.size() - 8;
        std::uint64_t h = 14695981039346656037ULL;
        for (std::size_t i = 0; i < body; ++i) h = (h ^ static_cast<unsigned char>(bytes[i])) * 1099511628211ULL;
        std::uint64_t stored = 0;
        for (std::size_t b = 0; b < 8; ++b) stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[body + b])) << (8 * b);
        if (h != stored) throw CorruptIndex("checksum/magic mismatch (bad checksum)");

        std::istringstream is(bytes.substr(sizeof kMagic, body - sizeof kMagic));
        io::Reader r(is);
        IndexFile f;
        const auto n = r.get<std::uint64_t>();
        const auto sigma = r.get<std::uint32_t>();
        const auto m = r.get<std::uint32_t>();
        EnumConfig cfg;
        const auto backend = r.get<std::uint8_t>();
        if (backend > 3) throw CorruptIndex("unknown backend id");
        cfg.mode.backend = static_cast<Backend>(backend);
        cfg.mode.epsilon.num = r.get<std::uint32_t>();
        cfg.mode.epsilon.den = r.get<std::uint32_t>();
        if (cfg.mode.epsilon.den == 0) throw CorruptIndex("epsilon denominator is zero");
        const auto level = r.get<std::uint32_t>();
        if (level != kNoLevel) cfg.mode.level = level;
        cfg.mode.table_cap = r.get<std::uint64_t>();
        cfg.n2_cap = r.get<std::uint64_t>();
        const auto search = r.get<std::uint8_t>();
        const auto tie = r.get<std::uint8_t>();
        const auto mode = r.get<std::uint8_t>();
        if (search > 1 || tie > 1 || mode > 2) throw CorruptIndex("bad config flags");
        cfg.mode.search = static_cast<ValueSearch>(search);
        cfg.tie = static_cast<TieBreak>(tie);
        f.mode = static_cast<Tokenization>(mode);
        const auto dict_size = r.get<std::uint64_t>();
        if (dict_size > sigma) throw CorruptIndex("dictionary larger than alphabet");
        for (std::uint64_t i = 0; i < dict_size; ++i) f.dictionary.push_back(r.get_string());
        Text text = Text::deserialize(r);
        if (text.size() != n || text.sigma() != sigma || text.max_freq() != m) throw CorruptIndex("header does not match text");
        f.index = EnumIndex::deserialize_components(std::move(text), cfg, r);
        if (is.peek() != std::char_traits<char>::eof()) throw CorruptIndex("trailing bytes after index");
        return f;
    }

    static IndexFile load(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw std::runtime_error("cannot open '" + path + "'");
        std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
        return parse(bytes);
    }

    [[nodiscard]] std::string render(std::uint32_t symbol) const {
        return symbol < dictionary.size() ? dictionary[symbol] : std::to_string(symbol);
    }
};

}  // namespace rmode
