#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmode/rmode.hpp"

using nlohmann::json;
using namespace rmode;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BuildOptions {
    std::string backend = "boundary";
    std::string epsilon = "1/2";
    std::optional<std::uint32_t> k;
    std::size_t n2_cap = 4096;
    std::size_t table_cap = 8192;
    std::string mode = "bytes";
    std::string search = "binary";
    bool hybrid = true;
};

Backend parse_backend(const std::string& s) {
    static const std::map<std::string, Backend> names{
        {"oracle", Backend::Oracle}, {"boundary", Backend::Boundary}, {"sk", Backend::Sk}, {"blocks", Backend::Blocks}};
    return names.at(s);
}

Strategy parse_strategy(const std::string& s) {
    static const std::map<std::string, Strategy> names{
        {"rmq", Strategy::Rmq}, {"bits", Strategy::Bits}, {"leftmost", Strategy::Leftmost}, {"hybrid", Strategy::Hybrid}};
    return names.at(s);
}

Tokenization parse_mode(const std::string& s) {
    static const std::map<std::string, Tokenization> names{
        {"bytes", Tokenization::Bytes}, {"lines", Tokenization::Lines}, {"u32le", Tokenization::U32le}};
    return names.at(s);
}

EnumConfig make_config(const BuildOptions& o) {
    EnumConfig cfg;
    cfg.mode.backend = parse_backend(o.backend);
    cfg.mode.epsilon = Fraction::parse(o.epsilon);
    cfg.mode.level = o.k;
    cfg.mode.table_cap = o.table_cap;
    cfg.mode.search = o.search == "two-stage" ? ValueSearch::TwoStage : ValueSearch::BinarySearch;
    cfg.n2_cap = o.n2_cap;
    cfg.hybrid = o.hybrid;
    return cfg;
}

std::string read_input(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("cannot read '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

TokenizedInput load_tokens(const std::string& path, Tokenization mode) {
    TokenizedInput tok = tokenize(read_input(path), mode);
    if (tok.symbols.empty()) throw UsageError("empty input");
    return tok;
}

Text make_text(const TokenizedInput& tok) { return Text(tok.symbols, static_cast<std::uint32_t>(tok.dictionary.size())); }

json sizes_json(const EnumIndex& idx) {
    const auto z = idx.sizes();
    return json{{"text", z.mode.text}, {"blocks", z.mode.blocks}, {"boundary", z.mode.boundary}, {"sk", z.mode.sk},
                {"table", z.mode.table}, {"rmq", z.rmq}, {"bits", z.bits}, {"hybrid", z.hybrid}};
}

json sk_json(const SkIndex& sk) {
    json levels = json::array();
    for (const auto& st : sk.stats())
        levels.push_back({{"level", st.level}, {"n", st.n}, {"m", st.m}, {"t", st.t}, {"u", st.u}, {"nonflat", st.nonflat}});
    return json{{"k", sk.level()}, {"nonflat", sk.nonflat_count()}, {"levels", levels}};
}

int cmd_build(const std::string& input, const BuildOptions& opts, const std::string& out) {
    const TokenizedInput tok = load_tokens(input, parse_mode(opts.mode));
    const auto t0 = std::chrono::steady_clock::now();
    const EnumIndex idx(make_text(tok), make_config(opts));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.empty()) IndexFile::save(out, idx, tok.mode, tok.dictionary);

    const Text& text = idx.text();
    json stats{{"n", text.size()}, {"sigma", text.sigma()}, {"m", text.max_freq()}, {"backend", backend_name(idx.config().mode.backend)},
               {"bits", sizes_json(idx)}, {"build_seconds", secs}};
    if (const SkIndex* sk = idx.mode_index().sk()) stats["sk"] = sk_json(*sk);
    if (!out.empty()) stats["out"] = out;
    std::cout << stats.dump() << "\n";
    std::cerr << "built index: n=" << text.size() << " sigma=" << text.sigma() << " m=" << text.max_freq() << " in " << secs << "s\n";
    return 0;
}

int cmd_query(const std::string& index_path, std::size_t l, std::size_t r, bool enumerate, const std::string& strategy) {
    const IndexFile f = IndexFile::load(index_path);
    const EnumIndex& idx = f.index;
    const std::size_t n = idx.text().size();
    if (l > r || r >= n) throw UsageError("invalid range [" + std::to_string(l) + "," + std::to_string(r) + "] for n=" + std::to_string(n));
    json out{{"l", l}, {"r", r}};
    if (enumerate) {
        const auto e = idx.enumerate(l, r, parse_strategy(strategy));
        json modes = json::array();
        for (std::uint32_t c : e.symbols) modes.push_back(f.render(c));
        out["freq"] = e.freq;
        out["modes"] = modes;
        out["indices"] = e.positions;
        out["strategy"] = strategy;
    } else {
        const auto m = idx.mode_index().mode(l, r);
        out["freq"] = m.freq;
        out["mode"] = f.render(m.symbol);
        out["leftmost"] = idx.mode_index().leftmost_mode(l, r).position;
    }
    std::cout << out.dump() << "\n";
    return 0;
}

struct Tally {
    std::size_t ranges = 0;
    std::size_t mismatches = 0;
    std::size_t max_probes = 0;
    std::size_t max_calls = 0;
    std::size_t bound_violations = 0;

    [[nodiscard]] json to_json() const {
        return json{{"ranges", ranges}, {"mismatches", mismatches}, {"max_probes", max_probes}, {"max_calls", max_calls}, {"bound_violations", bound_violations}};
    }
};

/// Checks one index against the oracle on the given ranges; returns per-check tallies.
std::map<std::string, Tally> verify_index(const EnumIndex& idx, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
    const auto& s = idx.text().symbols();
    const ModeIndex& mi = idx.mode_index();
    std::map<std::string, Tally> t;
    for (const auto& [l, r] : ranges) {
        const auto modes = oracle::modes_naive(s, l, r);
        const std::uint32_t f = oracle::freq_naive(s, l, r);
        const auto positions = oracle::mode_index_set_naive(s, l, r);
        const std::vector<std::size_t> pos(positions.begin(), positions.end());
        const std::vector<std::uint32_t> sym(modes.begin(), modes.end());

        auto& fq = t["freq"];
        const auto [got, probes] = mi.freq_probed(l, r);
        ++fq.ranges;
        fq.mismatches += got != f;
        fq.max_probes = std::max(fq.max_probes, probes);

        auto& md = t["mode"];
        const auto m = mi.mode(l, r);
        ++md.ranges;
        md.mismatches += m.freq != f || !modes.count(m.symbol);

        auto& lm = t["leftmost_mode"];
        ++lm.ranges;
        lm.mismatches += mi.leftmost_mode(l, r).position != oracle::leftmost_naive(s, l, r);

        for (Strategy st : {Strategy::Rmq, Strategy::Bits, Strategy::Leftmost, Strategy::Hybrid}) {
            if (st == Strategy::Bits && !idx.has_bits()) continue;
            if (st == Strategy::Hybrid && !idx.has_hybrid()) continue;
            auto& e = t[std::string("enumerate/") + strategy_name(st)];
            const auto got_e = idx.enumerate(l, r, st);
            ++e.ranges;
            e.mismatches += got_e.freq != f || got_e.symbols != sym || got_e.positions != pos;
            if (st == Strategy::Rmq) {
                e.max_calls = std::max(e.max_calls, got_e.rmq_calls);
                e.bound_violations += got_e.rmq_calls > 2 * pos.size() + 1;
            }
            if (st == Strategy::Leftmost) {
                e.max_calls = std::max(e.max_calls, got_e.iterations);
                e.bound_violations += got_e.iterations > pos.size() + 1;
            }
        }
    }
    return t;
}

std::vector<std::pair<std::size_t, std::size_t>> pick_ranges(std::size_t n, std::size_t n_cap, std::size_t samples, std::mt19937_64& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (n <= n_cap) {
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t r = l; r < n; ++r) out.emplace_back(l, r);
        return out;
    }
    for (std::size_t q = 0; q < samples; ++q) {
        std::size_t l = rng() % n, r = rng() % n;
        if (l > r) std::swap(l, r);
        out.emplace_back(l, r);
    }
    return out;
}

std::vector<std::uint32_t> random_corpus(std::size_t n, std::uint32_t sigma, bool zipf, std::mt19937_64& rng) {
    std::vector<double> w(sigma);
    for (std::uint32_t c = 0; c < sigma; ++c) w[c] = zipf ? 1.0 / std::pow(c + 1.0, 1.2) : 1.0;
    std::discrete_distribution<std::uint32_t> pick(w.begin(), w.end());
    std::vector<std::uint32_t> s(n);
    for (auto& x : s) x = pick(rng);
    return s;
}

int cmd_verify(const std::string& input, const std::string& index_path, const BuildOptions& opts, std::size_t n_cap, std::size_t samples,
               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t total_mismatches = 0, total_violations = 0;
    auto report = [&](const std::string& label, const EnumIndex& idx, const std::map<std::string, Tally>& tallies) {
        json checks = json::object();
        for (const auto& [name, t] : tallies) {
            checks[name] = t.to_json();
            total_mismatches += t.mismatches;
            total_violations += t.bound_violations;
        }
        std::cout << json{{"input", label}, {"n", idx.text().size()}, {"m", idx.text().max_freq()}, {"backend", backend_name(idx.config().mode.backend)},
                          {"checks", checks}}
                         .dump()
                  << "\n";
    };

    if (!index_path.empty()) {
        const IndexFile f = IndexFile::load(index_path);
        report(index_path, f.index, verify_index(f.index, pick_ranges(f.index.text().size(), n_cap, samples, rng)));
    } else {
        std::vector<std::pair<std::string, Text>> corpora;
        if (!input.empty()) {
            corpora.emplace_back(input, make_text(load_tokens(input, parse_mode(opts.mode))));
        } else {
            const std::uint32_t sigmas[] = {1, 2, 4, 8, 26};
            for (int q = 0; q < 10; ++q) {
                const std::size_t n = 1 + rng() % 64;
                const std::uint32_t sigma = sigmas[q % 5];
                corpora.emplace_back("random#" + std::to_string(q), Text(random_corpus(n, sigma, q % 2 == 1, rng), sigma));
            }
        }
        for (const auto& [label, text] : corpora) {
            const auto ranges = pick_ranges(text.size(), n_cap, samples, rng);
            for (const char* b : {"oracle", "boundary", "sk", "blocks"}) {
                BuildOptions o = opts;
                o.backend = b;
                EnumConfig cfg = make_config(o);
                if (cfg.mode.backend != Backend::Blocks && text.size() > cfg.mode.table_cap) {
                    std::cout << json{{"input", label}, {"backend", b}, {"skipped", "n exceeds table cap"}}.dump() << "\n";
                    continue;
                }
                const EnumIndex idx(text, cfg);
                report(label, idx, verify_index(idx, ranges));
            }
        }
    }
    std::cerr << (total_mismatches == 0 && total_violations == 0 ? "verify: OK" : "verify: FAILED") << " (" << total_mismatches << " mismatches, "
              << total_violations << " bound violations)\n";
    return total_mismatches == 0 && total_violations == 0 ? 0 : 1;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

int bench_staircase(std::uint64_t seed) {
    const std::uint32_t m = 16;
    for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
        const DenseIms2 d = random_staircase(n, m, seed + n);
        const BoundarySet b(d.view());
        std::mt19937_64 rng(seed);
        std::size_t worst = 0;
        for (int q = 0; q < 2000; ++q) worst = std::max<std::size_t>(worst, b.value(rng() % n, rng() % n).probes);
        std::cout << json{{"bench", "boundary"}, {"n", n}, {"m", m}, {"bits", b.size_in_bits()},
                          {"bits_per_cell", static_cast<double>(b.size_in_bits()) / static_cast<double>(n * m)}, {"max_value_probes", worst}}
                         .dump()
                  << "\n";
    }
    const std::size_t n = 2048;
    const std::uint32_t m2 = 8;
    const DenseIms2 d = random_staircase(n, m2, seed);
    for (std::uint32_t k = 0; k <= 3; ++k) {
        const SkIndex sk(d.view(), k);
        std::mt19937_64 rng(seed + k);
        std::size_t worst = 0;
        std::vector<double> times;
        for (int q = 0; q < 2000; ++q) {
            const std::size_t i = rng() % n, j = rng() % n;
            const auto t0 = std::chrono::steady_clock::now();
            const probe::Scope scope;
            (void)sk.access(i, j);
            worst = std::max<std::size_t>(worst, scope.count());
            times.push_back(std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count());
        }
        std::cout << json{{"bench", "sk"}, {"n", n}, {"m", m2}, {"k", k}, {"default_level", SkIndex::default_level(n, m2)}, {"bits", sk.size_in_bits()},
                          {"nonflat", sk.nonflat_count()}, {"max_probes", worst}, {"probe_bound", 5u << k}, {"median_access_ns", median(times)}}
                         .dump()
                  << "\n";
    }
    return 0;
}

int bench_input(const std::string& input, const BuildOptions& opts, std::uint64_t seed) {
    const TokenizedInput tok = load_tokens(input, parse_mode(opts.mode));
    const Text text = make_text(tok);
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (int q = 0; q < 1000; ++q) {
        std::size_t l = rng() % text.size(), r = rng() % text.size();
        if (l > r) std::swap(l, r);
        ranges.emplace_back(l, r);
    }
    for (const char* b : {"oracle", "boundary", "sk", "blocks"}) {
        BuildOptions o = opts;
        o.backend = b;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const EnumIndex idx(text, make_config(o));
            const double build = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::vector<double> freq_ns, enum_ns;
            for (const auto& [l, r] : ranges) {
                auto a = std::chrono::steady_clock::now();
                (void)idx.mode_index().freq(l, r);
                auto z = std::chrono::steady_clock::now();
                freq_ns.push_back(std::chrono::duration<double, std::nano>(z - a).count());
                a = std::chrono::steady_clock::now();
                (void)idx.enumerate(l, r, Strategy::Rmq);
                z = std::chrono::steady_clock::now();
                enum_ns.push_back(std::chrono::duration<double, std::nano>(z - a).count());
            }
            const auto& t = idx.text();
            std::cout << json{{"bench", "input"}, {"backend", b}, {"n", t.size()}, {"m", t.max_freq()}, {"bits", sizes_json(idx)}, {"build_seconds", build},
                              {"median_freq_ns", median(freq_ns)}, {"median_enumerate_ns", median(enum_ns)}}
                             .dump()
                      << "\n";
        } catch (const BuildError& e) {
            std::cout << json{{"bench", "input"}, {"backend", b}, {"refused", e.what()}}.dump() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Succinct range mode index: build, query, verify, bench"};
    app.require_subcommand(1);

    BuildOptions opts;
    auto add_build_flags = [&opts](CLI::App* sub) {
        sub->add_option("--backend", opts.backend, "frequency backend")->check(CLI::IsMember({"oracle", "boundary", "sk", "blocks"}));
        sub->add_option("--epsilon", opts.epsilon, "block exponent P/Q in [0, 1/2]");
        sub->add_option("--k", opts.k, "S_k recursion level (default: loglog(n/m) rule)");
        sub->add_option("--n2-cap", opts.n2_cap, "largest n for the n^2-bit table");
        sub->add_option("--table-cap", opts.table_cap, "largest n for full-table backends");
        sub->add_option("--mode", opts.mode, "input tokenization")->check(CLI::IsMember({"bytes", "lines", "u32le"}));
        sub->add_option("--search", opts.search, "value search for the boundary backend")->check(CLI::IsMember({"binary", "two-stage"}));
        sub->add_flag("!--no-hybrid", opts.hybrid, "skip the frequency-split structures");
    };

    std::string input, out, index_path, strategy = "rmq";
    std::size_t l = 0, r = 0, n_cap = 64, samples = 2000;
    std::uint64_t seed = 0;
    bool enumerate = false;

    auto* build = app.add_subcommand("build", "build an index from an input file");
    build->add_option("input", input, "input file ('-' for stdin)")->required();
    build->add_option("--out", out, "index file to write");
    add_build_flags(build);

    auto* query = app.add_subcommand("query", "answer one range query from an index file");
    query->add_option("--index", index_path, "index file")->required();
    query->add_option("l", l, "left end (0-based, inclusive)")->required();
    query->add_option("r", r, "right end (inclusive)")->required();
    query->add_flag("--enumerate", enumerate, "report every mode");
    query->add_option("--strategy", strategy, "enumeration strategy")->check(CLI::IsMember({"rmq", "bits", "leftmost", "hybrid"}));

    auto* verify = app.add_subcommand("verify", "compare every backend and strategy against brute force");
    verify->add_option("input", input, "input file; random corpora when omitted");
    verify->add_option("--index", index_path, "verify a saved index instead");
    verify->add_option("--n-cap", n_cap, "check all ranges up to this n, sample above it");
    verify->add_option("--ranges", samples, "sampled ranges above the cap");
    verify->add_option("--seed", seed, "random seed");
    add_build_flags(verify);

    auto* bench = app.add_subcommand("bench", "report sizes, probe counts and timings");
    bench->add_option("input", input, "input file; staircase tables when omitted");
    bench->add_option("--seed", seed, "random seed");
    add_build_flags(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*build) return cmd_build(input, opts, out);
        if (*query) return cmd_query(index_path, l, r, enumerate, strategy);
        if (*verify) return cmd_verify(input, index_path, opts, n_cap, samples, seed);
        if (*bench) return input.empty() ? bench_staircase(seed) : bench_input(input, opts, seed);
    } catch (const CorruptIndex& e) {
        std::cerr << "error: corrupt index: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
