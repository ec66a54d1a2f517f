#include "nnrepr/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <thread>
#include <unordered_map>

#include "nnrepr/error.hpp"

namespace nnrepr {

namespace {

using Int128 = __int128;

// Distances stay below 2^kNarrowBits on the fast path.
constexpr std::uint64_t kNarrowBits = 120;

template <class Int>
Int from_big(const BigInt& v) {
    if constexpr (std::is_same_v<Int, BigInt>) {
        return v;
    } else {
        const BigInt magnitude = abs(v);
        const BigInt mask = (BigInt(1) << 64) - 1;
        auto low = static_cast<unsigned __int128>(static_cast<std::uint64_t>(magnitude & mask));
        auto high = static_cast<unsigned __int128>(static_cast<std::uint64_t>(magnitude >> 64));
        auto out = static_cast<Int128>((high << 64) | low);
        return v.sign() < 0 ? -out : out;
    }
}

template <class Int>
BigInt to_big(const Int& v) {
    if constexpr (std::is_same_v<Int, BigInt>) {
        return v;
    } else {
        const bool negative = v < 0;
        auto magnitude = static_cast<unsigned __int128>(negative ? -v : v);
        BigInt out = BigInt(static_cast<std::uint64_t>(magnitude >> 64));
        out <<= 64;
        out += static_cast<std::uint64_t>(magnitude);
        return negative ? BigInt(-out) : out;
    }
}

// ScaledAnchorTable converted to the engine's integer type, with deltas laid
// out by coordinate so a bit flip touches one contiguous row.
template <class Int>
struct Engine {
    std::size_t arity = 0;
    std::size_t anchors = 0;
    std::vector<Int> norms;
    std::vector<Int> deltas;  // [coordinate * anchors + anchor]
    std::vector<std::uint32_t> pos;
    std::vector<std::uint32_t> neg;

    explicit Engine(const ScaledAnchorTable& table) : arity(table.arity), anchors(table.size()) {
        norms.reserve(anchors);
        for (const auto& v : table.norms) norms.push_back(from_big<Int>(v));
        deltas.resize(arity * anchors);
        for (std::size_t i = 0; i < anchors; ++i) {
            for (std::size_t j = 0; j < arity; ++j) deltas[j * anchors + i] = from_big<Int>(table.deltas[i][j]);
            (table.labels[i] == Label::pos ? pos : neg).push_back(static_cast<std::uint32_t>(i));
        }
    }

    // Walks the subcube whose top `prefix_bits` coordinates equal `prefix`,
    // calling visit(index, distances) for each input.
    template <class Visitor>
    void walk(std::uint64_t prefix, std::size_t prefix_bits, Visitor&& visit) const {
        std::vector<Int> dist = norms;
        for (std::size_t j = 0; j < prefix_bits; ++j) {
            if ((prefix >> (prefix_bits - 1 - j)) & 1u) add_row(dist, j, true);
        }
        const std::size_t free_bits = arity - prefix_bits;
        const std::uint64_t base = prefix << free_bits;
        const std::uint64_t count = std::uint64_t{1} << free_bits;
        std::uint64_t gray = 0;
        visit(base, dist);
        for (std::uint64_t step = 1; step < count; ++step) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(step));
            gray ^= std::uint64_t{1} << bit;
            add_row(dist, arity - 1 - bit, (gray >> bit) & 1u);
            visit(base | gray, dist);
        }
    }

    void add_row(std::vector<Int>& dist, std::size_t coordinate, bool set) const {
        const Int* row = deltas.data() + coordinate * anchors;
        if (set) {
            for (std::size_t i = 0; i < anchors; ++i) dist[i] += row[i];
        } else {
            for (std::size_t i = 0; i < anchors; ++i) dist[i] -= row[i];
        }
    }
};

template <class Int>
struct RawFinding {
    std::uint64_t input;
    bool expected;
    bool has_pos;
    bool has_neg;
    Int dpos;
    Int dneg;
};

template <class Int>
struct ChunkResult {
    std::vector<RawFinding<Int>> counterexamples;
    std::vector<RawFinding<Int>> ties;
    std::uint64_t counterexample_count = 0;
    std::uint64_t tie_count = 0;
};

template <class Int>
void keep_smallest(std::vector<RawFinding<Int>>& findings, std::size_t limit) {
    std::sort(findings.begin(), findings.end(), [](const auto& a, const auto& b) { return a.input < b.input; });
    if (findings.size() > limit) findings.resize(limit);
}

template <class Int>
void record(std::vector<RawFinding<Int>>& findings, RawFinding<Int>&& finding, std::size_t limit) {
    if (limit == 0) return;
    findings.push_back(std::move(finding));
    if (findings.size() >= 2 * limit) keep_smallest(findings, limit);
}

template <class Int>
ChunkResult<Int> check_chunk(const Engine<Int>& engine, const TruthTable& table, std::uint64_t prefix,
                             std::size_t prefix_bits, std::size_t limit) {
    ChunkResult<Int> result;
    engine.walk(prefix, prefix_bits, [&](std::uint64_t index, const std::vector<Int>& dist) {
        const bool has_pos = !engine.pos.empty();
        const bool has_neg = !engine.neg.empty();
        Int dpos{};
        Int dneg{};
        if (has_pos) {
            dpos = dist[engine.pos[0]];
            for (std::size_t k = 1; k < engine.pos.size(); ++k) dpos = std::min(dpos, dist[engine.pos[k]]);
        }
        if (has_neg) {
            dneg = dist[engine.neg[0]];
            for (std::size_t k = 1; k < engine.neg.size(); ++k) dneg = std::min(dneg, dist[engine.neg[k]]);
        }
        const bool expected = table.get(index);
        if (has_pos && has_neg && dpos == dneg) {
            ++result.tie_count;
            record(result.ties, {index, expected, true, true, dpos, dneg}, limit);
            return;
        }
        const bool pos_wins = !has_neg || (has_pos && dpos < dneg);
        if (pos_wins != expected) {
            ++result.counterexample_count;
            record(result.counterexamples, {index, expected, has_pos, has_neg, dpos, dneg}, limit);
        }
    });
    keep_smallest(result.counterexamples, limit);
    keep_smallest(result.ties, limit);
    return result;
}

std::string bits_of(std::uint64_t index, std::size_t arity) {
    std::string out(arity, '0');
    for (std::size_t j = 0; j < arity; ++j) {
        if ((index >> (arity - 1 - j)) & 1u) out[j] = '1';
    }
    return out;
}

template <class Int>
std::vector<InputFinding> finalize(std::vector<RawFinding<Int>>& raw, std::size_t limit, std::size_t arity) {
    keep_smallest(raw, limit);
    std::vector<InputFinding> out;
    out.reserve(raw.size());
    for (auto& f : raw) {
        InputFinding finding;
        finding.input = f.input;
        finding.bits = bits_of(f.input, arity);
        finding.expected = f.expected;
        if (f.has_pos) finding.dpos = to_big(f.dpos);
        if (f.has_neg) finding.dneg = to_big(f.dneg);
        out.push_back(std::move(finding));
    }
    return out;
}

template <class Int>
void run_engine(const ScaledAnchorTable& scaled, const TruthTable& table, const VerifyOptions& options,
                VerificationReport& report) {
    const Engine<Int> engine(scaled);
    const std::size_t arity = scaled.arity;
    const unsigned workers = std::max(1u, options.workers);
    const std::size_t prefix_bits = std::min<std::size_t>(arity, std::bit_width(workers - 1u));
    const std::uint64_t chunks = std::uint64_t{1} << prefix_bits;

    std::vector<ChunkResult<Int>> results(chunks);
    auto work = [&](unsigned worker) {
        for (std::uint64_t c = worker; c < chunks; c += workers) {
            results[c] = check_chunk(engine, table, c, prefix_bits, options.max_findings);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::uint64_t>(workers, chunks); ++t) pool.emplace_back(work, t);
    }

    std::vector<RawFinding<Int>> counterexamples;
    std::vector<RawFinding<Int>> ties;
    for (auto& r : results) {
        report.counterexample_count += r.counterexample_count;
        report.tie_count += r.tie_count;
        std::move(r.counterexamples.begin(), r.counterexamples.end(), std::back_inserter(counterexamples));
        std::move(r.ties.begin(), r.ties.end(), std::back_inserter(ties));
    }
    report.counterexamples = finalize(counterexamples, options.max_findings, arity);
    report.ties = finalize(ties, options.max_findings, arity);
}

bool fits_narrow(const ScaledAnchorTable& table) {
    BigInt max_entry = 0;
    for (const auto& row : table.entries) {
        for (const auto& v : row) max_entry = std::max(max_entry, BigInt(abs(v)));
    }
    const BigInt span = table.denominator + max_entry;
    const BigInt bound = BigInt(table.arity) * span * span + span * span;
    return bit_length(bound) <= kNarrowBits;
}

}  // namespace

ScaledAnchorTable ScaledAnchorTable::build(const AnchorSet& anchors) {
    check_anchor_set(anchors);
    auto scaled = common_denominator_scale(anchors.anchors);
    ScaledAnchorTable table;
    table.arity = anchors.arity;
    table.denominator = std::move(scaled.denominator);
    table.entries = std::move(scaled.entries);
    table.labels = anchors.labels;
    const BigInt d2 = table.denominator * table.denominator;
    for (const auto& row : table.entries) {
        BigInt norm = 0;
        auto& deltas = table.deltas.emplace_back();
        deltas.reserve(row.size());
        for (const auto& v : row) {
            norm += v * v;
            deltas.push_back(d2 - 2 * table.denominator * v);
        }
        table.norms.push_back(std::move(norm));
    }
    return table;
}

BigInt ScaledAnchorTable::distance(std::size_t anchor, std::span<const std::uint8_t> x) const {
    BigInt sum = 0;
    for (std::size_t j = 0; j < arity; ++j) {
        BigInt diff = (x[j] ? denominator : BigInt(0)) - entries[anchor][j];
        sum += diff * diff;
    }
    return sum;
}

NearestResult nearest(const AnchorSet& anchors, std::span<const std::uint8_t> x) {
    if (x.size() != anchors.arity) {
        throw Error(ErrorKind::invalid_input, "input has " + std::to_string(x.size()) + " bits, anchors have arity " +
                                                  std::to_string(anchors.arity));
    }
    const auto table = ScaledAnchorTable::build(anchors);
    NearestResult result;
    result.denominator = table.denominator;
    for (std::size_t i = 0; i < table.size(); ++i) result.distances.push_back(table.distance(i, x));
    const auto best = *std::min_element(result.distances.begin(), result.distances.end());
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (result.distances[i] == best) result.argmin.push_back(i);
    }
    return result;
}

bool same_outcome(const VerificationReport& a, const VerificationReport& b) {
    return a.pass == b.pass && a.total_inputs == b.total_inputs && a.counterexamples == b.counterexamples &&
           a.ties == b.ties && a.counterexample_count == b.counterexample_count && a.tie_count == b.tie_count &&
           a.resolution == b.resolution && a.size == b.size && a.denominator == b.denominator &&
           a.wide_arithmetic == b.wide_arithmetic;
}

VerificationReport verify_table(const AnchorSet& anchors, const TruthTable& table, const VerifyOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    if (anchors.arity != table.arity()) {
        throw Error(ErrorKind::invalid_input, "anchor arity " + std::to_string(anchors.arity) +
                                                  " does not match function arity " + std::to_string(table.arity()));
    }
    if (anchors.arity > options.max_arity) {
        throw Error(ErrorKind::resource_limit, "arity " + std::to_string(anchors.arity) + " exceeds the cap of " +
                                                   std::to_string(options.max_arity));
    }
    const auto scaled = ScaledAnchorTable::build(anchors);

    VerificationReport report;
    report.total_inputs = table.size();
    report.size = anchors.size();
    report.resolution = anchors.resolution();
    report.denominator = scaled.denominator;
    report.wide_arithmetic = !fits_narrow(scaled);
    if (report.wide_arithmetic) {
        run_engine<BigInt>(scaled, table, options, report);
    } else {
        run_engine<Int128>(scaled, table, options, report);
    }
    report.pass = report.counterexample_count == 0 && report.tie_count == 0;
    report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

VerificationReport verify_parallel(const AnchorSet& anchors, const FunctionSpec& spec, const VerifyOptions& options) {
    if (anchors.arity != spec.arity()) {
        throw Error(ErrorKind::invalid_input, "anchor arity " + std::to_string(anchors.arity) +
                                                  " does not match function arity " + std::to_string(spec.arity()));
    }
    const auto started = std::chrono::steady_clock::now();
    auto table = truth_table(spec, std::max(1u, options.workers), options.max_arity);
    auto report = verify_table(anchors, table, options);
    report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

VerificationReport verify(const AnchorSet& anchors, const FunctionSpec& spec, const VerifyOptions& options) {
    VerifyOptions single = options;
    single.workers = 1;
    return verify_parallel(anchors, spec, single);
}

std::vector<std::vector<BigInt>> incremental_distances_at(const ScaledAnchorTable& table,
                                                          std::span<const std::uint64_t> inputs) {
    std::unordered_multimap<std::uint64_t, std::size_t> wanted;
    for (std::size_t k = 0; k < inputs.size(); ++k) wanted.emplace(inputs[k], k);
    std::vector<std::vector<BigInt>> out(inputs.size());
    auto capture = [&](auto& engine) {
        engine.walk(0, 0, [&](std::uint64_t index, const auto& dist) {
            auto [first, last] = wanted.equal_range(index);
            for (auto it = first; it != last; ++it) {
                auto& row = out[it->second];
                for (const auto& d : dist) row.push_back(to_big(d));
            }
        });
    };
    if (fits_narrow(table)) {
        Engine<Int128> engine(table);
        capture(engine);
    } else {
        Engine<BigInt> engine(table);
        capture(engine);
    }
    return out;
}

}  // namespace nnrepr
