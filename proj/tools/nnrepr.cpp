// nnrepr: build, check and analyze nearest-neighbor representations.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nnrepr/constructions.hpp"
#include "nnrepr/error.hpp"
#include "nnrepr/io.hpp"
#include "nnrepr/separability.hpp"
#include "nnrepr/verifier.hpp"

namespace {

using nnrepr::AnchorSet;
using nnrepr::Error;
using nnrepr::ErrorKind;
using nnrepr::FunctionKind;
using nnrepr::FunctionSpec;
using nnrepr::io::Json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

[[noreturn]] void usage(const std::string& message) { throw Error(ErrorKind::invalid_flag, message); }

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* flag) {
    std::vector<std::int64_t> out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::int64_t v = 0;
        const char* first = token.data() + (token[0] == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            usage(std::string(flag) + ": '" + token + "' is not an integer");
        }
        out.push_back(v);
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t' || c == '[' || c == ']' || c == '(' || c == ')') {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    if (out.empty()) usage(std::string(flag) + " is empty");
    return out;
}

// ---- function flags shared by construct, verify and lowerbound ----

struct FunctionFlags {
    std::string fn;
    std::string w;
    std::optional<std::int64_t> b;
    std::optional<std::size_t> n;
    std::string bits;

    void add_to(CLI::App& cmd, bool fn_required) {
        auto* opt = cmd.add_option("--fn", fn, "lt | elt | eq | comp | omb | table");
        if (fn_required) opt->required();
        cmd.add_option("--w", w, "integer weights, comma separated (lt, elt)");
        cmd.add_option("--b", b, "integer threshold (lt, elt)");
        cmd.add_option("--n", n, "width (omb), half-width (eq, comp)");
        cmd.add_option("--bits", bits, "truth table, one 0/1 per input, X_1 most significant (table)");
    }

    bool given() const { return !fn.empty() || !w.empty() || b || n || !bits.empty(); }
};

// n may be left out for eq when a matrix file fixes it.
FunctionSpec spec_from_flags(const FunctionFlags& f, std::optional<std::size_t> eq_width = std::nullopt) {
    if (f.fn.empty()) usage("--fn is required");
    const FunctionKind kind = [&] {
        try {
            return nnrepr::parse_function_kind(f.fn);
        } catch (const Error& e) {
            usage(e.what());
        }
    }();
    const bool threshold = kind == FunctionKind::lt || kind == FunctionKind::elt;
    if (threshold != !f.w.empty()) usage(threshold ? "--fn " + f.fn + " needs --w" : "--w only applies to lt and elt");
    if (threshold != f.b.has_value()) usage(threshold ? "--fn " + f.fn + " needs --b" : "--b only applies to lt and elt");
    if ((kind == FunctionKind::table) != !f.bits.empty()) {
        usage(kind == FunctionKind::table ? "--fn table needs --bits" : "--bits only applies to table");
    }
    switch (kind) {
        case FunctionKind::lt:
        case FunctionKind::elt: {
            auto w = parse_int_list(f.w, "--w");
            if (f.n && *f.n != w.size()) usage("--n does not match the number of weights");
            return kind == FunctionKind::lt ? FunctionSpec::linear_threshold(std::move(w), *f.b)
                                            : FunctionSpec::exact_threshold(std::move(w), *f.b);
        }
        case FunctionKind::eq: {
            if (f.n && eq_width && *f.n != *eq_width) usage("--n does not match the EQ matrix width");
            auto n = f.n ? f.n : eq_width;
            if (!n) usage("--fn eq needs --n");
            return FunctionSpec::equality(*n);
        }
        case FunctionKind::comp:
            if (!f.n) usage("--fn comp needs --n");
            return FunctionSpec::comparison(*f.n);
        case FunctionKind::omb:
            if (!f.n) usage("--fn omb needs --n");
            return FunctionSpec::odd_max_bit(*f.n);
        case FunctionKind::table: {
            auto spec = FunctionSpec::table(f.bits);
            if (f.n && *f.n != spec.n) usage("--n does not match the length of --bits");
            return spec;
        }
    }
    usage("unknown function");
}

// ---- construction dispatch ----

struct ConstructOptions {
    std::string eq_matrix = "identity";
    bool drop_zero_anchor = false;
    bool allow_unchecked = false;
    unsigned workers = 1;
    std::filesystem::path base_dir;  // for relative matrix paths
};

bool is_family_name(const std::string& s) { return s == "identity" || s == "pow2" || s == "pow2_row"; }

nnrepr::EqMatrix resolve_eq_matrix(const std::string& source, std::optional<std::size_t> n, const ConstructOptions& opt) {
    if (is_family_name(source) && !std::filesystem::exists(opt.base_dir / source)) {
        if (!n) usage("a built-in EQ matrix needs --n");
        return nnrepr::builtin_matrix(nnrepr::parse_eq_family(source), *n);
    }
    auto path = std::filesystem::path(source);
    if (path.is_relative()) path = opt.base_dir / path;
    auto matrix = nnrepr::load_matrix(nnrepr::io::read_file(path.string()));
    if (!opt.allow_unchecked) {
        nnrepr::EqValidationOptions v;
        v.workers = opt.workers;
        matrix = nnrepr::validated(std::move(matrix), v);
    }
    return matrix;
}

// Integer (w, b) with the same outputs as a rational separating witness.
std::pair<std::vector<std::int64_t>, std::int64_t> integer_threshold(const nnrepr::ThresholdWitness& witness) {
    nnrepr::BigInt scale = witness.bias.den();
    for (const auto& v : witness.weights) scale = boost::multiprecision::lcm(scale, v.den());
    auto to_int = [&](const nnrepr::Rational& v) {
        nnrepr::BigInt x = v.num() * (scale / v.den());
        if (boost::multiprecision::abs(x) >= (nnrepr::BigInt(1) << 62)) {
            throw Error(ErrorKind::resource_limit, "separating weights do not fit 62-bit integers");
        }
        return x.convert_to<std::int64_t>();
    };
    std::vector<std::int64_t> w;
    for (const auto& v : witness.weights) w.push_back(to_int(v));
    return {w, to_int(witness.bias)};
}

AnchorSet build_anchors(const FunctionSpec& spec, const ConstructOptions& opt) {
    if (opt.drop_zero_anchor && spec.kind != FunctionKind::omb) usage("--drop-zero-anchor only applies to omb");
    switch (spec.kind) {
        case FunctionKind::lt: return nnrepr::construct_lt(spec.weights, spec.bias);
        case FunctionKind::elt: return nnrepr::construct_elt(spec.weights, spec.bias);
        case FunctionKind::eq: {
            auto matrix = resolve_eq_matrix(opt.eq_matrix, spec.n, opt);
            if (matrix.column_count() != spec.n) usage("EQ matrix width does not match --n");
            return nnrepr::construct_eq(matrix, opt.allow_unchecked);
        }
        case FunctionKind::comp: return nnrepr::construct_comp(spec.n);
        case FunctionKind::omb: return nnrepr::construct_omb(spec.n, opt.drop_zero_anchor);
        case FunctionKind::table: {
            auto table = nnrepr::truth_table(spec);
            if (table.is_constant()) {
                auto set = nnrepr::construct_constant(spec.n, table.get(0));
                set.meta.function = spec;
                return set;
            }
            auto cert = nnrepr::is_linear_threshold(table);
            if (!cert.separable) {
                throw Error(ErrorKind::invalid_input,
                            "the table is not a linear threshold function; no built-in construction applies");
            }
            auto [w, b] = integer_threshold(*cert.witness);
            auto set = nnrepr::construct_lt(w, b);
            set.meta.function = spec;
            return set;
        }
    }
    usage("unknown function");
}

std::string summary(const AnchorSet& set) {
    std::ostringstream out;
    out << "construction: " << (set.meta.construction.empty() ? "-" : set.meta.construction) << '\n'
        << "arity: " << set.arity << '\n'
        << "size: " << set.size() << " anchors (" << set.count(nnrepr::Label::pos) << " POS, "
        << set.count(nnrepr::Label::neg) << " NEG)\n"
        << "resolution: " << set.resolution().bits << " bits\n";
    return out.str();
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

AnchorSet load_anchors(const std::string& path) {
    return nnrepr::io::anchor_set_from_json(nnrepr::io::parse_json(nnrepr::io::read_file(path)));
}

FunctionSpec verification_target(const FunctionFlags& flags, const AnchorSet& set) {
    if (flags.given()) return spec_from_flags(flags);
    if (!set.meta.function) usage("no function given and the anchor file records none; pass --fn");
    return *set.meta.function;
}

// ---- manifest runs ----

struct Manifest {
    std::string command;
    std::optional<FunctionSpec> spec;
    Json params = Json::object();
    std::uint64_t seed = 0;
    Json caps = Json::object();
    Json inputs = Json::object();
    Json outputs = Json::object();
    std::filesystem::path base_dir;

    std::filesystem::path path_of(const Json& section, const char* key) const {
        if (!section.contains(key)) return {};
        std::filesystem::path p = section[key].get<std::string>();
        return p.is_relative() ? base_dir / p : p;
    }
};

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const Json::exception&) {
        throw nnrepr::FormatError(std::string("manifest field \"") + key + "\" has the wrong type", 1, 1);
    }
}

Manifest load_manifest(const std::string& path) {
    auto doc = nnrepr::io::parse_json(nnrepr::io::read_file(path));
    auto bad = [](const std::string& what) { throw nnrepr::FormatError("manifest: " + what, 1, 1); };
    if (!doc.is_object()) bad("top level must be an object");
    if (doc.contains("schema_version") && doc["schema_version"] != nnrepr::io::kSchemaVersion) bad("unsupported schema_version");
    Manifest m;
    m.base_dir = std::filesystem::absolute(path).parent_path();
    if (!doc.contains("command") || !doc["command"].is_string()) bad("needs a \"command\" string");
    m.command = doc["command"].get<std::string>();
    if (doc.contains("spec")) m.spec = nnrepr::io::function_spec_from_json(doc["spec"]);
    for (auto [key, slot] : {std::pair{"params", &m.params}, {"caps", &m.caps}, {"inputs", &m.inputs}, {"outputs", &m.outputs}}) {
        if (!doc.contains(key)) continue;
        if (!doc[key].is_object()) bad(std::string("\"") + key + "\" must be an object");
        *slot = doc[key];
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) bad("\"seed\" must be a non-negative integer");
        m.seed = doc["seed"].get<std::uint64_t>();
    }
    return m;
}

void emit(const Manifest& m, const char* key, const std::string& text) {
    auto path = m.path_of(m.outputs, key);
    if (path.empty()) {
        std::cout << text;
    } else {
        nnrepr::io::write_file(path.string(), text);
    }
}

// Random LT or ELT instances from the seed, each constructed and verified.
int run_suite(const Manifest& m, const nnrepr::VerifyOptions& vopt) {
    const auto family = get_or<std::string>(m.params, "family", "lt");
    if (family != "lt" && family != "elt") usage("suite family must be lt or elt");
    const auto count = get_or<std::size_t>(m.params, "count", 10);
    const auto n = get_or<std::size_t>(m.params, "n", 8);
    const auto max_weight = get_or<std::int64_t>(m.params, "max_weight", 16);
    if (n == 0 || n > vopt.max_arity) throw Error(ErrorKind::resource_limit, "suite width outside the arity cap");

    std::mt19937_64 rng(m.seed);
    std::uniform_int_distribution<std::int64_t> weight(-max_weight, max_weight);
    Json instances = Json::array();
    bool all_pass = true;
    std::size_t attempts = 0;
    while (instances.size() < count) {
        if (++attempts > 1000 * (count + 1)) throw Error(ErrorKind::resource_limit, "could not draw enough suite instances");
        std::vector<std::int64_t> w(n);
        std::int64_t lo = 0, hi = 0;
        for (auto& v : w) {
            v = weight(rng);
            (v < 0 ? lo : hi) += v;
        }
        const std::int64_t b = std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
        if (std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; })) continue;
        if (family == "elt" && !nnrepr::find_hyperplane_binary_point(w, b)) continue;
        auto spec = family == "lt" ? FunctionSpec::linear_threshold(w, b) : FunctionSpec::exact_threshold(w, b);
        auto set = family == "lt" ? nnrepr::construct_lt(w, b) : nnrepr::construct_elt(w, b);
        auto report = nnrepr::verify_parallel(set, spec, vopt);
        all_pass &= report.pass;
        Json entry;
        entry["spec"] = nnrepr::io::to_json(spec);
        entry["pass"] = report.pass;
        entry["size"] = report.size;
        entry["resolution_bits"] = report.resolution.bits;
        entry["counterexample_count"] = report.counterexample_count;
        entry["tie_count"] = report.tie_count;
        instances.push_back(std::move(entry));
    }
    Json doc;
    doc["schema_version"] = nnrepr::io::kSchemaVersion;
    doc["command"] = "suite";
    doc["seed"] = m.seed;
    doc["pass"] = all_pass;
    doc["instances"] = std::move(instances);
    emit(m, "report", dump(doc));
    return all_pass ? kExitPass : kExitFail;
}

int run_manifest(const std::string& path) {
    const Manifest m = load_manifest(path);
    nnrepr::VerifyOptions vopt;
    vopt.workers = get_or<unsigned>(m.params, "workers", 1);
    vopt.max_findings = get_or<std::size_t>(m.params, "max_counterexamples", vopt.max_findings);
    vopt.max_arity = get_or<std::size_t>(m.caps, "max_arity", vopt.max_arity);
    const bool with_elapsed = get_or<bool>(m.params, "elapsed", false);

    ConstructOptions copt;
    copt.eq_matrix = get_or<std::string>(m.params, "eq_matrix", "identity");
    copt.drop_zero_anchor = get_or<bool>(m.params, "drop_zero_anchor", false);
    copt.allow_unchecked = get_or<bool>(m.params, "allow_unchecked", false);
    copt.workers = vopt.workers;
    copt.base_dir = m.base_dir;

    auto need_spec = [&]() -> const FunctionSpec& {
        if (!m.spec) usage("manifest command '" + m.command + "' needs \"spec\"");
        return *m.spec;
    };

    if (m.command == "construct") {
        auto set = build_anchors(need_spec(), copt);
        emit(m, "anchors", dump(nnrepr::io::to_json(set)));
        if (!m.path_of(m.outputs, "csv").empty()) nnrepr::io::write_file(m.path_of(m.outputs, "csv").string(), nnrepr::io::to_csv(set));
        return kExitPass;
    }
    if (m.command == "verify" || m.command == "construct-verify") {
        AnchorSet set;
        if (m.command == "verify") {
            auto anchors = m.path_of(m.inputs, "anchors");
            if (anchors.empty()) usage("manifest verify needs inputs.anchors");
            set = load_anchors(anchors.string());
        } else {
            set = build_anchors(need_spec(), copt);
            if (!m.path_of(m.outputs, "anchors").empty()) {
                nnrepr::io::write_file(m.path_of(m.outputs, "anchors").string(), dump(nnrepr::io::to_json(set)));
            }
        }
        FunctionSpec spec = m.spec ? *m.spec : set.meta.function.value_or(FunctionSpec{});
        if (!m.spec && !set.meta.function) usage("manifest verify needs \"spec\" or an anchor file that records its function");
        auto report = nnrepr::verify_parallel(set, spec, vopt);
        emit(m, "report", dump(nnrepr::io::to_json(report, with_elapsed)));
        return report.pass ? kExitPass : kExitFail;
    }
    if (m.command == "eqmatrix") {
        nnrepr::EqValidationOptions eopt;
        eopt.workers = vopt.workers;
        eopt.max_columns = get_or<std::size_t>(m.caps, "max_columns", eopt.max_columns);
        std::optional<std::size_t> n;
        if (m.params.contains("n")) n = get_or<std::size_t>(m.params, "n", 0);
        ConstructOptions raw = copt;
        raw.allow_unchecked = true;
        auto loaded = resolve_eq_matrix(copt.eq_matrix, n, raw);
        auto result = nnrepr::validate_eq_matrix(loaded.rows, eopt);
        auto doc = nnrepr::io::to_json(result);
        if (!with_elapsed) doc.erase("elapsed_ms");
        emit(m, "report", dump(doc));
        return result.verdict == nnrepr::EqStatus::proven ? kExitPass : kExitFail;
    }
    if (m.command == "lowerbound") {
        auto table = nnrepr::truth_table(need_spec(), vopt.workers, vopt.max_arity);
        emit(m, "report", dump(nnrepr::io::to_json(nnrepr::is_linear_threshold(table))));
        return kExitPass;
    }
    if (m.command == "suite") return run_suite(m, vopt);
    usage("unknown manifest command '" + m.command + "'");
}

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::resource_limit ? kExitCap : kExitUsage; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest-neighbor representations of threshold functions"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // construct
    auto* construct = app.add_subcommand("construct", "Build an anchor set for a function");
    FunctionFlags cflags;
    cflags.add_to(*construct, true);
    ConstructOptions copt;
    std::string out_path, csv_path;
    construct->add_option("--eq-matrix", copt.eq_matrix, "FILE | identity | pow2 (eq only)")->capture_default_str();
    construct->add_flag("--drop-zero-anchor", copt.drop_zero_anchor, "omit the origin anchor (omb, even n)");
    construct->add_flag("--allow-unchecked", copt.allow_unchecked, "use a matrix file without validating it");
    construct->add_option("--out", out_path, "write the anchor JSON here instead of stdout");
    construct->add_option("--csv", csv_path, "also write the anchors as CSV");
    construct->add_option("--workers", copt.workers, "threads for EQ matrix validation")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "Check an anchor set against a function over all inputs");
    std::string anchors_path, report_path;
    FunctionFlags vflags;
    vflags.add_to(*verify, false);
    nnrepr::VerifyOptions vopt;
    vopt.workers = default_workers();
    bool no_elapsed = false;
    verify->add_option("--anchors", anchors_path, "anchor JSON file")->required();
    verify->add_option("--workers", vopt.workers, "threads")->capture_default_str();
    verify->add_option("--max-counterexamples", vopt.max_findings, "entries kept per finding list")->capture_default_str();
    verify->add_option("--report", report_path, "write the JSON report here instead of stdout");
    verify->add_flag("--no-elapsed", no_elapsed, "leave timing out of the report");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Size, resolution and norms of an anchor set");
    std::string analyze_path;
    bool analyze_json = false;
    analyze->add_option("--anchors", analyze_path, "anchor JSON file")->required();
    analyze->add_flag("--json", analyze_json, "print JSON");

    // eqmatrix
    auto* eqmatrix = app.add_subcommand("eqmatrix", "Validate or show an EQ matrix");
    std::string eq_action, eq_source;
    std::optional<std::size_t> eq_n;
    nnrepr::EqValidationOptions eopt;
    eopt.workers = default_workers();
    eqmatrix->add_option("action", eq_action, "validate | show")->required()->check(CLI::IsMember({"validate", "show"}));
    eqmatrix->add_option("source", eq_source, "FILE | identity | pow2")->required();
    eqmatrix->add_option("--n", eq_n, "width of a built-in matrix");
    eqmatrix->add_option("--workers", eopt.workers, "threads")->capture_default_str();
    eqmatrix->add_option("--max-columns", eopt.max_columns, "refuse wider matrices")->capture_default_str();

    // lowerbound
    auto* lowerbound = app.add_subcommand("lowerbound", "Decide whether a table has a 2-anchor representation");
    FunctionFlags lflags;
    lflags.add_to(*lowerbound, false);
    bool lower_json = false;
    lowerbound->add_flag("--json", lower_json, "print JSON");

    // run
    auto* run = app.add_subcommand("run", "Execute a JSON run manifest");
    std::string manifest_path;
    run->add_option("manifest", manifest_path, "manifest file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*construct) {
            auto spec = [&] {
                std::optional<std::size_t> width;
                if (nnrepr::parse_function_kind(cflags.fn) == FunctionKind::eq && !is_family_name(copt.eq_matrix)) {
                    width = nnrepr::load_matrix(nnrepr::io::read_file(copt.eq_matrix)).column_count();
                }
                return spec_from_flags(cflags, width);
            }();
            if (spec.kind != FunctionKind::eq && construct->count("--eq-matrix")) usage("--eq-matrix only applies to eq");
            auto set = build_anchors(spec, copt);
            auto doc = dump(nnrepr::io::to_json(set));
            if (!csv_path.empty()) nnrepr::io::write_file(csv_path, nnrepr::io::to_csv(set));
            if (out_path.empty()) {
                std::cout << doc;
                std::cerr << summary(set);
            } else {
                nnrepr::io::write_file(out_path, doc);
                std::cout << summary(set);
            }
            return kExitPass;
        }
        if (*verify) {
            auto set = load_anchors(anchors_path);
            auto spec = verification_target(vflags, set);
            auto report = nnrepr::verify_parallel(set, spec, vopt);
            auto doc = dump(nnrepr::io::to_json(report, !no_elapsed));
            if (report_path.empty()) {
                std::cout << doc;
            } else {
                nnrepr::io::write_file(report_path, doc);
                std::cout << (report.pass ? "pass" : "FAIL") << ": " << report.total_inputs << " inputs, "
                          << report.counterexample_count << " counterexamples, " << report.tie_count << " ties\n";
            }
            return report.pass ? kExitPass : kExitFail;
        }
        if (*analyze) {
            auto set = load_anchors(analyze_path);
            Json doc;
            doc["schema_version"] = nnrepr::io::kSchemaVersion;
            doc["arity"] = set.arity;
            doc["size"] = set.size();
            doc["resolution_bits"] = set.resolution().bits;
            doc["resolution_bits_literal"] = set.resolution(nnrepr::ResolutionMode::literal).bits;
            doc["labels"] = {{"POS", set.count(nnrepr::Label::pos)}, {"NEG", set.count(nnrepr::Label::neg)}};
            Json norms = Json::array();
            for (const auto& row : set.anchors) {
                nnrepr::Rational sum;
                for (const auto& v : row) sum += v * v;
                norms.push_back(sum.to_string());
            }
            doc["squared_norms"] = norms;
            if (analyze_json) {
                std::cout << dump(doc);
            } else {
                std::cout << "arity: " << set.arity << '\n'
                          << "size: " << set.size() << '\n'
                          << "resolution: " << set.resolution().bits << " bits\n"
                          << "resolution (literal reading): " << doc["resolution_bits_literal"].get<std::uint64_t>()
                          << " bits\n"
                          << "labels: " << set.count(nnrepr::Label::pos) << " POS, " << set.count(nnrepr::Label::neg)
                          << " NEG\n"
                          << "squared norms:\n";
                for (std::size_t i = 0; i < set.size(); ++i) {
                    std::cout << "  a" << (i + 1) << ' ' << nnrepr::to_string(set.labels[i]) << ' '
                              << norms[i].get<std::string>() << '\n';
                }
            }
            return kExitPass;
        }
        if (*eqmatrix) {
            ConstructOptions raw;
            raw.allow_unchecked = true;
            raw.base_dir = std::filesystem::current_path();
            auto matrix = resolve_eq_matrix(eq_source, eq_n, raw);
            if (eq_action == "show") {
                std::cout << dump(nnrepr::io::to_json(matrix));
                return kExitPass;
            }
            auto result = nnrepr::validate_eq_matrix(matrix.rows, eopt);
            std::cout << dump(nnrepr::io::to_json(result));
            return result.verdict == nnrepr::EqStatus::proven ? kExitPass : kExitFail;
        }
        if (*lowerbound) {
            if (!lflags.given()) usage("lowerbound needs --bits or function flags");
            if (lflags.fn.empty()) lflags.fn = "table";
            auto spec = spec_from_flags(lflags);
            if (spec.arity() > nnrepr::kMaxSeparabilityWidth) {
                throw Error(ErrorKind::resource_limit, "lowerbound supports at most " +
                                                           std::to_string(nnrepr::kMaxSeparabilityWidth) + " inputs");
            }
            auto table = nnrepr::truth_table(spec);
            auto cert = nnrepr::is_linear_threshold(table);
            if (lower_json) {
                std::cout << dump(nnrepr::io::to_json(cert));
            } else if (cert.separable) {
                std::cout << "separable" << (table.is_constant() ? " (constant)" : "") << '\n';
                std::cout << "witness: w = (";
                for (std::size_t j = 0; j < cert.witness->weights.size(); ++j) {
                    std::cout << (j ? "," : "") << cert.witness->weights[j].to_string();
                }
                std::cout << "), b = " << cert.witness->bias.to_string() << '\n';
                std::cout << (table.is_constant() ? "NN(f) = 1\n" : "NN(f) = 2\n");
            } else {
                std::cout << "not separable ⇒ NN(f) ≥ 3\n";
            }
            return kExitPass;
        }
        if (*run) return run_manifest(manifest_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
