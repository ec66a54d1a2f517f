#include "nnrepr/io.hpp"

#include <fstream>
#include <sstream>

#include "nnrepr/error.hpp"

namespace nnrepr::io {

namespace {

[[noreturn]] void bad(const std::string& what, std::size_t line = 1, std::size_t column = 1) {
    throw FormatError(what, line, column);
}

Json rational_row(const RationalVector& row) {
    Json out = Json::array();
    for (const auto& q : row) out.push_back(q.to_string());
    return out;
}

RationalVector parse_rational_row(const Json& row, const std::string& where) {
    if (!row.is_array()) bad(where + " is not an array");
    RationalVector out;
    out.reserve(row.size());
    std::size_t column = 0;
    for (const auto& v : row) {
        ++column;
        if (v.is_number_integer()) {
            out.emplace_back(static_cast<long long>(v.get<std::int64_t>()));
        } else if (v.is_string()) {
            try {
                out.push_back(Rational::parse(v.get<std::string>()));
            } catch (const FormatError&) {
                bad(where + " entry " + std::to_string(column) + " is not a rational: '" + v.get<std::string>() + "'", 1,
                    column);
            }
        } else {
            bad(where + " entry " + std::to_string(column) + " must be a \"num/den\" string", 1, column);
        }
    }
    return out;
}

std::vector<std::int64_t> parse_int_array(const Json& doc, const std::string& where) {
    if (!doc.is_array()) bad(where + " is not an array");
    std::vector<std::int64_t> out;
    for (const auto& v : doc) {
        if (!v.is_number_integer()) bad(where + " must contain integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

std::optional<std::string> distance_string(const std::optional<BigInt>& d) {
    if (!d) return std::nullopt;
    return d->str();
}

Json finding_json(const InputFinding& f) {
    Json out;
    out["x"] = f.bits;
    out["expected"] = f.expected ? 1 : 0;
    auto dpos = distance_string(f.dpos);
    auto dneg = distance_string(f.dneg);
    out["dpos"] = dpos ? Json(*dpos) : Json(nullptr);
    out["dneg"] = dneg ? Json(*dneg) : Json(nullptr);
    return out;
}

}  // namespace

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        bad(std::string("invalid JSON: ") + e.what(), line, column);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::invalid_input, "cannot write '" + path + "'");
    out << contents;
}

Json to_json(const FunctionSpec& spec) {
    Json out;
    out["kind"] = to_string(spec.kind);
    out["n"] = spec.n;
    if (spec.kind == FunctionKind::lt || spec.kind == FunctionKind::elt) {
        out["w"] = spec.weights;
        out["b"] = spec.bias;
    }
    if (spec.kind == FunctionKind::table) out["bits"] = spec.bits;
    return out;
}

FunctionSpec function_spec_from_json(const Json& doc) {
    if (!doc.is_object()) bad("function spec must be an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) bad("function spec needs a \"kind\" string");
    FunctionKind kind;
    try {
        kind = parse_function_kind(doc["kind"].get<std::string>());
    } catch (const Error& e) {
        bad(e.what());
    }
    auto need_n = [&]() -> std::size_t {
        if (!doc.contains("n") || !doc["n"].is_number_unsigned()) bad("function spec needs a non-negative integer \"n\"");
        return doc["n"].get<std::size_t>();
    };
    switch (kind) {
        case FunctionKind::lt:
        case FunctionKind::elt: {
            if (!doc.contains("w")) bad("threshold function spec needs \"w\"");
            auto w = parse_int_array(doc["w"], "\"w\"");
            if (!doc.contains("b") || !doc["b"].is_number_integer()) bad("threshold function spec needs an integer \"b\"");
            if (doc.contains("n") && need_n() != w.size()) bad("\"n\" does not match the length of \"w\"");
            auto b = doc["b"].get<std::int64_t>();
            return kind == FunctionKind::lt ? FunctionSpec::linear_threshold(std::move(w), b)
                                            : FunctionSpec::exact_threshold(std::move(w), b);
        }
        case FunctionKind::eq: return FunctionSpec::equality(need_n());
        case FunctionKind::comp: return FunctionSpec::comparison(need_n());
        case FunctionKind::omb: return FunctionSpec::odd_max_bit(need_n());
        case FunctionKind::table: {
            if (!doc.contains("bits") || !doc["bits"].is_string()) bad("table function spec needs a \"bits\" string");
            auto spec = FunctionSpec::table(doc["bits"].get<std::string>());
            if (doc.contains("n") && need_n() != spec.n) bad("\"n\" does not match the length of \"bits\"");
            return spec;
        }
    }
    bad("unreachable");
}

Json to_json(const AnchorSet& anchors) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["arity"] = anchors.arity;
    Json rows = Json::array();
    for (const auto& row : anchors.anchors) rows.push_back(rational_row(row));
    out["anchors"] = std::move(rows);
    Json labels = Json::array();
    for (auto label : anchors.labels) labels.push_back(to_string(label));
    out["labels"] = std::move(labels);

    Json meta = Json::object();
    if (!anchors.meta.construction.empty()) meta["construction"] = anchors.meta.construction;
    if (anchors.meta.function) meta["function"] = to_json(*anchors.meta.function);
    if (anchors.meta.params) {
        const auto& p = *anchors.meta.params;
        Json params = Json::object();
        if (!p.scales.empty()) params["c"] = rational_row(p.scales);
        if (!p.base_point.empty()) params["xstar"] = rational_row(p.base_point);
        if (!p.directions.empty()) params["W"] = p.directions;
        meta["params"] = std::move(params);
    }
    out["meta"] = std::move(meta);
    return out;
}

AnchorSet anchor_set_from_json(const Json& doc) {
    if (!doc.is_object()) bad("anchor file must be a JSON object");
    if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion) {
        bad("unsupported schema_version " + doc["schema_version"].dump());
    }
    if (!doc.contains("anchors") || !doc["anchors"].is_array()) bad("anchor file needs an \"anchors\" array");
    if (!doc.contains("labels") || !doc["labels"].is_array()) bad("anchor file needs a \"labels\" array");

    AnchorSet set;
    std::size_t r = 0;
    for (const auto& row : doc["anchors"]) {
        ++r;
        set.anchors.push_back(parse_rational_row(row, "anchor row " + std::to_string(r)));
    }
    if (set.anchors.empty()) bad("anchor file has no anchors");
    if (doc.contains("arity")) {
        if (!doc["arity"].is_number_unsigned()) bad("\"arity\" must be a non-negative integer");
        set.arity = doc["arity"].get<std::size_t>();
    } else {
        set.arity = set.anchors.front().size();
    }
    for (std::size_t i = 0; i < set.anchors.size(); ++i) {
        if (set.anchors[i].size() != set.arity) {
            bad("ragged anchor row " + std::to_string(i + 1) + ": " + std::to_string(set.anchors[i].size()) +
                    " entries, arity is " + std::to_string(set.arity),
                i + 1, std::min(set.anchors[i].size(), set.arity) + 1);
        }
    }
    std::size_t k = 0;
    for (const auto& label : doc["labels"]) {
        ++k;
        if (!label.is_string()) bad("label " + std::to_string(k) + " must be \"POS\" or \"NEG\"");
        try {
            set.labels.push_back(parse_label(label.get<std::string>()));
        } catch (const Error& e) {
            bad("label " + std::to_string(k) + ": " + e.what());
        }
    }
    if (set.labels.size() != set.anchors.size()) {
        bad(std::to_string(set.anchors.size()) + " anchors but " + std::to_string(set.labels.size()) + " labels");
    }
    if (doc.contains("meta") && doc["meta"].is_object()) {
        const auto& meta = doc["meta"];
        if (meta.contains("construction") && meta["construction"].is_string()) {
            set.meta.construction = meta["construction"].get<std::string>();
        }
        if (meta.contains("function")) set.meta.function = function_spec_from_json(meta["function"]);
        if (meta.contains("params") && meta["params"].is_object()) {
            const auto& p = meta["params"];
            ConstructionParams params;
            if (p.contains("c")) params.scales = parse_rational_row(p["c"], "meta.params.c");
            if (p.contains("xstar")) params.base_point = parse_rational_row(p["xstar"], "meta.params.xstar");
            if (p.contains("W")) {
                if (!p["W"].is_array()) bad("meta.params.W is not an array");
                for (const auto& row : p["W"]) params.directions.push_back(parse_int_array(row, "meta.params.W row"));
            }
            set.meta.params = std::move(params);
        }
    }
    try {
        check_anchor_set(set);
    } catch (const Error& e) {
        bad(e.what());
    }
    return set;
}

std::string to_csv(const AnchorSet& anchors) {
    std::ostringstream out;
    for (std::size_t j = 0; j < anchors.arity; ++j) out << 'x' << (j + 1) << ',';
    out << "label\n";
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (const auto& q : anchors.anchors[i]) out << q.to_string() << ',';
        out << to_string(anchors.labels[i]) << '\n';
    }
    return out.str();
}

Json to_json(const VerificationReport& report, bool include_elapsed) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["pass"] = report.pass;
    out["inputs"] = report.total_inputs;
    Json counterexamples = Json::array();
    for (const auto& f : report.counterexamples) counterexamples.push_back(finding_json(f));
    out["counterexamples"] = std::move(counterexamples);
    out["counterexample_count"] = report.counterexample_count;
    Json ties = Json::array();
    for (const auto& f : report.ties) ties.push_back(finding_json(f));
    out["ties"] = std::move(ties);
    out["tie_count"] = report.tie_count;
    out["resolution_bits"] = report.resolution.bits;
    out["size"] = report.size;
    out["distance_scale"] = (report.denominator * report.denominator).str();
    out["wide_arithmetic"] = report.wide_arithmetic;
    if (include_elapsed) out["elapsed_ms"] = report.elapsed_ms;
    return out;
}

std::string ternary_to_string(const TernaryVector& x) {
    std::string out = "(";
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(static_cast<int>(x[j]));
    }
    return out + ")";
}

Json to_json(const EqValidation& result) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["verdict"] = to_string(result.verdict);
    if (result.witness) {
        Json w = Json::array();
        for (auto v : *result.witness) w.push_back(static_cast<int>(v));
        out["witness"] = std::move(w);
        out["witness_text"] = ternary_to_string(*result.witness);
    } else {
        out["witness"] = nullptr;
    }
    out["assignments"] = result.assignments;
    out["elapsed_ms"] = result.elapsed_ms;
    return out;
}

Json to_json(const EqMatrix& matrix) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["rows"] = matrix.rows;
    out["status"] = to_string(matrix.status);
    Json norms = Json::array();
    for (const auto& v : row_norms(matrix.rows)) norms.push_back(v.str());
    out["row_norms"] = std::move(norms);
    return out;
}

Json to_json(const SeparabilityCertificate& certificate) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["separable"] = certificate.separable;
    if (certificate.witness) {
        out["witness"] = {{"w", rational_row(certificate.witness->weights)}, {"b", certificate.witness->bias.to_string()}};
    } else {
        out["witness"] = nullptr;
    }
    if (certificate.infeasibility) {
        Json support = Json::object();
        for (std::size_t k = 0; k < certificate.infeasibility->size(); ++k) {
            const auto& y = (*certificate.infeasibility)[k];
            if (!y.is_zero()) support[std::to_string(k)] = y.to_string();
        }
        out["infeasibility_multipliers"] = std::move(support);
    }
    return out;
}

Json to_json(const TruthTable& table) {
    Json out;
    out["arity"] = table.arity();
    out["order"] = kTruthTableOrder;
    out["length"] = table.size();
    out["hex"] = table.to_hex();
    return out;
}

}  // namespace nnrepr::io
