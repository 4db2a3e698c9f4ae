#include "mbs/json_io.hpp"

#include <cstdio>

namespace mbs {

namespace {

[[noreturn]] void schema_error(const std::string& message, const std::string& location) {
    throw Error(ErrorCode::SchemaError, message, location);
}

double number_at(const json& j, const std::string& location) {
    if (!j.is_number()) schema_error("expected a number", location);
    return j.get<double>();
}

int int_at(const json& j, const std::string& location) {
    if (!j.is_number_integer()) schema_error("expected an integer", location);
    return j.get<int>();
}

std::vector<Complex> coefficients_from_json(const json& j, const std::string& location) {
    if (!j.is_array() || j.empty())
        schema_error("expected a nonempty array of coefficients", location);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(complex_from_json(j[i], location + "/" + std::to_string(i)));
    return out;
}

std::vector<CatTerm> terms_from_json(const json& j, const std::string& location) {
    if (!j.is_array() || j.empty())
        schema_error("expected a nonempty array of coherent terms", location);
    std::vector<CatTerm> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string here = location + "/" + std::to_string(i);
        if (!j[i].is_object()) schema_error("expected an object", here);
        if (!j[i].contains("weight")) schema_error("missing \"weight\"", here);
        if (!j[i].contains("alpha")) schema_error("missing \"alpha\"", here);
        out.push_back(CatTerm{complex_from_json(j[i]["weight"], here + "/weight"),
                              complex_from_json(j[i]["alpha"], here + "/alpha")});
    }
    return out;
}

} // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& location) {
    if (j.is_number()) return Complex{j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        schema_error("expected [re, im] or a bare number", location);
    return Complex{number_at(j[0], location + "/0"), number_at(j[1], location + "/1")};
}

InputSpec parse_input_spec(const json& doc) {
    if (!doc.is_object()) schema_error("input document must be an object", "");
    if (!doc.contains("modes")) schema_error("missing \"modes\"", "/modes");
    if (!doc.contains("input")) schema_error("missing \"input\"", "/input");

    InputSpec spec;
    spec.modes = int_at(doc["modes"], "/modes");
    if (spec.modes < 2)
        throw Error(ErrorCode::InvariantError, "modes must be at least 2", "/modes");

    if (doc.contains("cutoff")) {
        const json& c = doc["cutoff"];
        if (c.is_string()) {
            if (c.get<std::string>() != "auto")
                schema_error("cutoff must be an integer or \"auto\"", "/cutoff");
        } else {
            const int cut = int_at(c, "/cutoff");
            if (cut < 1)
                throw Error(ErrorCode::InvariantError, "cutoff must be positive", "/cutoff");
            spec.cutoff = cut;
        }
    }

    if (doc.contains("tolerance")) {
        spec.tolerance = number_at(doc["tolerance"], "/tolerance");
        if (!(spec.tolerance > 0.0))
            throw Error(ErrorCode::InvariantError, "tolerance must be positive", "/tolerance");
    }

    const json& input = doc["input"];
    if (!input.is_object()) schema_error("\"input\" must be an object", "/input");
    if (!input.contains("type")) schema_error("missing \"type\"", "/input/type");
    if (!input["type"].is_string()) schema_error("\"type\" must be a string", "/input/type");
    const std::string type = input["type"].get<std::string>();

    if (type == "number") {
        if (!input.contains("coefficients"))
            schema_error("missing \"coefficients\"", "/input/coefficients");
        spec.input = NumberSuperposition{
            coefficients_from_json(input["coefficients"], "/input/coefficients")};
    } else if (type == "cat") {
        if (!input.contains("terms")) schema_error("missing \"terms\"", "/input/terms");
        spec.input = CatState{terms_from_json(input["terms"], "/input/terms")};
    } else if (type == "hybrid") {
        if (!input.contains("coefficients"))
            schema_error("missing \"coefficients\"", "/input/coefficients");
        if (!input.contains("terms")) schema_error("missing \"terms\"", "/input/terms");
        spec.input = HybridState{
            coefficients_from_json(input["coefficients"], "/input/coefficients"),
            terms_from_json(input["terms"], "/input/terms")};
    } else {
        schema_error("type must be \"number\", \"cat\" or \"hybrid\"", "/input/type");
    }
    validate_input(spec);
    return spec;
}

json certificate_to_json(const IloCertificate& cert) {
    json steps = json::array();
    for (const auto& step : cert.steps()) {
        json rows = json::array();
        const Eigen::MatrixXcd& m = step.op.matrix();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
            rows.push_back(std::move(row));
        }
        steps.push_back(json{{"mode", step.mode}, {"matrix", std::move(rows)}});
    }
    return json{{"source", cert.source_label()},
                {"target", cert.target_label()},
                {"steps", std::move(steps)},
                {"global_scalar", complex_to_json(cert.global_scalar())}};
}

IloCertificate certificate_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("certificate must be an object", "/certificate");
    IloCertificate cert(doc.value("source", std::string{}), doc.value("target", std::string{}));
    if (!doc.contains("steps") || !doc["steps"].is_array())
        schema_error("missing \"steps\" array", "/certificate/steps");
    for (std::size_t s = 0; s < doc["steps"].size(); ++s) {
        const std::string here = "/certificate/steps/" + std::to_string(s);
        const json& step = doc["steps"][s];
        if (!step.is_object() || !step.contains("mode") || !step.contains("matrix"))
            schema_error("step needs \"mode\" and \"matrix\"", here);
        const int mode = int_at(step["mode"], here + "/mode");
        const json& rows = step["matrix"];
        if (!rows.is_array() || rows.empty()) schema_error("matrix must be a nonempty array", here);
        const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXcd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!rows[static_cast<std::size_t>(i)].is_array() ||
                rows[static_cast<std::size_t>(i)].size() != rows.size())
                schema_error("matrix must be square", here + "/matrix/" + std::to_string(i));
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = complex_from_json(
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    here + "/matrix/" + std::to_string(i) + "/" + std::to_string(j));
        }
        cert.add_step(mode, LocalOperator(std::move(m)));
    }
    if (doc.contains("global_scalar"))
        cert.set_global_scalar(complex_from_json(doc["global_scalar"],
                                                 "/certificate/global_scalar"));
    return cert;
}

json state_to_json(const ModeTensor& state, const std::vector<std::string>& warnings) {
    json amps = json::array();
    for (const Complex& a : state.amp) amps.push_back(complex_to_json(a));
    return json{{"modes", state.modes},
                {"local_dim", state.dim},
                {"norm", state.norm()},
                {"amplitudes", std::move(amps)},
                {"warnings", warnings}};
}

json label_to_json(const ClassLabel& label) {
    json j{{"variant", label.name()}, {"scenario", scenario_name(label.scenario)}};
    if (label.scenario != Scenario::Cat) j["N"] = label.number_level;
    if (label.scenario != Scenario::Number) j["r"] = label.cat_rank;
    j["schmidt_rank"] = label.schmidt_rank;
    return j;
}

ClassLabel label_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("scenario"))
        schema_error("label needs a \"scenario\"", "/label");
    ClassLabel label;
    const std::string s = doc["scenario"].get<std::string>();
    if (s == "number")
        label.scenario = Scenario::Number;
    else if (s == "cat")
        label.scenario = Scenario::Cat;
    else if (s == "hybrid")
        label.scenario = Scenario::Hybrid;
    else
        schema_error("unknown scenario \"" + s + "\"", "/label/scenario");
    if (doc.contains("N")) label.number_level = int_at(doc["N"], "/label/N");
    if (doc.contains("r")) label.cat_rank = int_at(doc["r"], "/label/r");
    if (doc.contains("schmidt_rank"))
        label.schmidt_rank = int_at(doc["schmidt_rank"], "/label/schmidt_rank");
    return label;
}

json report_to_json(const ClassificationReport& report, const json& input_echo) {
    json j{{"status", report.status},
           {"modes", report.modes},
           {"local_dim", report.local_dim},
           {"label", label_to_json(report.label)},
           {"representative", report.representative},
           {"schmidt_ranks", report.schmidt_ranks},
           {"fidelity", report.fidelity}};
    if (report.a_values) j["a_values"] = *report.a_values;
    j["certificate"] = certificate_to_json(report.certificate);
    j["hierarchy_note"] = report.hierarchy_note;
    j["warnings"] = report.warnings;
    j["input"] = input_echo;
    return j;
}

json hierarchy_to_json(const HierarchyChain& chain) {
    json entries = json::array();
    for (const auto& e : chain.entries)
        entries.push_back(json{{"label", label_to_json(e.label)},
                               {"schmidt_rank", e.schmidt_rank}});
    return json{{"scenario", scenario_name(chain.scenario)},
                {"entries", std::move(entries)},
                {"note", chain.note}};
}

std::string ranks_to_csv(const ClassificationReport& report) {
    std::string out = "bipartition,rank\n";
    for (const auto& [split, rank] : report.schmidt_ranks)
        out += "\"" + split + "\"," + std::to_string(rank) + "\n";
    return out;
}

std::string report_to_text(const ClassificationReport& report) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", report.fidelity);
    std::string out;
    out += "status: " + report.status + "\n";
    out += "class: " + report.label.name() + " (" + report.representative + ")\n";
    out += "modes: " + std::to_string(report.modes) +
           ", cutoff: " + std::to_string(report.local_dim) + "\n";
    out += "fidelity: " + std::string(buf) + "\n";
    out += "schmidt ranks:\n";
    for (const auto& [split, rank] : report.schmidt_ranks)
        out += "  " + split + ": " + std::to_string(rank) + "\n";
    if (report.a_values) {
        out += "product census per traced mode:";
        for (int a : *report.a_values) out += " " + std::to_string(a);
        out += "\n";
    }
    if (!report.hierarchy_note.empty()) out += "hierarchy: " + report.hierarchy_note + "\n";
    for (const auto& w : report.warnings) out += "warning: " + w + "\n";
    return out;
}

std::string hierarchy_to_text(const HierarchyChain& chain) {
    std::string out;
    for (std::size_t i = 0; i < chain.entries.size(); ++i) {
        if (i > 0) out += " < ";
        out += chain.entries[i].label.name() + " (rank " +
               std::to_string(chain.entries[i].schmidt_rank) + ")";
    }
    out += "\n" + chain.note + "\n";
    return out;
}

} // namespace mbs
