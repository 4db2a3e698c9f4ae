#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mbs/coeff_matrix.hpp"
#include "mbs/json_io.hpp"

namespace {

mbs::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw mbs::Error(mbs::ErrorCode::IoError, "cannot open " + path);
    try {
        return mbs::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw mbs::Error(mbs::ErrorCode::SchemaError,
                         std::string("invalid JSON: ") + e.what());
    }
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw mbs::Error(mbs::ErrorCode::IoError, "cannot write " + out_path);
    out << text;
}

std::string render_json(const mbs::json& j) { return j.dump(2) + "\n"; }

mbs::InputSpec spec_from_file(const std::string& path, mbs::json* echo,
                              std::optional<double> tol_override) {
    mbs::json doc = load_json(path);
    if (tol_override) doc["tolerance"] = *tol_override;
    if (echo) *echo = doc;
    return mbs::parse_input_spec(doc);
}

struct CommonArgs {
    std::string spec_path;
    std::string out_path;
    std::string format = "json";
    std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_format = true) {
    cmd->add_option("--spec", args.spec_path, "input specification JSON file")->required();
    cmd->add_option("--out", args.out_path, "output file (default: stdout)");
    if (with_format)
        cmd->add_option("--format", args.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--tol", args.tol, "override the input tolerance");
}

int run(int argc, char** argv) {
    CLI::App app{"balanced multiport splitter outputs and their SLOCC classification"};
    app.require_subcommand(1);

    CommonArgs build_args;
    auto* build_cmd = app.add_subcommand("build", "build the splitter output state");
    add_common(build_cmd, build_args, false);

    CommonArgs classify_args;
    bool compute_a = false;
    std::uint64_t seed = 0;
    std::optional<double> tol_fid;
    auto* classify_cmd =
        app.add_subcommand("classify", "classify the output state with a replayable certificate");
    add_common(classify_cmd, classify_args);
    classify_cmd->add_flag("--compute-a", compute_a, "also count product directions per traced mode");
    classify_cmd->add_option("--seed", seed, "seed for the product-direction search");
    classify_cmd->add_option("--tol-fid", tol_fid, "fidelity tolerance for certificate replay");

    CommonArgs rank_args;
    auto* rank_cmd = app.add_subcommand("rank", "Schmidt rank across every bipartition");
    add_common(rank_cmd, rank_args);

    std::string report_path;
    std::string verify_out;
    std::optional<double> verify_tol_fid;
    auto* verify_cmd = app.add_subcommand("verify", "replay a report's certificate from scratch");
    verify_cmd->add_option("--report", report_path, "classification report JSON file")->required();
    verify_cmd->add_option("--out", verify_out, "output file (default: stdout)");
    verify_cmd->add_option("--tol-fid", verify_tol_fid, "fidelity tolerance");

    CommonArgs dump_args;
    bool dump_block_form = false;
    auto* dump_cmd = app.add_subcommand("dump-matrix", "coefficient matrix of the output state");
    add_common(dump_cmd, dump_args, false);
    dump_cmd->add_flag("--blocks", dump_block_form, "print the square column blocks separately");

    std::string scenario_arg = "number";
    int upto = 4;
    std::string hierarchy_out;
    std::string hierarchy_format = "json";
    auto* hierarchy_cmd = app.add_subcommand("hierarchy", "rank-ordered chain of classes");
    hierarchy_cmd->add_option("--scenario", scenario_arg, "number, cat or hybrid")
        ->check(CLI::IsMember({"number", "cat", "hybrid"}));
    hierarchy_cmd->add_option("--upto", upto, "last chain parameter");
    hierarchy_cmd->add_option("--out", hierarchy_out, "output file (default: stdout)");
    hierarchy_cmd->add_option("--format", hierarchy_format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI11_PARSE(app, argc, argv);

    if (build_cmd->parsed()) {
        mbs::json echo;
        mbs::InputSpec spec = spec_from_file(build_args.spec_path, &echo, build_args.tol);
        mbs::BuiltOutput built = mbs::build_mbs_output(spec);
        mbs::json out = mbs::state_to_json(built.state, built.warnings);
        out["input"] = echo;
        write_output(render_json(out), build_args.out_path);
        return 0;
    }

    if (classify_cmd->parsed()) {
        mbs::json echo;
        mbs::InputSpec spec = spec_from_file(classify_args.spec_path, &echo, classify_args.tol);
        mbs::ClassifyOptions options;
        options.compute_a = compute_a;
        options.seed = seed;
        options.tol_fid = tol_fid;
        mbs::ClassificationReport report = mbs::classify(spec, options);
        std::string rendered;
        if (classify_args.format == "json")
            rendered = render_json(mbs::report_to_json(report, echo));
        else if (classify_args.format == "csv")
            rendered = mbs::ranks_to_csv(report);
        else
            rendered = mbs::report_to_text(report);
        write_output(rendered, classify_args.out_path);
        return report.status == "ok" ? 0 : 1;
    }

    if (rank_cmd->parsed()) {
        mbs::json echo;
        mbs::InputSpec spec = spec_from_file(rank_args.spec_path, &echo, rank_args.tol);
        mbs::BuiltOutput built = mbs::build_mbs_output(spec);
        const double rank_tol = std::max(1e-8, 10.0 * built.max_deficit);
        mbs::json ranks = mbs::json::object();
        std::string csv = "bipartition,rank\n";
        std::string text;
        for (const auto& split : mbs::bipartitions(spec.modes)) {
            const int r = mbs::schmidt_rank(built.state, split, rank_tol);
            ranks[split.to_string()] = r;
            csv += "\"" + split.to_string() + "\"," + std::to_string(r) + "\n";
            text += split.to_string() + ": " + std::to_string(r) + "\n";
        }
        std::string rendered;
        if (rank_args.format == "json")
            rendered = render_json(mbs::json{{"modes", spec.modes},
                                             {"local_dim", built.dim},
                                             {"schmidt_ranks", ranks}});
        else if (rank_args.format == "csv")
            rendered = csv;
        else
            rendered = text;
        write_output(rendered, rank_args.out_path);
        return 0;
    }

    if (verify_cmd->parsed()) {
        mbs::json report = load_json(report_path);
        if (!report.contains("input") || !report.contains("certificate") ||
            !report.contains("label") || !report.contains("local_dim"))
            throw mbs::Error(mbs::ErrorCode::SchemaError,
                             "report must carry input, label, local_dim and certificate");
        mbs::InputSpec spec = mbs::parse_input_spec(report["input"]);
        const int dim = report["local_dim"].get<int>();
        mbs::BuiltOutput built = mbs::build_mbs_output(spec, dim);
        mbs::ModeTensor source = built.state;
        const double norm = source.norm();
        for (auto& a : source.amp) a /= norm;

        mbs::IloCertificate cert = mbs::certificate_from_json(report["certificate"]);
        mbs::ClassLabel label = mbs::label_from_json(report["label"]);
        mbs::ModeTensor target = mbs::class_representative(label, spec.modes, dim);
        mbs::ModeTensor replayed = mbs::apply_certificate(source, cert);
        const double fid_tol =
            verify_tol_fid.value_or(label.scenario == mbs::Scenario::Number ? 1e-10 : 1e-8);
        mbs::EquivalenceCheck chk = mbs::verify_equivalence(replayed, target, fid_tol);

        write_output(render_json(mbs::json{{"verified", chk.ok},
                                           {"fidelity", chk.fidelity},
                                           {"label", label.name()}}),
                     verify_out);
        return chk.ok ? 0 : 1;
    }

    if (dump_cmd->parsed()) {
        mbs::json echo;
        mbs::InputSpec spec = spec_from_file(dump_args.spec_path, &echo, dump_args.tol);
        mbs::BuiltOutput built = mbs::build_mbs_output(spec);
        mbs::CoefficientMatrixView view(built.state);
        write_output(dump_block_form ? mbs::dump_blocks(view) : mbs::dump_matrix(view.matrix()),
                     dump_args.out_path);
        return 0;
    }

    if (hierarchy_cmd->parsed()) {
        mbs::Scenario scenario = mbs::Scenario::Number;
        if (scenario_arg == "cat") scenario = mbs::Scenario::Cat;
        if (scenario_arg == "hybrid") scenario = mbs::Scenario::Hybrid;
        mbs::HierarchyChain chain = mbs::class_hierarchy(scenario, upto);
        write_output(hierarchy_format == "json" ? render_json(mbs::hierarchy_to_json(chain))
                                                : mbs::hierarchy_to_text(chain),
                     hierarchy_out);
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mbs::Error& e) {
        mbs::json err{{"code", mbs::error_code_name(e.code())},
                      {"message", e.what()}};
        if (!e.location().empty()) err["location"] = e.location();
        std::cerr << mbs::json{{"error", err}}.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << mbs::json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 1;
    }
}
