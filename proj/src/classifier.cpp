#include "mbs/classifier.hpp"

#include <cmath>

namespace mbs {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Number: return "number";
        case Scenario::Cat: return "cat";
        case Scenario::Hybrid: return "hybrid";
    }
    return "unknown";
}

std::string ClassLabel::name() const {
    switch (scenario) {
        case Scenario::Number: return "C" + std::to_string(number_level);
        case Scenario::Cat: return "R" + std::to_string(cat_rank);
        case Scenario::Hybrid:
            return "H" + std::to_string(number_level) + "," + std::to_string(cat_rank);
    }
    return "?";
}

ModeTensor class_representative(const ClassLabel& label, int modes, int dim) {
    switch (label.scenario) {
        case Scenario::Number: return uniform_state(label.number_level, modes, dim);
        case Scenario::Cat: return ghz_state(label.cat_rank, modes, dim);
        case Scenario::Hybrid:
            return hybrid_representative(label.number_level, label.cat_rank, modes, dim);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown scenario");
}

namespace {

std::string representative_text(const ClassLabel& label) {
    switch (label.scenario) {
        case Scenario::Number:
            return "uniform occupation-sum-" + std::to_string(label.number_level) + " state";
        case Scenario::Cat:
            return "equal-weight " + std::to_string(label.cat_rank) + "-term diagonal state";
        case Scenario::Hybrid:
            return "uniform occupation-sum-" + std::to_string(label.number_level) +
                   " state plus " + std::to_string(label.cat_rank) + " diagonal terms above it";
    }
    return "";
}

int expected_rank(const ClassLabel& label) {
    switch (label.scenario) {
        case Scenario::Number: return label.number_level + 1;
        case Scenario::Cat: return label.cat_rank;
        case Scenario::Hybrid: return label.number_level + label.cat_rank + 1;
    }
    return 0;
}

std::string chain_note(const ClassLabel& label) {
    switch (label.scenario) {
        case Scenario::Number: {
            const int n = label.number_level;
            std::string left = n > 0 ? "C" + std::to_string(n - 1) + " ⊂ " : "";
            return left + "C" + std::to_string(n) + " ⊂ C" + std::to_string(n + 1);
        }
        case Scenario::Cat: {
            const int r = label.cat_rank;
            std::string left = r > 1 ? "R" + std::to_string(r - 1) + " ⊂ " : "";
            return left + "R" + std::to_string(r) + " ⊂ R" + std::to_string(r + 1);
        }
        case Scenario::Hybrid: {
            const int n = label.number_level;
            const std::string r = std::to_string(label.cat_rank);
            std::string left = n > 0 ? "H" + std::to_string(n - 1) + "," + r + " < " : "";
            return left + "H" + std::to_string(n) + "," + r + " < H" + std::to_string(n + 1) +
                   "," + r + " (ordered by strictly increasing Schmidt rank at fixed r; no "
                   "containment asserted across families)";
        }
    }
    return "";
}

int minimal_dim(const ClassLabel& label) {
    switch (label.scenario) {
        case Scenario::Number: return label.number_level + 1;
        case Scenario::Cat: return label.cat_rank;
        case Scenario::Hybrid: return label.number_level + label.cat_rank + 1;
    }
    return 1;
}

} // namespace

ClassificationReport classify(const InputSpec& spec, const ClassifyOptions& options) {
    BuiltOutput built = build_mbs_output(spec);

    ClassificationReport report;
    report.modes = spec.modes;
    report.local_dim = built.dim;
    report.warnings = built.warnings;

    const bool coherent = built.cat_rank > 0;
    report.label.scenario = std::holds_alternative<NumberSuperposition>(spec.input)
                                ? Scenario::Number
                                : (std::holds_alternative<CatState>(spec.input) ? Scenario::Cat
                                                                                : Scenario::Hybrid);
    report.label.number_level = built.number_level;
    report.label.cat_rank = built.cat_rank;
    report.label.schmidt_rank = expected_rank(report.label);
    report.representative = representative_text(report.label);
    report.hierarchy_note = chain_note(report.label);

    const double norm = built.state.norm();
    ModeTensor source = built.state;
    for (auto& a : source.amp) a /= norm;
    source.normalized = true;

    switch (report.label.scenario) {
        case Scenario::Number:
            report.certificate =
                number_certificate(built.coefficients, spec.modes, built.dim);
            break;
        case Scenario::Cat:
            report.certificate = cat_certificate(built.terms, spec.modes, built.dim, norm);
            break;
        case Scenario::Hybrid:
            report.certificate =
                hybrid_certificate(built.coefficients, built.terms, spec.modes, built.dim, norm);
            break;
    }

    const double tol_fid = options.tol_fid.value_or(coherent ? 1e-8 : 1e-10);
    const double rank_tol = std::max(options.rank_tol.value_or(1e-8),
                                     coherent ? 10.0 * built.max_deficit : 0.0);

    const ModeTensor target = class_representative(report.label, spec.modes, built.dim);
    const ModeTensor replayed = apply_certificate(source, report.certificate);
    const EquivalenceCheck chk = verify_equivalence(replayed, target, tol_fid);
    report.fidelity = chk.fidelity;

    bool ok = chk.ok;
    if (!chk.ok)
        report.warnings.push_back("certificate replay fidelity " + std::to_string(chk.fidelity) +
                                  " misses the target by more than " + std::to_string(tol_fid));

    for (const auto& split : bipartitions(spec.modes)) {
        const int rank = schmidt_rank(source, split, rank_tol);
        report.schmidt_ranks[split.to_string()] = rank;
        if (rank != report.label.schmidt_rank) {
            ok = false;
            report.warnings.push_back("bipartition " + split.to_string() + " has rank " +
                                      std::to_string(rank) + ", expected " +
                                      std::to_string(report.label.schmidt_rank));
        }
    }

    if (options.compute_a) {
        if (spec.modes < 3) {
            report.warnings.push_back(
                "product census needs at least three modes; a-values skipped");
        } else {
            const int dim_min = minimal_dim(report.label);
            const ModeTensor rep = class_representative(report.label, spec.modes, dim_min);
            ProductSearchConfig cfg = options.search;
            cfg.seed = options.seed;
            std::vector<int> values;
            for (int mode = 1; mode <= spec.modes; ++mode)
                values.push_back(product_state_count(rep, mode, cfg).count);
            report.a_values = std::move(values);
        }
    }

    report.status = ok ? "ok" : "failed";
    return report;
}

CompareVerdict cross_scenario_compare(const ClassificationReport& a,
                                      const ClassificationReport& b) {
    if (a.modes != b.modes)
        throw Error(ErrorCode::IncomparableModes,
                    "cannot compare states on " + std::to_string(a.modes) + " and " +
                        std::to_string(b.modes) + " modes");

    if (a.label == b.label)
        return {"equivalent", "both states reduce to the " + a.label.name() + " representative"};

    for (const auto& [split, rank] : a.schmidt_ranks) {
        auto it = b.schmidt_ranks.find(split);
        if (it != b.schmidt_ranks.end() && it->second != rank)
            return {"inequivalent", "bipartition " + split + " has rank " + std::to_string(rank) +
                                        " versus " + std::to_string(it->second)};
    }

    if (a.a_values && b.a_values && *a.a_values != *b.a_values) {
        for (std::size_t i = 0; i < a.a_values->size() && i < b.a_values->size(); ++i)
            if ((*a.a_values)[i] != (*b.a_values)[i])
                return {"inequivalent",
                        "tracing mode " + std::to_string(i + 1) + " leaves " +
                            std::to_string((*a.a_values)[i]) + " product directions versus " +
                            std::to_string((*b.a_values)[i])};
    }

    return {"undecided",
            "labels differ but every computed invariant agrees; no separating witness found"};
}

HierarchyChain class_hierarchy(Scenario scenario, int upto) {
    const int lowest = scenario == Scenario::Number ? 0 : 1;
    if (upto < lowest)
        throw Error(ErrorCode::InvalidArgument,
                    "hierarchy upper bound must be at least " + std::to_string(lowest));
    HierarchyChain chain;
    chain.scenario = scenario;
    for (int k = lowest; k <= upto; ++k) {
        ClassLabel label;
        label.scenario = scenario;
        switch (scenario) {
            case Scenario::Number: label.number_level = k; break;
            case Scenario::Cat: label.cat_rank = k; break;
            case Scenario::Hybrid:
                label.number_level = k - 1;
                label.cat_rank = 1;
                break;
        }
        label.schmidt_rank = expected_rank(label);
        chain.entries.push_back(HierarchyEntry{label, label.schmidt_rank});
    }
    chain.note =
        "Every bipartite Schmidt rank strictly increases along the chain, so no invertible "
        "local map connects two distinct entries. A higher entry can still be degraded to any "
        "lower one by non-invertible local operations, and states arbitrarily close to a higher "
        "entry exist inside the closure of its neighbourhood, so the chain orders the classes "
        "by reachability rather than by equivalence.";
    return chain;
}

} // namespace mbs
