#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbs/fock_core.hpp"
#include "mbs/ilo_engine.hpp"
#include "mbs/schmidt.hpp"

namespace mbs {

enum class Scenario { Number, Cat, Hybrid };

const char* scenario_name(Scenario s);

struct ClassLabel {
    Scenario scenario = Scenario::Number;
    int number_level = -1; // N (number and hybrid)
    int cat_rank = 0;      // r (cat and hybrid)
    int schmidt_rank = 0;  // common rank across bipartitions

    // "C3", "R2", "H3,2"
    std::string name() const;

    bool operator==(const ClassLabel& other) const {
        return scenario == other.scenario && number_level == other.number_level &&
               cat_rank == other.cat_rank;
    }
};

struct ClassificationReport {
    std::string status; // "ok" or "failed"
    int modes = 0;
    int local_dim = 0;
    ClassLabel label;
    std::string representative; // short description of the canonical state
    IloCertificate certificate;
    double fidelity = 0.0;
    std::map<std::string, int> schmidt_ranks; // key: bipartition string
    std::optional<std::vector<int>> a_values; // per traced mode, when requested
    std::string hierarchy_note;               // chain neighbours of the label
    std::vector<std::string> warnings;
};

struct ClassifyOptions {
    bool compute_a = false;
    std::uint64_t seed = 0;
    std::optional<double> tol_fid;  // default 1e-10 number-only, 1e-8 with coherent parts
    std::optional<double> rank_tol; // default 1e-8, widened by truncation deficit
    ProductSearchConfig search;
};

// Builds the splitter output, assembles the equivalence certificate, replays
// it against the canonical representative, and checks every bipartite rank.
// Verification mismatches return a "failed" report rather than throwing.
ClassificationReport classify(const InputSpec& spec, const ClassifyOptions& options = {});

// The canonical representative for a label at the given size.
ModeTensor class_representative(const ClassLabel& label, int modes, int dim);

struct CompareVerdict {
    std::string verdict; // "equivalent", "inequivalent", "undecided"
    std::string reason;
};

// Decides SLOCC equivalence from two classification reports: matching labels
// are equivalent; differing rank profiles (or differing censuses at equal
// ranks) are inequivalent; anything else is undecided.
CompareVerdict cross_scenario_compare(const ClassificationReport& a,
                                      const ClassificationReport& b);

struct HierarchyEntry {
    ClassLabel label;
    int schmidt_rank = 0;
};

struct HierarchyChain {
    Scenario scenario = Scenario::Number;
    std::vector<HierarchyEntry> entries;
    std::string note;
};

// One-parameter chain of strictly increasing rank within a scenario:
// number C0..C_upto, cat R1..R_upto, hybrid H0,1..H_upto,1.
HierarchyChain class_hierarchy(Scenario scenario, int upto);

} // namespace mbs
