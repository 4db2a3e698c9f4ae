#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mbs/errors.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

// Split of modes 1..m into two nonempty halves; canonical form keeps mode 1
// on the left.
struct Bipartition {
    std::vector<int> left;  // 1-based, ascending
    std::vector<int> right; // 1-based, ascending

    // "1,3|2,4"
    std::string to_string() const;
};

// All 2^{m-1} - 1 canonical bipartitions, mode 1 always on the left,
// ordered by the subset mask of modes 2..m joining the left half.
std::vector<Bipartition> bipartitions(int modes);

// Rank of the state reshaped across the split: singular values above
// tol * sigma_max count.
int schmidt_rank(const ModeTensor& state, const Bipartition& split, double tol = 1e-8);

// Singular values (descending) of the reshaped state.
Eigen::VectorXd schmidt_spectrum(const ModeTensor& state, const Bipartition& split);

// True when every canonical bipartition has rank >= 2.
bool is_genuinely_entangled(const ModeTensor& state, double tol = 1e-8);

struct ProductSearchConfig {
    int restarts = 200;
    int max_iterations = 500;   // alternating sweeps per restart
    double convergence = 1e-12; // stop when the ratio gain drops below this
    double membership_tol = 1e-6; // accept ratio >= 1 - membership_tol
    double dedup_angle = 0.05;    // radians; factors closer than this merge
    double range_tol = 1e-8;      // singular values above tol*max span the range
    std::uint64_t seed = 0;
};

struct ProductWitness {
    std::vector<Eigen::VectorXcd> factors; // one per remaining mode, unit norm
    double ratio = 0.0;                    // ||P w||^2 achieved
};

struct ProductSearchResult {
    int count = 0;
    std::vector<ProductWitness> witnesses;
    int failed_restarts = 0;
};

// Census of product vectors inside the range of the reduced state obtained
// by tracing out `traced_mode` (1-based): alternating local maximization of
// ||P w||^2 over unit product vectors w, deduplicated by factor overlaps.
ProductSearchResult product_state_count(const ModeTensor& state, int traced_mode,
                                        const ProductSearchConfig& config = {});

} // namespace mbs
