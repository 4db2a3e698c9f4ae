#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mbs/errors.hpp"
#include "mbs/local_operator.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

// ---- input families ----

// sum_{n=0}^{N} c_n |n⟩ fed into the first port; trailing zeros trimmed,
// so coefficients.back() != 0 and N = coefficients.size() - 1.
struct NumberSuperposition {
    std::vector<Complex> coefficients;
};

struct CatTerm {
    Complex weight;
    Complex alpha;
};

// sum_k w_k |alpha_k⟩ with r >= 1 distinct coherent amplitudes.
struct CatState {
    std::vector<CatTerm> terms;
};

// sum_{n=0}^{N} c_n |n⟩ + sum_k w_k |alpha_k⟩.
struct HybridState {
    std::vector<Complex> coefficients;
    std::vector<CatTerm> terms;
};

struct InputSpec {
    std::variant<NumberSuperposition, CatState, HybridState> input;
    int modes = 0;
    std::optional<int> cutoff; // absent => auto
    double tolerance = 1e-10;  // coherent truncation budget + auto-cutoff target
};

// ---- number-basis outputs ----

// n!/(n_1! ... n_m!) as a double; exact for every value representable here.
double multinomial(int n, std::span<const int> parts);

// sqrt(n!) table, indices 0..n_max (n_max <= 170).
std::vector<double> sqrt_factorials(int n_max);

// Balanced-splitter output of |n⟩: amplitudes m^{-n/2} sqrt(n!/(n_1!...n_m!))
// on the shell sum n_k = n, zero elsewhere.  Normalized.  Requires n < d.
ModeTensor number_mbs_output(int n, int modes, int dim);

// All-ones on the shell sum n_k = n, zero elsewhere.  Unnormalized.
ModeTensor uniform_state(int n, int modes, int dim);

// Uniform superposition Phi_N = sum_{n<=N} |Phi_n⟩ (all-ones on shells 0..N).
ModeTensor uniform_sum_state(int level, int modes, int dim);

// sum_k w_k * states_k; clears the normalized flag.
ModeTensor superpose(const std::vector<std::pair<Complex, const ModeTensor*>>& terms);

// ---- coherent machinery ----

struct CoherentVector {
    Eigen::VectorXcd amp; // entries e^{-|a|^2/2} a^n / sqrt(n!), n = 0..d-1
    double deficit = 0.0; // 1 - ||amp||^2, the Poisson tail mass beyond d
};

CoherentVector coherent_mode_vector(Complex alpha, int dim);

// Smallest d with Poisson(lambda) tail mass sum_{n>=d} < epsilon.
int auto_cutoff(double lambda, double epsilon);

// Balanced-splitter output of |alpha⟩: product of per-mode coherent vectors
// at alpha/sqrt(m).  Throws CutoffTooSmall when the per-mode truncation
// deficit reaches tolerance.
ModeTensor coherent_mbs_output(Complex alpha, int modes, int dim, double tolerance);

// ---- general scattering (first column gamma of a unitary) ----

// Output of sum c_n |n⟩ through a splitter whose first-column amplitudes are
// gamma (|gamma| must be unit to norm_tol; every gamma_q nonzero).
ModeTensor general_mbs_output(const std::vector<Complex>& coeffs,
                              const std::vector<Complex>& gamma, int dim,
                              double norm_tol = 1e-8);

// Diagonal D_q = sum_n (gamma_q sqrt(m))^{-n} |n⟩⟨n| per mode; applying all m
// to the general output reproduces the balanced output exactly (scalar 1).
std::vector<LocalOperator> balancing_operators(const std::vector<Complex>& gamma, int dim);

IloCertificate balancing_certificate(const std::vector<Complex>& gamma, int dim,
                                     std::string source_label, std::string target_label);

// ---- spec-level assembly ----

struct BuiltOutput {
    ModeTensor state;
    int dim = 0;                     // cutoff actually used
    int number_level = -1;           // N for number/hybrid parts, -1 if none
    int cat_rank = 0;                // count of distinct coherent amplitudes
    double max_deficit = 0.0;        // worst per-mode coherent truncation deficit
    std::vector<Complex> coefficients; // trimmed number coefficients
    std::vector<CatTerm> terms;        // coherent terms as used
    std::vector<std::string> warnings;
};

// Structural checks that need no tensor work: modes >= 2, positive cutoff
// and tolerance, a not-all-zero number part, nonzero coherent weights,
// pairwise-distinct coherent amplitudes.  Run by parse and by build.
void validate_input(const InputSpec& spec);

// Validates the family payload, resolves the cutoff (auto or explicit),
// builds the balanced-splitter output.  force_dim overrides the resolved
// cutoff (used when replaying a certificate at a recorded dimension).
BuiltOutput build_mbs_output(const InputSpec& spec, std::optional<int> force_dim = {});

// Trim trailing near-zero coefficients (|c| <= tol); returns trimmed copy
// and appends a warning when anything was dropped.
std::vector<Complex> trim_trailing_zeros(const std::vector<Complex>& coeffs, double tol,
                                         std::vector<std::string>* warnings);

} // namespace mbs
