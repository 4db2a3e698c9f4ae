#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mbs/errors.hpp"
#include "mbs/fock_core.hpp"
#include "mbs/local_operator.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

// h_n = c_n * sqrt(n! / m^n): the shell weights after the factorial rescale
// turns each balanced shell output into the uniform shell state.
std::vector<Complex> to_uniform_coeffs(const std::vector<Complex>& coeffs, int modes);

// diag(sqrt(n!) for n <= level, 1 above); one copy per mode rescales every
// balanced shell output |n⟩-part, n <= level, to all-ones amplitudes.
LocalOperator factorial_rescale_op(int level, int dim);

// Mode-1 stages that collapse sum_n h_n |Phi_n⟩ onto h_N |Phi_N⟩.
// Stage k (k = 0..N-1) is I + sum_{n=k}^{N-1} (-h_n/h_N) |n-k⟩⟨N-k|:
// unit diagonal, strictly upper triangular correction, hence invertible.
struct EliminationOps {
    std::vector<LocalOperator> stages;
    LocalOperator scale; // (1/h_N) * I
};

EliminationOps elimination_ops(const std::vector<Complex>& h, int dim);

// ---- coherent reductions ----

// Per-mode operators turning sum_k w_k |beta_k⟩^{⊗m} into the r-term
// equal-weight diagonal state:
//   B v_k = chi_k   (chi = orthonormalized truncated coherent vectors),
//   W chi_k = |k⟩   (unitary relabeling),
//   T = diag(1/w_k for k < r, 1 above) on mode 1,
//   S = (norm/sqrt(r)) * I on mode 1.
struct CatReductionOps {
    LocalOperator B;
    LocalOperator W;
    LocalOperator T;
    LocalOperator S;
    double gram_condition = 1.0;
};

CatReductionOps cat_reduction_ops(const std::vector<CatTerm>& terms, int modes, int dim,
                                  double state_norm);

// Per-mode operators for the mixed family:
//   F fixes |n⟩ (n <= N) and sends v_k to mu_k (Gram-Schmidt against the
//     number block and earlier vectors),
//   V unitary: |n⟩ -> |n⟩ (n <= N), mu_k -> |N+1+k⟩, complement upward,
//   P = norm * I on mode 1 (restores raw amplitudes),
//   Q = diag(1 for n <= N, 1/w_k at N+1+k, 1 above) on mode 1,
//   G = factorial rescale on every mode,
//   elim = mode-1 stages + 1/h_N scale for the number block,
//   repair = diag(1 for n <= N, h_N above) on mode 1, undoing the scale on
//     the diagonal coherent rows.
struct HybridReductionOps {
    LocalOperator F;
    LocalOperator V;
    LocalOperator P;
    LocalOperator Q;
    LocalOperator G;
    EliminationOps elim;
    LocalOperator repair;
    double gram_condition = 1.0;
};

HybridReductionOps hybrid_reduction_ops(const std::vector<Complex>& coeffs,
                                        const std::vector<CatTerm>& terms, int modes, int dim,
                                        double state_norm);

// ---- canonical representatives ----

// (1/sqrt(r)) sum_{k<r} |k⟩^{⊗m}.
ModeTensor ghz_state(int r, int modes, int dim);

// Phi_N + sum_{n=N+1}^{N+r} |n⟩^{⊗m} (unnormalized).
ModeTensor hybrid_representative(int level, int r, int modes, int dim);

// ---- certificate assembly ----
// Each maps the normalized balanced output onto its representative:
// number -> Phi_N (all-ones, shell N), cat -> normalized r-term diagonal,
// hybrid -> Phi_N + sum |N+k⟩^{⊗m}.

IloCertificate number_certificate(const std::vector<Complex>& coeffs, int modes, int dim);

IloCertificate cat_certificate(const std::vector<CatTerm>& terms, int modes, int dim,
                               double state_norm);

IloCertificate hybrid_certificate(const std::vector<Complex>& coeffs,
                                  const std::vector<CatTerm>& terms, int modes, int dim,
                                  double state_norm);

// Condition number of the Gram matrix the coherent reductions would invert;
// useful as a diagnostic before attempting a reduction.
double coherent_gram_condition(const std::vector<CatTerm>& terms, int modes, int dim,
                               int number_level = -1);

} // namespace mbs
