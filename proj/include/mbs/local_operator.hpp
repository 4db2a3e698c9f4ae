#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "mbs/errors.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

// Invertible operator on a single mode.  Invertibility is certified at
// construction: the smallest singular value must exceed invert_tol times
// the largest, otherwise construction throws NotInvertible.
class LocalOperator {
public:
    explicit LocalOperator(Eigen::MatrixXcd entries, double invert_tol = 1e-12);

    static LocalOperator identity(int dim);
    static LocalOperator diagonal(const Eigen::VectorXcd& entries, double invert_tol = 1e-12);
    static LocalOperator scalar(int dim, Complex factor);

    const Eigen::MatrixXcd& matrix() const { return entries_; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    // sigma_max / sigma_min from the construction-time check.
    double condition() const { return condition_; }

    LocalOperator inverse() const;

private:
    Eigen::MatrixXcd entries_;
    double condition_ = 1.0;
};

// Ordered, replayable SLOCC-equivalence proof: a sequence of
// (mode, operator) steps followed by one global nonzero scalar.
class IloCertificate {
public:
    struct Step {
        int mode; // 1-based
        LocalOperator op;
    };

    IloCertificate() = default;
    IloCertificate(std::string source_label, std::string target_label)
        : source_label_(std::move(source_label)), target_label_(std::move(target_label)) {}

    void add_step(int mode, LocalOperator op);
    void set_global_scalar(Complex scalar);

    const std::vector<Step>& steps() const { return steps_; }
    Complex global_scalar() const { return global_scalar_; }
    const std::string& source_label() const { return source_label_; }
    const std::string& target_label() const { return target_label_; }

    // Reversed steps with inverted operators and reciprocal scalar;
    // replaying the inverse after the forward certificate is the identity.
    IloCertificate inverse() const;

private:
    std::vector<Step> steps_;
    Complex global_scalar_{1.0, 0.0};
    std::string source_label_;
    std::string target_label_;
};

// Contract `op` against the chosen mode (1-based) of the state.
ModeTensor apply_local(const ModeTensor& state, int mode, const LocalOperator& op);

// Replay steps left to right, then multiply by the global scalar.
ModeTensor apply_certificate(const ModeTensor& state, const IloCertificate& cert);

struct EquivalenceCheck {
    double fidelity = 0.0;
    bool ok = false;
};

// Scale- and phase-invariant overlap |⟨a|b⟩| / (‖a‖‖b‖);
// ok iff fidelity >= 1 - tol_fid.
EquivalenceCheck verify_equivalence(const ModeTensor& a, const ModeTensor& b,
                                    double tol_fid, double zero_tol = 1e-12);

} // namespace mbs
