#include "mbs/local_operator.hpp"

#include <cmath>
#include <utility>

namespace mbs {

LocalOperator::LocalOperator(Eigen::MatrixXcd entries, double invert_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw Error(ErrorCode::InvalidArgument, "local operator must be square and nonempty");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(entries_);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(s_min > invert_tol * s_max) || s_max == 0.0)
        throw Error(ErrorCode::NotInvertible,
                    "local operator is singular to working precision (sigma_min <= " +
                        std::to_string(invert_tol) + " * sigma_max)");
    condition_ = s_max / s_min;
}

LocalOperator LocalOperator::identity(int dim) {
    return LocalOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

LocalOperator LocalOperator::diagonal(const Eigen::VectorXcd& entries, double invert_tol) {
    Eigen::MatrixXcd m = entries.asDiagonal();
    return LocalOperator(std::move(m), invert_tol);
}

LocalOperator LocalOperator::scalar(int dim, Complex factor) {
    return LocalOperator(factor * Eigen::MatrixXcd::Identity(dim, dim));
}

LocalOperator LocalOperator::inverse() const {
    return LocalOperator(entries_.inverse());
}

void IloCertificate::add_step(int mode, LocalOperator op) {
    steps_.push_back(Step{mode, std::move(op)});
}

void IloCertificate::set_global_scalar(Complex scalar) {
    if (std::abs(scalar) == 0.0)
        throw Error(ErrorCode::InvalidArgument, "global scalar must be nonzero");
    global_scalar_ = scalar;
}

IloCertificate IloCertificate::inverse() const {
    IloCertificate inv(target_label_, source_label_);
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
        inv.add_step(it->mode, it->op.inverse());
    inv.set_global_scalar(1.0 / global_scalar_);
    return inv;
}

ModeTensor apply_local(const ModeTensor& state, int mode, const LocalOperator& op) {
    if (mode < 1 || mode > state.modes)
        throw Error(ErrorCode::InvalidArgument,
                    "mode index " + std::to_string(mode) + " outside 1.." +
                        std::to_string(state.modes));
    if (op.dim() != state.dim)
        throw Error(ErrorCode::ShapeMismatch,
                    "operator dimension " + std::to_string(op.dim()) +
                        " does not match local dimension " + std::to_string(state.dim));

    const int d = state.dim;
    const int k = mode - 1; // 0-based axis
    std::size_t inner = 1;  // product of dims after axis k
    for (int j = k + 1; j < state.modes; ++j) inner *= static_cast<std::size_t>(d);
    const std::size_t outer = state.size() / (inner * static_cast<std::size_t>(d));

    ModeTensor out = ModeTensor::zeros(state.modes, d);
    const Eigen::MatrixXcd& M = op.matrix();
    for (std::size_t a = 0; a < outer; ++a) {
        const std::size_t base = a * static_cast<std::size_t>(d) * inner;
        for (std::size_t b = 0; b < inner; ++b) {
            for (int i = 0; i < d; ++i) {
                Complex acc{0.0, 0.0};
                for (int j = 0; j < d; ++j)
                    acc += M(i, j) * state.amp[base + static_cast<std::size_t>(j) * inner + b];
                out.amp[base + static_cast<std::size_t>(i) * inner + b] = acc;
            }
        }
    }
    return out;
}

ModeTensor apply_certificate(const ModeTensor& state, const IloCertificate& cert) {
    ModeTensor cur = state;
    for (const auto& step : cert.steps())
        cur = apply_local(cur, step.mode, step.op);
    for (auto& a : cur.amp) a *= cert.global_scalar();
    cur.normalized = false;
    return cur;
}

EquivalenceCheck verify_equivalence(const ModeTensor& a, const ModeTensor& b,
                                    double tol_fid, double zero_tol) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na < zero_tol || nb < zero_tol)
        throw Error(ErrorCode::ZeroState, "cannot compare against a numerically zero state");
    EquivalenceCheck chk;
    chk.fidelity = std::abs(inner_product(a, b)) / (na * nb);
    chk.ok = chk.fidelity >= 1.0 - tol_fid;
    return chk;
}

} // namespace mbs
