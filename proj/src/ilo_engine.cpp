#include "mbs/ilo_engine.hpp"

#include <cmath>

namespace mbs {

namespace {

constexpr double kGramConditionLimit = 1e12;

Eigen::MatrixXcd coherent_columns(const std::vector<CatTerm>& terms, int modes, int dim) {
    Eigen::MatrixXcd vs(dim, static_cast<Eigen::Index>(terms.size()));
    const double root_m = std::sqrt(static_cast<double>(modes));
    for (std::size_t k = 0; k < terms.size(); ++k)
        vs.col(static_cast<Eigen::Index>(k)) =
            coherent_mode_vector(terms[k].alpha / root_m, dim).amp;
    return vs;
}

double gram_condition_of(const Eigen::MatrixXcd& set) {
    const Eigen::MatrixXcd gram = set.adjoint() * set;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (!(lo > 0.0))
        throw Error(ErrorCode::IllConditionedGram,
                    "Gram matrix of the reduction set is numerically singular");
    return hi / lo;
}

// Gram-Schmidt images of `vecs` against `prefix` (already orthonormal) and
// each other; two projection passes keep the images orthonormal to working
// precision even for nearly parallel inputs.
Eigen::MatrixXcd orthonormal_images(const Eigen::MatrixXcd& prefix,
                                    const Eigen::MatrixXcd& vecs) {
    const Eigen::Index d = vecs.rows();
    Eigen::MatrixXcd images(d, vecs.cols());
    for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
        Eigen::VectorXcd w = vecs.col(k);
        const double original = w.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index p = 0; p < prefix.cols(); ++p)
                w -= prefix.col(p).dot(w) * prefix.col(p);
            for (Eigen::Index p = 0; p < k; ++p)
                w -= images.col(p).dot(w) * images.col(p);
        }
        const double remainder = w.norm();
        if (remainder < 1e-14 * original)
            throw Error(ErrorCode::IllConditionedGram,
                        "reduction vector " + std::to_string(k) +
                            " lies in the span of its predecessors");
        images.col(k) = w / remainder;
    }
    return images;
}

// Columns completing `basis` (orthonormal columns) to a unitary.
Eigen::MatrixXcd orthonormal_complement(const Eigen::MatrixXcd& basis) {
    const Eigen::Index d = basis.rows();
    if (basis.cols() == 0) return Eigen::MatrixXcd::Identity(d, d);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd rest = q.rightCols(d - basis.cols());
    // Q's leading columns span the basis only up to phase; re-project so the
    // complement is exactly orthogonal to the given columns.
    for (Eigen::Index k = 0; k < rest.cols(); ++k) {
        Eigen::VectorXcd w = rest.col(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index p = 0; p < basis.cols(); ++p)
                w -= basis.col(p).dot(w) * basis.col(p);
            for (Eigen::Index p = 0; p < k; ++p)
                w -= rest.col(p).dot(w) * rest.col(p);
        }
        rest.col(k) = w / w.norm();
    }
    return rest;
}

void check_weights(const std::vector<CatTerm>& terms) {
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (std::abs(terms[k].weight) == 0.0)
            throw Error(ErrorCode::ZeroCatCoefficient,
                        "coherent term " + std::to_string(k) + " has zero weight");
}

} // namespace

std::vector<Complex> to_uniform_coeffs(const std::vector<Complex>& coeffs, int modes) {
    if (coeffs.empty())
        throw Error(ErrorCode::InvalidArgument, "need at least one coefficient");
    std::vector<Complex> h(coeffs.size());
    double factor = 1.0; // sqrt(n! / m^n), built up term by term
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (n > 0) factor *= std::sqrt(static_cast<double>(n) / static_cast<double>(modes));
        h[n] = coeffs[n] * factor;
    }
    return h;
}

LocalOperator factorial_rescale_op(int level, int dim) {
    Eigen::VectorXcd diag(dim);
    double f = 1.0;
    for (int n = 0; n < dim; ++n) {
        if (n > 0 && n <= level) f *= std::sqrt(static_cast<double>(n));
        diag(n) = (n <= level) ? Complex{f, 0.0} : Complex{1.0, 0.0};
    }
    return LocalOperator::diagonal(diag);
}

EliminationOps elimination_ops(const std::vector<Complex>& h, int dim) {
    const int level = static_cast<int>(h.size()) - 1;
    if (level < 0)
        throw Error(ErrorCode::InvalidArgument, "need at least one shell weight");
    if (level >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "shell weights reach n=" + std::to_string(level) + " but cutoff is " +
                        std::to_string(dim));
    double max_abs = 0.0;
    for (const Complex& x : h) max_abs = std::max(max_abs, std::abs(x));
    const Complex top = h[static_cast<std::size_t>(level)];
    if (std::abs(top) <= 1e-12 * max_abs)
        throw Error(ErrorCode::DegenerateLeadingCoefficient,
                    "top shell weight h_" + std::to_string(level) +
                        " is negligible; elimination cannot pivot on it");

    EliminationOps ops{{}, LocalOperator::scalar(dim, Complex{1.0, 0.0} / top)};
    for (int k = 0; k < level; ++k) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim);
        for (int n = k; n < level; ++n)
            a(n - k, level - k) = -h[static_cast<std::size_t>(n)] / top;
        ops.stages.emplace_back(std::move(a));
    }
    return ops;
}

CatReductionOps cat_reduction_ops(const std::vector<CatTerm>& terms, int modes, int dim,
                                  double state_norm) {
    const int r = static_cast<int>(terms.size());
    if (r < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one coherent term");
    if (r > dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    std::to_string(r) + " coherent vectors cannot be independent in dimension " +
                        std::to_string(dim));
    check_weights(terms);
    if (!(state_norm > 0.0))
        throw Error(ErrorCode::ZeroState, "state norm must be positive");

    const Eigen::MatrixXcd vs = coherent_columns(terms, modes, dim);
    const double kappa = gram_condition_of(vs);
    if (kappa > kGramConditionLimit)
        throw Error(ErrorCode::IllConditionedGram,
                    "coherent Gram condition " + std::to_string(kappa) + " exceeds 1e12");

    const Eigen::MatrixXcd chi = orthonormal_images(Eigen::MatrixXcd(dim, 0), vs);
    const Eigen::MatrixXcd u = orthonormal_complement(chi);

    Eigen::MatrixXcd from(dim, dim), to(dim, dim);
    from << vs, u;
    to << chi, u;

    Eigen::VectorXcd t_diag = Eigen::VectorXcd::Ones(dim);
    for (int k = 0; k < r; ++k) t_diag(k) = Complex{1.0, 0.0} / terms[static_cast<std::size_t>(k)].weight;

    Eigen::MatrixXcd basis(dim, dim);
    basis << chi, u;

    CatReductionOps ops{
        LocalOperator(to * from.inverse()),
        LocalOperator(basis.adjoint()),
        LocalOperator::diagonal(t_diag),
        LocalOperator::scalar(dim, Complex{state_norm / std::sqrt(static_cast<double>(r)), 0.0}),
        kappa};
    return ops;
}

HybridReductionOps hybrid_reduction_ops(const std::vector<Complex>& coeffs,
                                        const std::vector<CatTerm>& terms, int modes, int dim,
                                        double state_norm) {
    if (coeffs.empty())
        throw Error(ErrorCode::InvalidArgument, "need a number part");
    const int level = static_cast<int>(coeffs.size()) - 1;
    const int r = static_cast<int>(terms.size());
    if (level + r + 1 > dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "number block through n=" + std::to_string(level) + " plus " +
                        std::to_string(r) + " coherent directions need cutoff >= " +
                        std::to_string(level + r + 1));
    check_weights(terms);
    if (!(state_norm > 0.0))
        throw Error(ErrorCode::ZeroState, "state norm must be positive");

    const Eigen::MatrixXcd prefix =
        Eigen::MatrixXcd::Identity(dim, dim).leftCols(level + 1);
    const Eigen::MatrixXcd vs = coherent_columns(terms, modes, dim);

    double kappa = 1.0;
    if (r > 0) {
        Eigen::MatrixXcd set(dim, level + 1 + r);
        set << prefix, vs;
        kappa = gram_condition_of(set);
        if (kappa > kGramConditionLimit)
            throw Error(ErrorCode::IllConditionedGram,
                        "Gram condition " + std::to_string(kappa) +
                            " of the number-plus-coherent set exceeds 1e12");
    }

    const Eigen::MatrixXcd mu = orthonormal_images(prefix, vs);
    Eigen::MatrixXcd fixed(dim, level + 1 + r);
    fixed << prefix, mu;
    const Eigen::MatrixXcd u = orthonormal_complement(fixed);

    Eigen::MatrixXcd from(dim, dim), to(dim, dim);
    from << prefix, vs, u;
    to << prefix, mu, u;

    Eigen::MatrixXcd basis(dim, dim);
    basis << prefix, mu, u;

    Eigen::VectorXcd q_diag = Eigen::VectorXcd::Ones(dim);
    for (int k = 0; k < r; ++k)
        q_diag(level + 1 + k) = Complex{1.0, 0.0} / terms[static_cast<std::size_t>(k)].weight;

    const std::vector<Complex> h = to_uniform_coeffs(coeffs, modes);
    EliminationOps elim = elimination_ops(h, dim);
    const Complex top = h.back();

    Eigen::VectorXcd repair_diag = Eigen::VectorXcd::Ones(dim);
    for (int n = level + 1; n < dim; ++n) repair_diag(n) = top;

    HybridReductionOps ops{LocalOperator(to * from.inverse()),
                           LocalOperator(basis.adjoint()),
                           LocalOperator::scalar(dim, Complex{state_norm, 0.0}),
                           LocalOperator::diagonal(q_diag),
                           factorial_rescale_op(level, dim),
                           std::move(elim),
                           LocalOperator::diagonal(repair_diag),
                           kappa};
    return ops;
}

ModeTensor ghz_state(int r, int modes, int dim) {
    if (r < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one diagonal term");
    if (r > dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    std::to_string(r) + " diagonal terms need cutoff >= " + std::to_string(r));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    const double w = 1.0 / std::sqrt(static_cast<double>(r));
    std::vector<int> idx(static_cast<std::size_t>(modes));
    for (int k = 0; k < r; ++k) {
        std::fill(idx.begin(), idx.end(), k);
        out.amp[out.flat(idx)] = Complex{w, 0.0};
    }
    out.normalized = true;
    return out;
}

ModeTensor hybrid_representative(int level, int r, int modes, int dim) {
    if (level < 0 || r < 1)
        throw Error(ErrorCode::InvalidArgument, "need level >= 0 and at least one diagonal term");
    if (level + r >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "representative reaches n=" + std::to_string(level + r) +
                        " and needs cutoff >= " + std::to_string(level + r + 1));
    ModeTensor out = uniform_state(level, modes, dim);
    std::vector<int> idx(static_cast<std::size_t>(modes));
    for (int n = level + 1; n <= level + r; ++n) {
        std::fill(idx.begin(), idx.end(), n);
        out.amp[out.flat(idx)] = Complex{1.0, 0.0};
    }
    return out;
}

IloCertificate number_certificate(const std::vector<Complex>& coeffs, int modes, int dim) {
    if (coeffs.empty())
        throw Error(ErrorCode::InvalidArgument, "need at least one coefficient");
    const int level = static_cast<int>(coeffs.size()) - 1;

    double norm_sq = 0.0;
    for (const Complex& c : coeffs) norm_sq += std::norm(c);
    if (!(norm_sq > 0.0))
        throw Error(ErrorCode::ZeroState, "coefficients are all zero");
    std::vector<Complex> unit(coeffs.size());
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (std::size_t n = 0; n < coeffs.size(); ++n) unit[n] = coeffs[n] * inv_norm;

    const std::vector<Complex> h = to_uniform_coeffs(unit, modes);
    EliminationOps elim = elimination_ops(h, dim);

    IloCertificate cert("balanced splitter output", "uniform shell-" + std::to_string(level));
    const LocalOperator rescale = factorial_rescale_op(level, dim);
    for (int q = 1; q <= modes; ++q) cert.add_step(q, rescale);
    for (auto& stage : elim.stages) cert.add_step(1, std::move(stage));
    cert.add_step(1, std::move(elim.scale));
    return cert;
}

IloCertificate cat_certificate(const std::vector<CatTerm>& terms, int modes, int dim,
                               double state_norm) {
    CatReductionOps ops = cat_reduction_ops(terms, modes, dim, state_norm);
    IloCertificate cert("balanced splitter output",
                        "diagonal rank-" + std::to_string(terms.size()));
    for (int q = 1; q <= modes; ++q) cert.add_step(q, ops.B);
    for (int q = 1; q <= modes; ++q) cert.add_step(q, ops.W);
    cert.add_step(1, std::move(ops.T));
    cert.add_step(1, std::move(ops.S));
    return cert;
}

IloCertificate hybrid_certificate(const std::vector<Complex>& coeffs,
                                  const std::vector<CatTerm>& terms, int modes, int dim,
                                  double state_norm) {
    HybridReductionOps ops = hybrid_reduction_ops(coeffs, terms, modes, dim, state_norm);
    const int level = static_cast<int>(coeffs.size()) - 1;
    IloCertificate cert("balanced splitter output",
                        "uniform shell-" + std::to_string(level) + " plus diagonal rank-" +
                            std::to_string(terms.size()));
    for (int q = 1; q <= modes; ++q) cert.add_step(q, ops.F);
    for (int q = 1; q <= modes; ++q) cert.add_step(q, ops.V);
    cert.add_step(1, std::move(ops.P));
    cert.add_step(1, std::move(ops.Q));
    for (int q = 1; q <= modes; ++q) cert.add_step(q, ops.G);
    for (auto& stage : ops.elim.stages) cert.add_step(1, std::move(stage));
    cert.add_step(1, std::move(ops.elim.scale));
    cert.add_step(1, std::move(ops.repair));
    return cert;
}

double coherent_gram_condition(const std::vector<CatTerm>& terms, int modes, int dim,
                               int number_level) {
    if (terms.empty()) return 1.0;
    const Eigen::MatrixXcd vs = coherent_columns(terms, modes, dim);
    if (number_level < 0) return gram_condition_of(vs);
    Eigen::MatrixXcd set(dim, number_level + 1 + static_cast<int>(terms.size()));
    set << Eigen::MatrixXcd::Identity(dim, dim).leftCols(number_level + 1), vs;
    return gram_condition_of(set);
}

} // namespace mbs
