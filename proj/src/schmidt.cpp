#include "mbs/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mbs {

std::string Bipartition::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < left.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(left[i]);
    }
    s += '|';
    for (std::size_t i = 0; i < right.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(right[i]);
    }
    return s;
}

std::vector<Bipartition> bipartitions(int modes) {
    if (modes < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two modes");
    if (modes > 12)
        throw Error(ErrorCode::TooManyModes,
                    "enumerating bipartitions of " + std::to_string(modes) +
                        " modes exceeds the supported 12");
    std::vector<Bipartition> splits;
    const std::uint32_t all = (1u << (modes - 1)) - 1u;
    for (std::uint32_t mask = 0; mask < all; ++mask) {
        Bipartition b;
        b.left.push_back(1);
        for (int j = 0; j < modes - 1; ++j) {
            if (mask & (1u << j))
                b.left.push_back(j + 2);
            else
                b.right.push_back(j + 2);
        }
        splits.push_back(std::move(b));
    }
    return splits;
}

namespace {

Eigen::MatrixXcd reshape_across(const ModeTensor& state, const Bipartition& split) {
    const int d = state.dim;
    std::size_t rows = 1, cols = 1;
    for (std::size_t i = 0; i < split.left.size(); ++i) rows *= static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < split.right.size(); ++i) cols *= static_cast<std::size_t>(d);
    if (rows * cols != state.size())
        throw Error(ErrorCode::ShapeMismatch, "bipartition does not cover all modes");

    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::vector<int> digits(static_cast<std::size_t>(state.modes));
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        state.unflatten(flat, digits);
        std::size_t r = 0, c = 0;
        for (int mode : split.left) r = r * static_cast<std::size_t>(d) +
                                        static_cast<std::size_t>(digits[static_cast<std::size_t>(mode - 1)]);
        for (int mode : split.right) c = c * static_cast<std::size_t>(d) +
                                         static_cast<std::size_t>(digits[static_cast<std::size_t>(mode - 1)]);
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state.amp[flat];
    }
    return m;
}

} // namespace

Eigen::VectorXd schmidt_spectrum(const ModeTensor& state, const Bipartition& split) {
    if (state.norm() < 1e-12)
        throw Error(ErrorCode::ZeroState, "cannot rank a numerically zero state");
    Eigen::MatrixXcd m = reshape_across(state, split);
    if (m.rows() > m.cols()) m = m.adjoint().eval();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
}

int schmidt_rank(const ModeTensor& state, const Bipartition& split, double tol) {
    const Eigen::VectorXd sv = schmidt_spectrum(state, split);
    const double cut = tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return rank;
}

bool is_genuinely_entangled(const ModeTensor& state, double tol) {
    for (const auto& split : bipartitions(state.modes))
        if (schmidt_rank(state, split, tol) < 2) return false;
    return true;
}

namespace {

// Digits of a flat index over the m-1 remaining modes, ascending mode order,
// first remaining mode slowest.
void rest_digits(std::size_t flat, int d, std::span<int> out) {
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<int>(flat % static_cast<std::size_t>(d));
        flat /= static_cast<std::size_t>(d);
    }
}

// Gauss-Newton refinement of a near-member product vector: drives the
// residual (I - UU†)(⊗ v_j) to zero.  The alternating stage can stall on
// ridges where the ratio creeps toward 1 while the factors still sit a few
// degrees away from the true member; quadratic refinement collapses those
// stalls onto the member itself so deduplication can merge them.  Returns
// the squared membership ratio 1 - ||r||^2 actually reached.
double gauss_newton_polish(const Eigen::MatrixXcd& u, std::vector<Eigen::VectorXcd>& v,
                           int d, std::size_t rest_dim) {
    const int factors = static_cast<int>(v.size());
    std::vector<int> rdig(static_cast<std::size_t>(factors));

    auto product_vector = [&]() {
        Eigen::VectorXcd w(static_cast<Eigen::Index>(rest_dim));
        for (std::size_t row = 0; row < rest_dim; ++row) {
            rest_digits(row, d, rdig);
            Complex prod{1.0, 0.0};
            for (int j = 0; j < factors; ++j)
                prod *= v[static_cast<std::size_t>(j)](rdig[static_cast<std::size_t>(j)]);
            w(static_cast<Eigen::Index>(row)) = prod;
        }
        return w;
    };
    auto residual_of = [&](const Eigen::VectorXcd& w) {
        return Eigen::VectorXcd(w - u * (u.adjoint() * w));
    };

    Eigen::VectorXcd w = product_vector();
    Eigen::VectorXcd r = residual_of(w);
    double res = r.norm();

    for (int iter = 0; iter < 50 && res > 1e-13; ++iter) {
        // The residual is linear in each factor, so scaling any factor moves
        // the residual radially: J applied to the stacked factors reproduces
        // (m-1) r.  Steps must therefore live in each factor's orthogonal
        // complement, or the least-squares solution degenerates into a pure
        // rescaling that normalization undoes.
        Eigen::MatrixXcd jac(static_cast<Eigen::Index>(rest_dim),
                             static_cast<Eigen::Index>(factors) * (d - 1));
        std::vector<Eigen::MatrixXcd> tangent(static_cast<std::size_t>(factors));
        for (int j = 0; j < factors; ++j) {
            Eigen::MatrixXcd wj =
                Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rest_dim), d);
            for (std::size_t row = 0; row < rest_dim; ++row) {
                rest_digits(row, d, rdig);
                Complex prod{1.0, 0.0};
                for (int l = 0; l < factors; ++l)
                    if (l != j)
                        prod *= v[static_cast<std::size_t>(l)](rdig[static_cast<std::size_t>(l)]);
                wj(static_cast<Eigen::Index>(row), rdig[static_cast<std::size_t>(j)]) = prod;
            }
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v[static_cast<std::size_t>(j)]);
            const Eigen::MatrixXcd q =
                Eigen::MatrixXcd(qr.householderQ()).rightCols(d - 1);
            tangent[static_cast<std::size_t>(j)] = q;
            const Eigen::MatrixXcd block = wj * q;
            jac.middleCols(static_cast<Eigen::Index>(j) * (d - 1), d - 1) =
                block - u * (u.adjoint() * block);
        }

        Eigen::BDCSVD<Eigen::MatrixXcd> lsq(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXcd delta = lsq.solve(-r);

        // Backtracking keeps the step from overshooting far from a root.
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 6; ++half) {
            std::vector<Eigen::VectorXcd> trial = v;
            for (int j = 0; j < factors; ++j) {
                trial[static_cast<std::size_t>(j)] +=
                    scale * (tangent[static_cast<std::size_t>(j)] *
                             delta.segment(static_cast<Eigen::Index>(j) * (d - 1), d - 1));
                trial[static_cast<std::size_t>(j)].normalize();
            }
            std::swap(v, trial);
            const Eigen::VectorXcd w_new = product_vector();
            const Eigen::VectorXcd r_new = residual_of(w_new);
            if (r_new.norm() < res) {
                res = r_new.norm();
                r = r_new;
                improved = true;
                break;
            }
            std::swap(v, trial);
            scale *= 0.5;
        }
        if (!improved) break;
    }
    return 1.0 - res * res;
}

} // namespace

ProductSearchResult product_state_count(const ModeTensor& state, int traced_mode,
                                        const ProductSearchConfig& config) {
    const int m = state.modes;
    const int d = state.dim;
    if (m < 3)
        throw Error(ErrorCode::InvalidArgument,
                    "product census needs at least three modes");
    if (traced_mode < 1 || traced_mode > m)
        throw Error(ErrorCode::InvalidArgument, "traced mode outside 1..modes");
    if (state.norm() < 1e-12)
        throw Error(ErrorCode::ZeroState, "cannot census a numerically zero state");

    std::size_t rest_dim = 1;
    for (int j = 0; j < m - 1; ++j) rest_dim *= static_cast<std::size_t>(d);
    if (rest_dim > 4096)
        throw Error(ErrorCode::TooLarge,
                    "remaining space dimension d^(m-1) exceeds 4096");

    // Reshape with the traced mode as columns; the left singular vectors
    // span the range of the reduced state.
    const int traced = traced_mode - 1;
    Eigen::MatrixXcd k(static_cast<Eigen::Index>(rest_dim), d);
    std::vector<int> digits(static_cast<std::size_t>(m));
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        state.unflatten(flat, digits);
        std::size_t row = 0;
        for (int j = 0; j < m; ++j)
            if (j != traced)
                row = row * static_cast<std::size_t>(d) +
                      static_cast<std::size_t>(digits[static_cast<std::size_t>(j)]);
        k(static_cast<Eigen::Index>(row), digits[static_cast<std::size_t>(traced)]) =
            state.amp[flat];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeThinU);
    const double s_max = svd.singularValues()(0);
    int range_dim = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > config.range_tol * s_max) ++range_dim;
    const Eigen::MatrixXcd u = svd.matrixU().leftCols(range_dim);

    const int factors = m - 1;
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&]() {
        Eigen::VectorXcd v(d);
        for (int x = 0; x < d; ++x) v(x) = Complex{gauss(rng), gauss(rng)};
        return Eigen::VectorXcd(v / v.norm());
    };

    ProductSearchResult result;
    std::vector<int> rdig(static_cast<std::size_t>(factors));
    const double dedup_overlap = std::cos(config.dedup_angle);

    for (int restart = 0; restart < config.restarts; ++restart) {
        std::vector<Eigen::VectorXcd> v(static_cast<std::size_t>(factors));
        for (auto& f : v) f = random_unit();

        double ratio = 0.0;
        double prev = -1.0;
        for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
            for (int i = 0; i < factors; ++i) {
                Eigen::MatrixXcd mi = Eigen::MatrixXcd::Zero(d, d);
                for (int ell = 0; ell < range_dim; ++ell) {
                    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(d);
                    for (std::size_t row = 0; row < rest_dim; ++row) {
                        rest_digits(row, d, rdig);
                        Complex prod = u(static_cast<Eigen::Index>(row), ell);
                        for (int j = 0; j < factors; ++j)
                            if (j != i)
                                prod *= std::conj(
                                    v[static_cast<std::size_t>(j)](rdig[static_cast<std::size_t>(j)]));
                        c(rdig[static_cast<std::size_t>(i)]) += prod;
                    }
                    mi.noalias() += c * c.adjoint();
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mi);
                const Eigen::Index top = es.eigenvalues().size() - 1;
                v[static_cast<std::size_t>(i)] = es.eigenvectors().col(top);
                ratio = es.eigenvalues()(top);
            }
            if (std::abs(ratio - prev) < config.convergence) break;
            prev = ratio;
        }

        // Refine anything that came close; the polish either lands on a
        // member at machine precision or exposes the restart as a miss.
        if (ratio >= 0.999) ratio = gauss_newton_polish(u, v, d, rest_dim);
        if (ratio < 1.0 - config.membership_tol) {
            ++result.failed_restarts;
            continue;
        }

        bool duplicate = false;
        for (const auto& w : result.witnesses) {
            bool all_match = true;
            for (int i = 0; i < factors; ++i) {
                const double overlap = std::abs(
                    w.factors[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(i)]));
                if (overlap < dedup_overlap) {
                    all_match = false;
                    break;
                }
            }
            if (all_match) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) result.witnesses.push_back(ProductWitness{v, ratio});
    }

    result.count = static_cast<int>(result.witnesses.size());
    return result;
}

} // namespace mbs
