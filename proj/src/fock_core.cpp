#include "mbs/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbs {

namespace {

// Product of i consecutive integers is divisible by i!, so the running
// value stays integral (exact in double until 2^53).
double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<double>(n - k + i);
        r /= static_cast<double>(i);
    }
    return r;
}

void check_gamma(const std::vector<Complex>& gamma, double norm_tol) {
    if (gamma.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two scattering amplitudes");
    double norm_sq = 0.0;
    for (std::size_t q = 0; q < gamma.size(); ++q) {
        const double a = std::abs(gamma[q]);
        if (a == 0.0)
            throw Error(ErrorCode::ZeroScatteringAmplitude,
                        "scattering amplitude for mode " + std::to_string(q + 1) + " is zero");
        norm_sq += a * a;
    }
    if (std::abs(norm_sq - 1.0) > norm_tol)
        throw Error(ErrorCode::NotNormalizedScattering,
                    "scattering amplitudes have squared norm " + std::to_string(norm_sq) +
                        ", expected 1");
}

void check_cat_terms(const std::vector<CatTerm>& terms) {
    if (terms.empty())
        throw Error(ErrorCode::InvalidArgument, "coherent part needs at least one term");
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (std::abs(terms[k].weight) == 0.0)
            throw Error(ErrorCode::ZeroCatCoefficient,
                        "coherent term " + std::to_string(k) + " has zero weight");
    }
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (std::abs(terms[i].alpha - terms[j].alpha) < 1e-9)
                throw Error(ErrorCode::CoincidentCoherentAmplitudes,
                            "coherent amplitudes " + std::to_string(i) + " and " +
                                std::to_string(j) + " coincide within 1e-9");
}

double max_coherent_rate(const std::vector<CatTerm>& terms, int modes) {
    double lambda = 0.0;
    for (const auto& t : terms)
        lambda = std::max(lambda, std::norm(t.alpha) / static_cast<double>(modes));
    return lambda;
}

} // namespace

double multinomial(int n, std::span<const int> parts) {
    double r = 1.0;
    int acc = 0;
    for (int p : parts) {
        acc += p;
        r *= binomial(acc, p);
    }
    if (acc != n)
        throw Error(ErrorCode::InvalidArgument, "parts do not sum to n");
    return r;
}

std::vector<double> sqrt_factorials(int n_max) {
    if (n_max > 170)
        throw Error(ErrorCode::TooLarge, "factorials overflow double beyond 170!");
    std::vector<double> s(static_cast<std::size_t>(n_max) + 1);
    double f = 1.0;
    s[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        f *= static_cast<double>(n);
        s[static_cast<std::size_t>(n)] = std::sqrt(f);
    }
    return s;
}

ModeTensor number_mbs_output(int n, int modes, int dim) {
    if (n < 0)
        throw Error(ErrorCode::InvalidArgument, "photon number must be nonnegative");
    if (n >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "photon number " + std::to_string(n) + " needs cutoff >= " +
                        std::to_string(n + 1));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    const double scale = std::pow(static_cast<double>(modes), -0.5 * static_cast<double>(n));
    for_each_composition(n, modes, dim, [&](std::span<const int> parts) {
        out.amp[out.flat(parts)] = scale * std::sqrt(multinomial(n, parts));
    });
    out.normalized = true;
    return out;
}

ModeTensor uniform_state(int n, int modes, int dim) {
    if (n < 0)
        throw Error(ErrorCode::InvalidArgument, "photon number must be nonnegative");
    if (n >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "shell " + std::to_string(n) + " needs cutoff >= " + std::to_string(n + 1));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    for_each_composition(n, modes, dim, [&](std::span<const int> parts) {
        out.amp[out.flat(parts)] = Complex{1.0, 0.0};
    });
    return out;
}

ModeTensor uniform_sum_state(int level, int modes, int dim) {
    if (level < 0)
        throw Error(ErrorCode::InvalidArgument, "level must be nonnegative");
    if (level >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "level " + std::to_string(level) + " needs cutoff >= " +
                        std::to_string(level + 1));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    for (int n = 0; n <= level; ++n)
        for_each_composition(n, modes, dim, [&](std::span<const int> parts) {
            out.amp[out.flat(parts)] = Complex{1.0, 0.0};
        });
    return out;
}

ModeTensor superpose(const std::vector<std::pair<Complex, const ModeTensor*>>& terms) {
    if (terms.empty())
        throw Error(ErrorCode::InvalidArgument, "superposition needs at least one term");
    ModeTensor out = ModeTensor::zeros(terms.front().second->modes, terms.front().second->dim);
    for (const auto& [w, state] : terms) {
        if (!out.same_shape(*state))
            throw Error(ErrorCode::ShapeMismatch, "superposition terms differ in shape");
        for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] += w * state->amp[i];
    }
    return out;
}

CoherentVector coherent_mode_vector(Complex alpha, int dim) {
    if (dim < 1)
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    CoherentVector v;
    v.amp = Eigen::VectorXcd(dim);
    v.amp(0) = Complex{std::exp(-0.5 * std::norm(alpha)), 0.0};
    for (int n = 1; n < dim; ++n)
        v.amp(n) = v.amp(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    v.deficit = std::max(0.0, 1.0 - v.amp.squaredNorm());
    return v;
}

int auto_cutoff(double lambda, double epsilon) {
    if (lambda < 0.0 || !(epsilon > 0.0))
        throw Error(ErrorCode::InvalidArgument, "need lambda >= 0 and epsilon > 0");
    if (lambda == 0.0) return 1;
    long double term = std::exp(-static_cast<long double>(lambda));
    long double cum = term;
    for (int d = 1; d <= 1024; ++d) {
        if (1.0L - cum < static_cast<long double>(epsilon)) return d;
        term *= static_cast<long double>(lambda) / static_cast<long double>(d);
        cum += term;
    }
    throw Error(ErrorCode::TooLarge, "auto cutoff exceeds 1024");
}

ModeTensor coherent_mbs_output(Complex alpha, int modes, int dim, double tolerance) {
    const Complex beta = alpha / std::sqrt(static_cast<double>(modes));
    const CoherentVector v = coherent_mode_vector(beta, dim);
    if (v.deficit >= tolerance)
        throw Error(ErrorCode::CutoffTooSmall,
                    "per-mode truncation deficit " + std::to_string(v.deficit) +
                        " reaches the tolerance " + std::to_string(tolerance));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    std::vector<int> digits(static_cast<std::size_t>(modes));
    for (std::size_t i = 0; i < out.amp.size(); ++i) {
        out.unflatten(i, digits);
        Complex a{1.0, 0.0};
        for (int k = 0; k < modes; ++k) a *= v.amp(digits[static_cast<std::size_t>(k)]);
        out.amp[i] = a;
    }
    return out;
}

ModeTensor general_mbs_output(const std::vector<Complex>& coeffs,
                              const std::vector<Complex>& gamma, int dim, double norm_tol) {
    check_gamma(gamma, norm_tol);
    if (coeffs.empty())
        throw Error(ErrorCode::InvalidArgument, "need at least one coefficient");
    const int modes = static_cast<int>(gamma.size());
    const int level = static_cast<int>(coeffs.size()) - 1;
    if (level >= dim)
        throw Error(ErrorCode::CutoffTooSmall,
                    "top coefficient at n=" + std::to_string(level) + " needs cutoff >= " +
                        std::to_string(level + 1));
    ModeTensor out = ModeTensor::zeros(modes, dim);
    for (int n = 0; n <= level; ++n) {
        const Complex cn = coeffs[static_cast<std::size_t>(n)];
        if (std::abs(cn) == 0.0) continue;
        for_each_composition(n, modes, dim, [&](std::span<const int> parts) {
            Complex a = cn * std::sqrt(multinomial(n, parts));
            for (int q = 0; q < modes; ++q)
                a *= std::pow(gamma[static_cast<std::size_t>(q)],
                              static_cast<double>(parts[static_cast<std::size_t>(q)]));
            out.amp[out.flat(parts)] = a;
        });
    }
    return out;
}

std::vector<LocalOperator> balancing_operators(const std::vector<Complex>& gamma, int dim) {
    check_gamma(gamma, 1e-8);
    const double root_m = std::sqrt(static_cast<double>(gamma.size()));
    std::vector<LocalOperator> ops;
    ops.reserve(gamma.size());
    for (const Complex& g : gamma) {
        Eigen::VectorXcd diag(dim);
        const Complex base = Complex{1.0, 0.0} / (g * root_m);
        Complex cur{1.0, 0.0};
        for (int n = 0; n < dim; ++n) {
            diag(n) = cur;
            cur *= base;
        }
        ops.push_back(LocalOperator::diagonal(diag));
    }
    return ops;
}

IloCertificate balancing_certificate(const std::vector<Complex>& gamma, int dim,
                                     std::string source_label, std::string target_label) {
    IloCertificate cert(std::move(source_label), std::move(target_label));
    auto ops = balancing_operators(gamma, dim);
    for (std::size_t q = 0; q < ops.size(); ++q)
        cert.add_step(static_cast<int>(q) + 1, std::move(ops[q]));
    cert.set_global_scalar(Complex{1.0, 0.0});
    return cert;
}

std::vector<Complex> trim_trailing_zeros(const std::vector<Complex>& coeffs, double tol,
                                         std::vector<std::string>* warnings) {
    double max_abs = 0.0;
    for (const Complex& c : coeffs) max_abs = std::max(max_abs, std::abs(c));
    std::vector<Complex> out = coeffs;
    while (!out.empty() && std::abs(out.back()) <= tol * max_abs) out.pop_back();
    if (warnings && out.size() != coeffs.size())
        warnings->push_back("trimmed " + std::to_string(coeffs.size() - out.size()) +
                            " trailing zero coefficient(s); top level is now n=" +
                            std::to_string(static_cast<int>(out.size()) - 1));
    return out;
}

void validate_input(const InputSpec& spec) {
    if (spec.modes < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two output modes");
    if (!(spec.tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (spec.cutoff && *spec.cutoff < 1)
        throw Error(ErrorCode::InvalidArgument, "cutoff must be positive");

    if (const auto* num = std::get_if<NumberSuperposition>(&spec.input)) {
        if (trim_trailing_zeros(num->coefficients, 1e-14, nullptr).empty())
            throw Error(ErrorCode::InvalidArgument, "number coefficients are all zero");
    } else if (const auto* cat = std::get_if<CatState>(&spec.input)) {
        check_cat_terms(cat->terms);
    } else {
        const auto& hyb = std::get<HybridState>(spec.input);
        check_cat_terms(hyb.terms);
        if (trim_trailing_zeros(hyb.coefficients, 1e-14, nullptr).empty())
            throw Error(ErrorCode::InvalidArgument,
                        "hybrid input needs a nonzero number part; use a cat input instead");
    }
}

BuiltOutput build_mbs_output(const InputSpec& spec, std::optional<int> force_dim) {
    validate_input(spec);

    BuiltOutput built;

    auto resolve_dim = [&](int minimum, int auto_value) {
        int d = auto_value;
        if (spec.cutoff) d = *spec.cutoff;
        if (force_dim) d = *force_dim;
        if (d < minimum)
            throw Error(ErrorCode::CutoffTooSmall,
                        "cutoff " + std::to_string(d) + " below the minimum " +
                            std::to_string(minimum) + " for this input");
        return d;
    };

    if (const auto* num = std::get_if<NumberSuperposition>(&spec.input)) {
        built.coefficients = trim_trailing_zeros(num->coefficients, 1e-14, &built.warnings);
        if (built.coefficients.empty())
            throw Error(ErrorCode::InvalidArgument, "number coefficients are all zero");
        built.number_level = static_cast<int>(built.coefficients.size()) - 1;
        built.dim = resolve_dim(built.number_level + 1, built.number_level + 1);

        std::vector<ModeTensor> shells;
        shells.reserve(built.coefficients.size());
        for (int n = 0; n <= built.number_level; ++n)
            shells.push_back(number_mbs_output(n, spec.modes, built.dim));
        std::vector<std::pair<Complex, const ModeTensor*>> terms;
        for (int n = 0; n <= built.number_level; ++n)
            terms.emplace_back(built.coefficients[static_cast<std::size_t>(n)],
                               &shells[static_cast<std::size_t>(n)]);
        built.state = superpose(terms);
        return built;
    }

    if (const auto* cat = std::get_if<CatState>(&spec.input)) {
        check_cat_terms(cat->terms);
        built.terms = cat->terms;
        built.cat_rank = static_cast<int>(cat->terms.size());
        const int auto_d = std::max(auto_cutoff(max_coherent_rate(cat->terms, spec.modes),
                                                spec.tolerance),
                                    built.cat_rank);
        built.dim = resolve_dim(built.cat_rank, auto_d);

        built.state = ModeTensor::zeros(spec.modes, built.dim);
        for (const auto& t : cat->terms) {
            const Complex beta = t.alpha / std::sqrt(static_cast<double>(spec.modes));
            built.max_deficit =
                std::max(built.max_deficit, coherent_mode_vector(beta, built.dim).deficit);
            ModeTensor part = coherent_mbs_output(t.alpha, spec.modes, built.dim, spec.tolerance);
            for (std::size_t i = 0; i < built.state.amp.size(); ++i)
                built.state.amp[i] += t.weight * part.amp[i];
        }
        if (built.state.norm() < 1e-12)
            throw Error(ErrorCode::ZeroState, "coherent terms cancel to a numerically zero state");
        return built;
    }

    const auto& hyb = std::get<HybridState>(spec.input);
    check_cat_terms(hyb.terms);
    built.coefficients = trim_trailing_zeros(hyb.coefficients, 1e-14, &built.warnings);
    if (built.coefficients.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "hybrid input needs a nonzero number part; use a cat input instead");
    built.terms = hyb.terms;
    built.number_level = static_cast<int>(built.coefficients.size()) - 1;
    built.cat_rank = static_cast<int>(hyb.terms.size());

    const int minimum = built.number_level + built.cat_rank + 1;
    const int auto_d = std::max(auto_cutoff(max_coherent_rate(hyb.terms, spec.modes),
                                            spec.tolerance),
                                minimum);
    built.dim = resolve_dim(minimum, auto_d);

    built.state = ModeTensor::zeros(spec.modes, built.dim);
    for (int n = 0; n <= built.number_level; ++n) {
        const Complex cn = built.coefficients[static_cast<std::size_t>(n)];
        if (std::abs(cn) == 0.0) continue;
        ModeTensor shell = number_mbs_output(n, spec.modes, built.dim);
        for (std::size_t i = 0; i < built.state.amp.size(); ++i)
            built.state.amp[i] += cn * shell.amp[i];
    }
    for (const auto& t : hyb.terms) {
        const Complex beta = t.alpha / std::sqrt(static_cast<double>(spec.modes));
        built.max_deficit =
            std::max(built.max_deficit, coherent_mode_vector(beta, built.dim).deficit);
        ModeTensor part = coherent_mbs_output(t.alpha, spec.modes, built.dim, spec.tolerance);
        for (std::size_t i = 0; i < built.state.amp.size(); ++i)
            built.state.amp[i] += t.weight * part.amp[i];
    }
    if (built.state.norm() < 1e-12)
        throw Error(ErrorCode::ZeroState, "input terms cancel to a numerically zero state");
    return built;
}

} // namespace mbs
