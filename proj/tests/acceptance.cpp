// Acceptance gate: every release-blocking check in one binary, one line per
// criterion. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mbs/classifier.hpp"
#include "mbs/coeff_matrix.hpp"
#include "mbs/fock_core.hpp"
#include "mbs/ilo_engine.hpp"
#include "mbs/json_io.hpp"
#include "mbs/schmidt.hpp"
#include "oracles.hpp"

namespace {

using mbs::Complex;
using Details = std::vector<std::string>;

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

bool check(Details& details, bool cond, const std::string& msg) {
    if (!cond) details.push_back(msg);
    return cond;
}

mbs::ModeTensor weighted_shell_sum(const std::vector<Complex>& h, int modes, int dim) {
    std::vector<mbs::ModeTensor> shells;
    for (std::size_t n = 0; n < h.size(); ++n)
        shells.push_back(mbs::uniform_state(static_cast<int>(n), modes, dim));
    std::vector<std::pair<Complex, const mbs::ModeTensor*>> parts;
    for (std::size_t n = 0; n < h.size(); ++n) parts.emplace_back(h[n], &shells[n]);
    return mbs::superpose(parts);
}

mbs::ModeTensor weighted_number_output(const std::vector<Complex>& c, int modes, int dim) {
    std::vector<mbs::ModeTensor> outs;
    for (std::size_t n = 0; n < c.size(); ++n)
        outs.push_back(mbs::number_mbs_output(static_cast<int>(n), modes, dim));
    std::vector<std::pair<Complex, const mbs::ModeTensor*>> parts;
    for (std::size_t n = 0; n < c.size(); ++n) parts.emplace_back(c[n], &outs[n]);
    return mbs::superpose(parts);
}

mbs::ModeTensor normalized(mbs::ModeTensor s) {
    const double n = s.norm();
    for (auto& a : s.amp) a /= n;
    return s;
}

// 1. Uniform level-N states have Schmidt rank N+1 across every bipartition.
bool criterion1(Details& details) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int modes : {2, 3, 4}) {
        for (int level = 0; level <= 5; ++level) {
            const mbs::ModeTensor state = mbs::uniform_state(level, modes, level + 1);
            for (const auto& split : mbs::bipartitions(modes)) {
                const int rank = mbs::schmidt_rank(state, split, 1e-8);
                check(details, rank == level + 1,
                      fmt("m=%d N=%d split %s: rank %d, expected %d", modes, level,
                          split.to_string().c_str(), rank, level + 1));
            }
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check(details, seconds < 60.0, fmt("rank sweep took %.1f s, budget is 60 s", seconds));
    return details.empty();
}

// 2. Factorial rescaling on every mode replays weighted number outputs onto
//    the matching weighted shell sums, amplitude by amplitude.
bool criterion2(Details& details) {
    oracle::Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int modes = 2 + trial % 2;
        const int level = trial % 6;
        const int dim = level + 1;
        std::vector<Complex> c;
        for (int n = 0; n <= level; ++n) c.push_back(rng.in_disc(1.0));
        c.back() = rng.in_disc_nonzero(1.0, 0.1);

        mbs::ModeTensor s = weighted_number_output(c, modes, dim);
        const mbs::LocalOperator rescale = mbs::factorial_rescale_op(level, dim);
        for (int q = 1; q <= modes; ++q) s = mbs::apply_local(s, q, rescale);

        const std::vector<Complex> h = mbs::to_uniform_coeffs(c, modes);
        const mbs::ModeTensor target = weighted_shell_sum(h, modes, dim);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max(worst, std::abs(s.amp[i] - target.amp[i]));
        check(details, worst <= 1e-12,
              fmt("trial %d (m=%d N=%d): amplitude deviation %.3g", trial, modes, level, worst));
    }
    return details.empty();
}

// 3. The elimination certificate reaches the top shell, leaving the predicted
//    block pattern after every intermediate stage.
bool criterion3(Details& details) {
    oracle::Rng rng(202);
    for (int modes : {2, 3, 4}) {
        for (int level = 0; level <= 5; ++level) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<Complex> h;
                for (int n = 0; n <= level; ++n) h.push_back(rng.in_disc(1.0));
                h.back() = rng.in_annulus(1e-3, 1.0);
                const int dim = level + 1;

                mbs::ModeTensor s = weighted_shell_sum(h, modes, dim);
                const mbs::EliminationOps ops = mbs::elimination_ops(h, dim);
                if (!check(details, static_cast<int>(ops.stages.size()) == level,
                           fmt("m=%d N=%d: %zu stages", modes, level, ops.stages.size())))
                    continue;

                for (int k = 0; k < level; ++k) {
                    s = mbs::apply_local(s, 1, ops.stages[static_cast<std::size_t>(k)]);
                    const mbs::CoefficientMatrixView view(s);
                    double worst = 0.0;
                    for (long col0 = 0; col0 < view.cols(); col0 += view.rows()) {
                        const auto blk = view.block(col0);
                        for (int i = 0; i < dim; ++i)
                            for (int j = 0; j < dim; ++j)
                                worst = std::max(
                                    worst, std::abs(blk.entries(i, j) -
                                                    oracle::stage_pattern_entry(h, k, blk.shell,
                                                                                i, j)));
                    }
                    check(details, worst <= 1e-9,
                          fmt("m=%d N=%d stage %d: pattern deviation %.3g", modes, level, k,
                              worst));
                }

                s = mbs::apply_local(s, 1, ops.scale);
                const mbs::EquivalenceCheck chk =
                    mbs::verify_equivalence(s, mbs::uniform_state(level, modes, dim), 1e-10);
                check(details, chk.ok,
                      fmt("m=%d N=%d rep %d: final fidelity %.12f", modes, level, rep,
                          chk.fidelity));
            }
        }
    }
    return details.empty();
}

// 4. Coherent-superposition outputs reduce to the r-branch representative at
//    automatic cutoff, with Schmidt rank r before and after.
bool criterion4(Details& details) {
    oracle::Rng rng(303);
    for (int modes : {2, 3}) {
        for (int r = 1; r <= 3; ++r) {
            for (int rep = 0; rep < 3; ++rep) {
                const std::vector<Complex> alphas = rng.distinct_alphas(r, 2.0, 0.25);
                std::vector<mbs::CatTerm> terms;
                for (const Complex& a : alphas)
                    terms.push_back(mbs::CatTerm{rng.in_annulus(0.3, 1.0), a});

                mbs::InputSpec spec;
                spec.modes = modes;
                spec.tolerance = 1e-10;
                spec.input = mbs::CatState{terms};
                const mbs::BuiltOutput built = mbs::build_mbs_output(spec);
                const double rank_tol = std::max(1e-8, 10.0 * built.max_deficit);

                for (const auto& split : mbs::bipartitions(modes)) {
                    const int before = mbs::schmidt_rank(built.state, split, rank_tol);
                    check(details, before == r,
                          fmt("m=%d r=%d rep %d: source rank %d at %s", modes, r, rep, before,
                              split.to_string().c_str()));
                }

                const mbs::IloCertificate cert =
                    mbs::cat_certificate(terms, modes, built.dim, built.state.norm());
                const mbs::ModeTensor mapped =
                    mbs::apply_certificate(normalized(built.state), cert);
                const mbs::EquivalenceCheck chk = mbs::verify_equivalence(
                    mapped, mbs::ghz_state(r, modes, built.dim), 1e-6);
                check(details, chk.ok,
                      fmt("m=%d r=%d rep %d: fidelity %.9f", modes, r, rep, chk.fidelity));

                for (const auto& split : mbs::bipartitions(modes)) {
                    const int after = mbs::schmidt_rank(mapped, split, rank_tol);
                    check(details, after == r,
                          fmt("m=%d r=%d rep %d: mapped rank %d at %s", modes, r, rep, after,
                              split.to_string().c_str()));
                }
            }
        }
    }
    return details.empty();
}

// 5. Hybrid outputs reduce to the level-N-plus-r-branch representative with
//    rank N+r+1; the (3,2) and (2,3) cells both sit at rank 6.
bool criterion5(Details& details) {
    oracle::Rng rng(404);
    const std::vector<std::pair<int, int>> cells{{1, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 2}};
    for (int modes : {2, 3}) {
        for (const auto& [level, r] : cells) {
            std::vector<Complex> c;
            for (int n = 0; n <= level; ++n) c.push_back(rng.in_disc(1.0));
            c.back() = rng.in_annulus(0.1, 1.0);
            const std::vector<Complex> alphas = rng.distinct_alphas(r, 2.0, 0.25);
            std::vector<mbs::CatTerm> terms;
            for (const Complex& a : alphas)
                terms.push_back(mbs::CatTerm{rng.in_annulus(0.3, 1.0), a});

            mbs::InputSpec spec;
            spec.modes = modes;
            spec.tolerance = 1e-10;
            spec.input = mbs::HybridState{c, terms};
            const mbs::BuiltOutput built = mbs::build_mbs_output(spec);
            const double rank_tol = std::max(1e-8, 10.0 * built.max_deficit);

            const int expected_rank = level + r + 1;
            for (const auto& split : mbs::bipartitions(modes)) {
                const int rank = mbs::schmidt_rank(built.state, split, rank_tol);
                check(details, rank == expected_rank,
                      fmt("m=%d (N=%d,r=%d): source rank %d at %s", modes, level, r, rank,
                          split.to_string().c_str()));
                if ((level == 3 && r == 2) || (level == 2 && r == 3))
                    check(details, rank == 6,
                          fmt("m=%d (N=%d,r=%d): coincidence cell rank %d, expected 6", modes,
                              level, r, rank));
            }

            const mbs::IloCertificate cert =
                mbs::hybrid_certificate(c, terms, modes, built.dim, built.state.norm());
            const mbs::ModeTensor mapped = mbs::apply_certificate(normalized(built.state), cert);
            const mbs::EquivalenceCheck chk = mbs::verify_equivalence(
                mapped, mbs::hybrid_representative(level, r, modes, built.dim), 1e-6);
            check(details, chk.ok,
                  fmt("m=%d (N=%d,r=%d): fidelity %.9f", modes, level, r, chk.fidelity));
        }
    }
    return details.empty();
}

// 6. The product-direction census reproduces the known counts and, combined
//    with ranks, separates equal-rank classes.
bool criterion6(Details& details) {
    const auto census = [&](const mbs::ModeTensor& state, int expected, const char* what) {
        const mbs::ProductSearchResult res = mbs::product_state_count(state, 1, {});
        check(details, res.count == expected,
              fmt("%s: census %d, expected %d", what, res.count, expected));
    };
    census(mbs::number_mbs_output(1, 3, 2), 1, "single-excitation output (m=3, d=2)");
    census(mbs::ghz_state(2, 3, 2), 2, "two-branch representative (m=3, d=2)");
    census(mbs::ghz_state(3, 3, 3), 3, "three-branch representative (m=3, d=3)");
    census(mbs::hybrid_representative(1, 1, 3, 3), 2, "hybrid representative (N=1, r=1)");

    for (int rank : {2, 3}) {
        mbs::InputSpec number_spec;
        number_spec.modes = 3;
        std::vector<Complex> c(static_cast<std::size_t>(rank), Complex{0.0, 0.0});
        c.back() = Complex{1.0, 0.0};
        number_spec.input = mbs::NumberSuperposition{c};

        mbs::InputSpec cat_spec;
        cat_spec.modes = 3;
        std::vector<mbs::CatTerm> terms{{{1.0, 0.0}, {0.9, 0.0}}, {{1.0, 0.0}, {-0.9, 0.0}}};
        if (rank == 3) terms.push_back({{1.0, 0.0}, {0.0, 1.1}});
        cat_spec.input = mbs::CatState{terms};

        mbs::ClassifyOptions options;
        options.compute_a = true;
        const mbs::ClassificationReport ra = mbs::classify(number_spec, options);
        const mbs::ClassificationReport rb = mbs::classify(cat_spec, options);
        check(details, ra.status == "ok" && rb.status == "ok",
              fmt("rank-%d pair: classify status %s / %s", rank, ra.status.c_str(),
                  rb.status.c_str()));
        for (const auto& [split, value] : ra.schmidt_ranks)
            check(details, value == rank,
                  fmt("rank-%d pair: number side has rank %d at %s", rank, value, split.c_str()));
        for (const auto& [split, value] : rb.schmidt_ranks)
            check(details, value == rank,
                  fmt("rank-%d pair: cat side has rank %d at %s", rank, value, split.c_str()));
        const mbs::CompareVerdict verdict = mbs::cross_scenario_compare(ra, rb);
        check(details, verdict.verdict == "inequivalent",
              fmt("rank-%d pair: verdict \"%s\"", rank, verdict.verdict.c_str()));
    }
    return details.empty();
}

// 7. The balancing certificate maps unbalanced splitter outputs onto the
//    balanced ones.
bool criterion7(Details& details) {
    oracle::Rng rng(505);
    for (int trial = 0; trial < 50; ++trial) {
        const int modes = 2 + trial % 2;
        const int level = trial % 5;
        const int dim = level + 1;

        std::vector<Complex> gamma(static_cast<std::size_t>(modes));
        double norm2 = 0.0;
        for (auto& g : gamma) {
            g = rng.in_annulus(0.4, 1.0);
            norm2 += std::norm(g);
        }
        bool bounded = true;
        for (auto& g : gamma) {
            g /= std::sqrt(norm2);
            bounded = bounded && std::abs(g) >= 0.1;
        }
        if (!check(details, bounded, fmt("trial %d: a scattering amplitude fell below 0.1", trial)))
            continue;

        std::vector<Complex> c;
        for (int n = 0; n <= level; ++n) c.push_back(rng.in_disc(1.0));
        c.back() = rng.in_annulus(0.1, 1.0);

        const mbs::ModeTensor source = mbs::general_mbs_output(c, gamma, dim);
        const mbs::ModeTensor target = weighted_number_output(c, modes, dim);
        const mbs::IloCertificate cert =
            mbs::balancing_certificate(gamma, dim, "general output", "balanced output");
        const mbs::ModeTensor mapped = mbs::apply_certificate(source, cert);
        const mbs::EquivalenceCheck chk = mbs::verify_equivalence(mapped, target, 1e-10);
        check(details, chk.ok,
              fmt("trial %d (m=%d N=%d): fidelity %.12f", trial, modes, level, chk.fidelity));
    }
    return details.empty();
}

// 8. Per-bipartition Schmidt ranks are invariant under random invertible
//    local operators.
bool criterion8(Details& details) {
    oracle::Rng rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + trial % 4;
        mbs::ModeTensor state = mbs::ModeTensor::zeros(3, dim);
        for (auto& a : state.amp) a = rng.in_disc(1.0);

        Eigen::MatrixXcd a(dim, dim);
        for (;;) {
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) a(i, j) = rng.in_disc(1.0);
            const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
            const double smin = svd.singularValues()(dim - 1);
            if (smin > 0.0 && svd.singularValues()(0) / smin <= 100.0) break;
        }
        const int mode = 1 + trial % 3;
        const mbs::ModeTensor moved = mbs::apply_local(state, mode, mbs::LocalOperator(a));

        for (const auto& split : mbs::bipartitions(3)) {
            const int before = mbs::schmidt_rank(state, split, 1e-8);
            const int after = mbs::schmidt_rank(moved, split, 1e-8);
            check(details, before == after,
                  fmt("trial %d (d=%d, mode %d, %s): rank %d became %d", trial, dim, mode,
                      split.to_string().c_str(), before, after));
        }
    }
    return details.empty();
}

// 9. End-to-end classification separates the two-level number output from the
//    two-branch cat output at three modes.
bool criterion9(Details& details) {
    mbs::ClassifyOptions options;
    options.compute_a = true;

    mbs::InputSpec number_spec;
    number_spec.modes = 3;
    number_spec.input = mbs::NumberSuperposition{{{0.0, 0.0}, {1.0, 0.0}}};
    const mbs::ClassificationReport ra = mbs::classify(number_spec, options);
    check(details, ra.status == "ok" && ra.label.name() == "C1",
          fmt("number side: status %s, label %s", ra.status.c_str(), ra.label.name().c_str()));

    mbs::InputSpec cat_spec;
    cat_spec.modes = 3;
    cat_spec.input = mbs::CatState{{{{1.0, 0.0}, {0.9, 0.0}}, {{1.0, 0.0}, {-0.9, 0.0}}}};
    const mbs::ClassificationReport rb = mbs::classify(cat_spec, options);
    check(details, rb.status == "ok" && rb.label.name() == "R2",
          fmt("cat side: status %s, label %s", rb.status.c_str(), rb.label.name().c_str()));

    const mbs::CompareVerdict verdict = mbs::cross_scenario_compare(ra, rb);
    check(details, verdict.verdict == "inequivalent",
          fmt("verdict \"%s\": %s", verdict.verdict.c_str(), verdict.reason.c_str()));
    return details.empty();
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* text;
        std::function<bool(Details&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "uniform level-N outputs have Schmidt rank N+1 across every bipartition", criterion1},
        {2, "factorial rescaling replays number outputs onto weighted shell sums", criterion2},
        {3, "elimination certificates land on the top shell with the predicted stage patterns",
         criterion3},
        {4, "coherent-superposition outputs reduce to r-branch representatives at rank r",
         criterion4},
        {5, "hybrid outputs reduce to their representatives at rank N+r+1", criterion5},
        {6, "product-direction censuses match known counts and split equal-rank classes",
         criterion6},
        {7, "balancing certificates map unbalanced outputs onto balanced ones", criterion7},
        {8, "bipartite ranks are invariant under random invertible local operators", criterion8},
        {9, "classification separates the two-level number output from the two-branch cat",
         criterion9},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Details details;
        bool ok = false;
        try {
            ok = c.run(details);
        } catch (const std::exception& e) {
            details.push_back(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.text);
        if (!ok) {
            ++failures;
            for (const auto& line : details) std::printf("       %s\n", line.c_str());
        }
    }
    return failures;
}
