#pragma once

// Test-side oracles, written independently of the library code paths they
// check: exact integer combinatorics, long-double Poisson mass, elimination
// rank without SVD, and the closed-form block pattern the mode-1 elimination
// stages must leave behind.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "mbs/fock_core.hpp"
#include "mbs/mode_tensor.hpp"

namespace oracle {

using Complex = std::complex<double>;

// ---- exact combinatorics ----

inline std::uint64_t factorial_u64(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f; // exact for n <= 20
}

inline std::uint64_t multinomial_u64(int n, const std::vector<int>& parts) {
    std::uint64_t denom = 1;
    int total = 0;
    for (int p : parts) {
        denom *= factorial_u64(p);
        total += p;
    }
    if (total != n) return 0;
    return factorial_u64(n) / denom;
}

inline double balanced_amplitude(int n, const std::vector<int>& parts, int modes) {
    const long double mult = static_cast<long double>(multinomial_u64(n, parts));
    const long double mn = std::pow(static_cast<long double>(modes), n);
    return static_cast<double>(std::sqrt(mult / mn));
}

// All (n_1..n_modes) with entries in [0, dim) summing to total.
inline std::vector<std::vector<int>> compositions(int total, int modes, int dim) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(modes), 0);
    const std::function<void(int, int)> rec = [&](int slot, int left) {
        if (slot == modes - 1) {
            if (left < dim) {
                cur[static_cast<std::size_t>(slot)] = left;
                out.push_back(cur);
            }
            return;
        }
        for (int v = 0; v <= std::min(left, dim - 1); ++v) {
            cur[static_cast<std::size_t>(slot)] = v;
            rec(slot + 1, left - v);
        }
    };
    rec(0, total);
    return out;
}

// ---- Poisson tail (mass at and beyond d) ----

inline double poisson_tail(double lambda, int d) {
    long double term = std::exp(-static_cast<long double>(lambda));
    long double cum = 0.0L;
    for (int n = 0; n < d; ++n) {
        cum += term;
        term *= static_cast<long double>(lambda) / static_cast<long double>(n + 1);
    }
    return static_cast<double>(1.0L - cum);
}

// ---- rank by partial-pivot elimination (no SVD anywhere) ----

inline int gauss_rank(Eigen::MatrixXcd a, double rel_tol = 1e-8) {
    double max_abs = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            max_abs = std::max(max_abs, std::abs(a(i, j)));
    if (max_abs == 0.0) return 0;
    const double threshold = rel_tol * max_abs;
    int rank = 0;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index pivot = row;
        double best = std::abs(a(row, col));
        for (Eigen::Index r = row + 1; r < a.rows(); ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        if (best <= threshold) continue;
        a.row(row).swap(a.row(pivot));
        for (Eigen::Index r = row + 1; r < a.rows(); ++r) {
            const Complex f = a(r, col) / a(row, col);
            a.row(r) -= f * a.row(row);
        }
        ++row;
        ++rank;
    }
    return rank;
}

// Reshape a state across left-modes | right-modes by direct index walking,
// independent of the library's reshaping.
inline Eigen::MatrixXcd reshape_state(const mbs::ModeTensor& state,
                                      const std::vector<int>& left_modes) {
    std::vector<int> right_modes;
    for (int mode = 1; mode <= state.modes; ++mode)
        if (std::find(left_modes.begin(), left_modes.end(), mode) == left_modes.end())
            right_modes.push_back(mode);
    const auto dim_pow = [&](std::size_t count) {
        long p = 1;
        for (std::size_t i = 0; i < count; ++i) p *= state.dim;
        return p;
    };
    Eigen::MatrixXcd out(dim_pow(left_modes.size()), dim_pow(right_modes.size()));
    std::vector<int> idx(static_cast<std::size_t>(state.modes));
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        state.unflatten(flat, idx);
        long r = 0;
        for (int mode : left_modes) r = r * state.dim + idx[static_cast<std::size_t>(mode - 1)];
        long c = 0;
        for (int mode : right_modes) c = c * state.dim + idx[static_cast<std::size_t>(mode - 1)];
        out(r, c) = state.amp[flat];
    }
    return out;
}

// ---- elimination stage pattern ----
//
// For the weighted shell sum with weights h_0..h_N, after applying the mode-1
// stages 0..k (k = -1 for none), the block with frozen shell s must hold at
// (i, j):   h_N        if s+i+j == N
//           0          if s+i+j >  N
//           0          if s+i+j <  N and s+j <= k
//           h_{s+i+j}  otherwise.
inline Complex stage_pattern_entry(const std::vector<Complex>& h, int stages_done, int s, int i,
                                   int j) {
    const int level = static_cast<int>(h.size()) - 1;
    const int total = s + i + j;
    if (total == level) return h.back();
    if (total > level) return {0.0, 0.0};
    if (s + j <= stages_done) return {0.0, 0.0};
    return h[static_cast<std::size_t>(total)];
}

// ---- product-census support ----

inline Eigen::VectorXcd kron_all(const std::vector<Eigen::VectorXcd>& factors) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
    for (const auto& f : factors) {
        Eigen::VectorXcd next(w.size() * f.size());
        for (Eigen::Index i = 0; i < w.size(); ++i)
            for (Eigen::Index j = 0; j < f.size(); ++j) next(i * f.size() + j) = w(i) * f(j);
        w = std::move(next);
    }
    return w;
}

// Orthonormal basis of the column space of a, by modified Gram-Schmidt.
inline Eigen::MatrixXcd column_space_basis(const Eigen::MatrixXcd& a, double rel_tol = 1e-8) {
    const double scale = a.norm();
    std::vector<Eigen::VectorXcd> basis;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        Eigen::VectorXcd v = a.col(c);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > rel_tol * scale) basis.push_back(v.normalized());
    }
    Eigen::MatrixXcd u(a.rows(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) u.col(static_cast<Eigen::Index>(i)) = basis[i];
    return u;
}

// ---- random sampling ----

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }

    Complex in_disc(double radius) {
        for (;;) {
            const double x = uniform(-radius, radius);
            const double y = uniform(-radius, radius);
            if (x * x + y * y <= radius * radius) return {x, y};
        }
    }

    Complex in_annulus(double inner, double outer) {
        const double r = std::sqrt(uniform(inner * inner, outer * outer));
        const double phi = uniform(0.0, 2.0 * M_PI);
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    // |z| in [min_abs, radius].
    Complex in_disc_nonzero(double radius, double min_abs) {
        return in_annulus(min_abs, radius);
    }

    std::vector<Complex> distinct_alphas(int count, double radius, double min_separation) {
        std::vector<Complex> alphas;
        while (static_cast<int>(alphas.size()) < count) {
            const Complex cand = in_disc(radius);
            bool ok = true;
            for (const Complex& a : alphas)
                if (std::abs(a - cand) < min_separation) ok = false;
            if (ok) alphas.push_back(cand);
        }
        return alphas;
    }
};

} // namespace oracle
