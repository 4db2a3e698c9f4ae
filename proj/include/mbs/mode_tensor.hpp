#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mbs/errors.hpp"

namespace mbs {

using Complex = std::complex<double>;

// Dense amplitude tensor of an m-mode state with local dimension d
// (occupation cutoff d-1 per mode).  Storage is row-major with the
// first mode slowest: flat = n_1*d^(m-1) + n_2*d^(m-2) + ... + n_m.
// The `normalized` flag is advisory; builders set it when the summed
// squared moduli are 1 within their construction tolerance.
struct ModeTensor {
    int modes = 0;
    int dim = 0;
    std::vector<Complex> amp;
    bool normalized = false;

    static ModeTensor zeros(int modes, int dim);

    std::size_t size() const { return amp.size(); }

    std::size_t flat(std::span<const int> idx) const;
    void unflatten(std::size_t flat_index, std::span<int> idx) const;

    Complex& at(std::span<const int> idx) { return amp[flat(idx)]; }
    const Complex& at(std::span<const int> idx) const { return amp[flat(idx)]; }

    double norm_sq() const;
    double norm() const;

    bool same_shape(const ModeTensor& other) const {
        return modes == other.modes && dim == other.dim;
    }
};

// ⟨a|b⟩ with the left argument conjugated.
Complex inner_product(const ModeTensor& a, const ModeTensor& b);

// Visit every multi-index (n_1..n_m) with n_1+...+n_m == total and
// 0 <= n_k < dim.  The callback receives the index array.
void for_each_composition(int total, int modes, int dim,
                          const std::function<void(std::span<const int>)>& visit);

// Number of such multi-indices.
std::size_t composition_count(int total, int modes, int dim);

} // namespace mbs
