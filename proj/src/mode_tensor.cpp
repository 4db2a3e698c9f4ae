#include "mbs/mode_tensor.hpp"

#include <cmath>

namespace mbs {

namespace {

// Desk-scale guard: 2^22 amplitudes (64 MiB of complex doubles).
constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 22;

} // namespace

ModeTensor ModeTensor::zeros(int modes, int dim) {
    if (modes < 2)
        throw Error(ErrorCode::InvalidArgument, "mode count must be >= 2");
    if (dim < 1)
        throw Error(ErrorCode::InvalidArgument, "local dimension must be >= 1");
    std::size_t total = 1;
    for (int k = 0; k < modes; ++k) {
        total *= static_cast<std::size_t>(dim);
        if (total > kMaxAmplitudes)
            throw Error(ErrorCode::TooLarge,
                        "amplitude tensor exceeds the desk-scale limit (d^m > 2^22)");
    }
    ModeTensor t;
    t.modes = modes;
    t.dim = dim;
    t.amp.assign(total, Complex{0.0, 0.0});
    return t;
}

std::size_t ModeTensor::flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int k = 0; k < modes; ++k)
        f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx[k]);
    return f;
}

void ModeTensor::unflatten(std::size_t flat_index, std::span<int> idx) const {
    for (int k = modes - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(flat_index % static_cast<std::size_t>(dim));
        flat_index /= static_cast<std::size_t>(dim);
    }
}

double ModeTensor::norm_sq() const {
    double s = 0.0;
    for (const Complex& a : amp) s += std::norm(a);
    return s;
}

double ModeTensor::norm() const { return std::sqrt(norm_sq()); }

Complex inner_product(const ModeTensor& a, const ModeTensor& b) {
    if (!a.same_shape(b))
        throw Error(ErrorCode::ShapeMismatch, "inner product of differently shaped tensors");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amp.size(); ++i)
        s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

void for_each_composition(int total, int modes, int dim,
                          const std::function<void(std::span<const int>)>& visit) {
    if (total < 0 || modes < 1) return;
    std::vector<int> idx(static_cast<std::size_t>(modes), 0);
    // Walk the compositions in lexicographic order of (n_1..n_m).
    std::function<void(int, int)> rec = [&](int mode, int remaining) {
        if (mode == modes - 1) {
            if (remaining < dim) {
                idx[static_cast<std::size_t>(mode)] = remaining;
                visit(idx);
            }
            return;
        }
        int top = std::min(remaining, dim - 1);
        for (int v = 0; v <= top; ++v) {
            idx[static_cast<std::size_t>(mode)] = v;
            rec(mode + 1, remaining - v);
        }
    };
    rec(0, total);
}

std::size_t composition_count(int total, int modes, int dim) {
    std::size_t count = 0;
    for_each_composition(total, modes, dim, [&](std::span<const int>) { ++count; });
    return count;
}

} // namespace mbs
