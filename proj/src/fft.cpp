#include "kvnlab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace kvn::fft {

void radix2(cplx* a, std::size_t n, int sign) {
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void position_to_momentum(cplx* s, std::size_t n) {
    radix2(s, n, -1);
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        s[k] *= (k & 1u) ? -inv : inv;
    }
}

void momentum_to_position(cplx* s, std::size_t n) {
    const double scale = std::sqrt(static_cast<double>(n)) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k & 1u) s[k] = -s[k];
    }
    radix2(s, n, +1);
    for (std::size_t j = 0; j < n; ++j) s[j] *= scale;
}

void transform_axis(std::vector<cplx>& data, std::size_t total, std::size_t n,
                    std::size_t stride, bool to_momentum) {
    if (n * stride == 0 || total % (n * stride) != 0) {
        throw std::invalid_argument("transform_axis: inconsistent layout");
    }
    const std::size_t outer = total / (n * stride);
    std::vector<cplx> scratch(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < stride; ++i) {
            const std::size_t base = o * n * stride + i;
            for (std::size_t j = 0; j < n; ++j) scratch[j] = data[base + j * stride];
            if (to_momentum) {
                position_to_momentum(scratch.data(), n);
            } else {
                momentum_to_position(scratch.data(), n);
            }
            for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = scratch[j];
        }
    }
}

}  // namespace kvn::fft
