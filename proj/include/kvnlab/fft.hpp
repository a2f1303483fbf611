// fft.hpp
// Unitary centered Fourier transforms between the position and momentum
// lattices of grid.hpp. Grids are power-of-two by construction, so a
// radix-2 transform covers every case exactly.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kvn::fft {

using cplx = std::complex<double>;

// In-place radix-2 transform of a contiguous buffer, sign = -1 for the
// forward kernel e^{-2 pi i jk/n}, +1 for the inverse kernel (unscaled).
void radix2(cplx* data, std::size_t n, int sign);

// Unitary centered transforms for one 1-D slice of length n.
//
// Position -> momentum: phi_k = (1/sqrt(n)) sum_j e^{-i p_k x_j} psi_j,
// which on the centered lattices reduces to (-1)^k * DFT(psi)_k / sqrt(n)
// with bins in transform order. momentum -> position is the exact inverse.
void position_to_momentum(cplx* slice, std::size_t n);
void momentum_to_position(cplx* slice, std::size_t n);

// Applies the 1-D transform along a strided axis of a flattened tensor:
// the axis has `n` entries spaced `stride` apart; there are `count` slices
// whose base offsets are enumerated by outer/inner extents around the axis.
// `total` is the full buffer length; bases are all indices with axis index 0.
void transform_axis(std::vector<cplx>& data, std::size_t total, std::size_t n,
                    std::size_t stride, bool to_momentum);

}  // namespace kvn::fft
