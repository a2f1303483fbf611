// grid.hpp
// Periodic (torus) grid for one continuous mode, dimensionless units (hbar = 1).

#pragma once

#include <cstddef>
#include <vector>

namespace kvn {

// Uniform periodic lattice with n points over length L, centered at 0.
// Positions x_j = -L/2 + j*dx. Momenta use the signed-frequency lattice
// p = 2*pi*k'/L for k' in {-n/2, ..., n/2-1}, stored in transform bin order
// (k' = bin for bin < n/2, k' = bin - n otherwise), so momentum-diagonal
// phases can index amplitudes directly after a forward transform.
class GridSpec {
public:
    GridSpec() = default;

    std::size_t n() const { return n_; }
    double length() const { return length_; }
    double dx() const { return dx_; }
    double dp() const { return dp_; }

    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& momenta() const { return momenta_; }

    double position(std::size_t j) const { return positions_[j]; }
    double momentum(std::size_t bin) const { return momenta_[bin]; }

    // Index of the lattice point matching x (or p) within tol, or throws.
    std::size_t position_index(double x, double tol = 1e-9) const;
    std::size_t momentum_index(double p, double tol = 1e-9) const;

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && length_ == o.length_;
    }

    friend GridSpec make_grid(std::size_t n, double length);

private:
    std::size_t n_ = 0;
    double length_ = 0.0;
    double dx_ = 0.0;
    double dp_ = 0.0;
    std::vector<double> positions_;
    std::vector<double> momenta_;
};

// n must be a power of two, n >= 4; length > 0.
GridSpec make_grid(std::size_t n, double length);

bool is_power_of_two(std::size_t n);

}  // namespace kvn
