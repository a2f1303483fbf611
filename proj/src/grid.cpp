#include "kvnlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kvn {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

GridSpec make_grid(std::size_t n, double length) {
    if (!is_power_of_two(n) || n < 4) {
        throw std::invalid_argument("make_grid: n must be a power of two >= 4, got " +
                                    std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("make_grid: length must be positive and finite");
    }
    GridSpec g;
    g.n_ = n;
    g.length_ = length;
    g.dx_ = length / static_cast<double>(n);
    g.dp_ = 2.0 * M_PI / length;
    g.positions_.resize(n);
    g.momenta_.resize(n);
    const long half = static_cast<long>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        g.positions_[j] = -0.5 * length + static_cast<double>(j) * g.dx_;
        long k = static_cast<long>(j);
        if (k >= half) k -= static_cast<long>(n);
        g.momenta_[j] = g.dp_ * static_cast<double>(k);
    }
    return g;
}

namespace {
std::size_t find_on_lattice(const std::vector<double>& vals, double v, double tol,
                            const char* what) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i] - v) <= tol) return i;
    }
    throw std::invalid_argument(std::string(what) + " value " + std::to_string(v) +
                                " is not on the lattice (tol " + std::to_string(tol) + ")");
}
}  // namespace

std::size_t GridSpec::position_index(double x, double tol) const {
    return find_on_lattice(positions_, x, tol, "position");
}

std::size_t GridSpec::momentum_index(double p, double tol) const {
    return find_on_lattice(momenta_, p, tol, "momentum");
}

}  // namespace kvn
