#include "kvnlab/dense_oracle.hpp"

#include <stdexcept>

#include "kvnlab/fft.hpp"

namespace kvn {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return r;
}

Eigen::MatrixXcd pauli_mat(Pauli p) {
    const auto m = pauli_matrix(p);
    Eigen::MatrixXcd r(2, 2);
    r << m[0][0], m[0][1], m[1][0], m[1][1];
    return r;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, unsigned k) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    for (unsigned i = 0; i < k; ++i) r = r * m;
    return r;
}

}  // namespace

Eigen::MatrixXcd transform_matrix(const GridSpec& g) {
    const std::size_t n = g.n();
    Eigen::MatrixXcd f(n, n);
    std::vector<cplx> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), cplx(0.0, 0.0));
        col[j] = cplx(1.0, 0.0);
        fft::position_to_momentum(col.data(), n);
        for (std::size_t k = 0; k < n; ++k) f(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(j)) = col[k];
    }
    return f;
}

Eigen::MatrixXcd position_op(const GridSpec& g, RepTag rep) {
    const std::size_t n = g.n();
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) x(j, j) = g.position(j);
    if (rep == RepTag::Position) return x;
    const Eigen::MatrixXcd f = transform_matrix(g);
    return f * x * f.adjoint();
}

Eigen::MatrixXcd momentum_op(const GridSpec& g, RepTag rep) {
    const std::size_t n = g.n();
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k) p(k, k) = g.momentum(k);
    if (rep == RepTag::Momentum) return p;
    const Eigen::MatrixXcd f = transform_matrix(g);
    return f.adjoint() * p * f;
}

Eigen::MatrixXcd expr_to_matrix(const OperatorExpr& e, const std::vector<GridSpec>& grids,
                                const std::vector<RepTag>& reps) {
    if (grids.empty() || grids.size() > 2 || grids.size() != reps.size()) {
        throw std::invalid_argument("expr_to_matrix: need 1 or 2 grids with tags");
    }
    std::size_t dim = 4;
    for (const auto& g : grids) dim *= g.n();
    if (dim > kDenseDimCap) {
        throw std::invalid_argument("expr_to_matrix: dimension cap exceeded");
    }

    std::vector<Eigen::MatrixXcd> xops, pops;
    for (std::size_t m = 0; m < grids.size(); ++m) {
        xops.push_back(position_op(grids[m], reps[m]));
        pops.push_back(momentum_op(grids[m], reps[m]));
    }

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [mono, coeff] : e.terms()) {
        if (grids.size() == 1 && (mono.pw[2] != 0 || mono.pw[3] != 0)) {
            throw std::invalid_argument("expr_to_matrix: mode-2 symbol on single-mode system");
        }
        // normal order: x powers act after p powers (x-matrix on the left)
        Eigen::MatrixXcd m1 =
            matrix_power(xops[0], mono.pw[0]) * matrix_power(pops[0], mono.pw[1]);
        Eigen::MatrixXcd term;
        if (grids.size() == 2) {
            const Eigen::MatrixXcd m2 =
                matrix_power(xops[1], mono.pw[2]) * matrix_power(pops[1], mono.pw[3]);
            term = kron(kron(kron(m1, m2), pauli_mat(mono.q1)), pauli_mat(mono.q2));
        } else {
            term = kron(kron(m1, pauli_mat(mono.q1)), pauli_mat(mono.q2));
        }
        acc += coeff * term;
    }
    return acc;
}

Eigen::MatrixXcd dense_hamiltonian(const HamiltonianSpec& h, const std::vector<GridSpec>& grids,
                                   const std::vector<RepTag>& reps) {
    validate(h);
    const Eigen::MatrixXcd m = expr_to_matrix(hamiltonian_expr(h), grids, reps);
    const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-10) {
        throw std::runtime_error("dense_hamiltonian: assembly is not Hermitian");
    }
    return m;
}

Eigen::MatrixXcd dense_oracle_unitary(const HamiltonianSpec& h,
                                      const std::vector<GridSpec>& grids,
                                      const std::vector<RepTag>& reps, double t) {
    const Eigen::MatrixXcd m = dense_hamiltonian(h, grids, reps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("dense_oracle_unitary: eigendecomposition failed");
    }
    const Eigen::VectorXd& w = es.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        phases(i) = std::polar(1.0, -w(i) * t);
    }
    Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const double udef = (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
                            .cwiseAbs()
                            .maxCoeff();
    if (udef > 1e-9) {
        throw std::runtime_error("dense_oracle_unitary: result is not unitary");
    }
    return u;
}

Eigen::VectorXcd state_vector(const HybridState& s, const std::vector<RepTag>& reps) {
    if (reps.size() != s.mode_count()) {
        throw std::invalid_argument("state_vector: rep count mismatch");
    }
    HybridState aligned = s;
    for (std::size_t m = 0; m < reps.size(); ++m) {
        aligned = to_representation(aligned, m, reps[m]);
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(aligned.size()));
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = aligned.amplitudes()[i];
    }
    return v;
}

HybridState apply_dense(const Eigen::MatrixXcd& u, const HybridState& s,
                        const std::vector<RepTag>& reps) {
    const Eigen::VectorXcd v = u * state_vector(s, reps);
    std::vector<GridSpec> grids;
    for (std::size_t m = 0; m < s.mode_count(); ++m) grids.push_back(s.grid(m));
    std::vector<cplx> amps(static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = v(static_cast<Eigen::Index>(i));
    return HybridState(std::move(grids), reps, std::move(amps));
}

}  // namespace kvn
