#pragma once

// Seeded random two-qubit states and unitaries shared by the test programs.

#include <Eigen/Dense>

#include <random>

#include "xyqd/density.hpp"

namespace xyqd::testing {

using Rng = std::mt19937_64;

inline Eigen::MatrixXcd ginibre(int n, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

/// Full-rank mixed state from the Hilbert-Schmidt ensemble.
inline DensityMatrix random_state(Rng& rng)
{
    const Eigen::MatrixXcd g = ginibre(4, rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix::from_matrix(rho);
}

/// Real state with only diagonal and anti-diagonal entries.
inline DensityMatrix random_x_state(Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::Vector4d d(u(rng), u(rng), u(rng), u(rng));
    d /= d.sum();
    const double z = (2.0 * u(rng) - 1.0) * std::sqrt(d[0] * d[3]);
    const double w = (2.0 * u(rng) - 1.0) * std::sqrt(d[1] * d[2]);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        rho(i, i) = d[i];
    rho(0, 3) = rho(3, 0) = z;
    rho(1, 2) = rho(2, 1) = w;
    return DensityMatrix(rho, SymmetryTag::XState, Provenance::Synthetic);
}

inline Eigen::Vector4cd random_pure(Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i)
        v[i] = cplx(g(rng), g(rng));
    return v.normalized();
}

inline DensityMatrix pure_state(const Eigen::Vector4cd& v)
{
    return DensityMatrix::from_matrix(v * v.adjoint());
}

/// Haar-random single-qubit unitary.
inline Eigen::Matrix2cd random_unitary(Rng& rng)
{
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre(2, rng));
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR();
    for (int i = 0; i < 2; ++i)
        q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

inline DensityMatrix local_rotate(const DensityMatrix& rho, const Eigen::Matrix2cd& ua, const Eigen::Matrix2cd& ub)
{
    const Eigen::Matrix4cd u = pauli::kron(ua, ub);
    return DensityMatrix::from_matrix(u * rho.matrix() * u.adjoint());
}

inline DensityMatrix bell_state()
{
    Eigen::Vector4cd v(1.0, 0.0, 0.0, 1.0);
    return pure_state(v / std::sqrt(2.0));
}

} // namespace xyqd::testing
