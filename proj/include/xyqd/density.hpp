#pragma once

// Single-site and two-site density matrices assembled from correlators.

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "xyqd/correlator_set.hpp"
#include "xyqd/errors.hpp"

namespace xyqd {

using cplx = std::complex<double>;

namespace pauli {

inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd x()
{
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::Matrix2cd y()
{
    Eigen::Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline Eigen::Matrix2cd z()
{
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

/// sigma_alpha for alpha = 0 (identity), 1 (x), 2 (y), 3 (z).
inline Eigen::Matrix2cd by_index(int alpha)
{
    switch (alpha) {
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: return identity();
    }
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b)
{
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

} // namespace pauli

enum class SymmetryTag {
    XState,       ///< nonzero entries only on diagonal and anti-diagonal
    GeneralReal,  ///< real symmetric
    General,      ///< complex Hermitian
};

inline const char* to_string(SymmetryTag t)
{
    switch (t) {
    case SymmetryTag::XState: return "x-state";
    case SymmetryTag::GeneralReal: return "general-real";
    case SymmetryTag::General: return "general";
    }
    return "?";
}

struct DensityTolerances {
    double hermitian = 1e-12;
    double trace = 1e-12;
    double clip = 1e-14;       ///< eigenvalues in (-fail, -clip) are clipped to zero
    double fail = 1e-8;        ///< min eigenvalue below -fail is an error
    double zero_pattern = 1e-14;
};

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
/// Construction validates; a DensityMatrix in hand always satisfies the invariants.
class DensityMatrix {
public:
    /// Validates `m` and detects its symmetry tag.
    static DensityMatrix from_matrix(const Eigen::MatrixXcd& m, Provenance source = Provenance::Synthetic,
                                     const DensityTolerances& tol = {})
    {
        return DensityMatrix(m, detect_tag(m, tol.zero_pattern), source, tol);
    }

    DensityMatrix(const Eigen::MatrixXcd& m, SymmetryTag tag, Provenance source,
                  const DensityTolerances& tol = {})
        : m_(m), tag_(tag), source_(source)
    {
        if (!(m_.rows() == 2 || m_.rows() == 4) || m_.rows() != m_.cols())
            throw ValidationError("density matrix must be 2x2 or 4x4");
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol.hermitian)
            throw ValidationError("density matrix is not Hermitian");
        m_ = 0.5 * (m_ + m_.adjoint()).eval();
        if (std::abs(m_.trace().real() - 1.0) > tol.trace)
            throw ValidationError("density matrix trace differs from 1");
        if (tag_ == SymmetryTag::XState) {
            if (m_.rows() != 4)
                throw ValidationError("X-state tag needs a 4x4 matrix");
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    if (i != j && i + j != 3) {
                        if (std::abs(m_(i, j)) > tol.zero_pattern)
                            throw ValidationError("X-state tag with entries outside the X pattern");
                        m_(i, j) = 0.0;
                    }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_);
        const double lo = es.eigenvalues().minCoeff();
        if (lo < -tol.fail)
            throw NotPositive("density matrix has eigenvalue " + std::to_string(lo));
        if (lo < -tol.clip) {
            Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
            w /= w.sum();
            m_ = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
        }
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    SymmetryTag tag() const { return tag_; }
    Provenance source() const { return source_; }

    Eigen::VectorXd eigenvalues() const
    {
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m_, Eigen::EigenvaluesOnly).eigenvalues();
    }

    /// Reduced state of the first qubit (A) of a two-qubit matrix.
    DensityMatrix trace_out_b() const
    {
        require_pair();
        Eigen::MatrixXcd r(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                r(a, b) = m_(2 * a, 2 * b) + m_(2 * a + 1, 2 * b + 1);
        return from_matrix(r, source_);
    }

    /// Reduced state of the second qubit (B).
    DensityMatrix trace_out_a() const
    {
        require_pair();
        Eigen::MatrixXcd r(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                r(a, b) = m_(a, b) + m_(2 + a, 2 + b);
        return from_matrix(r, source_);
    }

    /// Same state with the roles of A and B exchanged.
    DensityMatrix swapped() const
    {
        require_pair();
        Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
        swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
        return DensityMatrix(swap * m_ * swap, tag_, source_);
    }

    /// Expectation value Tr(rho O).
    cplx expect(const Eigen::MatrixXcd& op) const { return (m_ * op).trace(); }

private:
    static SymmetryTag detect_tag(const Eigen::MatrixXcd& m, double zero)
    {
        bool x_pattern = m.rows() == 4;
        bool real = m.imag().cwiseAbs().maxCoeff() <= zero;
        if (x_pattern)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    if (i != j && i + j != 3 && std::abs(m(i, j)) > zero)
                        x_pattern = false;
        if (x_pattern)
            return SymmetryTag::XState;
        return real ? SymmetryTag::GeneralReal : SymmetryTag::General;
    }

    void require_pair() const
    {
        if (dim() != 4)
            throw ValidationError("operation needs a two-qubit density matrix");
    }

    Eigen::MatrixXcd m_;
    SymmetryTag tag_;
    Provenance source_;
};

/// (I + g_x sx + g_z sz) / 2.
inline DensityMatrix rho_single(double g_z, double g_x, Provenance source = Provenance::Synthetic)
{
    const double bloch = g_z * g_z + g_x * g_x;
    if (bloch > 1.0 + 1e-8)
        throw BlochViolation("g_z^2 + g_x^2 = " + std::to_string(bloch) + " exceeds 1");
    Eigen::MatrixXcd m = 0.5 * (pauli::identity() + g_x * pauli::x() + g_z * pauli::z());
    return DensityMatrix(m, SymmetryTag::GeneralReal, source);
}

/// Two-site state at distance r:
///   1/4 [ II + g_x (XI + IX) + g_z (ZI + IZ) + sum_a g_aa(r) s^a s^a
///         + g_xz(r) XZ + g_zx(r) ZX ]
/// Tagged as an X-state exactly when the odd correlators vanish.
inline DensityMatrix rho_pair(const CorrelatorSet& cs, int r)
{
    if (r < 1 || r > cs.r_max())
        throw ValidationError("distance r outside the correlator set");
    using namespace pauli;
    const Eigen::Matrix2cd I = identity(), X = x(), Y = y(), Z = z();
    Eigen::Matrix4cd m = kron(I, I);
    m += cs.g_x * (kron(X, I) + kron(I, X));
    m += cs.g_z * (kron(Z, I) + kron(I, Z));
    m += cs.xx(r) * kron(X, X) + cs.yy(r) * kron(Y, Y) + cs.zz(r) * kron(Z, Z);
    m += cs.xz(r) * kron(X, Z) + cs.zx(r) * kron(Z, X);
    m *= 0.25;
    const bool x_state = cs.g_x == 0.0 && cs.xz(r) == 0.0 && cs.zx(r) == 0.0;
    return DensityMatrix(m, x_state ? SymmetryTag::XState : SymmetryTag::GeneralReal, cs.provenance);
}

} // namespace xyqd
