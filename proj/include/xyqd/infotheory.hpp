#pragma once

// Entropies, mutual information, classical correlations and quantum discord
// of two-qubit states. All quantities are in bits. Measurements act on
// qubit B and are projective, parametrized by a Bloch direction (theta, phi).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "xyqd/density.hpp"
#include "xyqd/errors.hpp"
#include "xyqd/model.hpp"
#include "xyqd/nelder_mead.hpp"

namespace xyqd {

/// Eigenvalues below this are exact zeros inside entropies.
inline constexpr double entropy_zero = 1e-14;

namespace detail {

inline double xlog2x(double p) { return p > entropy_zero ? p * std::log2(p) : 0.0; }

/// -sum mu log2 mu over the eigenvalues of a 2x2 Hermitian matrix (not normalized).
inline double h2_unnormalized(const Eigen::Matrix2cd& m)
{
    const double t = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double d = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double rad = std::sqrt(d * d + std::norm(m(0, 1)));
    return -(xlog2x(t + rad) + xlog2x(t - rad));
}

} // namespace detail

/// Von Neumann entropy S(rho) = -Tr rho log2 rho.
inline double entropy(const DensityMatrix& rho)
{
    double s = 0.0;
    for (double p : rho.eigenvalues())
        s -= detail::xlog2x(p);
    return std::clamp(s, 0.0, std::log2(static_cast<double>(rho.dim())));
}

/// I = S(rho_A) + S(rho_B) - S(rho_AB).
inline double mutual_info(const DensityMatrix& rho)
{
    if (rho.dim() != 4)
        throw ValidationError("mutual_info needs a two-qubit state");
    const double i = entropy(rho.trace_out_b()) + entropy(rho.trace_out_a()) - entropy(rho);
    return std::clamp(i, 0.0, 2.0);
}

struct MeasurementBasis {
    double theta = 0.0;  ///< polar angle in [0, pi]
    double phi = 0.0;    ///< azimuth in [0, 2 pi)

    Eigen::Vector3d direction() const
    {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    }

    /// Projector onto the +/- eigenstate of n . sigma (sign = +1 or -1).
    Eigen::Matrix2cd projector(int sign) const
    {
        const Eigen::Vector3d n = direction();
        Eigen::Matrix2cd ns = n[0] * pauli::x() + n[1] * pauli::y() + n[2] * pauli::z();
        return 0.5 * (pauli::identity() + static_cast<double>(sign) * ns);
    }

    /// Same measurement with the angles folded into theta in [0, pi], phi in [0, 2 pi).
    MeasurementBasis canonical() const
    {
        double t = std::remainder(theta, 2.0 * pi), p = phi;
        if (t < 0.0) {
            t = -t;
            p += pi;
        }
        p = std::fmod(p, 2.0 * pi);
        if (p < 0.0)
            p += 2.0 * pi;
        return {t, p};
    }
};

/// Conditional-entropy kernel of a fixed state: M_i = Tr_B[(I x sigma_i) rho].
/// Measuring B along n leaves A in the unnormalized states (M_0 +/- n.M) / 2.
class ConditionalKernel {
public:
    explicit ConditionalKernel(const DensityMatrix& rho)
    {
        if (rho.dim() != 4)
            throw ValidationError("conditional entropy needs a two-qubit state");
        const Eigen::MatrixXcd& m = rho.matrix();
        for (int i = 0; i < 4; ++i) {
            const Eigen::Matrix2cd s = pauli::by_index(i);
            Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
            // Tr_B[(I x s) rho]_{a a'} = sum_{b b'} s_{b' b} rho_{(a b),(a' b')}
            for (int a = 0; a < 2; ++a)
                for (int ap = 0; ap < 2; ++ap)
                    for (int b = 0; b < 2; ++b)
                        for (int bp = 0; bp < 2; ++bp)
                            acc(a, ap) += s(bp, b) * m(2 * a + b, 2 * ap + bp);
            m_[static_cast<std::size_t>(i)] = acc;
        }
    }

    /// sum_k p_k S(rho_A^{(k)}). After the measurement B is pure, so
    /// S(rho_AB^{(k)}) = S(rho_A^{(k)}).
    double operator()(const MeasurementBasis& basis) const
    {
        const Eigen::Vector3d n = basis.direction();
        const Eigen::Matrix2cd nm = n[0] * m_[1] + n[1] * m_[2] + n[2] * m_[3];
        double s = 0.0;
        for (int sign : {1, -1}) {
            const Eigen::Matrix2cd branch = 0.5 * (m_[0] + static_cast<double>(sign) * nm);
            const double p = branch.trace().real();
            if (p < entropy_zero)
                continue;
            s += detail::h2_unnormalized(branch) + detail::xlog2x(p);
        }
        return std::max(s, 0.0);
    }

private:
    std::array<Eigen::Matrix2cd, 4> m_;
};

/// S(rho_AB | {B_k}) = sum_k p_k S(rho_AB^{(k)}).
inline double conditional_entropy(const DensityMatrix& rho, const MeasurementBasis& basis)
{
    return ConditionalKernel(rho)(basis);
}

struct ClassicalOptions {
    int grid_theta = 64;
    int grid_phi = 128;
    int max_grid_doublings = 2;
    int refine_candidates = 4;
    double value_tol = 1e-10;
    double fast_path_margin = 1e-9;
    bool use_x_state_fast_path = true;
};

struct OptimizerDiagnostics {
    double grid_best = 0.0;     ///< best C on the coarse grid (or the canonical bases on the fast path)
    double refined_best = 0.0;  ///< best C after simplex refinement
    int iterations = 0;         ///< objective evaluations in total
    int grid_theta = 0;
    int grid_phi = 0;
    bool fast_path = false;         ///< X-state fast path accepted
    bool interior_optimum = false;  ///< fast path rejected: optimum away from the canonical bases
};

struct ClassicalResult {
    double value = 0.0;
    MeasurementBasis basis;
    OptimizerDiagnostics diagnostics;
};

namespace detail {

struct Candidate {
    double value;
    MeasurementBasis basis;
};

/// Maximizes `score` by simplex starting from `start`.
template <class Score>
Candidate refine(const Score& score, const MeasurementBasis& start, double step, double tol, int& evals)
{
    NelderMeadOptions o;
    o.f_tol = tol;
    o.x_tol = 1e-8;
    auto neg = [&](const Eigen::VectorXd& x) { return -score(MeasurementBasis{x[0], x[1]}); };
    const NelderMeadResult r =
        nelder_mead(neg, Eigen::Vector2d(start.theta, start.phi), Eigen::Vector2d(step, step), o);
    evals += r.evaluations;
    return {-r.f, MeasurementBasis{r.x[0], r.x[1]}.canonical()};
}

/// Angle between two measurement axes (n and -n coincide).
inline double angular_distance(const MeasurementBasis& a, const MeasurementBasis& b)
{
    const double c = std::clamp(std::abs(a.direction().dot(b.direction())), 0.0, 1.0);
    return std::acos(c);
}

template <class Score>
ClassicalResult full_search(const Score& score, const ClassicalOptions& opt, int& evals)
{
    ClassicalResult out;
    int nt = opt.grid_theta, np = opt.grid_phi;
    for (int level = 0;; ++level) {
        std::vector<Candidate> grid;
        grid.reserve(static_cast<std::size_t>(nt * np));
        for (int i = 0; i < nt; ++i) {
            const double t = pi * i / (nt - 1);
            const bool pole = i == 0 || i == nt - 1;
            for (int j = 0; j < (pole ? 1 : np); ++j) {
                const MeasurementBasis b{t, 2.0 * pi * j / np};
                grid.push_back({score(b), b});
                ++evals;
            }
        }
        std::sort(grid.begin(), grid.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
        const double cell = pi / (nt - 1);
        // starting points: best grid points at least 3 cells apart (n and -n are one measurement)
        std::vector<Candidate> starts;
        for (const Candidate& g : grid) {
            if (static_cast<int>(starts.size()) >= opt.refine_candidates)
                break;
            bool distinct = true;
            for (const Candidate& s : starts)
                if (std::abs(g.basis.direction().dot(s.basis.direction())) > std::cos(3.0 * cell))
                    distinct = false;
            if (distinct)
                starts.push_back(g);
        }
        Candidate best{-std::numeric_limits<double>::infinity(), {}};
        double moved = 0.0;
        for (const Candidate& st : starts) {
            const Candidate r = refine(score, st.basis, cell, opt.value_tol, evals);
            const Candidate pick = r.value >= st.value ? r : st;
            if (pick.value > best.value) {
                best = pick;
                moved = angular_distance(pick.basis, st.basis);
            }
        }
        out.value = best.value;
        out.basis = best.basis;
        out.diagnostics.grid_best = grid.front().value;
        out.diagnostics.refined_best = best.value;
        out.diagnostics.grid_theta = nt;
        out.diagnostics.grid_phi = np;
        if (moved <= 2.0 * cell || level >= opt.max_grid_doublings)
            return out;
        nt *= 2;
        np *= 2;
    }
}

} // namespace detail

/// Classical correlations C = max_{theta, phi} [S(rho_A) - S(rho_AB | {B_k})].
inline ClassicalResult classical_corr(const DensityMatrix& rho, const ClassicalOptions& opt = {})
{
    if (rho.dim() != 4)
        throw ValidationError("classical_corr needs a two-qubit state");
    const ConditionalKernel kernel(rho);
    const double s_a = entropy(rho.trace_out_b());
    auto score = [&](const MeasurementBasis& b) { return s_a - kernel(b); };
    int evals = 0;

    if (opt.use_x_state_fast_path && rho.tag() == SymmetryTag::XState) {
        // sigma_z, sigma_x, sigma_y measurements
        const std::array<MeasurementBasis, 3> canon = {
            MeasurementBasis{0.0, 0.0}, MeasurementBasis{pi / 2, 0.0}, MeasurementBasis{pi / 2, pi / 2}};
        detail::Candidate best{score(canon[0]), canon[0]};
        for (const auto& b : canon) {
            const double v = score(b);
            ++evals;
            if (v > best.value)
                best = {v, b};
        }
        // refinement: theta scans in the xz and yz planes, then simplex from the best point
        detail::Candidate refined = best;
        const int scan = 2 * opt.grid_theta;
        for (double phi : {0.0, pi / 2})
            for (int i = 0; i <= scan; ++i) {
                const MeasurementBasis b{pi * i / scan, phi};
                const double v = score(b);
                ++evals;
                if (v > refined.value)
                    refined = {v, b};
            }
        const detail::Candidate nm = detail::refine(score, refined.basis, pi / scan, opt.value_tol, evals);
        if (nm.value > refined.value)
            refined = nm;
        if (refined.value <= best.value + opt.fast_path_margin) {
            ClassicalResult out;
            out.value = std::max(best.value, 0.0);
            out.basis = best.basis;
            out.diagnostics.grid_best = best.value;
            out.diagnostics.refined_best = refined.value;
            out.diagnostics.iterations = evals;
            out.diagnostics.fast_path = true;
            return out;
        }
        ClassicalResult out = detail::full_search(score, opt, evals);
        if (refined.value > out.value) {
            out.value = refined.value;
            out.basis = refined.basis;
            out.diagnostics.refined_best = refined.value;
        }
        out.value = std::max(out.value, 0.0);
        out.diagnostics.iterations = evals;
        out.diagnostics.interior_optimum = true;
        return out;
    }

    ClassicalResult out = detail::full_search(score, opt, evals);
    out.value = std::max(out.value, 0.0);
    out.diagnostics.iterations = evals;
    return out;
}

/// Brute-force C on a dense theta x phi grid (the oracle for the optimizer).
inline double classical_corr_brute(const DensityMatrix& rho, int n_theta, int n_phi)
{
    const ConditionalKernel kernel(rho);
    const double s_a = entropy(rho.trace_out_b());
    double best = -1.0;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            best = std::max(best, s_a - kernel({pi * i / (n_theta - 1), 2.0 * pi * j / n_phi}));
    return best;
}

/// Discord below -this is reported as an error rather than clipped.
inline constexpr double discord_negative_tol = 1e-9;

struct CorrelationTriple {
    double mutual_info = 0.0;  ///< I
    double classical = 0.0;    ///< C
    double discord = 0.0;      ///< Q = I - C
    MeasurementBasis argmax;
    OptimizerDiagnostics diagnostics;
    /// |Q(measure B) - Q(measure A)| when requested; probes the open question of
    /// which qubit is measured.
    std::optional<double> ab_asymmetry;
};

struct DiscordOptions {
    ClassicalOptions classical;
    bool ab_asymmetry = false;
};

/// (I, C, Q) with measurement on B.
inline CorrelationTriple discord(const DensityMatrix& rho, const DiscordOptions& opt = {})
{
    CorrelationTriple t;
    t.mutual_info = mutual_info(rho);
    const ClassicalResult c = classical_corr(rho, opt.classical);
    t.classical = std::min(c.value, t.mutual_info + discord_negative_tol);
    t.argmax = c.basis;
    t.diagnostics = c.diagnostics;
    double q = t.mutual_info - c.value;
    if (q < -discord_negative_tol)
        throw NumericalError("classical correlations exceed the mutual information by " + std::to_string(-q));
    t.discord = std::max(q, 0.0);
    t.classical = t.mutual_info - t.discord;
    if (opt.ab_asymmetry) {
        const ClassicalResult ca = classical_corr(rho.swapped(), opt.classical);
        t.ab_asymmetry = std::abs(c.value - ca.value);
    }
    return t;
}

} // namespace xyqd
