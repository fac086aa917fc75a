#pragma once

// Exact diagonalization of the XY chain on up to 20 sites.
//
// Basis: bit j of the index is 1 when spin j points down (sz_j = -1).
// H is applied matrix-free; ground states come from Lanczos with full
// reorthogonalization, run separately in the two Z2 (fermion-parity) sectors.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "xyqd/correlator_set.hpp"
#include "xyqd/density.hpp"
#include "xyqd/errors.hpp"
#include "xyqd/fermion.hpp"
#include "xyqd/model.hpp"

namespace xyqd {

enum class Boundary { Periodic, Open };

inline const char* to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "open"; }

inline constexpr int max_ed_length = 20;
inline constexpr int max_thermal_ed_length = 10;

struct EdConfig {
    int length = 8;
    Boundary boundary = Boundary::Periodic;
    double gamma = 1.0;
    double h = 0.0;
    double h_x = 0.0;            ///< longitudinal symmetry-breaking field, >= 0
    bool adaptive_hx = false;    ///< raise h_x until it dominates the parity splitting
    double hx_floor = 1e-6;
    double hx_cap = 1e-3;
    double lanczos_tol = 1e-12;  ///< bound on ||H psi - E psi|| / max(1, |E|)
    std::uint64_t seed = 20240607;
    int max_restarts = 60;
    int krylov_dim = 0;          ///< 0 picks from the Hilbert-space dimension

    void validate() const
    {
        if (length < 2 || length > max_ed_length)
            throw ValidationError("ED length must lie in [2, 20]");
        if (boundary == Boundary::Periodic && length < 3)
            throw ValidationError("periodic ED needs at least 3 sites");
        if (!(h_x >= 0.0))
            throw ValidationError("h_x must be >= 0");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw ValidationError("gamma must lie in [0, 1]");
    }

    std::size_t dim() const { return std::size_t{1} << length; }
};

enum class EdStateKind {
    Eigenstate,           ///< converged eigenvector of H (with the field h_x_used)
    SectorSuperposition,  ///< (psi_even + psi_odd)/sqrt(2), the h_x -> 0+ broken state
};

struct EdState {
    double energy = 0.0;
    Eigen::VectorXd psi;
    int length = 0;
    Boundary boundary = Boundary::Periodic;
    EdStateKind kind = EdStateKind::Eigenstate;
    std::optional<Parity> parity;  ///< set when the state has definite parity
    bool degenerate = false;       ///< even and odd sector minima within sector_degeneracy_tol
    double E_even = std::numeric_limits<double>::quiet_NaN();
    double E_odd = std::numeric_limits<double>::quiet_NaN();
    double h_x_used = 0.0;
    bool hx_capped = false;
    double residual = 0.0;
    int lanczos_iterations = 0;
};

namespace detail {

inline bool odd_popcount(std::uint64_t s) { return (std::popcount(s) & 1) != 0; }

} // namespace detail

/// out = H in.
inline void apply_hamiltonian(const EdConfig& cfg, const Eigen::VectorXd& in, Eigen::VectorXd& out)
{
    const int L = cfg.length;
    const std::size_t dim = cfg.dim();
    const int bonds = cfg.boundary == Boundary::Periodic ? L : L - 1;
    std::size_t mask[64];
    for (int j = 0; j < bonds; ++j)
        mask[j] = (std::size_t{1} << j) | (std::size_t{1} << ((j + 1) % L));
    const double coef[2] = {cfg.gamma, 1.0};
    out.resize(static_cast<Eigen::Index>(dim));
    const double* x = in.data();
    double* y = out.data();
    for (std::size_t s = 0; s < dim; ++s) {
        double acc = -cfg.h * (L - 2 * std::popcount(s)) * x[s];
        for (int j = 0; j < bonds; ++j) {
            const std::size_t m = s & mask[j];
            acc -= coef[m != 0 && m != mask[j]] * x[s ^ mask[j]];
        }
        if (cfg.h_x != 0.0)
            for (int j = 0; j < L; ++j)
                acc -= cfg.h_x * x[s ^ (std::size_t{1} << j)];
        y[s] = acc;
    }
}

/// out = sum_j sx_j in.
inline Eigen::VectorXd apply_total_sx(int length, const Eigen::VectorXd& in)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(in.size());
    for (Eigen::Index s = 0; s < in.size(); ++s)
        for (int j = 0; j < length; ++j)
            out[s] += in[s ^ (Eigen::Index{1} << j)];
    return out;
}

namespace detail {

/// Basis state with sector index i: the lowest bit is fixed by the parity of the rest.
inline std::size_t sector_state(std::size_t i, Parity p)
{
    const std::size_t rest = i << 1;
    const bool odd_rest = odd_popcount(rest);
    return rest | static_cast<std::size_t>(odd_rest != (p == Parity::Odd));
}

} // namespace detail

/// out = H in on one fermion-parity sector (h_x ignored). Vectors have dimension 2^(L-1),
/// component i holding the amplitude of detail::sector_state(i, p).
inline void apply_sector_hamiltonian(const EdConfig& cfg, Parity p, const Eigen::VectorXd& in,
                                     Eigen::VectorXd& out)
{
    const int L = cfg.length;
    const std::size_t half = cfg.dim() >> 1;
    const int bonds = cfg.boundary == Boundary::Periodic ? L : L - 1;
    std::size_t mask[64];
    for (int j = 0; j < bonds; ++j)
        mask[j] = (std::size_t{1} << j) | (std::size_t{1} << ((j + 1) % L));
    const double coef[2] = {cfg.gamma, 1.0};  // parallel pair, antiparallel pair
    out.resize(static_cast<Eigen::Index>(half));
    const double* x = in.data();
    double* y = out.data();
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t s = detail::sector_state(i, p);
        double acc = -cfg.h * (L - 2 * std::popcount(s)) * x[i];
        for (int j = 0; j < bonds; ++j) {
            const std::size_t m = s & mask[j];
            const bool anti = m != 0 && m != mask[j];
            acc -= coef[anti] * x[(s ^ mask[j]) >> 1];
        }
        y[i] = acc;
    }
}

struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    int iterations = 0;
};

/// Lowest eigenpair of the operator `apply` by restarted two-pass Lanczos.
///
/// The first pass runs the three-term recurrence keeping only the tridiagonal
/// coefficients, until the Ritz estimate of the lowest pair is below tol. The
/// second pass regenerates the identical Krylov vectors to assemble the Ritz
/// vector, so memory stays at a few vectors. A cycle stops before orthogonality
/// loss can spawn spurious copies of the lowest Ritz value matter; the true
/// residual ||A x - theta x|| < tol * max(1, |theta|) is checked after every
/// cycle, and the Ritz vector seeds the next one. When `sector` is set, every
/// Krylov vector is projected onto that fermion parity.
template <class Apply>
LanczosResult lanczos_lowest(Apply&& apply, Eigen::VectorXd start, double tol, int krylov_dim,
                             int max_restarts, std::optional<Parity> sector = {})
{
    const Eigen::Index dim = start.size();
    auto project = [&](Eigen::VectorXd& v) {
        if (!sector)
            return;
        const bool want_odd = *sector == Parity::Odd;
        for (Eigen::Index s = 0; s < dim; ++s)
            if (detail::odd_popcount(static_cast<std::uint64_t>(s)) != want_odd)
                v[s] = 0.0;
    };
    const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, dim));
    LanczosResult res;
    Eigen::VectorXd v(dim), prev(dim), w(dim);

    project(start);
    for (int restart = 0; restart <= max_restarts; ++restart) {
        const double nrm = start.norm();
        if (nrm == 0.0)
            throw NoConvergence("Lanczos start vector vanishes in the requested sector");
        const Eigen::VectorXd v0 = start / nrm;

        // one recurrence step: w = A v - a v - b_prev prev
        auto step = [&](double& a, double b_prev) {
            apply(v, w);
            a = v.dot(w);
            w -= a * v;
            if (b_prev != 0.0)
                w -= b_prev * prev;
            w -= v.dot(w) * v;  // local reorthogonalization
            project(w);
        };

        std::vector<double> alpha, beta;
        Eigen::VectorXd ritz;
        v = v0;
        prev.setZero();
        int used = 0;
        for (int j = 0; j < m; ++j) {
            double a = 0.0;
            step(a, beta.empty() ? 0.0 : beta.back());
            ++res.iterations;
            alpha.push_back(a);
            const double b = w.norm();
            used = j + 1;
            const bool last = j + 1 == m;
            if (used % 4 == 0 || last || b < 1e-14 * std::max(1.0, std::abs(a))) {
                Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), used);
                Eigen::VectorXd off = used > 1 ? Eigen::Map<Eigen::VectorXd>(beta.data(), used - 1)
                                               : Eigen::VectorXd();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
                ritz = tri.eigenvectors().col(0);
                const double scale = std::max(1.0, std::abs(tri.eigenvalues()[0]));
                if (b * std::abs(ritz[used - 1]) < 0.1 * tol * scale || b < 1e-14 * scale || last)
                    break;
            }
            beta.push_back(b);
            prev = v;
            v = w / b;
        }

        // second pass: same recurrence, accumulate the Ritz vector
        Eigen::VectorXd x = ritz[0] * v0;
        v = v0;
        prev.setZero();
        for (int j = 0; j + 1 < used; ++j) {
            double a = 0.0;
            step(a, j == 0 ? 0.0 : beta[static_cast<std::size_t>(j) - 1]);
            prev = v;
            v = w / beta[static_cast<std::size_t>(j)];
            x += ritz[j + 1] * v;
        }
        x.normalize();
        apply(x, w);
        const double rq = x.dot(w);
        res.residual = (w - rq * x).norm();
        res.value = rq;
        res.vector = std::move(x);
        if (res.residual < tol * std::max(1.0, std::abs(rq)))
            return res;
        start = res.vector;
    }
    throw NoConvergence("Lanczos residual " + std::to_string(res.residual) + " above tolerance after " +
                        std::to_string(max_restarts) + " restarts");
}

namespace detail {

inline int auto_krylov_dim(std::size_t dim)
{
    // steps per cycle; memory does not grow with it
    return static_cast<int>(std::min<std::size_t>(dim, 300));
}

inline Eigen::VectorXd random_start(std::size_t dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (auto& x : v)
        x = u(rng);
    return v;
}

} // namespace detail

struct SectorStates {
    LanczosResult even;
    LanczosResult odd;
};

/// Ground states of the two parity sectors at h_x = 0, returned as full 2^L vectors.
inline SectorStates sector_ground_states(const EdConfig& cfg_in)
{
    EdConfig cfg = cfg_in;
    cfg.validate();
    cfg.h_x = 0.0;
    const std::size_t half = cfg.dim() >> 1;
    const int m = cfg.krylov_dim > 0 ? cfg.krylov_dim : detail::auto_krylov_dim(half);
    auto solve = [&](Parity p, std::uint64_t seed) {
        auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
            apply_sector_hamiltonian(cfg, p, in, out);
        };
        LanczosResult r =
            lanczos_lowest(apply, detail::random_start(half, seed), cfg.lanczos_tol, m, cfg.max_restarts);
        Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.dim()));
        for (std::size_t i = 0; i < half; ++i)
            full[static_cast<Eigen::Index>(detail::sector_state(i, p))] = r.vector[static_cast<Eigen::Index>(i)];
        r.vector = std::move(full);
        return r;
    };
    SectorStates st;
    st.even = solve(Parity::Even, cfg.seed);
    st.odd = solve(Parity::Odd, cfg.seed + 1);
    return st;
}

namespace detail {

/// Aligns the odd state so that <even| sum_j sx_j |odd> >= 0 and returns that element.
inline double align_sectors(int length, SectorStates& st)
{
    double X = st.even.vector.dot(apply_total_sx(length, st.odd.vector));
    if (X < 0.0) {
        st.odd.vector = -st.odd.vector;
        X = -X;
    }
    return X;
}

} // namespace detail

/// Lowest eigenpair of H - h_x sum_j sx_j.
///
/// With h_x = 0 the lower parity sector is returned (even on a degeneracy,
/// flagged). With h_x > 0 the Lanczos run is started from the ground state of
/// H restricted to the two sector minima, which is where the field acts first.
/// `adaptive_hx` raises h_x to max(floor, 1e3 * splitting / <e|sum sx|o>),
/// capped at hx_cap, so that h_x L g_x >= 1e3 x (sector gap).
inline EdState ground_state(const EdConfig& cfg)
{
    cfg.validate();
    SectorStates st = sector_ground_states(cfg);
    EdState out;
    out.length = cfg.length;
    out.boundary = cfg.boundary;
    out.E_even = st.even.value;
    out.E_odd = st.odd.value;
    out.degenerate = std::abs(st.even.value - st.odd.value) <= sector_degeneracy_tol;

    if (cfg.h_x == 0.0 && !cfg.adaptive_hx) {
        const bool odd = st.odd.value < st.even.value - sector_degeneracy_tol;
        const LanczosResult& pick = odd ? st.odd : st.even;
        out.energy = pick.value;
        out.psi = pick.vector;
        out.parity = odd ? Parity::Odd : Parity::Even;
        out.residual = pick.residual;
        out.lanczos_iterations = st.even.iterations + st.odd.iterations;
        return out;
    }

    const double X = detail::align_sectors(cfg.length, st);
    double hx = cfg.h_x;
    if (cfg.adaptive_hx) {
        hx = std::max(cfg.h_x, cfg.hx_floor);
        const double split = std::abs(st.even.value - st.odd.value);
        if (X > 0.0)
            hx = std::max(hx, 1e3 * split / X);
        if (hx > cfg.hx_cap) {
            hx = cfg.hx_cap;
            out.hx_capped = true;
        }
    }
    // two-level start: [[E_e, -hx X], [-hx X, E_o]]
    Eigen::Matrix2d h2;
    h2 << st.even.value, -hx * X, -hx * X, st.odd.value;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h2);
    Eigen::Vector2d c = es.eigenvectors().col(0);
    if (c[0] < 0.0)
        c = -c;
    const Eigen::VectorXd start = c[0] * st.even.vector + c[1] * st.odd.vector;

    EdConfig field = cfg;
    field.h_x = hx;
    const int m = cfg.krylov_dim > 0 ? cfg.krylov_dim : detail::auto_krylov_dim(cfg.dim());
    auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& o) { apply_hamiltonian(field, in, o); };
    LanczosResult r = lanczos_lowest(apply, start, cfg.lanczos_tol, m, cfg.max_restarts);
    if (r.vector.dot(apply_total_sx(cfg.length, r.vector)) < 0.0)
        r.vector = -r.vector;
    out.energy = r.value;
    out.psi = std::move(r.vector);
    out.h_x_used = hx;
    out.residual = r.residual;
    out.lanczos_iterations = st.even.iterations + st.odd.iterations + r.iterations;
    return out;
}

/// Symmetry-broken state in the limit h_x -> 0+ taken after the parity
/// splitting has closed: the equal-weight superposition of the two sector
/// minima, phased so that <sx> >= 0. No field bias enters.
inline EdState broken_state(const EdConfig& cfg)
{
    cfg.validate();
    SectorStates st = sector_ground_states(cfg);
    detail::align_sectors(cfg.length, st);
    EdState out;
    out.kind = EdStateKind::SectorSuperposition;
    out.length = cfg.length;
    out.boundary = cfg.boundary;
    out.E_even = st.even.value;
    out.E_odd = st.odd.value;
    out.degenerate = std::abs(st.even.value - st.odd.value) <= sector_degeneracy_tol;
    out.energy = 0.5 * (st.even.value + st.odd.value);
    out.psi = (st.even.vector + st.odd.vector) / std::sqrt(2.0);
    out.residual = std::max(st.even.residual, st.odd.residual);
    out.lanczos_iterations = st.even.iterations + st.odd.iterations;
    return out;
}

/// exp(-H/T)/Z on the full 2^L space.
struct ThermalState {
    Eigen::MatrixXd rho;
    int length = 0;
    Boundary boundary = Boundary::Periodic;
};

inline ThermalState thermal_state(const EdConfig& cfg, double temperature)
{
    cfg.validate();
    if (cfg.length > max_thermal_ed_length)
        throw DimensionTooLarge("thermal ED is limited to L <= 10");
    if (!(temperature > 0.0))
        throw ValidationError("thermal_state needs T > 0");
    const auto dim = static_cast<Eigen::Index>(cfg.dim());

    // Parity blocks when h_x = 0, the whole space otherwise.
    std::vector<std::vector<Eigen::Index>> blocks;
    if (cfg.h_x == 0.0) {
        blocks.resize(2);
        for (Eigen::Index s = 0; s < dim; ++s)
            blocks[detail::odd_popcount(static_cast<std::uint64_t>(s)) ? 1 : 0].push_back(s);
    } else {
        blocks.emplace_back(static_cast<std::size_t>(dim));
        for (Eigen::Index s = 0; s < dim; ++s)
            blocks[0][static_cast<std::size_t>(s)] = s;
    }

    Eigen::MatrixXd H(dim, dim);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim), col;
    for (Eigen::Index s = 0; s < dim; ++s) {
        unit[s] = 1.0;
        apply_hamiltonian(cfg, unit, col);
        H.col(s) = col;
        unit[s] = 0.0;
    }

    struct Block {
        const std::vector<Eigen::Index>* idx;
        Eigen::VectorXd e;
        Eigen::MatrixXd v;
    };
    std::vector<Block> solved;
    double e_min = std::numeric_limits<double>::infinity();
    for (const auto& idx : blocks) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd hb(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                hb(i, j) = H(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hb);
        e_min = std::min(e_min, es.eigenvalues().minCoeff());
        solved.push_back({&idx, es.eigenvalues(), es.eigenvectors()});
    }

    ThermalState ts;
    ts.length = cfg.length;
    ts.boundary = cfg.boundary;
    ts.rho = Eigen::MatrixXd::Zero(dim, dim);
    double Z = 0.0;
    for (const auto& b : solved) {
        const Eigen::VectorXd w = (-(b.e.array() - e_min) / temperature).exp();
        Z += w.sum();
        const Eigen::MatrixXd blk = b.v * w.asDiagonal() * b.v.transpose();
        const auto n = static_cast<Eigen::Index>(b.idx->size());
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                ts.rho((*b.idx)[static_cast<std::size_t>(i)], (*b.idx)[static_cast<std::size_t>(j)]) = blk(i, j);
    }
    ts.rho /= Z;
    return ts;
}

namespace detail {

/// Reduced density matrix on `sites` (1 or 2) given an accessor rho(s, t) of the full state.
/// Basis index of the reduced matrix: 2 * bit(site0) + bit(site1), bit 0 = spin up.
template <class Entry>
Eigen::MatrixXd reduce(int length, const std::vector<int>& sites, Entry&& entry)
{
    const int n = static_cast<int>(sites.size());
    const int d = 1 << n;
    const std::size_t dim = std::size_t{1} << length;
    std::size_t mask = 0;
    for (int s : sites)
        mask |= std::size_t{1} << s;
    auto compose = [&](std::size_t rest, int a) {
        std::size_t s = rest;
        for (int q = 0; q < n; ++q)
            if ((a >> (n - 1 - q)) & 1)
                s |= std::size_t{1} << sites[static_cast<std::size_t>(q)];
        return s;
    };
    Eigen::MatrixXd red = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t rest = 0; rest < dim; ++rest) {
        if (rest & mask)
            continue;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                red(a, b) += entry(compose(rest, a), compose(rest, b));
    }
    return red;
}

inline void check_sites(int length, const std::vector<int>& sites)
{
    if (sites.empty() || sites.size() > 2)
        throw ValidationError("reduced_density takes one or two sites");
    for (int s : sites)
        if (s < 0 || s >= length)
            throw ValidationError("site index out of range");
    if (sites.size() == 2 && sites[0] == sites[1])
        throw ValidationError("sites must be distinct");
}

} // namespace detail

inline DensityMatrix reduced_density(const EdState& st, const std::vector<int>& sites)
{
    detail::check_sites(st.length, sites);
    const Eigen::VectorXd& psi = st.psi;
    Eigen::MatrixXd red = detail::reduce(st.length, sites, [&](std::size_t s, std::size_t t) {
        return psi[static_cast<Eigen::Index>(s)] * psi[static_cast<Eigen::Index>(t)];
    });
    red /= red.trace();
    return DensityMatrix::from_matrix(red.cast<cplx>(), Provenance::ED);
}

inline DensityMatrix reduced_density(const ThermalState& ts, const std::vector<int>& sites)
{
    detail::check_sites(ts.length, sites);
    Eigen::MatrixXd red = detail::reduce(ts.length, sites, [&](std::size_t s, std::size_t t) {
        return ts.rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
    });
    return DensityMatrix::from_matrix(red.cast<cplx>(), Provenance::ED);
}

/// Sites (i, i + r) used for a pair at distance r: anchored at 0 on a ring,
/// centered on an open chain.
inline std::pair<int, int> pair_sites(int length, Boundary b, int r)
{
    if (b == Boundary::Periodic)
        return {0, r};
    const int i = (length - 1 - r) / 2;
    return {i, i + r};
}

/// Two-point Pauli expectation <s^a_i s^b_j> from a two-site reduced state.
inline double pauli_pair(const DensityMatrix& rho, int a, int b)
{
    return rho.expect(pauli::kron(pauli::by_index(a), pauli::by_index(b))).real();
}

namespace detail {

template <class State>
CorrelatorSet correlators_from(const State& st, int length, Boundary boundary, int r_max)
{
    const int limit = boundary == Boundary::Periodic ? length / 2 : length - 1;
    if (r_max < 1 || r_max > limit)
        throw ValidationError("r_max out of range for this chain");
    CorrelatorSet cs = CorrelatorSet::zeros(r_max, Provenance::ED);
    const auto [anchor, unused] = pair_sites(length, boundary, 1);
    (void)unused;
    const DensityMatrix single = reduced_density(st, {anchor});
    cs.g_z = single.expect(pauli::z()).real();
    cs.g_x = single.expect(pauli::x()).real();
    for (int r = 1; r <= r_max; ++r) {
        const auto [i, j] = pair_sites(length, boundary, r);
        const DensityMatrix pr = reduced_density(st, {i, j});
        const auto k = static_cast<std::size_t>(r - 1);
        cs.g_xx[k] = pauli_pair(pr, 1, 1);
        cs.g_yy[k] = pauli_pair(pr, 2, 2);
        cs.g_zz[k] = pauli_pair(pr, 3, 3);
        cs.g_xz[k] = pauli_pair(pr, 1, 3);
        cs.g_zx[k] = pauli_pair(pr, 3, 1);
    }
    return cs;
}

} // namespace detail

/// Full correlator set, including the odd entries g_x, g_xz, g_zx.
inline CorrelatorSet correlators_ed(const EdState& st, int r_max)
{
    return detail::correlators_from(st, st.length, st.boundary, r_max);
}

inline CorrelatorSet correlators_ed(const ThermalState& ts, int r_max)
{
    return detail::correlators_from(ts, ts.length, ts.boundary, r_max);
}

} // namespace xyqd
