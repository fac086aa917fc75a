#pragma once

// Free-fermion solution of the XY chain: the fermionic correlator G(n),
// Toeplitz-determinant spin correlators, parity sectors, and fidelity.
//
// Conventions (checked entrywise against exact diagonalization):
//   G(n)      = (1/pi) int_0^pi dk [cos(kn) a_k + sin(kn) b_k] tanh(beta lambda_k) / lambda_k
//   g_z       = G(0)
//   g_xx(r)   = (-1)^r det[ G(i-j-1) ]_{i,j=1..r}
//   g_yy(r)   = (-1)^r det[ G(i-j+1) ]_{i,j=1..r}
//   g_zz(r)   = g_z^2 - G(r) G(-r)
// On a finite periodic chain the integral becomes (1/L) sum over the momenta
// of a parity sector. In the odd sector the unpaired modes k = 0 and k = pi
// enter with occupation factors t_0 and t_pi instead of a_k / lambda_k.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "xyqd/correlator_set.hpp"
#include "xyqd/errors.hpp"
#include "xyqd/model.hpp"
#include "xyqd/quadrature.hpp"

namespace xyqd {

struct FermionOptions {
    QuadratureOptions quad{1e-10, 40};
};

/// Energies closer than this are treated as a sector degeneracy (the even sector wins).
inline constexpr double sector_degeneracy_tol = 1e-10;

inline constexpr int max_correlator_distance = 64;

/// Read-only view of G(n) on a contiguous range of n.
struct GView {
    std::span<const double> values;
    int n_lo = 0;

    double operator()(int n) const { return values[static_cast<std::size_t>(n - n_lo)]; }
};

namespace detail {

inline double log_2cosh(double x)
{
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x));
}

/// log(2 sinh x) for x > 0.
inline double log_2sinh(double x)
{
    return x < 1.0 ? std::log(2.0 * std::sinh(x)) : x + std::log1p(-std::exp(-2.0 * x));
}

inline bool is_unpaired(double k)
{
    // k = 0 or k = pi within rounding of 2 pi n / L
    return std::abs(std::sin(k)) < 1e-12;
}

} // namespace detail

/// det[ G(i - j + shift) ] for i, j = 0..r-1 by dense LU.
inline double toeplitz_det(const GView& G, int r, int shift)
{
    if (r == 0)
        return 1.0;
    Eigen::MatrixXd m(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            m(i, j) = G(i - j + shift);
    return m.partialPivLu().determinant();
}

/// G(n) for n in [n_lo, n_hi] in the thermodynamic limit, by adaptive quadrature.
inline std::vector<double> bulk_g_values(const ModelParams& p, int n_lo, int n_hi,
                                         const QuadratureOptions& q = {})
{
    const int count = n_hi - n_lo + 1;
    const bool ground = p.temperature == 0.0;
    const double beta = ground ? 0.0 : p.beta();
    auto integrand = [&](double k) {
        const ModeData m = mode_data(p, k);
        Eigen::ArrayXd v(count);
        if (m.lambda == 0.0) {
            v.setZero();
            return v;
        }
        const double w = (ground ? 1.0 : std::tanh(beta * m.lambda)) / m.lambda;
        const std::complex<double> step(std::cos(k), std::sin(k));
        std::complex<double> phase = std::polar(1.0, k * n_lo);
        for (int i = 0; i < count; ++i) {
            v[i] = (phase.real() * m.a + phase.imag() * m.b) * w;
            phase *= step;
        }
        return v;
    };
    std::vector<double> breaks{0.0, pi};
    if (std::abs(p.h - 1.0) < 1e-2)
        breaks = {0.0, 1e-3, pi};
    const QuadratureResult res = integrate_adaptive(integrand, breaks, q);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = res.value[i] / pi;
    return out;
}

/// How the quasiparticle modes of a finite-L sector are weighted.
enum class ModeWeighting {
    Ground,   ///< sector ground state
    Thermal,  ///< grand-canonical thermal state of the sector Hamiltonian
    Twisted,  ///< parity-twisted thermal operator P exp(-beta H), normalized
};

/// G(n) of a single Gaussian state of a finite-L sector for n in [n_lo, n_hi].
///
/// `t_zero`, `t_pi` override the occupation factors <1 - 2 n_k> of the
/// unpaired odd-sector modes; when empty they follow the weighting.
inline std::vector<double> sector_g_values(const ModelParams& p, Parity parity, ModeWeighting w,
                                           int n_lo, int n_hi, std::optional<double> t_zero = {},
                                           std::optional<double> t_pi = {})
{
    const int L = *p.length;
    const double beta = p.temperature > 0.0 ? p.beta() : 0.0;
    std::vector<double> out(static_cast<std::size_t>(n_hi - n_lo + 1), 0.0);
    for (double k : sector_momenta(L, parity)) {
        const ModeData m = mode_data(p, k);
        if (parity == Parity::Odd && detail::is_unpaired(k)) {
            const bool at_zero = std::cos(k) > 0.0;
            double t;
            if (at_zero && t_zero)
                t = *t_zero;
            else if (!at_zero && t_pi)
                t = *t_pi;
            else if (w == ModeWeighting::Ground)
                t = at_zero ? -1.0 : 1.0;  // odd parity forces n_0 = 1, n_pi = 0
            else if (w == ModeWeighting::Thermal)
                t = std::tanh(beta * m.a);
            else
                throw ValidationError("twisted unpaired factors must be given explicitly");
            for (int n = n_lo; n <= n_hi; ++n)
                out[static_cast<std::size_t>(n - n_lo)] += std::cos(k * n) * t;
            continue;
        }
        double t = 1.0;
        if (w == ModeWeighting::Thermal)
            t = std::tanh(beta * m.lambda);
        else if (w == ModeWeighting::Twisted)
            t = 1.0 / std::tanh(beta * m.lambda);
        for (int n = n_lo; n <= n_hi; ++n)
            out[static_cast<std::size_t>(n - n_lo)] +=
                (std::cos(k * n) * m.a + std::sin(k * n) * m.b) / m.lambda * t;
    }
    for (double& v : out)
        v /= L;
    return out;
}

/// Spin observables of one Gaussian state packed as
/// [g_z, g_xx(1..R), g_yy(1..R), g_zz(1..R), G(-R..R)].
inline Eigen::ArrayXd gaussian_observables(const GView& G, int r_max)
{
    Eigen::ArrayXd out(1 + 3 * r_max + 2 * r_max + 1);
    out[0] = G(0);
    for (int r = 1; r <= r_max; ++r) {
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        out[r] = sign * toeplitz_det(G, r, -1);
        out[r_max + r] = sign * toeplitz_det(G, r, 1);
        out[2 * r_max + r] = G(0) * G(0) - G(r) * G(-r);
    }
    for (int n = -r_max; n <= r_max; ++n)
        out[3 * r_max + 1 + (n + r_max)] = G(n);
    return out;
}

inline CorrelatorSet unpack_observables(const Eigen::ArrayXd& v, int r_max, Provenance prov, bool gaussian)
{
    CorrelatorSet cs = CorrelatorSet::zeros(r_max, prov);
    cs.gaussian = gaussian;
    cs.g_z = v[0];
    for (int r = 1; r <= r_max; ++r) {
        const auto i = static_cast<std::size_t>(r - 1);
        cs.g_xx[i] = v[r];
        cs.g_yy[i] = v[r_max + r];
        cs.g_zz[i] = v[2 * r_max + r];
    }
    cs.G.resize(static_cast<std::size_t>(2 * r_max + 1));
    for (int i = 0; i < 2 * r_max + 1; ++i)
        cs.G[static_cast<std::size_t>(i)] = v[3 * r_max + 1 + i];
    return cs;
}

struct SectorReport {
    double E_even = 0.0;
    double E_odd = 0.0;
    Parity occupied = Parity::Even;
    double gap = 0.0;  ///< |E_even - E_odd|
};

/// Lowest energy within a parity sector of the periodic chain.
inline double sector_ground_energy(const ModelParams& p, Parity parity)
{
    double e = 0.0;
    for (double k : sector_momenta(*p.length, parity)) {
        if (parity == Parity::Odd && detail::is_unpaired(k))
            continue;
        e -= mode_data(p, k).lambda;
    }
    // unpaired odd-sector modes: n_0 = 1 contributes (h - 1), n_pi = 0 contributes -(h + 1)
    if (parity == Parity::Odd)
        e -= 2.0;
    return e;
}

inline SectorReport ground_sector(const ModelParams& p)
{
    if (p.is_bulk())
        throw ValidationError("ground_sector needs a finite chain length");
    p.validate();
    SectorReport rep;
    rep.E_even = sector_ground_energy(p, Parity::Even);
    rep.E_odd = sector_ground_energy(p, Parity::Odd);
    rep.gap = std::abs(rep.E_even - rep.E_odd);
    rep.occupied = (rep.E_odd < rep.E_even - sector_degeneracy_tol) ? Parity::Odd : Parity::Even;
    return rep;
}

namespace detail {

/// Exact thermal expectation values on a finite periodic chain.
///
/// The spin trace splits into four Gaussian traces:
///   Z = 1/2 [ Tr_e e^{-bH} + Tr_e P e^{-bH} + Tr_o e^{-bH} - Tr_o P e^{-bH} ]
/// The twisted odd-sector term is multilinear in the unpaired factors t_0, t_pi,
/// so it is evaluated through its four corner values, which stays finite when
/// an unpaired mode has zero energy (h = 1).
inline Eigen::ArrayXd thermal_finite_observables(const ModelParams& p, int r_max)
{
    const int L = *p.length;
    const double beta = p.beta();
    const int n_lo = -r_max - 1, n_hi = r_max + 1;

    double log_c_even = 0.0, log_s_even = 0.0;
    for (double k : sector_momenta(L, Parity::Even)) {
        const double lam = mode_data(p, k).lambda;
        log_c_even += log_2cosh(beta * lam);
        log_s_even += log_2sinh(beta * lam);
    }
    double log_c_odd = 0.0, log_s_odd = 0.0;
    for (double k : sector_momenta(L, Parity::Odd)) {
        if (is_unpaired(k))
            continue;
        const double lam = mode_data(p, k).lambda;
        log_c_odd += log_2cosh(beta * lam);
        log_s_odd += log_2sinh(beta * lam);
    }
    const double a0 = p.h - 1.0, api = p.h + 1.0;
    const double l0 = beta * std::abs(a0), lpi = beta * std::abs(api);
    const double c0 = 1.0 + std::exp(-2.0 * l0), cpi = 1.0 + std::exp(-2.0 * lpi);
    const double s0 = std::copysign(1.0 - std::exp(-2.0 * l0), a0);
    const double spi = std::copysign(1.0 - std::exp(-2.0 * lpi), api);

    const double log_w1 = log_c_even;
    const double log_w2 = log_s_even;
    const double log_w3 = log_c_odd + l0 + lpi;
    const double log_w4 = log_s_odd + l0 + lpi;
    const double top = std::max({log_w1, log_w2, log_w3, log_w4});
    const double w1 = std::exp(log_w1 - top);
    const double w2 = std::exp(log_w2 - top);
    const double w3 = std::exp(log_w3 - top) * c0 * cpi;
    const double w4 = std::exp(log_w4 - top);

    auto obs = [&](Parity par, ModeWeighting w, std::optional<double> t0 = {},
                   std::optional<double> tpi = {}) {
        const auto g = sector_g_values(p, par, w, n_lo, n_hi, t0, tpi);
        return gaussian_observables(GView{g, n_lo}, r_max);
    };

    Eigen::ArrayXd num = w1 * obs(Parity::Even, ModeWeighting::Thermal) +
                         w2 * obs(Parity::Even, ModeWeighting::Twisted) +
                         w3 * obs(Parity::Odd, ModeWeighting::Thermal);
    const Eigen::ArrayXd f00 = obs(Parity::Odd, ModeWeighting::Twisted, 0.0, 0.0);
    const Eigen::ArrayXd f10 = obs(Parity::Odd, ModeWeighting::Twisted, 1.0, 0.0);
    const Eigen::ArrayXd f01 = obs(Parity::Odd, ModeWeighting::Twisted, 0.0, 1.0);
    const Eigen::ArrayXd f11 = obs(Parity::Odd, ModeWeighting::Twisted, 1.0, 1.0);
    const Eigen::ArrayXd lin0 = f10 - f00, linpi = f01 - f00;
    const Eigen::ArrayXd bilin = f11 - f10 - f01 + f00;
    num -= w4 * (s0 * spi * f00 + c0 * spi * lin0 + s0 * cpi * linpi + c0 * cpi * bilin);
    const double den = w1 + w2 + w3 - w4 * s0 * spi;
    return num / den;
}

} // namespace detail

/// Fermionic correlator G(n) at a single n.
inline double g_function(const ModelParams& p, int n, const FermionOptions& opt = {})
{
    p.validate();
    if (p.is_bulk())
        return bulk_g_values(p, n, n, opt.quad)[0];
    if (p.temperature == 0.0)
        return sector_g_values(p, ground_sector(p).occupied, ModeWeighting::Ground, n, n)[0];
    // mixture average of the bilinear is exact
    const int rm = std::max(1, std::abs(n));
    const Eigen::ArrayXd v = detail::thermal_finite_observables(p, rm);
    return v[3 * rm + 1 + (n + rm)];
}

/// Z2-symmetric correlators: bulk (quadrature) or finite periodic chain
/// (ground sector at T = 0, exact parity-projected trace at T > 0).
inline CorrelatorSet correlators(const ModelParams& p, int r_max, const FermionOptions& opt = {})
{
    p.validate();
    if (r_max < 1 || r_max > max_correlator_distance)
        throw ValidationError("r_max must lie in [1, 64]");
    if (p.length && r_max >= *p.length)
        throw ValidationError("r_max must be smaller than the chain length");

    if (p.is_bulk()) {
        const auto g = bulk_g_values(p, -r_max - 1, r_max + 1, opt.quad);
        const Eigen::ArrayXd v = gaussian_observables(GView{g, -r_max - 1}, r_max);
        return unpack_observables(v, r_max, Provenance::BulkQuadrature, true);
    }
    if (p.temperature == 0.0) {
        const Parity sector = ground_sector(p).occupied;
        const auto g = sector_g_values(p, sector, ModeWeighting::Ground, -r_max - 1, r_max + 1);
        const Eigen::ArrayXd v = gaussian_observables(GView{g, -r_max - 1}, r_max);
        return unpack_observables(v, r_max, Provenance::FiniteLSum, true);
    }
    return unpack_observables(detail::thermal_finite_observables(p, r_max), r_max,
                              Provenance::FiniteLThermal, false);
}

struct BrokenBulkOptions {
    QuadratureOptions quad{1e-13, 40};
    int min_string = 16;
    int max_string = 160;
    double convergence_tol = 1e-11;
};

/// Symmetry-broken ground-state correlators in the thermodynamic limit (T = 0).
///
/// Even operators coincide with the symmetric state. The odd ones follow from
/// cluster decomposition of the symmetric state along a long string R:
///   g_x^2          = lim g_xx(R)
///   g_x * g_xz(r)  = lim <sx_0 sz_r sx_R>
/// where the three-point function is a determinant of G(p - q) with the row
/// p = r and the column q = r removed from the g_xx(R) matrix. In the bulk
/// g_zx(r) = g_xz(r) by reflection.
inline CorrelatorSet broken_correlators_bulk(double gamma, double h, int r_max,
                                             const BrokenBulkOptions& opt = {})
{
    const ModelParams p = ModelParams::bulk(gamma, h);
    p.validate();
    if (r_max < 1 || r_max > max_correlator_distance)
        throw ValidationError("r_max must lie in [1, 64]");
    CorrelatorSet cs;
    {
        const auto g = bulk_g_values(p, -r_max - 1, r_max + 1, opt.quad);
        cs = unpack_observables(gaussian_observables(GView{g, -r_max - 1}, r_max), r_max,
                                Provenance::BulkBroken, true);
    }
    cs.provenance = Provenance::BulkBroken;
    cs.gaussian = false;
    if (std::abs(h) >= 1.0)
        return cs;  // paramagnet: no order parameter

    const int n_max = opt.max_string + 1;
    const auto g = bulk_g_values(p, -n_max, n_max, opt.quad);
    const GView G{g, -n_max};

    auto estimate = [&](int R, double& gx, std::vector<double>& gxz) {
        const double sign = (R % 2 == 0) ? 1.0 : -1.0;
        const double gxx = sign * toeplitz_det(G, R, -1);
        gx = std::sqrt(std::max(gxx, 0.0));
        gxz.assign(static_cast<std::size_t>(r_max), 0.0);
        Eigen::MatrixXd m(R - 1, R - 1);
        for (int r = 1; r <= r_max; ++r) {
            int row = 0;
            for (int pr = 0; pr < R; ++pr) {
                if (pr == r)
                    continue;
                int col = 0;
                for (int q = 1; q <= R; ++q) {
                    if (q == r)
                        continue;
                    m(row, col++) = G(pr - q);
                }
                ++row;
            }
            gxz[static_cast<std::size_t>(r - 1)] = -sign * m.partialPivLu().determinant() / gx;
        }
    };

    double gx_prev = 0.0, gx = 0.0;
    std::vector<double> prev, cur;
    int R = std::max(opt.min_string, r_max + 2);
    estimate(R, gx_prev, prev);
    for (R += 8; R <= opt.max_string; R += 8) {
        estimate(R, gx, cur);
        double diff = std::abs(gx - gx_prev);
        for (std::size_t i = 0; i < cur.size(); ++i)
            diff = std::max(diff, std::abs(cur[i] - prev[i]));
        if (diff < opt.convergence_tol) {
            cs.g_x = gx;
            cs.g_xz = cur;
            cs.g_zx = cur;
            return cs;
        }
        gx_prev = gx;
        prev = cur;
    }
    throw NoConvergence("broken-symmetry string did not converge (h too close to 1?)");
}

/// Fermion-parity crossing field between lo and hi, by bisection on E_even - E_odd.
inline double crossing_field(double gamma, int length, double lo, double hi)
{
    auto diff = [&](double h) {
        const ModelParams p = ModelParams::finite(gamma, h, length);
        return sector_ground_energy(p, Parity::Even) - sector_ground_energy(p, Parity::Odd);
    };
    double flo = diff(lo), fhi = diff(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw ValidationError("no parity crossing inside the bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Finite-size factorizing field: the parity crossing nearest to sqrt(1 - gamma^2).
inline double finite_size_factorizing_field(double gamma, int length, double window = 0.05)
{
    const double hf = factorizing_field(gamma);
    const int steps = 400;
    const double lo = std::max(1e-6, hf - window), hi = std::min(1.0 - 1e-6, hf + window);
    std::optional<double> best;
    auto diff = [&](double h) {
        const ModelParams p = ModelParams::finite(gamma, h, length);
        return sector_ground_energy(p, Parity::Even) - sector_ground_energy(p, Parity::Odd);
    };
    double x0 = lo, f0 = diff(lo);
    for (int i = 1; i <= steps; ++i) {
        const double x1 = lo + (hi - lo) * i / steps;
        const double f1 = diff(x1);
        if ((f0 > 0.0) != (f1 > 0.0) || f1 == 0.0) {
            const double root = crossing_field(gamma, length, x0, x1);
            if (!best || std::abs(root - hf) < std::abs(*best - hf))
                best = root;
        }
        x0 = x1;
        f0 = f1;
    }
    if (!best)
        throw NumericalError("no parity crossing near the factorizing field");
    return *best;
}

/// Ground-state fidelity |<gs(h)|gs(h + dh)>| on a periodic chain of length L.
///
/// Both states are taken in `sector` (default: the ground sector at h). Each
/// momentum pair contributes cos[(theta_k(h) - theta_k(h + dh)) / 2]; the
/// unpaired odd-sector modes have fixed occupation and contribute 1.
inline double fidelity(const ModelParams& p, double dh, std::optional<Parity> sector = {})
{
    p.validate();
    if (p.is_bulk())
        throw ValidationError("fidelity needs a finite chain length");
    ModelParams q = p;
    q.h = p.h + dh;
    q.validate();
    if (!sector) {
        const Parity s0 = ground_sector(p).occupied;
        const Parity s1 = ground_sector(q).occupied;
        if (s0 != s1)
            throw SectorMismatch("h and h + dh lie in different parity sectors");
        sector = s0;
    }
    double log_f = 0.0;
    for (double k : sector_momenta(*p.length, *sector)) {
        if (k <= 0.0 || k >= pi || detail::is_unpaired(k))
            continue;  // each (k, -k) pair once
        const double d = mode_data(p, k).theta - mode_data(q, k).theta;
        log_f += std::log(std::abs(std::cos(0.5 * d)));
    }
    return std::exp(log_f);
}

} // namespace xyqd
