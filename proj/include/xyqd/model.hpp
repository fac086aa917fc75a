#pragma once

// Transverse-field XY chain
//
//   H = -sum_j [ (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1} + h sz_j ]
//
// and its single-mode data after the Jordan-Wigner / Bogoliubov reduction.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "xyqd/errors.hpp"

namespace xyqd {

inline constexpr double pi = std::numbers::pi;

/// Fermion-number parity of a Jordan-Wigner sector. Even pairs with
/// antiperiodic momenta 2pi(n+1/2)/L, odd with periodic momenta 2pi n/L.
enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

struct ModelParams {
    double gamma = 1.0;
    double h = 0.0;
    double temperature = 0.0;   ///< T >= 0, units of the coupling; T == 0 is the ground state
    std::optional<int> length;  ///< empty means thermodynamic limit

    static ModelParams bulk(double gamma, double h, double temperature = 0.0)
    {
        return ModelParams{gamma, h, temperature, std::nullopt};
    }

    static ModelParams finite(double gamma, double h, int length, double temperature = 0.0)
    {
        return ModelParams{gamma, h, temperature, length};
    }

    bool is_bulk() const { return !length.has_value(); }

    double beta() const { return 1.0 / temperature; }

    void validate() const
    {
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw ValidationError("gamma must lie in (0, 1], got " + std::to_string(gamma));
        if (!std::isfinite(h))
            throw ValidationError("h must be finite");
        if (!(temperature >= 0.0))
            throw ValidationError("temperature must be >= 0");
        if (length && (*length < 4 || *length % 2 != 0))
            throw ValidationError("chain length must be even and >= 4, got " + std::to_string(*length));
    }
};

struct ModeData {
    double k = 0.0;
    double a = 0.0;       ///< h - cos k
    double b = 0.0;       ///< gamma sin k
    double lambda = 0.0;  ///< sqrt(a^2 + b^2); the quasiparticle energy is 2 lambda
    double theta = 0.0;   ///< Bogoliubov angle, tan theta = b / a
};

/// Single-mode data at momentum k in [0, pi].
///
/// theta is taken from atan2(b, a). On [0, pi] b >= 0, so this is the branch
/// that starts at theta = 0 at k = pi (where a = h + 1 > 0) and is continuous in k.
inline ModeData mode_data(const ModelParams& p, double k)
{
    ModeData m;
    m.k = k;
    m.a = p.h - std::cos(k);
    m.b = p.gamma * std::sin(k);
    m.lambda = std::hypot(m.a, m.b);
    m.theta = std::atan2(m.b, m.a);
    return m;
}

/// Momenta of a finite-L sector over the full zone [0, 2pi).
inline std::vector<double> sector_momenta(int length, Parity parity)
{
    std::vector<double> ks(static_cast<std::size_t>(length));
    const double shift = parity == Parity::Even ? 0.5 : 0.0;
    for (int n = 0; n < length; ++n)
        ks[static_cast<std::size_t>(n)] = 2.0 * pi * (n + shift) / length;
    return ks;
}

/// Factorizing field on the line h^2 + gamma^2 = 1.
inline double factorizing_field(double gamma) { return std::sqrt(1.0 - gamma * gamma); }

} // namespace xyqd
