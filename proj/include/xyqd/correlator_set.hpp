#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xyqd/errors.hpp"

namespace xyqd {

enum class Provenance {
    BulkQuadrature,  ///< thermodynamic limit, Gaussian (symmetric) state
    FiniteLSum,      ///< finite chain, single-sector Gaussian ground state
    FiniteLThermal,  ///< finite chain, exact parity-projected thermal mixture
    BulkBroken,      ///< thermodynamic limit, symmetry-broken ground state
    ED,              ///< exact diagonalization
    Synthetic,       ///< assembled by hand (tests, CLI input)
};

inline const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::BulkQuadrature: return "bulk-quadrature";
    case Provenance::FiniteLSum: return "finite-L-sum";
    case Provenance::FiniteLThermal: return "finite-L-thermal";
    case Provenance::BulkBroken: return "bulk-broken";
    case Provenance::ED: return "ED";
    case Provenance::Synthetic: return "synthetic";
    }
    return "?";
}

/// One- and two-point spin functions at a parameter point.
///
/// Per-distance arrays are indexed by r - 1 for r = 1..r_max. `G` holds the
/// raw fermionic correlator G(n) for n = -r_max..r_max when the state is
/// (a mixture of) Gaussian states; it is empty for ED data.
struct CorrelatorSet {
    double g_z = 0.0;
    double g_x = 0.0;
    std::vector<double> g_xx, g_yy, g_zz, g_xz, g_zx;
    std::vector<double> G;
    Provenance provenance = Provenance::Synthetic;

    /// True when the state is a single Gaussian state, so that Wick's theorem
    /// ties g_zz to G exactly.
    bool gaussian = false;

    static CorrelatorSet zeros(int r_max, Provenance prov = Provenance::Synthetic)
    {
        CorrelatorSet cs;
        const auto n = static_cast<std::size_t>(r_max);
        cs.g_xx.assign(n, 0.0);
        cs.g_yy.assign(n, 0.0);
        cs.g_zz.assign(n, 0.0);
        cs.g_xz.assign(n, 0.0);
        cs.g_zx.assign(n, 0.0);
        cs.provenance = prov;
        return cs;
    }

    int r_max() const { return static_cast<int>(g_xx.size()); }

    double G_at(int n) const
    {
        const int rm = r_max();
        if (G.empty() || n < -rm || n > rm)
            throw ValidationError("G(" + std::to_string(n) + ") not available");
        return G[static_cast<std::size_t>(n + rm)];
    }

    double xx(int r) const { return g_xx.at(static_cast<std::size_t>(r - 1)); }
    double yy(int r) const { return g_yy.at(static_cast<std::size_t>(r - 1)); }
    double zz(int r) const { return g_zz.at(static_cast<std::size_t>(r - 1)); }
    double xz(int r) const { return g_xz.at(static_cast<std::size_t>(r - 1)); }
    double zx(int r) const { return g_zx.at(static_cast<std::size_t>(r - 1)); }

    /// Z2-symmetric: every odd-in-sigma^x entry vanishes identically.
    bool symmetric() const
    {
        if (g_x != 0.0)
            return false;
        for (std::size_t i = 0; i < g_xz.size(); ++i)
            if (g_xz[i] != 0.0 || g_zx[i] != 0.0)
                return false;
        return true;
    }
};

} // namespace xyqd
