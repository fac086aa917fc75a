#pragma once

// Point evaluation: (state convention, gamma, h, T, L) -> correlators -> I, C, Q per distance.

#include <optional>
#include <string>
#include <vector>

#include "xyqd/density.hpp"
#include "xyqd/ed.hpp"
#include "xyqd/errors.hpp"
#include "xyqd/fermion.hpp"
#include "xyqd/infotheory.hpp"

namespace xyqd {

/// Which zero- or finite-temperature state the correlators describe.
enum class StateConvention {
    Symmetric,  ///< T -> 0+ limit of the thermal state (Z2 symmetric); T must be 0
    Broken,     ///< symmetry-broken ground state (bulk string limit or ED)
    Thermal,    ///< Gibbs state at T > 0
};

inline const char* to_string(StateConvention s)
{
    switch (s) {
    case StateConvention::Symmetric: return "symmetric";
    case StateConvention::Broken: return "broken";
    case StateConvention::Thermal: return "thermal";
    }
    return "?";
}

inline StateConvention parse_state_convention(const std::string& s)
{
    if (s == "symmetric")
        return StateConvention::Symmetric;
    if (s == "broken")
        return StateConvention::Broken;
    if (s == "thermal")
        return StateConvention::Thermal;
    throw ValidationError("unknown state convention '" + s + "'");
}

struct PointSpec {
    double gamma = 0.7;
    double h = 0.5;
    double temperature = 0.0;
    std::optional<int> length;  ///< empty = thermodynamic limit
    StateConvention state = StateConvention::Symmetric;
    Boundary boundary = Boundary::Periodic;  ///< ED (broken, finite L) only
    double h_x = 0.0;            ///< broken ED: 0 selects the h_x -> 0+ sector superposition
    bool adaptive_hx = false;    ///< broken ED: literal field raised above the parity splitting
    FermionOptions fermion{};

    ModelParams params() const { return ModelParams{gamma, h, temperature, length}; }

    void validate() const
    {
        params().validate();
        if (state == StateConvention::Thermal && !(temperature > 0.0))
            throw ValidationError("thermal convention needs T > 0");
        if (state != StateConvention::Thermal && temperature != 0.0)
            throw ValidationError(std::string(to_string(state)) + " convention is a T = 0 state; use thermal");
        if (state == StateConvention::Broken && length && *length > max_ed_length)
            throw ValidationError("broken convention at finite L needs L <= 20 (exact diagonalization)");
        if (boundary == Boundary::Open && state != StateConvention::Broken)
            throw ValidationError("open boundaries are only available for the broken (ED) convention");
        if (!(h_x >= 0.0))
            throw ValidationError("h_x must be >= 0");
    }
};

/// Correlators at a point. Finite-L broken states come from ED.
inline CorrelatorSet point_correlators(const PointSpec& s, int r_max)
{
    s.validate();
    switch (s.state) {
    case StateConvention::Symmetric:
    case StateConvention::Thermal:
        return correlators(s.params(), r_max, s.fermion);
    case StateConvention::Broken: {
        if (!s.length)
            return broken_correlators_bulk(s.gamma, s.h, r_max);
        EdConfig c;
        c.length = *s.length;
        c.boundary = s.boundary;
        c.gamma = s.gamma;
        c.h = s.h;
        c.h_x = s.h_x;
        c.adaptive_hx = s.adaptive_hx;
        const EdState st = (s.h_x > 0.0 || s.adaptive_hx) ? ground_state(c) : broken_state(c);
        return correlators_ed(st, r_max);
    }
    }
    throw ValidationError("unknown state convention");
}

struct PairRecord {
    int r = 0;
    CorrelationTriple triple;
};

/// I, C, Q for each distance in `radii` from one correlator set.
inline std::vector<PairRecord> pair_profile(const CorrelatorSet& cs, const std::vector<int>& radii,
                                            const DiscordOptions& opt = {})
{
    std::vector<PairRecord> out;
    out.reserve(radii.size());
    for (int r : radii)
        out.push_back({r, discord(rho_pair(cs, r), opt)});
    return out;
}

inline int max_radius(const std::vector<int>& radii)
{
    if (radii.empty())
        throw ValidationError("empty list of distances");
    int m = 0;
    for (int r : radii) {
        if (r < 1)
            throw ValidationError("distances must be >= 1");
        m = std::max(m, r);
    }
    return m;
}

/// Discord Q_r at a point for each r in `radii`.
inline std::vector<double> discord_profile(const PointSpec& s, const std::vector<int>& radii,
                                           const DiscordOptions& opt = {})
{
    const CorrelatorSet cs = point_correlators(s, max_radius(radii));
    std::vector<double> q;
    for (const auto& rec : pair_profile(cs, radii, opt))
        q.push_back(rec.triple.discord);
    return q;
}

inline double discord_at(const PointSpec& s, int r, const DiscordOptions& opt = {})
{
    return discord_profile(s, {r}, opt).front();
}

} // namespace xyqd
