#pragma once

// Derivatives, fits and scaling collapses.
//
// Collapse scoring: each slice is compared with a monotone piecewise-cubic
// (PCHIP) master curve through the pooled rescaled points of all *other*
// slices, at its points inside their common x range. The residual is the
// sum of squared deviations divided by the spread sum (y - mean y)^2 of the
// same points, so rescalings of y by different powers of L or T, or shifts
// by x ln T, are compared fairly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "xyqd/errors.hpp"

namespace xyqd {

// ---------------------------------------------------------------- derivatives

struct Derivative {
    double value = 0.0;
    double error = 0.0;      ///< max of the Richardson level difference and the one-sided mismatch
    bool smooth = true;      ///< false when forward and backward estimates disagree
    double forward = 0.0;
    double backward = 0.0;
};

namespace detail {

template <class Sampler>
double sample(const Sampler& f, double h)
{
    double v;
    try {
        v = f(h);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw SamplerFailure(std::string("sampler failed at h = ") + std::to_string(h) + ": " + e.what());
    }
    if (!std::isfinite(v))
        throw SamplerFailure("sampler returned a non-finite value at h = " + std::to_string(h));
    return v;
}

} // namespace detail

/// d f / d h by central differences with one Richardson level (steps s and s/2).
/// One-sided Richardson estimates from each side are compared to detect kinks.
template <class Sampler>
Derivative d_dh(const Sampler& f, double h, double step)
{
    if (!(step > 0.0))
        throw ValidationError("d_dh needs a positive step");
    const double s = step, s2 = 0.5 * step;
    const double f0 = detail::sample(f, h);
    const double fp = detail::sample(f, h + s), fm = detail::sample(f, h - s);
    const double fp2 = detail::sample(f, h + s2), fm2 = detail::sample(f, h - s2);
    const double c1 = (fp - fm) / (2.0 * s);
    const double c2 = (fp2 - fm2) / (2.0 * s2);
    Derivative d;
    d.value = (4.0 * c2 - c1) / 3.0;
    d.forward = 2.0 * (fp2 - f0) / s2 - (fp - f0) / s;
    d.backward = 2.0 * (f0 - fm2) / s2 - (f0 - fm) / s;
    const double mismatch = std::abs(d.forward - d.backward);
    d.error = std::max(std::abs(d.value - c2), mismatch);
    d.smooth = mismatch <= 1e-3 * std::max(1.0, std::abs(d.value));
    return d;
}

// ---------------------------------------------------------------- line fits

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_halfwidth = 0.0;      ///< bootstrap 95% half-width
    double intercept_halfwidth = 0.0;
    std::vector<double> residuals;
    std::size_t n = 0;
};

namespace detail {

inline std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y,
                                     const std::vector<std::size_t>& idx)
{
    double mx = 0.0, my = 0.0;
    for (auto i : idx) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(idx.size());
    my /= static_cast<double>(idx.size());
    double sxy = 0.0, sxx = 0.0;
    for (auto i : idx) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double b = sxx > 0.0 ? sxy / sxx : 0.0;
    return {b, my - b * mx};
}

inline double percentile_halfwidth(std::vector<double> v)
{
    if (v.size() < 2)
        return 0.0;
    std::sort(v.begin(), v.end());
    auto at = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    return 0.5 * (at(0.975) - at(0.025));
}

} // namespace detail

inline constexpr int bootstrap_samples = 100;
inline constexpr unsigned bootstrap_seed = 12345;

/// Least-squares line y = intercept + slope x with R^2 and bootstrap half-widths.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InsufficientRange("a line fit needs at least two points");
    LineFit f;
    f.n = x.size();
    std::vector<std::size_t> all(x.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::tie(f.slope, f.intercept) = detail::ols(x, y, all);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.residuals.push_back(r);
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    std::mt19937_64 rng(bootstrap_seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> slopes, intercepts;
    std::vector<std::size_t> idx(x.size());
    for (int b = 0; b < bootstrap_samples; ++b) {
        for (auto& i : idx)
            i = pick(rng);
        const auto [s, c] = detail::ols(x, y, idx);
        slopes.push_back(s);
        intercepts.push_back(c);
    }
    f.slope_halfwidth = detail::percentile_halfwidth(slopes);
    f.intercept_halfwidth = detail::percentile_halfwidth(intercepts);
    return f;
}

// ---------------------------------------------------------------- PCHIP

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
class Pchip {
public:
    /// x strictly increasing, at least two points.
    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw InsufficientRange("PCHIP needs at least two points");
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            if (!(h[i] > 0.0))
                throw ValidationError("PCHIP abscissae must be strictly increasing");
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        d_.assign(n, 0.0);
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0)
                continue;
            const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

    double operator()(double x) const
    {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i], t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
               (t3 - t2) * h * d_[i + 1];
    }

private:
    static double end_slope(double h0, double h1, double d0, double d1)
    {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0)
            d = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0))
            d = 3.0 * d0;
        return d;
    }

    std::vector<double> x_, y_, d_;
};

// ---------------------------------------------------------------- datasets

struct ScalingRecord {
    double param = 0.0;  ///< slice label: chain length L or temperature T
    double h = 0.0;
    double value = 0.0;
};

/// Tagged table of (L or T, h, observable) with the model parameters it came from.
struct ScalingDataset {
    std::string observable;
    std::string slice_kind = "L";  ///< "L" or "T"
    double gamma = 0.0;
    std::vector<ScalingRecord> records;

    struct Slice {
        double param;
        std::vector<double> h, value;
    };

    /// Records grouped by slice, each sorted by h. Duplicate h in a slice is an error.
    std::vector<Slice> slices() const
    {
        std::map<double, std::vector<std::pair<double, double>>> by;
        for (const auto& r : records)
            by[r.param].push_back({r.h, r.value});
        std::vector<Slice> out;
        for (auto& [p, pts] : by) {
            std::sort(pts.begin(), pts.end());
            Slice s{p, {}, {}};
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i > 0 && pts[i].first == pts[i - 1].first)
                    throw ValidationError("duplicate field value within a slice");
                s.h.push_back(pts[i].first);
                s.value.push_back(pts[i].second);
            }
            out.push_back(std::move(s));
        }
        return out;
    }
};

struct SliceShift {
    double param = 0.0;
    double shift = 0.0;  ///< h_m(L), h_f^(L), ...
    double peak = 0.0;   ///< slice maximum where applicable
};

struct CollapseResult {
    std::map<std::string, double> exponents;
    std::vector<SliceShift> shifts;
    double residual = 0.0;
    std::size_t points_used = 0;
    std::optional<LineFit> fit;  ///< drift or slope fit, when the operation performs one
};

struct RescaledSlice {
    std::vector<double> x, y;
};

namespace detail {

/// Pools points, sorts by x and averages exact x ties.
inline Pchip pooled_master(const std::vector<RescaledSlice>& slices, std::size_t skip)
{
    std::vector<std::pair<double, double>> pts;
    for (std::size_t s = 0; s < slices.size(); ++s)
        if (s != skip)
            for (std::size_t i = 0; i < slices[s].x.size(); ++i)
                pts.push_back({slices[s].x[i], slices[s].y[i]});
    std::sort(pts.begin(), pts.end());
    std::vector<double> x, y;
    std::vector<int> count;
    for (const auto& [px, py] : pts) {
        if (!x.empty() && px == x.back()) {
            y.back() += py;
            ++count.back();
        } else {
            x.push_back(px);
            y.push_back(py);
            count.push_back(1);
        }
    }
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] /= count[i];
    return Pchip(std::move(x), std::move(y));
}

} // namespace detail

/// Normalized leave-one-slice-out residual. Returns +inf when fewer than
/// `min_overlap` points of some slice fall inside the range of the others,
/// and 0 when every value is zero.
inline double collapse_residual(const std::vector<RescaledSlice>& slices, std::size_t* points_used = nullptr,
                                std::size_t min_overlap = 2)
{
    if (slices.size() < 2)
        throw InsufficientRange("a collapse needs at least two slices");
    // identically vanishing data collapses trivially, whatever the x ranges
    bool all_zero = true;
    std::size_t total = 0;
    for (const auto& s : slices) {
        total += s.y.size();
        for (double y : s.y)
            all_zero &= y == 0.0;
    }
    if (all_zero) {
        if (points_used)
            *points_used = total;
        return 0.0;
    }
    double num = 0.0;
    std::size_t used = 0;
    std::vector<double> seen;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        const Pchip master = detail::pooled_master(slices, s);
        std::size_t inside = 0;
        for (std::size_t i = 0; i < slices[s].x.size(); ++i) {
            const double x = slices[s].x[i];
            if (x < master.lo() || x > master.hi())
                continue;
            const double d = slices[s].y[i] - master(x);
            num += d * d;
            seen.push_back(slices[s].y[i]);
            ++inside;
        }
        if (inside < min_overlap)
            return std::numeric_limits<double>::infinity();
        used += inside;
    }
    if (points_used)
        *points_used = used;
    const double mean = std::accumulate(seen.begin(), seen.end(), 0.0) / static_cast<double>(seen.size());
    double den = 0.0;
    for (double y : seen)
        den += (y - mean) * (y - mean);
    if (den == 0.0)
        return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// ---------------------------------------------------------------- peak location

struct Peak {
    double position = 0.0;
    double value = 0.0;
};

/// Discrete argmax refined by the vertex of the parabola through its neighbours.
inline Peak locate_peak(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() < 3)
        throw NoPeak("need at least three points to locate a peak");
    const auto it = std::max_element(y.begin(), y.end());
    const auto i = static_cast<std::size_t>(it - y.begin());
    if (i == 0 || i + 1 == y.size())
        throw NoPeak("slice maximum lies on the boundary of the field grid");
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a < 0.0))
        return {x1, y1};
    const double b = d01 - a * (x0 + x1);
    const double xv = -b / (2.0 * a);
    const double yv = y1 + a * (xv - x1) * (xv - x1) + (2.0 * a * x1 + b) * (xv - x1);
    return {xv, yv};
}

// ---------------------------------------------------------------- finite-size scaling at h_c

/// Collapse of dQ/dh slices under y L^{-omega} versus L^{1/nu} (h - h_m(L)),
/// plus a power-law fit of h_c - h_m(L) against L.
inline CollapseResult fss_collapse(const ScalingDataset& ds, double omega, double nu, double h_c = 1.0)
{
    const auto slices = ds.slices();
    if (slices.size() < 3)
        throw InsufficientRange("finite-size scaling needs at least three sizes");
    CollapseResult out;
    out.exponents = {{"omega", omega}, {"nu", nu}};
    std::vector<RescaledSlice> rs;
    std::vector<double> logl, logd;
    for (const auto& s : slices) {
        if (s.h.size() < 7)
            throw InsufficientRange("each size needs at least seven fields");
        const Peak pk = locate_peak(s.h, s.value);
        out.shifts.push_back({s.param, pk.position, pk.value});
        RescaledSlice r;
        const double scale_x = std::pow(s.param, 1.0 / nu), scale_y = std::pow(s.param, -omega);
        for (std::size_t i = 0; i < s.h.size(); ++i) {
            r.x.push_back(scale_x * (s.h[i] - pk.position));
            r.y.push_back(scale_y * s.value[i]);
        }
        rs.push_back(std::move(r));
        if (h_c - pk.position > 0.0) {
            logl.push_back(std::log(s.param));
            logd.push_back(std::log(h_c - pk.position));
        }
    }
    out.residual = collapse_residual(rs, &out.points_used);
    if (logl.size() >= 2) {
        out.fit = fit_line(logl, logd);
        out.exponents["drift"] = -out.fit->slope;
    }
    return out;
}

// ---------------------------------------------------------------- exponential scaling at h_f

/// delta(Q) = Q^(L) - Q^(ref) collapsed against exp(-alpha L)(h - h_f^(L)).
/// `reference` holds the converged values on the same h grid; `h_f_of_L` gives
/// the finite-size factorizing field of each slice.
inline CollapseResult factorization_collapse(const ScalingDataset& ds, const std::map<double, double>& reference,
                                             const std::function<double(double)>& h_f_of_L, double alpha)
{
    const auto slices = ds.slices();
    if (slices.size() < 2)
        throw InsufficientRange("factorization scaling needs at least two sizes");
    CollapseResult out;
    out.exponents = {{"alpha", alpha}};
    std::vector<RescaledSlice> rs;
    for (const auto& s : slices) {
        const double hf = h_f_of_L(s.param);
        out.shifts.push_back({s.param, hf, 0.0});
        RescaledSlice r;
        const double scale = std::exp(-alpha * s.param);
        for (std::size_t i = 0; i < s.h.size(); ++i) {
            const auto it = reference.find(s.h[i]);
            if (it == reference.end())
                throw ReferenceMissing("no reference value at h = " + std::to_string(s.h[i]));
            r.x.push_back(scale * (s.h[i] - hf));
            r.y.push_back(s.value[i] - it->second);
        }
        rs.push_back(std::move(r));
    }
    out.residual = collapse_residual(rs, &out.points_used);
    return out;
}

/// Golden-section minimization of a one-dimensional function on [lo, hi].
template <class F>
double golden_section(const F& f, double lo, double hi, double tol = 1e-6)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct AlphaFit {
    double alpha = 0.0;
    CollapseResult collapse;
    std::vector<std::pair<double, double>> scan;  ///< (alpha, residual) on the coarse scan
};

/// Best alpha: coarse logarithmic scan over [lo, hi], then golden section
/// around the best scan point.
inline AlphaFit fit_alpha(const ScalingDataset& ds, const std::map<double, double>& reference,
                          const std::function<double(double)>& h_f_of_L, double lo = 0.05, double hi = 5.0,
                          int scan_points = 41)
{
    AlphaFit out;
    auto residual = [&](double a) { return factorization_collapse(ds, reference, h_f_of_L, a).residual; };
    std::size_t best = 0;
    for (int i = 0; i < scan_points; ++i) {
        const double a = lo * std::pow(hi / lo, static_cast<double>(i) / (scan_points - 1));
        out.scan.push_back({a, residual(a)});
        if (out.scan.back().second < out.scan[best].second)
            best = out.scan.size() - 1;
    }
    const double a_lo = out.scan[best == 0 ? 0 : best - 1].first;
    const double a_hi = out.scan[std::min(best + 1, out.scan.size() - 1)].first;
    out.alpha = golden_section(residual, a_lo, a_hi, 1e-6 * out.scan[best].first);
    if (residual(out.alpha) > out.scan[best].second)
        out.alpha = out.scan[best].first;
    out.collapse = factorization_collapse(ds, reference, h_f_of_L, out.alpha);
    return out;
}

// ---------------------------------------------------------------- near-factorization law

struct NearFactorizationPoint {
    double h = 0.0;
    int r = 0;
    double q = 0.0;
};

struct NearFactorizationFit {
    double power = 0.0;          ///< p in Q_r ~ |h - h_f|^p
    double decay_ratio = 0.0;    ///< rho in Q_r ~ rho^r (geometric mean of Q_{r+1}/Q_r)
    double power_r2 = 0.0;
    double power_halfwidth = 0.0;
    double ratio_spread = 0.0;   ///< max |log(ratio) - log(rho)| over the data
    std::size_t points = 0;
};

/// Joint fit of log Q_r = p log|h - h_f| + c_r (one intercept per r), and the
/// geometric-mean ratio of consecutive distances at equal h.
inline NearFactorizationFit near_factorization_fit(const std::vector<NearFactorizationPoint>& data, double h_f)
{
    std::map<int, std::vector<std::pair<double, double>>> by_r;  // r -> (log|dh|, log Q)
    std::map<double, std::map<int, double>> by_h;
    bool below = false, above = false;
    for (const auto& p : data) {
        if (!(p.q > 0.0) || p.h == h_f)
            continue;
        below |= p.h < h_f;
        above |= p.h > h_f;
        by_r[p.r].push_back({std::log(std::abs(p.h - h_f)), std::log(p.q)});
        by_h[p.h][p.r] = p.q;
    }
    if (!below || !above)
        throw InsufficientRange("near-factorization fit needs data on both sides of h_f");
    if (by_r.size() < 2)
        throw InsufficientRange("near-factorization fit needs at least two distances");

    NearFactorizationFit f;
    std::vector<double> xc, yc;
    for (const auto& [r, pts] : by_r) {
        double mx = 0.0, my = 0.0;
        for (const auto& [x, y] : pts) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        for (const auto& [x, y] : pts) {
            xc.push_back(x - mx);
            yc.push_back(y - my);
        }
    }
    const LineFit lf = fit_line(xc, yc);
    f.power = lf.slope;
    f.power_r2 = lf.r2;
    f.power_halfwidth = lf.slope_halfwidth;
    f.points = xc.size();

    std::vector<double> logs;
    for (const auto& [h, qs] : by_h)
        for (const auto& [r, q] : qs) {
            const auto next = qs.find(r + 1);
            if (next != qs.end())
                logs.push_back(std::log(next->second / q));
        }
    if (logs.empty())
        throw InsufficientRange("no consecutive distances at a common field");
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    f.decay_ratio = std::exp(mean);
    for (double l : logs)
        f.ratio_spread = std::max(f.ratio_spread, std::abs(l - mean));
    return f;
}

// ---------------------------------------------------------------- thermal scaling

struct ThermalSlopeFit {
    LineFit log_form;    ///< dQ/dh|_{h_c} = x ln T + k
    LineFit power_form;  ///< ln dQ/dh|_{h_c} = x ln T + k' (only when all values are positive)
    bool power_form_valid = false;
};

inline ThermalSlopeFit thermal_slope(const std::vector<double>& T, const std::vector<double>& dq)
{
    ThermalSlopeFit f;
    std::vector<double> lt, ld;
    bool positive = true;
    for (std::size_t i = 0; i < T.size(); ++i) {
        lt.push_back(std::log(T[i]));
        positive &= dq[i] > 0.0;
    }
    f.log_form = fit_line(lt, dq);
    if (positive) {
        for (double d : dq)
            ld.push_back(std::log(d));
        f.power_form = fit_line(lt, ld);
        f.power_form_valid = true;
    }
    return f;
}

enum class ThermalForm {
    Power,  ///< y = T^{-x} dQ/dh
    Log,    ///< y = dQ/dh - x ln T, the collapse matching the log law on the critical line
};

/// Collapse of the rescaled dQ/dh versus (h - h_c)/T, one slice per temperature.
inline CollapseResult thermal_collapse(const ScalingDataset& ds, double x, double h_c = 1.0,
                                       ThermalForm form = ThermalForm::Power)
{
    const auto slices = ds.slices();
    CollapseResult out;
    out.exponents = {{"x", x}};
    std::vector<RescaledSlice> rs;
    for (const auto& s : slices) {
        RescaledSlice r;
        const double scale = std::pow(s.param, -x), shift = x * std::log(s.param);
        for (std::size_t i = 0; i < s.h.size(); ++i) {
            r.x.push_back((s.h[i] - h_c) / s.param);
            r.y.push_back(form == ThermalForm::Power ? scale * s.value[i] : s.value[i] - shift);
        }
        rs.push_back(std::move(r));
    }
    out.residual = collapse_residual(rs, &out.points_used);
    return out;
}

// ---------------------------------------------------------------- displacement

/// Mean absolute pairwise difference 2 sum_{i<j} |Q_i - Q_j| / (m (m - 1)).
inline double displacement(const std::vector<double>& q)
{
    const std::size_t m = q.size();
    if (m < 2)
        throw InsufficientRange("displacement needs at least two distances");
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            s += std::abs(q[i] - q[j]);
    return 2.0 * s / (static_cast<double>(m) * static_cast<double>(m - 1));
}

// ---------------------------------------------------------------- finite differences on a grid

/// dy/dx on a non-uniform grid: three-point formula inside, one-sided at the ends.
inline std::vector<double> grid_derivative(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n)
        throw InsufficientRange("grid derivative needs at least three points");
    std::vector<double> d(n);
    auto three = [&](std::size_t i0, double at) {
        const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
        return y[i0] * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
               y[i0 + 1] * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
               y[i0 + 2] * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
    };
    d[0] = three(0, x[0]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = three(i - 1, x[i]);
    d[n - 1] = three(n - 3, x[n - 1]);
    return d;
}

} // namespace xyqd
