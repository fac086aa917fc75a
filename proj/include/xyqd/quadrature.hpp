#pragma once

// Adaptive Gauss-Kronrod (7/15) integration of vector-valued integrands.
//
// All components of the integrand share the same panel subdivision; a panel
// is accepted when the max-norm of |K15 - G7| is below the absolute
// tolerance allotted to it (proportional to its width).

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "xyqd/errors.hpp"

namespace xyqd {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

struct QuadratureResult {
    Eigen::ArrayXd value;
    double error = 0.0;  ///< sum of accepted panel estimates (max-norm)
    int panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (x[1], x[3], x[5], x[7]).
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, Eigen::ArrayXd& kronrod, Eigen::ArrayXd& gauss)
{
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    Eigen::ArrayXd fc = f(c);
    kronrod = kronrod_w[7] * fc;
    gauss = gauss_w[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hw * kronrod_x[static_cast<std::size_t>(i)];
        Eigen::ArrayXd pair = f(c - dx) + f(c + dx);
        kronrod += kronrod_w[static_cast<std::size_t>(i)] * pair;
        if (i % 2 == 1)
            gauss += gauss_w[static_cast<std::size_t>(i / 2)] * pair;
    }
    kronrod *= hw;
    gauss *= hw;
}

} // namespace detail

/// Integrates f over the consecutive intervals defined by `breakpoints`
/// (at least two, increasing). f maps double -> Eigen::ArrayXd of fixed size.
template <class F>
QuadratureResult integrate_adaptive(const F& f, const std::vector<double>& breakpoints,
                                    const QuadratureOptions& opt = {})
{
    struct Panel {
        double a, b;
        int depth;
    };
    const double total = breakpoints.back() - breakpoints.front();
    QuadratureResult out;
    std::vector<Panel> stack;
    for (std::size_t i = breakpoints.size() - 1; i-- > 0;)
        stack.push_back({breakpoints[i], breakpoints[i + 1], 0});

    Eigen::ArrayXd kr, ga;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        detail::gk15(f, p.a, p.b, kr, ga);
        if (out.value.size() == 0)
            out.value = Eigen::ArrayXd::Zero(kr.size());
        const double err = (kr - ga).abs().maxCoeff();
        const double allowed = opt.abs_tol * (p.b - p.a) / total;
        if (err <= allowed || !std::isfinite(err)) {
            if (!std::isfinite(err))
                throw QuadratureNoConvergence("non-finite integrand on [" + std::to_string(p.a) + ", " +
                                              std::to_string(p.b) + "]");
            out.value += kr;
            out.error += err;
            ++out.panels;
            continue;
        }
        if (p.depth >= opt.max_depth)
            throw QuadratureNoConvergence("adaptive refinement exceeded depth " +
                                          std::to_string(opt.max_depth) + " near k = " +
                                          std::to_string(p.a));
        const double mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b, p.depth + 1});
        stack.push_back({p.a, mid, p.depth + 1});
    }
    return out;
}

/// Scalar convenience wrapper.
template <class F>
double integrate_adaptive_scalar(const F& f, double a, double b, const QuadratureOptions& opt = {})
{
    auto wrapped = [&](double x) {
        Eigen::ArrayXd v(1);
        v[0] = f(x);
        return v;
    };
    return integrate_adaptive(wrapped, {a, b}, opt).value[0];
}

} // namespace xyqd
