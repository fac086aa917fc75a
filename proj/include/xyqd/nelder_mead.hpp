#pragma once

// Nelder-Mead downhill simplex for small unconstrained problems.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace xyqd {

struct NelderMeadOptions {
    double f_tol = 1e-12;   ///< stop when max - min of f over the simplex falls below this
    double x_tol = 1e-10;   ///< ... and the simplex diameter below this
    int max_evaluations = 4000;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes f starting from x0 with an axis-aligned initial simplex of size `step`.
template <class F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const NelderMeadOptions& opt = {})
{
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> val(static_cast<std::size_t>(n + 1));
    NelderMeadResult res;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        return f(x);
    };
    for (Eigen::Index i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i + 1)][i] += step[i];
    for (std::size_t i = 0; i < pts.size(); ++i)
        val[i] = eval(pts[i]);

    std::vector<std::size_t> order(pts.size());
    while (res.evaluations < opt.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

        double diam = 0.0;
        for (const auto& p : pts)
            diam = std::max(diam, (p - pts[best]).cwiseAbs().maxCoeff());
        if (val[worst] - val[best] <= opt.f_tol && diam <= opt.x_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst)
                centroid += pts[i];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < val[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != best) {
                pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                val[i] = eval(pts[i]);
            }
    }
    const auto it = std::min_element(val.begin(), val.end());
    res.x = pts[static_cast<std::size_t>(it - val.begin())];
    res.f = *it;
    return res;
}

} // namespace xyqd
