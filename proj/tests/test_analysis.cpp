#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "xyqd/analysis.hpp"
#include "xyqd/model.hpp"
#include "xyqd/observables.hpp"

using namespace xyqd;

namespace {

double bump(double x) { return 1.0 / (1.0 + x * x); }

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

} // namespace

TEST(Derivative, Square)
{
    const Derivative d = d_dh([](double h) { return h * h; }, 3.0, 1e-3);
    EXPECT_NEAR(d.value, 6.0, 1e-8);
    EXPECT_TRUE(d.smooth);
}

TEST(Derivative, KinkIsFlagged)
{
    const Derivative d = d_dh([](double h) { return std::abs(h - 1.0); }, 1.0, 1e-3);
    EXPECT_FALSE(d.smooth);
    EXPECT_GT(d.error, 1.0);
}

TEST(Derivative, SecondOrderOrBetter)
{
    auto f = [](double h) { return std::sin(h); };
    const double exact = std::cos(0.7);
    const double e1 = std::abs(d_dh(f, 0.7, 0.2).value - exact);
    const double e2 = std::abs(d_dh(f, 0.7, 0.1).value - exact);
    EXPECT_GE(e1 / e2, 4.0);
}

TEST(Derivative, SamplerFailure)
{
    EXPECT_THROW(d_dh([](double) -> double { throw std::runtime_error("boom"); }, 0.0, 0.1), SamplerFailure);
    EXPECT_THROW(d_dh([](double h) { return h > 0.05 ? NAN : h; }, 0.0, 0.1), SamplerFailure);
    EXPECT_THROW(d_dh([](double h) { return h; }, 0.0, 0.0), ValidationError);
}

TEST(LineFit, ExactLine)
{
    const auto x = linspace(0.0, 4.0, 9);
    std::vector<double> y;
    for (double v : x)
        y.push_back(1.5 - 0.25 * v);
    const LineFit f = fit_line(x, y);
    EXPECT_NEAR(f.slope, -0.25, 1e-14);
    EXPECT_NEAR(f.intercept, 1.5, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
    EXPECT_LT(f.slope_halfwidth, 1e-12);
    EXPECT_THROW(fit_line({1.0}, {2.0}), InsufficientRange);
}

TEST(LineFit, BootstrapIsSeeded)
{
    const std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0.1, 0.9, 2.2, 2.8, 4.1, 5.0};
    const LineFit a = fit_line(x, y), b = fit_line(x, y);
    EXPECT_GT(a.slope_halfwidth, 0.0);
    EXPECT_EQ(a.slope_halfwidth, b.slope_halfwidth);
    EXPECT_LT(a.r2, 1.0);
}

TEST(Pchip, InterpolatesAndPreservesMonotonicity)
{
    const std::vector<double> x{0, 1, 2, 3, 4}, y{0, 0.1, 0.9, 1.0, 1.0};
    const Pchip p(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_DOUBLE_EQ(p(x[i]), y[i]);
    double prev = -1.0;
    for (double t = 0.0; t <= 4.0; t += 0.01) {
        const double v = p(t);
        EXPECT_GE(v, prev - 1e-15);
        EXPECT_LE(v, 1.0 + 1e-15);
        prev = v;
    }
    const Pchip lin({0, 1, 3}, {1, 3, 7});
    EXPECT_NEAR(lin(2.2), 5.4, 1e-14);
    EXPECT_THROW(Pchip({0, 0}, {1, 2}), ValidationError);
}

TEST(Collapse, ResidualEdgeCases)
{
    RescaledSlice a{{0, 1, 2}, {0, 0, 0}}, b{{0, 1, 2}, {0, 0, 0}};
    EXPECT_EQ(collapse_residual({a, b}), 0.0);
    RescaledSlice far{{10, 11, 12}, {1, 1, 1}};
    EXPECT_TRUE(std::isinf(collapse_residual({a, far})));
    EXPECT_THROW(collapse_residual({a}), InsufficientRange);
}

TEST(Peak, ParabolicRefinementAndBoundary)
{
    std::vector<double> x, y;
    for (int i = 0; i < 11; ++i) {
        x.push_back(0.1 * i);
        y.push_back(-(x.back() - 0.437) * (x.back() - 0.437));
    }
    EXPECT_NEAR(locate_peak(x, y).position, 0.437, 1e-12);
    EXPECT_THROW(locate_peak(x, std::vector<double>(x.begin(), x.end())), NoPeak);
}

TEST(Fss, SyntheticAnsatzIsExact)
{
    const double omega = 0.472, drift = 1.28, a = 0.8;
    ScalingDataset ds;
    for (double L : {8.0, 10.0, 12.0, 14.0, 16.0}) {
        const double hm = 1.0 - a * std::pow(L, -drift);
        for (double x : linspace(-3.0, 3.0, 13))
            ds.records.push_back({L, hm + x / L, std::pow(L, omega) * bump(x)});
    }
    const CollapseResult r = fss_collapse(ds, omega, 1.0);
    EXPECT_LT(r.residual, 1e-10);
    ASSERT_TRUE(r.fit.has_value());
    EXPECT_NEAR(r.exponents.at("drift"), drift, 0.01);
    EXPECT_GT(fss_collapse(ds, 0.0, 1.0).residual, 1e-4);
    for (const auto& s : r.shifts)
        EXPECT_NEAR(s.shift, 1.0 - a * std::pow(s.param, -drift), 1e-12);
}

TEST(Fss, NeedsInteriorPeak)
{
    ScalingDataset ds;
    for (double L : {8.0, 10.0, 12.0})
        for (double h : linspace(0.5, 1.0, 8))
            ds.records.push_back({L, h, h});
    EXPECT_THROW(fss_collapse(ds, 0.5, 1.0), NoPeak);
}

TEST(Factorization, IdenticalSlicesGiveZero)
{
    ScalingDataset ds;
    std::map<double, double> ref;
    for (double h : linspace(0.69, 0.74, 11)) {
        ref[h] = 0.01 * h;
        for (double L : {8.0, 10.0})
            ds.records.push_back({L, h, ref[h]});
    }
    const auto hf = [](double) { return 0.714; };
    EXPECT_EQ(factorization_collapse(ds, ref, hf, 1.0).residual, 0.0);
    ref.erase(ref.begin());
    EXPECT_THROW(factorization_collapse(ds, ref, hf, 1.0), ReferenceMissing);
}

TEST(Factorization, RecoversSyntheticAlpha)
{
    const double alpha = 0.6;
    ScalingDataset ds;
    std::map<double, double> ref;
    auto hf = [](double L) { return 0.7 + 0.01 / L; };
    for (double L : {6.0, 8.0, 10.0, 12.0}) {
        const double scale = std::exp(alpha * L);
        for (double x : linspace(-2e-4, 2e-4, 9)) {
            const double h = hf(L) + scale * x;
            ref[h] = 0.05;
            ds.records.push_back({L, h, 0.05 + 1e-3 * std::tanh(5e3 * x)});
        }
    }
    const AlphaFit f = fit_alpha(ds, ref, hf);
    EXPECT_NEAR(f.alpha, alpha, 1e-3);
    EXPECT_LT(f.collapse.residual, 1e-10);
}

TEST(NearFactorization, SyntheticLaw)
{
    const double hf = std::sqrt(0.51), rho = 3.0 / 17.0;
    std::vector<NearFactorizationPoint> d;
    for (double dh : {-0.04, -0.02, -0.01, 0.01, 0.02, 0.04})
        for (int r = 1; r <= 4; ++r)
            d.push_back({hf + dh, r, 0.3 * dh * dh * std::pow(rho, r)});
    const NearFactorizationFit f = near_factorization_fit(d, hf);
    EXPECT_NEAR(f.power, 2.0, 1e-10);
    EXPECT_NEAR(f.decay_ratio, rho, 1e-12);
    EXPECT_NEAR(f.power_r2, 1.0, 1e-12);
}

TEST(NearFactorization, InsufficientRange)
{
    std::vector<NearFactorizationPoint> one_side{{0.72, 1, 1e-5}, {0.73, 1, 2e-5}, {0.72, 2, 1e-6}};
    EXPECT_THROW(near_factorization_fit(one_side, 0.714), InsufficientRange);
    std::vector<NearFactorizationPoint> one_r{{0.70, 1, 1e-5}, {0.73, 1, 2e-5}};
    EXPECT_THROW(near_factorization_fit(one_r, 0.714), InsufficientRange);
}

TEST(Thermal, SyntheticAnsatzIsExact)
{
    const double x = 0.065;
    ScalingDataset ds;
    ds.slice_kind = "T";
    for (double T : {0.001, 0.003, 0.01, 0.03, 0.1})
        for (double u : linspace(-4.0, 4.0, 17))
            ds.records.push_back({T, 1.0 + u * T, std::pow(T, x) * bump(u)});
    EXPECT_LT(thermal_collapse(ds, x).residual, 1e-10);
    EXPECT_GT(thermal_collapse(ds, 0.2).residual, 1e-3);

    std::vector<double> T, dq;
    for (double t : {1e-3, 1e-2, 1e-1}) {
        T.push_back(t);
        dq.push_back(x * std::log(t) + 1.2);
    }
    const ThermalSlopeFit f = thermal_slope(T, dq);
    EXPECT_NEAR(f.log_form.slope, x, 1e-12);
    EXPECT_TRUE(f.power_form_valid);
}

TEST(Displacement, Examples)
{
    EXPECT_EQ(displacement({0.2, 0.2, 0.2, 0.2, 0.2}), 0.0);
    EXPECT_NEAR(displacement({0.3, 0.2}), 0.1, 1e-15);
    EXPECT_NEAR(displacement({0.0, 0.1, 0.3}), (0.1 + 0.3 + 0.2) / 3.0, 1e-15);
    EXPECT_THROW(displacement({0.1}), InsufficientRange);
}

TEST(GridDerivative, ExactOnQuadratics)
{
    const std::vector<double> x{0.0, 0.1, 0.25, 0.5, 0.6};
    std::vector<double> y;
    for (double v : x)
        y.push_back(3 * v * v - v + 2);
    const auto d = grid_derivative(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_NEAR(d[i], 6 * x[i] - 1, 1e-12);
}

// --- observables pipeline

TEST(PointSpec, Validation)
{
    PointSpec s;
    s.state = StateConvention::Thermal;
    EXPECT_THROW(s.validate(), ValidationError);
    s.state = StateConvention::Symmetric;
    s.temperature = 0.1;
    EXPECT_THROW(s.validate(), ValidationError);
    s.temperature = 0.0;
    s.state = StateConvention::Broken;
    s.length = 22;
    EXPECT_THROW(s.validate(), ValidationError);
    s.length = 10;
    s.boundary = Boundary::Open;
    EXPECT_NO_THROW(s.validate());
    s.state = StateConvention::Symmetric;
    EXPECT_THROW(s.validate(), ValidationError);
    EXPECT_EQ(parse_state_convention("broken"), StateConvention::Broken);
    EXPECT_THROW(parse_state_convention("mixed"), ValidationError);
}

TEST(Observables, TemperatureSwitchOnIsDiscontinuousInTheBrokenConvention)
{
    PointSpec broken;
    broken.state = StateConvention::Broken;
    PointSpec sym;
    PointSpec warm;
    warm.state = StateConvention::Thermal;
    warm.temperature = 1e-3;
    const double qb = discord_at(broken, 1), qs = discord_at(sym, 1), qt = discord_at(warm, 1);
    EXPECT_GT(std::abs(qt - qb), 1e-2);
    EXPECT_LT(std::abs(qt - qs), 1e-8);
}

TEST(Observables, BulkDiscordDerivativeGrowsLogarithmically)
{
    auto q1 = [](double h) {
        PointSpec s;
        s.h = h;
        return discord_at(s, 1);
    };
    std::vector<double> lx, dq;
    for (double e : {1e-2, 1e-3, 1e-4}) {
        lx.push_back(std::log(e));
        dq.push_back(d_dh(q1, 1.0 - e, 0.1 * e).value);
    }
    const LineFit f = fit_line(lx, dq);
    EXPECT_GT(f.r2, 0.99);
    EXPECT_GT(std::abs(f.slope), 0.01);
}

TEST(Observables, AllDistancesCoincideAtFactorization)
{
    PointSpec s;
    s.h = factorizing_field(0.7);
    const auto q = discord_profile(s, {1, 2, 3, 4, 5});
    EXPECT_LT(displacement(q), 1e-4);
}
