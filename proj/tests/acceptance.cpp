// Acceptance run: one PASS/FAIL line per criterion, with the numbers behind it.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "support.hpp"
#include "xyqd/ed.hpp"
#include "xyqd/recipes.hpp"

using namespace xyqd;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict oracle_equivalence()
{
    double worst = 0.0;
    int compared = 0;
    auto compare = [&](const CorrelatorSet& a, const CorrelatorSet& b) {
        worst = std::max({worst, std::abs(a.g_z - b.g_z), std::abs(a.g_x - b.g_x)});
        for (int r = 1; r <= a.r_max(); ++r)
            worst = std::max({worst, std::abs(a.xx(r) - b.xx(r)), std::abs(a.yy(r) - b.yy(r)),
                              std::abs(a.zz(r) - b.zz(r)), std::abs(a.xz(r) - b.xz(r)),
                              std::abs(a.zx(r) - b.zx(r))});
        ++compared;
    };
    for (int L : {8, 10, 12})
        for (double g : {0.7, 1.0})
            for (double h : {0.3, 0.714143, 0.9, 1.0, 1.5}) {
                EdConfig c;
                c.length = L;
                c.gamma = g;
                c.h = h;
                compare(correlators_ed(ground_state(c), L / 2), correlators(ModelParams::finite(g, h, L), L / 2));
                if (L <= 10)
                    compare(correlators_ed(thermal_state(c, 0.5), L / 2),
                            correlators(ModelParams::finite(g, h, L, 0.5), L / 2));
            }
    return {worst <= 1e-9, fmt("max |ED - free fermion| = %.2e over %d states (tol 1e-9)", worst, compared)};
}

Verdict optimizer_soundness()
{
    testing::Rng rng(20240607);
    double worst = -1.0;
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = i < 100 ? testing::random_x_state(rng) : testing::random_state(rng);
        const double brute = classical_corr_brute(rho, 512, 1024);
        worst = std::max(worst, brute - classical_corr(rho).value);
    }
    return {worst <= 1e-7, fmt("max (brute 512x1024 - optimizer) C = %.2e over 100 X + 100 general states (tol 1e-7)",
                               worst)};
}

Verdict factorization()
{
    const auto s = factorization_point_study(0.7, 14);
    return {s.broken_q1 < 1e-6 && s.symmetric_spread < 1e-4,
            fmt("h_f=%.7f ED L=14 broken Q1=%.2e (h_x=%.1e) [<1e-6]; bulk symmetric Q_1..5 spread=%.2e [<1e-4]",
                s.h_f, s.broken_q1, s.h_x_used, s.symmetric_spread)};
}

Verdict near_factorization()
{
    const auto s = near_factorization_study(0.7);
    const bool p_ok = std::abs(s.fit.power - 2.0) <= 0.2;
    const bool rho_ok = std::abs(s.fit.decay_ratio - s.target_ratio) <= 0.3 * s.target_ratio;
    return {p_ok && rho_ok, fmt("power p=%.3f (R2 %.4f) [2.0 +- 0.2]; decay ratio rho=%.4f [%.4f +- 30%%]",
                                s.fit.power, s.fit.power_r2, s.fit.decay_ratio, s.target_ratio)};
}

Verdict exponential_scaling()
{
    const auto s = exponential_scaling_study(0.7);
    const bool a_ok = s.fit.alpha >= 0.5 && s.fit.alpha <= 2.0;
    return {a_ok && s.max_check_difference < 1e-6,
            fmt("alpha=%.3f (collapse residual %.3f) [0.5, 2]; max |Q1(L=20) - Q1(bulk)| within h_f +- 0.02 = %.2e "
                "[<1e-6]",
                s.fit.alpha, s.fit.collapse.residual, s.max_check_difference)};
}

Verdict log_divergence()
{
    const auto a = log_divergence_study(0.7);
    const auto b = log_divergence_study(1.0);
    return {a.fit.r2 > 0.99 && b.max_abs < 10.0,
            fmt("gamma=0.7: dQ1/dh vs ln|h-1| slope %.4f R2=%.5f [>0.99]; gamma=1: max |dQ1/dh|=%.3f [<10]",
                a.fit.slope, a.fit.r2, b.max_abs)};
}

Verdict thermal_scaling()
{
    const auto a = thermal_scaling_study(0.7);
    const auto b = thermal_scaling_study(1.0);
    const double xa = a.slope.log_form.slope, xb = b.slope.log_form.slope;
    const bool x_ok = std::abs(xa - 0.065) <= 0.02 && std::abs(xb + 0.0059) <= 0.003;
    const bool c_ok = 5.0 * a.log_residual <= a.log_residual_reference && 5.0 * b.log_residual <= b.log_residual_reference;
    return {x_ok && c_ok,
            fmt("x(0.7)=%.5f [0.065 +- 0.02], x(1)=%.5f [-0.0059 +- 0.003]; log-form collapse residual fitted/x=0.2: "
                "%.3g/%.3g and %.3g/%.3g [ratio >= 5]; power form: %.3g/%.3g and %.3g/%.3g",
                xa, xb, a.log_residual, a.log_residual_reference, b.log_residual, b.log_residual_reference,
                a.power_residual, a.power_residual_reference, b.power_residual, b.power_residual_reference)};
}

Verdict finite_size_scaling()
{
    const auto s = fss_study();
    const double r0 = s.by_omega.at(0.0).residual, r1 = s.by_omega.at(0.472).residual,
                 r2 = s.by_omega.at(1.0).residual;
    const auto& best = s.by_omega.at(0.472);
    const double drift = best.exponents.at("drift");
    return {r1 < r0 && r1 < r2 && drift >= 0.9 && drift <= 1.7,
            fmt("residual omega=0: %.4f, 0.472: %.4f, 1: %.4f [0.472 lowest]; drift exponent %.3f [0.9, 1.7]", r0, r1,
                r2, drift)};
}

Verdict fidelity_dip()
{
    bool smooth = true, dipped = true, growing = true;
    double prev_depth = 0.0;
    std::string depths, ratios;
    for (int L : {50, 100, 200, 400}) {
        const auto s = fidelity_study(0.7, L);
        smooth = smooth && s.smooth();
        dipped = dipped && s.f_critical < s.f_below && s.f_critical < s.f_above;
        growing = growing && s.dip_depth() > prev_depth;
        prev_depth = s.dip_depth();
        depths += fmt(" %.3e", s.dip_depth());
        ratios += fmt(" %.3f", s.max_second_difference_near / (10.0 * s.median_second_difference_far));
    }
    return {smooth && dipped && growing,
            "1-F(1) for L=50,100,200,400:" + depths + (growing ? " (increasing)" : " (NOT increasing)") +
                "; near-h_f |d2F| / (10 x far median):" + ratios + " [<= 1]" + (dipped ? "" : "; no dip at h=1")};
}

Verdict property_suite()
{
    int states = 0, failures = 0;
    double worst_trace = 0.0, worst_lu = 0.0, min_q = 1.0;
    testing::Rng rng(99);
    for (double g : {0.3, 0.7, 1.0})
        for (int i = 0; i <= 20; ++i)
            for (double T : {0.0, 0.1, 1.0}) {
                const double h = 0.1 * i;
                PointSpec p = detail::bulk_point(g, h, T);
                try {
                    const CorrelatorSet cs = point_correlators(p, 5);
                    const DensityMatrix single = rho_single(cs.g_z, cs.g_x);
                    for (int r = 1; r <= 5; ++r) {
                        const DensityMatrix rho = rho_pair(cs, r);
                        ++states;
                        const auto ev = rho.eigenvalues();
                        if (ev.minCoeff() < -1e-10 || std::abs(rho.matrix().trace().real() - 1.0) > 1e-12)
                            ++failures;
                        worst_trace = std::max({worst_trace,
                                                (rho.trace_out_b().matrix() - single.matrix()).cwiseAbs().maxCoeff(),
                                                (rho.trace_out_a().matrix() - single.matrix()).cwiseAbs().maxCoeff()});
                        const auto t = discord(rho);
                        min_q = std::min(min_q, t.discord);
                        if (t.discord < 0.0 || t.classical < -1e-12 || t.classical > t.mutual_info + 1e-12)
                            ++failures;
                        if (r == 1) {
                            const DensityMatrix rot = testing::local_rotate(rho, testing::random_unitary(rng),
                                                                            testing::random_unitary(rng));
                            worst_lu = std::max(worst_lu, std::abs(discord(rot).discord - t.discord));
                        }
                    }
                } catch (const Error& e) {
                    ++failures;
                    std::printf("  property failure at gamma=%g h=%g T=%g: %s\n", g, h, T, e.what());
                }
            }
    double worst_pure = 0.0;
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix rho = testing::pure_state(testing::random_pure(rng));
        worst_pure = std::max(worst_pure, std::abs(discord(rho).discord - entropy(rho.trace_out_b())));
    }
    const bool ok = failures == 0 && worst_trace < 1e-12 && worst_lu < 1e-7 && worst_pure < 1e-7;
    return {ok, fmt("%d grid states, %d invalid; partial-trace mismatch %.1e; min Q %.1e; |Q(U_A x U_B rho) - Q(rho)| "
                    "%.1e; pure |Q - S_A| %.1e (50 random states)",
                    states, failures, worst_trace, min_q, worst_lu, worst_pure)};
}

} // namespace

int main()
{
    using clock = std::chrono::steady_clock;
    struct Item {
        int id;
        const char* name;
        std::function<Verdict()> run;
        double budget_s;  ///< 0 = no runtime clause
    };
    const Item items[] = {
        {1, "oracle equivalence", oracle_equivalence, 120.0},
        {2, "optimizer soundness", optimizer_soundness, 300.0},
        {3, "factorization point", factorization, 0.0},
        {4, "near-factorization law", near_factorization, 0.0},
        {5, "exponential scaling", exponential_scaling, 0.0},
        {6, "log divergence", log_divergence, 0.0},
        {7, "thermal scaling", thermal_scaling, 600.0},
        {8, "finite-size scaling", finite_size_scaling, 0.0},
        {9, "fidelity", fidelity_dip, 0.0},
        {10, "property suite", property_suite, 0.0},
    };
    int failed = 0;
    for (const auto& it : items) {
        const auto t0 = clock::now();
        Verdict v;
        try {
            v = it.run();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        if (it.budget_s > 0.0 && secs > it.budget_s) {
            v.pass = false;
            v.detail += fmt("; over runtime budget %.0f s", it.budget_s);
        }
        failed += !v.pass;
        std::printf("CRITERION %d %s [%s] %s (%.1f s)\n", it.id, v.pass ? "PASS" : "FAIL", it.name, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
