#include <gtest/gtest.h>

#include <cmath>

#include "xyqd/ed.hpp"
#include "xyqd/fermion.hpp"

using namespace xyqd;

namespace {

EdConfig periodic(int L, double gamma, double h)
{
    EdConfig c;
    c.length = L;
    c.gamma = gamma;
    c.h = h;
    return c;
}

void expect_same_symmetric(const CorrelatorSet& a, const CorrelatorSet& b, double tol)
{
    ASSERT_EQ(a.r_max(), b.r_max());
    EXPECT_NEAR(a.g_z, b.g_z, tol);
    EXPECT_NEAR(a.g_x, b.g_x, tol);
    for (int r = 1; r <= a.r_max(); ++r) {
        EXPECT_NEAR(a.xx(r), b.xx(r), tol) << "r=" << r;
        EXPECT_NEAR(a.yy(r), b.yy(r), tol) << "r=" << r;
        EXPECT_NEAR(a.zz(r), b.zz(r), tol) << "r=" << r;
        EXPECT_NEAR(a.xz(r), b.xz(r), tol) << "r=" << r;
        EXPECT_NEAR(a.zx(r), b.zx(r), tol) << "r=" << r;
    }
}

} // namespace

TEST(Ed, TwoSiteOpenByHand)
{
    EdConfig c;
    c.length = 2;
    c.boundary = Boundary::Open;
    c.gamma = 1.0;
    c.h = 0.0;
    const EdState s = ground_state(c);
    EXPECT_NEAR(s.energy, -1.0, 1e-12);
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.parity, Parity::Even);
}

TEST(Ed, PolarizedLimit)
{
    const EdState s = ground_state(periodic(8, 0.7, 1e3));
    EXPECT_GT(std::abs(s.psi[0]), 1.0 - 1e-4);
}

TEST(Ed, NormAndResidual)
{
    const EdConfig c = periodic(12, 0.7, 0.5);
    const EdState s = ground_state(c);
    EXPECT_NEAR(s.psi.norm(), 1.0, 1e-12);
    Eigen::VectorXd hp;
    apply_hamiltonian(c, s.psi, hp);
    EXPECT_LT((hp - s.energy * s.psi).norm(), c.lanczos_tol);
}

TEST(Ed, DefiniteParityWithoutField)
{
    const EdState s = ground_state(periodic(10, 0.7, 0.6));
    double parity = 0.0;
    for (Eigen::Index i = 0; i < s.psi.size(); ++i)
        parity += s.psi[i] * s.psi[i] * ((std::popcount(static_cast<unsigned>(i)) & 1) ? -1.0 : 1.0);
    EXPECT_NEAR(std::abs(parity), 1.0, 1e-10);
}

TEST(Ed, SymmetricStateHasNoOddCorrelators)
{
    const auto cs = correlators_ed(ground_state(periodic(10, 0.7, 0.5)), 5);
    EXPECT_NEAR(cs.g_x, 0.0, 1e-12);
    for (int r = 1; r <= 5; ++r)
        EXPECT_NEAR(cs.xz(r), 0.0, 1e-12);
}

TEST(Ed, SectorEnergiesMatchFreeFermions)
{
    for (double h : {0.3, 0.9, 1.0, 1.5}) {
        const EdConfig c = periodic(10, 0.7, h);
        const SectorStates st = sector_ground_states(c);
        const ModelParams p = ModelParams::finite(0.7, h, 10);
        EXPECT_NEAR(st.even.value, sector_ground_energy(p, Parity::Even), 1e-10);
        EXPECT_NEAR(st.odd.value, sector_ground_energy(p, Parity::Odd), 1e-10);
    }
}

TEST(Ed, GroundStateMatchesFreeFermions)
{
    for (int L : {8, 10, 12})
        for (double g : {0.7, 1.0})
            for (double h : {0.3, 0.714143, 0.9, 1.0, 1.5}) {
                const int rm = L / 2;
                const auto ed = correlators_ed(ground_state(periodic(L, g, h)), rm);
                const auto ff = correlators(ModelParams::finite(g, h, L), rm);
                expect_same_symmetric(ed, ff, 1e-9);
            }
}

TEST(Ed, ThermalMatchesFreeFermions)
{
    for (int L : {8, 10})
        for (double g : {0.7, 1.0})
            for (double h : {0.3, 0.9, 1.0, 1.5})
                for (double T : {0.5, 1.0}) {
                    const int rm = L / 2;
                    const auto ed = correlators_ed(thermal_state(periodic(L, g, h), T), rm);
                    const auto ff = correlators(ModelParams::finite(g, h, L, T), rm);
                    expect_same_symmetric(ed, ff, 1e-9);
                }
}

TEST(Ed, ThermalLimits)
{
    const ThermalState hot = thermal_state(periodic(6, 0.7, 0.5), 1e9);
    EXPECT_LT((hot.rho - Eigen::MatrixXd::Identity(64, 64) / 64.0).cwiseAbs().maxCoeff(), 1e-8);
    const DensityMatrix pair = reduced_density(hot, {0, 1});
    EXPECT_LT((pair.matrix() - Eigen::Matrix4cd::Identity() / 4.0).cwiseAbs().maxCoeff(), 1e-8);

    const EdConfig c = periodic(8, 0.7, 1.5);
    const EdState gs = ground_state(c);
    const ThermalState cold = thermal_state(c, 1e-3);
    EXPECT_LT((cold.rho - gs.psi * gs.psi.transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ed, ThermalDimensionLimit)
{
    EXPECT_THROW(thermal_state(periodic(12, 0.7, 0.5), 1.0), DimensionTooLarge);
}

TEST(Ed, ReducedDensityOfPolarizedState)
{
    const EdState s = ground_state(periodic(8, 0.7, 1e3));
    const DensityMatrix one = reduced_density(s, {3});
    EXPECT_NEAR(one.matrix()(0, 0).real(), 1.0, 1e-6);
}

TEST(Ed, ReducedDensityMatchesCorrelatorAssembly)
{
    EdConfig c = periodic(12, 0.7, 0.5);
    c.boundary = Boundary::Open;
    const EdState s = broken_state(c);
    const auto cs = correlators_ed(s, 1);
    const auto [i, j] = pair_sites(12, Boundary::Open, 1);
    const DensityMatrix direct = reduced_density(s, {i, j});
    const DensityMatrix built = rho_pair(cs, 1);
    EXPECT_LT((direct.matrix() - built.matrix()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ed, BrokenStateIsProductAtFactorizingField)
{
    EdConfig c = periodic(14, 0.7, std::sqrt(0.51));
    c.adaptive_hx = true;
    const EdState s = ground_state(c);
    EXPECT_GE(s.psi.dot(apply_total_sx(14, s.psi)), 0.0);
    const auto cs = correlators_ed(s, 7);
    for (int r = 1; r <= 7; ++r)
        EXPECT_NEAR(cs.xx(r), cs.g_x * cs.g_x, 1e-6);

    // overlap with the best site-wise product state built from the one-site Bloch vector
    const double t = std::atan2(cs.g_x, cs.g_z);
    const double up = std::cos(t / 2), dn = std::sin(t / 2);
    Eigen::VectorXd prod(s.psi.size());
    for (Eigen::Index i = 0; i < prod.size(); ++i) {
        const int d = std::popcount(static_cast<unsigned>(i));
        prod[i] = std::pow(up, 14 - d) * std::pow(dn, d);
    }
    EXPECT_GT(std::abs(prod.dot(s.psi)), 1.0 - 1e-6);

    // variational bound against that product state
    Eigen::VectorXd hp;
    EdConfig c0 = c;
    c0.h_x = 0.0;
    c0.adaptive_hx = false;
    apply_hamiltonian(c0, prod, hp);
    EXPECT_LE(broken_state(c0).E_even, prod.dot(hp) + 1e-10);
}

TEST(Ed, BrokenBulkIsLargeChainLimit)
{
    // finite-size corrections decay exponentially; at L = 14 they are ~1e-7 here
    const double h = std::sqrt(0.51) + 0.05;
    const auto bulk = broken_correlators_bulk(0.7, h, 3);
    const auto ed10 = correlators_ed(broken_state(periodic(10, 0.7, h)), 3);
    const auto ed14 = correlators_ed(broken_state(periodic(14, 0.7, h)), 3);
    EXPECT_NEAR(bulk.g_x, ed14.g_x, 1e-6);
    EXPECT_LT(std::abs(bulk.g_x - ed14.g_x), std::abs(bulk.g_x - ed10.g_x));
    for (int r = 1; r <= 3; ++r) {
        EXPECT_NEAR(bulk.xz(r), ed14.xz(r), 1e-6);
        EXPECT_NEAR(bulk.zx(r), ed14.zx(r), 1e-6);
        EXPECT_NEAR(bulk.xx(r), ed14.xx(r), 1e-6);
        EXPECT_LT(std::abs(bulk.xz(r) - ed14.xz(r)), std::abs(bulk.xz(r) - ed10.xz(r)));
    }
}

TEST(Ed, FieldBiasedStateExtrapolatesToTwoLevelLimit)
{
    // L = 14, h = 0.5: parity splitting ~1.5e-6, far below h_x L g_x for these fields
    const EdConfig base = periodic(14, 0.7, 0.5);
    const double target = correlators_ed(broken_state(base), 1).g_x;
    double gx[2];
    const double hx[2] = {1e-4, 1e-3};
    for (int i = 0; i < 2; ++i) {
        EdConfig c = base;
        c.h_x = hx[i];
        gx[i] = correlators_ed(ground_state(c), 1).g_x;
        EXPECT_GT(gx[i], 0.0);
    }
    const double slope = (gx[1] - gx[0]) / (hx[1] - hx[0]);
    EXPECT_NEAR(gx[0] - slope * hx[0], target, 1e-5);
}

TEST(Ed, AdaptiveFieldIsCappedWhereSplittingIsLarge)
{
    EdConfig c = periodic(8, 0.7, 0.9);
    c.adaptive_hx = true;
    const EdState s = ground_state(c);
    EXPECT_TRUE(s.hx_capped);
    EXPECT_DOUBLE_EQ(s.h_x_used, c.hx_cap);
}

TEST(Ed, Validation)
{
    EdConfig c;
    c.length = 21;
    EXPECT_THROW(c.validate(), ValidationError);
    c.length = 8;
    c.h_x = -1.0;
    EXPECT_THROW(c.validate(), ValidationError);
}
