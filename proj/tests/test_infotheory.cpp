#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "xyqd/infotheory.hpp"

using namespace xyqd;
using namespace xyqd::testing;

namespace {

DensityMatrix diag4(double a, double b, double c, double d)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return DensityMatrix::from_matrix(m);
}

// Conditional entropy from explicit post-measurement states of AB.
double conditional_entropy_dense(const DensityMatrix& rho, const MeasurementBasis& b)
{
    double s = 0.0;
    for (int sign : {1, -1}) {
        const Eigen::Matrix4cd p = pauli::kron(pauli::identity(), b.projector(sign));
        const Eigen::Matrix4cd post = p * rho.matrix() * p;
        const double pk = post.trace().real();
        if (pk < 1e-14)
            continue;
        s += pk * entropy(DensityMatrix::from_matrix(post / pk, Provenance::Synthetic, {1e-12, 1e-10, 1e-14, 1e-8, 1e-14}));
    }
    return s;
}

} // namespace

TEST(Entropy, Examples)
{
    EXPECT_NEAR(entropy(diag4(0.25, 0.25, 0.25, 0.25)), 2.0, 1e-14);
    EXPECT_NEAR(entropy(bell_state()), 0.0, 1e-12);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    EXPECT_NEAR(entropy(DensityMatrix::from_matrix(m)), 0.8112781244591328, 1e-14);
}

TEST(MutualInfo, Examples)
{
    EXPECT_NEAR(mutual_info(diag4(0.12, 0.28, 0.18, 0.42)), 0.0, 1e-12);  // (0.4,0.6) x (0.3,0.7)
    EXPECT_NEAR(mutual_info(bell_state()), 2.0, 1e-12);
    EXPECT_NEAR(mutual_info(diag4(0.5, 0.0, 0.0, 0.5)), 1.0, 1e-12);
}

TEST(ConditionalEntropy, Examples)
{
    const DensityMatrix mixed = diag4(0.25, 0.25, 0.25, 0.25);
    for (double t : {0.0, 0.7, 2.0})
        EXPECT_NEAR(conditional_entropy(mixed, {t, 1.1}), 1.0, 1e-14);
    EXPECT_NEAR(conditional_entropy(bell_state(), {0.0, 0.0}), 0.0, 1e-12);
    const DensityMatrix cc = diag4(0.5, 0.0, 0.0, 0.5);
    EXPECT_NEAR(conditional_entropy(cc, {0.0, 0.0}), 0.0, 1e-12);
    EXPECT_NEAR(conditional_entropy(cc, {pi / 2, 0.0}), 1.0, 1e-12);
}

TEST(ConditionalEntropy, AgreesWithDensePostMeasurementStates)
{
    Rng rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const DensityMatrix rho = i % 2 ? random_state(rng) : random_x_state(rng);
        const MeasurementBasis b{pi * u(rng), 2 * pi * u(rng)};
        const double v = conditional_entropy(rho, b);
        EXPECT_NEAR(v, conditional_entropy_dense(rho, b), 1e-12);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 2.0);
    }
}

TEST(MeasurementBasis, ProjectorsAreComplete)
{
    const MeasurementBasis b{1.1, 4.0};
    const Eigen::Matrix2cd p = b.projector(1), m = b.projector(-1);
    EXPECT_LT((p + m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((m * m - m).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Classical, ProductAndBell)
{
    EXPECT_NEAR(classical_corr(diag4(0.12, 0.28, 0.18, 0.42)).value, 0.0, 1e-10);
    EXPECT_NEAR(classical_corr(bell_state()).value, 1.0, 1e-10);
}

TEST(Classical, XStateFastPathMatchesFullSearch)
{
    Rng rng(2024);
    ClassicalOptions full;
    full.use_x_state_fast_path = false;
    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = random_x_state(rng);
        const double fast = classical_corr(rho).value;
        EXPECT_NEAR(fast, classical_corr(rho, full).value, 1e-7) << "sample " << i;
    }
}

TEST(Classical, InteriorOptimumIsFlagged)
{
    // seeded X-state whose optimal axis lies strictly between z and x (theta ~ 0.669)
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 0.062565199197326032;
    m(1, 1) = 0.84328928109450796;
    m(2, 2) = 0.048500201614822387;
    m(3, 3) = 0.045645318093343587;
    m(0, 3) = m(3, 0) = -0.013396024924245612;
    m(1, 2) = m(2, 1) = -0.12587239155162505;
    const DensityMatrix rho(m, SymmetryTag::XState, Provenance::Synthetic);
    const ClassicalResult r = classical_corr(rho);
    EXPECT_TRUE(r.diagnostics.interior_optimum);
    EXPECT_FALSE(r.diagnostics.fast_path);
    EXPECT_GT(r.basis.theta, 0.1);
    EXPECT_LT(r.basis.theta, pi / 2 - 0.1);
    EXPECT_GE(r.value, classical_corr_brute(rho, 512, 1024) - 1e-7);
}

TEST(Discord, BellState)
{
    const CorrelationTriple t = discord(bell_state());
    EXPECT_NEAR(t.mutual_info, 2.0, 1e-10);
    EXPECT_NEAR(t.classical, 1.0, 1e-10);
    EXPECT_NEAR(t.discord, 1.0, 1e-10);
}

TEST(Discord, OrthogonalProductMixtureIsClassical)
{
    // 1/2(|0+><0+| + |1-><1-|): both local ensembles are orthogonal, so Q = 0
    Eigen::Vector4cd a = Eigen::Vector4cd::Zero(), b = a;
    const double s = 1.0 / std::sqrt(2.0);
    a[0] = s;
    a[1] = s;
    b[2] = s;
    b[3] = -s;
    const Eigen::Matrix4cd m = 0.5 * (a * a.adjoint() + b * b.adjoint());
    const CorrelationTriple t = discord(DensityMatrix::from_matrix(m));
    EXPECT_NEAR(t.mutual_info, 1.0, 1e-10);
    EXPECT_NEAR(t.discord, 0.0, 1e-9);
}

TEST(Discord, SeparableStateWithDiscord)
{
    // 1/2(|0><0| x |0><0| + |1><1| x |+><+|): separable, B ensemble non-orthogonal
    Eigen::Vector4cd a = Eigen::Vector4cd::Zero(), b = a;
    const double s = 1.0 / std::sqrt(2.0);
    a[0] = 1.0;
    b[2] = s;
    b[3] = s;
    const Eigen::Matrix4cd m = 0.5 * (a * a.adjoint() + b * b.adjoint());
    const CorrelationTriple t = discord(DensityMatrix::from_matrix(m));
    EXPECT_GT(t.discord, 1e-2);
    EXPECT_GT(t.classical, 0.0);
}

TEST(Discord, OrderingOnRandomStates)
{
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        const DensityMatrix rho = i % 2 ? random_state(rng) : random_x_state(rng);
        const CorrelationTriple t = discord(rho);
        EXPECT_GE(t.mutual_info + 1e-9, t.classical);
        EXPECT_GE(t.classical, 0.0);
        EXPECT_GE(t.discord, 0.0);
        EXPECT_NEAR(t.discord, t.mutual_info - t.classical, 1e-15);
    }
}

TEST(Discord, PureStatesReduceToEntanglementEntropy)
{
    Rng rng(99);
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix rho = pure_state(random_pure(rng));
        EXPECT_NEAR(discord(rho).discord, entropy(rho.trace_out_b()), 1e-7);
    }
}

TEST(Discord, LocalUnitaryInvariance)
{
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix rho = i % 2 ? random_state(rng) : random_x_state(rng);
        const DensityMatrix rot = local_rotate(rho, random_unitary(rng), random_unitary(rng));
        const CorrelationTriple a = discord(rho), b = discord(rot);
        EXPECT_NEAR(a.mutual_info, b.mutual_info, 1e-7);
        EXPECT_NEAR(a.classical, b.classical, 1e-7);
        EXPECT_NEAR(a.discord, b.discord, 1e-7);
    }
}

TEST(Discord, AzimuthInvarianceForIsotropicXState)
{
    // g_xx = g_yy: the xy-plane is degenerate, so C along the equator is phi-independent
    auto cs = CorrelatorSet::zeros(1);
    cs.g_z = 0.3;
    cs.g_xx[0] = cs.g_yy[0] = 0.25;
    cs.g_zz[0] = 0.2;
    const DensityMatrix rho = rho_pair(cs, 1);
    const double s_a = entropy(rho.trace_out_b());
    const double ref = s_a - conditional_entropy(rho, {pi / 2, 0.0});
    for (double phi : {0.3, 1.0, 2.5, 4.0})
        EXPECT_NEAR(s_a - conditional_entropy(rho, {pi / 2, phi}), ref, 1e-9);
}

TEST(Discord, AsymmetryDiagnostic)
{
    Rng rng(3);
    DiscordOptions o;
    o.ab_asymmetry = true;
    const CorrelationTriple t = discord(random_state(rng), o);
    ASSERT_TRUE(t.ab_asymmetry.has_value());
    EXPECT_GE(*t.ab_asymmetry, 0.0);
    const CorrelationTriple sym = discord(bell_state(), o);
    EXPECT_NEAR(*sym.ab_asymmetry, 0.0, 1e-9);
}
