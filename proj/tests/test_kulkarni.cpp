#include <gtest/gtest.h>

#include <tuple>

#include "hkqk/kernels.hpp"
#include "hkqk/kulkarni.hpp"
#include "hkqk/sampling.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hkqk;
using test_support::rel_err;

namespace {

// Standard complex structure on R^d.
Matrix standard_j(int d) {
    Matrix J = Matrix::Zero(d, d);
    for (int i = 0; i < d; i += 2) {
        J(i + 1, i) = 1.0;
        J(i, i + 1) = -1.0;
    }
    return J;
}

}  // namespace

TEST(Kulkarni, OwedgeOfSymmetricIsCurvatureTensor) {
    sampling::Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = test_support::random_symmetric(5, rng);
        const Matrix b = test_support::random_symmetric(5, rng);
        EXPECT_LT(oracles::curvature_symmetry_naive(kulkarni::kn_owedge(kernels::outer(a, b))), 1e-12);
    }
}

TEST(Kulkarni, ObarOfTwoFormsIsCurvatureTensor) {
    sampling::Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix w = test_support::random_antisymmetric(5, rng);
        EXPECT_LT(oracles::curvature_symmetry_naive(kulkarni::kn_obar(kernels::outer(w, w))), 1e-12);
    }
}

TEST(Kulkarni, ProductsMatchKernelsOfOuter) {
    sampling::Rng rng(3);
    const Matrix a = test_support::random_symmetric(4, rng);
    const Matrix b = test_support::random_symmetric(4, rng);
    EXPECT_LT(max_abs_diff(kulkarni::owedge(a, b), kulkarni::kn_owedge(kernels::outer(a, b))), 1e-13);
    const Matrix v = test_support::random_antisymmetric(4, rng);
    const Matrix w = test_support::random_antisymmetric(4, rng);
    EXPECT_LT(max_abs_diff(kulkarni::obar(v, w), kulkarni::kn_obar(kernels::outer(v, w))), 1e-13);
}

TEST(Kulkarni, MetricOwedgeMetric) {
    // (g owedge g)(A,B,C,X) = 2 (g(A,C) g(B,X) - g(A,X) g(B,C))
    const Matrix g = Matrix::Identity(4, 4);
    const QuadCov gg = kulkarni::owedge(g, g);
    EXPECT_DOUBLE_EQ(gg(0, 1, 0, 1), 2.0);
    EXPECT_DOUBLE_EQ(gg(0, 1, 1, 0), -2.0);
    EXPECT_DOUBLE_EQ(gg(0, 1, 2, 3), 0.0);
}

TEST(Kulkarni, ObarRejectsNonAntisymmetric) {
    QuadCov phi(4);
    phi(0, 0, 1, 2) = 1.0;
    EXPECT_THROW(kulkarni::kn_obar(phi), PairAntisymmetryViolated);
    EXPECT_THROW(kulkarni::obar(Matrix::Identity(4, 4), standard_j(4)), PairAntisymmetryViolated);
}

TEST(Kulkarni, EndoObarRejectsSelfAdjoint) {
    const Matrix g = Matrix::Identity(4, 4);
    EXPECT_THROW(kulkarni::endo_obar(Matrix::Identity(4, 4), standard_j(4), g), NotSkewAdjoint);
}

TEST(Kulkarni, TraceIdentitiesRejectWrongAdjointness) {
    const Matrix g = Matrix::Identity(4, 4);
    const Matrix id = Matrix::Identity(4, 4);
    const Matrix J = standard_j(4);
    EXPECT_THROW(kulkarni::trace_identities(J, id, J, J, g), AdjointnessViolated);
    EXPECT_THROW(kulkarni::trace_identities(id, id, id, J, g), AdjointnessViolated);
}

TEST(Kulkarni, ReferenceValues) {
    const Matrix g = Matrix::Identity(4, 4);
    const Matrix id = Matrix::Identity(4, 4);
    const Matrix J = standard_j(4);
    const kulkarni::TraceIdentities t = kulkarni::trace_identities(id, id, J, J, g);
    EXPECT_NEAR(t.owedge_owedge, 24.0, 1e-12);
    EXPECT_NEAR(t.obar_obar, 120.0, 1e-12);
    EXPECT_NEAR(t.owedge_obar, 24.0, 1e-12);

    const Lambda2Operator ii = kulkarni::endo_owedge(id, id, g);
    const Lambda2Operator jj = kulkarni::endo_obar(J, J, g);
    EXPECT_NEAR(ii.trace_with(ii), 24.0, 1e-12);
    EXPECT_NEAR(jj.trace_with(jj), 120.0, 1e-12);
    EXPECT_NEAR(ii.trace_with(jj), 24.0, 1e-12);
}

TEST(Kulkarni, FirstIdentityHoldsForArbitraryEndomorphisms) {
    sampling::Rng rng(4);
    const Matrix g = test_support::random_metric(6, 2, rng);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix E = sampling::gaussian_matrix(6, 6, rng);
        const Matrix F = sampling::gaussian_matrix(6, 6, rng);
        const Lambda2Operator ee = kulkarni::endo_owedge(E, E, g);
        const Lambda2Operator ff = kulkarni::endo_owedge(F, F, g);
        EXPECT_LT(rel_err(ee.trace_with(ff), kulkarni::owedge_trace_identity(E, F)), 1e-9);
    }
}

class TraceIdentityOracle : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(TraceIdentityOracle, MatchesBruteForce) {
    const auto [d, negative] = GetParam();
    sampling::Rng rng(1000 + 10 * d + negative);
    for (int draw = 0; draw < 50; ++draw) {
        const Matrix h = test_support::random_metric(d, negative, rng);
        const Matrix h_inv = h.inverse();
        const Matrix E = h_inv * test_support::random_symmetric(d, rng);
        const Matrix F = h_inv * test_support::random_symmetric(d, rng);
        const Matrix K = h_inv * test_support::random_antisymmetric(d, rng);
        const Matrix L = h_inv * test_support::random_antisymmetric(d, rng);
        const kulkarni::TraceIdentities closed = kulkarni::trace_identities(E, F, K, L, h);

        const QuadCov EE = kulkarni::owedge(lower(E, h), lower(E, h));
        const QuadCov FF = kulkarni::owedge(lower(F, h), lower(F, h));
        const QuadCov KK = kulkarni::obar(lower(K, h), lower(K, h));
        const QuadCov LL = kulkarni::obar(lower(L, h), lower(L, h));
        EXPECT_LT(rel_err(oracles::lambda2_trace(EE, FF, h), closed.owedge_owedge), 1e-8);
        EXPECT_LT(rel_err(oracles::lambda2_trace(KK, LL, h), closed.obar_obar), 1e-8);
        EXPECT_LT(rel_err(oracles::lambda2_trace(EE, KK, h), closed.owedge_obar), 1e-8);
    }
}

INSTANTIATE_TEST_SUITE_P(Metrics, TraceIdentityOracle,
                         ::testing::Values(std::make_tuple(4, 0), std::make_tuple(4, 4), std::make_tuple(8, 0),
                                           std::make_tuple(8, 4), std::make_tuple(12, 0), std::make_tuple(12, 4)));
