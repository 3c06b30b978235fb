#include <gtest/gtest.h>

#include <cmath>

#include "hkqk/kernels.hpp"
#include "hkqk/kulkarni.hpp"
#include "hkqk/pseudo_linear.hpp"
#include "hkqk/sampling.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hkqk;
using test_support::max_abs;

TEST(PseudoLinear, PairIndexIsLexicographic) {
    for (int d : {2, 4, 7, 12}) {
        const auto pairs = lambda2_pairs(d);
        ASSERT_EQ(static_cast<int>(pairs.size()), lambda2_rank(d));
        for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
            EXPECT_EQ(pair_index(pairs[i].first, pairs[i].second, d), i);
            EXPECT_LT(pairs[i].first, pairs[i].second);
        }
    }
    EXPECT_EQ(lambda2_rank(16), 120);
}

TEST(PseudoLinear, CheckedInverseRejectsSingular) {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = 0.0;
    EXPECT_THROW(checked_inverse(m), DegenerateMetric);
    Matrix tiny = Matrix::Identity(3, 3);
    tiny(1, 1) = 1e-14;
    EXPECT_THROW(checked_inverse(tiny), DegenerateMetric);
}

TEST(PseudoLinear, GramSchmidtEuclideanAndIndefinite) {
    sampling::Rng rng(3);
    for (int d : {4, 8, 12}) {
        const Matrix euclid = test_support::random_metric(d, 0, rng);
        const Frame fe = pseudo_gram_schmidt(euclid);
        EXPECT_LT(frame_residual(fe, euclid), 1e-10);
        for (int s : fe.signs) EXPECT_EQ(s, 1);

        const Matrix lorentz = test_support::random_metric(d, 4, rng);
        const Frame fl = pseudo_gram_schmidt(lorentz);
        EXPECT_LT(frame_residual(fl, lorentz), 1e-10);
        int negatives = 0;
        for (int s : fl.signs) negatives += s < 0;
        EXPECT_EQ(negatives, 4);
    }
}

TEST(PseudoLinear, GramSchmidtNullSeed) {
    // Both seed vectors are null for the hyperbolic plane.
    Matrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    const Frame f = pseudo_gram_schmidt(h);
    EXPECT_LT(frame_residual(f, h), 1e-12);
    EXPECT_EQ(f.signs[0] + f.signs[1], 0);
}

TEST(PseudoLinear, GramSchmidtDegenerateThrows) {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = 1.0;
    EXPECT_THROW(pseudo_gram_schmidt(h), DegenerateMetric);
}

TEST(PseudoLinear, AdjointAndLower) {
    sampling::Rng rng(5);
    const Matrix h = test_support::random_metric(6, 2, rng);
    const Matrix E = sampling::gaussian_matrix(6, 6, rng);
    const Matrix Es = adjoint(E, h);
    const Vector x = sampling::gaussian_vector(6, rng);
    const Vector y = sampling::gaussian_vector(6, rng);
    EXPECT_NEAR((Es * x).dot(h * y), x.dot(h * (E * y)), 1e-10);
    EXPECT_NEAR(x.dot(lower(E, h) * y), (E * x).dot(h * y), 1e-10);
}

TEST(PseudoLinear, Lambda2TraceMatchesBruteForce) {
    sampling::Rng rng(7);
    for (int negative : {0, 2}) {
        const Matrix h = test_support::random_metric(4, negative, rng);
        const QuadCov A = kulkarni::owedge(test_support::random_symmetric(4, rng), test_support::random_symmetric(4, rng));
        const QuadCov B = kulkarni::obar(test_support::random_antisymmetric(4, rng), test_support::random_antisymmetric(4, rng));
        const Lambda2Operator MA = quadcov_to_lambda2_op(A, h);
        const Lambda2Operator MB = quadcov_to_lambda2_op(B, h);
        const double want = oracles::lambda2_trace(A, B, h);
        EXPECT_LT(test_support::rel_err(MA.trace_with(MB), want), 1e-10);
        EXPECT_LT(test_support::rel_err((MA * MB).trace(), want), 1e-10);
    }
}

TEST(PseudoLinear, TraceIsFrameIndependent) {
    sampling::Rng rng(9);
    const Matrix h = test_support::random_metric(6, 2, rng);
    const QuadCov T = kulkarni::owedge(test_support::random_symmetric(6, rng), test_support::random_symmetric(6, rng));
    const Frame frame = pseudo_gram_schmidt(h);
    Matrix eta = Matrix::Zero(6, 6);
    for (int a = 0; a < 6; ++a) eta(a, a) = frame.signs[a];
    const Lambda2Operator coord = quadcov_to_lambda2_op(T, h);
    const Lambda2Operator framed = quadcov_to_lambda2_op(to_frame(T, frame), eta);
    EXPECT_LT(test_support::rel_err(framed.trace(), coord.trace()), 1e-10);
    EXPECT_LT(test_support::rel_err(framed.trace_with(framed), coord.trace_with(coord)), 1e-10);
}

TEST(PseudoLinear, Lambda2RejectsNonAntisymmetric) {
    QuadCov T(4);
    T(0, 1, 2, 2) = 1.0;
    EXPECT_THROW(quadcov_to_lambda2_op(T, Matrix::Identity(4, 4)), PairAntisymmetryViolated);
}

TEST(PseudoLinear, ToFrameMatchesNaive) {
    sampling::Rng rng(11);
    QuadCov T(4);
    for (std::size_t i = 0; i < T.size(); ++i) T.data()[i] = std::sin(1.0 + static_cast<double>(i));
    const Matrix F = sampling::gaussian_matrix(4, 4, rng);
    Frame frame{F, {1, 1, 1, 1}};
    EXPECT_LT(max_abs_diff(to_frame(T, frame), oracles::to_frame_naive(T, F)), 1e-11);
}

TEST(PseudoLinear, SymmetryResiduals) {
    sampling::Rng rng(13);
    const QuadCov good = kulkarni::owedge(test_support::random_symmetric(5, rng), test_support::random_symmetric(5, rng));
    EXPECT_LT(pair_antisymmetry_residual(good), 1e-12);
    EXPECT_LT(pair_symmetry_residual(good), 1e-12);
    EXPECT_LT(first_bianchi_residual(good), 1e-12);
    QuadCov bad(3);
    bad(0, 1, 0, 1) = 1.0;
    EXPECT_GT(pair_antisymmetry_residual(bad), 0.5);
    bad(0, 2, 1, 2) = 1.0;
    EXPECT_GT(pair_symmetry_residual(bad), 0.5);
}

TEST(PseudoLinear, FiniteDifferences) {
    Vector p(2);
    p << 0.3, -1.2;
    const double d0 = finite_diff([](const Vector& x) { return std::sin(x[0]) * x[1]; }, p, 0);
    EXPECT_NEAR(d0, std::cos(0.3) * -1.2, 1e-9);
    const Vector dv = finite_diff([](const Vector& x) { return Vector(x.array().square()); }, p, 1);
    EXPECT_NEAR(dv[1], -2.4, 1e-9);
    EXPECT_NEAR(dv[0], 0.0, 1e-12);
    const DomainPredicate positive = [](const Vector& x) { return x[0] > 0.3; };
    EXPECT_THROW(finite_diff([](const Vector& x) { return x[0]; }, p, 0, kDefaultFdStep, positive), DomainViolation);
}

TEST(PseudoLinear, QuadCovEval) {
    sampling::Rng rng(17);
    const QuadCov T = kernels::outer(sampling::gaussian_matrix(3, 3, rng), sampling::gaussian_matrix(3, 3, rng));
    const Vector a = Vector::Unit(3, 0), b = Vector::Unit(3, 2), c = Vector::Unit(3, 1);
    EXPECT_DOUBLE_EQ(T.eval(a, b, c, a), T(0, 2, 1, 0));
    const Vector x = sampling::gaussian_vector(3, rng);
    double want = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) want += x[i] * x[j] * x[k] * x[l] * T(i, j, k, l);
    EXPECT_NEAR(T.eval(x, x, x, x), want, 1e-12);
}
