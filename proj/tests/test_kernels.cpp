#include <gtest/gtest.h>

#include "hkqk/kernels.hpp"
#include "hkqk/sampling.hpp"
#include "test_support.hpp"

using namespace hkqk;

namespace {

QuadCov random_quadcov(int d, sampling::Rng& rng) {
    QuadCov T(d);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < T.size(); ++i) T.data()[i] = normal(rng);
    return T;
}

}  // namespace

class KernelAgreement : public ::testing::TestWithParam<int> {};

TEST_P(KernelAgreement, ParallelMatchesSerial) {
    const int d = GetParam();
    sampling::Rng rng(100 + d);
    const Matrix a = sampling::gaussian_matrix(d, d, rng);
    const Matrix b = sampling::gaussian_matrix(d, d, rng);
    const QuadCov phi = random_quadcov(d, rng);

    EXPECT_LT(max_abs_diff(kernels::outer(a, b), kernels::serial::outer(a, b)), 1e-14);
    EXPECT_LT(max_abs_diff(kernels::owedge(phi), kernels::serial::owedge(phi)), 1e-13);
    EXPECT_LT(max_abs_diff(kernels::obar(phi), kernels::serial::obar(phi)), 1e-13);
    EXPECT_LT(max_abs_diff(kernels::owedge_product(a, b), kernels::serial::owedge_product(a, b)), 1e-13);
    EXPECT_LT(max_abs_diff(kernels::obar_product(a, b), kernels::serial::obar_product(a, b)), 1e-13);
    const Matrix t_par = kernels::lambda2_matrix(phi);
    const Matrix t_ser = kernels::serial::lambda2_matrix(phi);
    EXPECT_LT(test_support::max_abs(t_par - t_ser), 1e-15);
}

TEST_P(KernelAgreement, FusedProductsMatchMaterialized) {
    const int d = GetParam();
    sampling::Rng rng(200 + d);
    const Matrix a = sampling::gaussian_matrix(d, d, rng);
    const Matrix b = sampling::gaussian_matrix(d, d, rng);
    const QuadCov ab = kernels::outer(a, b);
    EXPECT_LT(max_abs_diff(kernels::owedge_product(a, b), kernels::owedge(ab)), 1e-13);
    EXPECT_LT(max_abs_diff(kernels::obar_product(a, b), kernels::obar(ab)), 1e-13);
}

INSTANTIATE_TEST_SUITE_P(Dims, KernelAgreement, ::testing::Values(2, 4, 8, 12));

TEST(Kernels, ChangeBasisMatchesSerial) {
    for (int d : {3, 4, 6}) {
        sampling::Rng rng(300 + d);
        const QuadCov T = random_quadcov(d, rng);
        const Matrix F = sampling::gaussian_matrix(d, d, rng);
        EXPECT_LT(max_abs_diff(kernels::change_basis(T, F), kernels::serial::change_basis(T, F)), 1e-11);
    }
}

TEST(Kernels, ChangeBasisIdentity) {
    sampling::Rng rng(400);
    const QuadCov T = random_quadcov(5, rng);
    EXPECT_LT(max_abs_diff(kernels::change_basis(T, Matrix::Identity(5, 5)), T), 1e-15);
}
