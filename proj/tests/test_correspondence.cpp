#include <gtest/gtest.h>

#include <tuple>

#include "hkqk/correspondence.hpp"
#include "hkqk/sampling.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hkqk;
using namespace hkqk::correspondence;
using flat_model::geometry_at;
using test_support::max_abs;

namespace {

double form(const Matrix& B, const Vector& x, const Vector& y) { return x.dot(B * y); }

}  // namespace

TEST(Correspondence, TorsionOfClosedS) {
    const ModelParams p{2, 0.5, false};
    sampling::Rng rng(1);
    const GeometryAt geom = geometry_at(p, sampling::random_point(p, rng));
    for (int trial = 0; trial < 50; ++trial) {
        const Vector A = sampling::gaussian_vector(geom.dim(), rng);
        const Vector B = sampling::gaussian_vector(geom.dim(), rng);
        const Vector r = s_closed(geom, A, B) - s_closed(geom, B, A) - (form(geom.omega_H, A, B) / geom.f_H) * geom.Z;
        EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Correspondence, ClosedSMatchesTermByTermAtReference) {
    const ModelParams p{0, 1.0, false};
    const GeometryAt geom = geometry_at(p, test_support::reference_point(0));
    const Vector got = s_closed(geom, geom.Z, geom.Z);
    const Vector want = oracles::s_term_by_term(geom, geom.Z, geom.Z);
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
    const ConnectionCorrection S = s_closed_tensor(geom);
    EXPECT_LT((S.apply(geom.Z, geom.Z) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Correspondence, ClosedTensorMatchesPointwise) {
    const ModelParams p{1, 0.2, false};
    sampling::Rng rng(2);
    const GeometryAt geom = geometry_at(p, sampling::random_point(p, rng));
    const ConnectionCorrection S = s_closed_tensor(geom);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector A = sampling::gaussian_vector(8, rng);
        const Vector B = sampling::gaussian_vector(8, rng);
        EXPECT_LT((S.apply(A, B) - oracles::s_term_by_term(geom, A, B)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Correspondence, DegenerateConfigurationVanishes) {
    const ModelParams p{1, 1.0, false};
    sampling::Rng rng(3);
    GeometryAt geom = geometry_at(p, sampling::random_point(p, rng));
    geom.Z.setZero();
    for (auto& a : geom.alpha) a.setZero();
    geom.I_H = geom.I[1];
    const Vector A = sampling::gaussian_vector(8, rng);
    const Vector B = sampling::gaussian_vector(8, rng);
    EXPECT_EQ(s_closed(geom, A, B).cwiseAbs().maxCoeff(), 0.0);
}

class ConnectionOracle : public ::testing::TestWithParam<int> {};

TEST_P(ConnectionOracle, KoszulPartsMatchClosed) {
    const int m = GetParam();
    for (double c : {0.0, 1.0}) {
        const ModelParams p{m, c, false};
        sampling::Rng rng(10 + m);
        for (int trial = 0; trial < 20; ++trial) {
            const Vector x = sampling::random_point(p, rng);
            const GeometryAt geom = geometry_at(p, x);
            const ConnectionCorrection closed = s_closed_tensor(geom);
            const ConnectionParts parts = s_parts(p, x);
            const ConnectionCorrection diff = parts.total() - closed;
            EXPECT_LT(diff.max_abs() / std::max(1.0, closed.max_abs()), 1e-5);

            const Vector A = sampling::gaussian_vector(geom.dim(), rng);
            const Vector B = sampling::gaussian_vector(geom.dim(), rng);
            const Vector viaParts = s_from_parts(p, x, A, B);
            EXPECT_LT((viaParts - s_closed(geom, A, B)).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, viaParts.norm()));

            for (int a = 0; a < geom.dim(); ++a) {
                const Matrix lowered = parts.s_q.slot(a).transpose() * geom.g_H;
                EXPECT_LT(max_abs(lowered + lowered.transpose()), 1e-10);
                for (int b = 0; b < geom.dim(); ++b)
                    EXPECT_LT((parts.s_h.slot(a).col(b) - parts.s_h.slot(b).col(a)).cwiseAbs().maxCoeff(), 1e-5);
            }
        }
    }
}

TEST_P(ConnectionOracle, MetricCompatibility) {
    const int m = GetParam();
    const ModelParams p{m, 0.5, false};
    sampling::Rng rng(20 + m);
    const Vector x = sampling::random_point(p, rng);
    const GeometryAt geom = geometry_at(p, x);
    const ConnectionCorrection S = s_closed_tensor(geom);
    for (int a = 0; a < geom.dim(); ++a) {
        const Matrix dG = finite_diff([&](const Vector& y) { return flat_model::deformed_metric(p, y); }, x, a);
        const Matrix lowered = S.slot(a).transpose() * geom.g_H;
        EXPECT_LT(max_abs(dG - lowered - lowered.transpose()), 1e-5);
    }
}

TEST_P(ConnectionOracle, LemmaDisplays) {
    const int m = GetParam();
    const ModelParams p{m, 0.8, false};
    sampling::Rng rng(30 + m);
    for (int config = 0; config < 10; ++config) {
        const Vector x = sampling::random_point(p, rng);
        const GeometryAt geom = geometry_at(p, x);
        const int n = geom.dim();
        const ConnectionCorrection S = s_closed_tensor(geom);
        const auto dS = s_derivatives(p, x, SSource::Closed);
        const Vector A = sampling::gaussian_vector(n, rng);
        const Vector B = sampling::gaussian_vector(n, rng);
        const Vector C = sampling::gaussian_vector(n, rng);
        const LemmaTerms t = lemma_terms(geom, A, B, C);

        Vector ds_fd = Vector::Zero(n);
        for (int a = 0; a < n; ++a) ds_fd += A[a] * dS[a].apply(B, C) - B[a] * dS[a].apply(A, C);
        EXPECT_LT((t.term_DS - ds_fd).cwiseAbs().maxCoeff(), 1e-4 * std::max(1.0, ds_fd.norm()));

        const Vector comm = S.apply(A, S.apply(B, C)) - S.apply(B, S.apply(A, C));
        EXPECT_LT((t.term_comm - comm).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, comm.norm()));

        // Display of DZ + S_Z written out independently.
        Vector display = 0.5 * (geom.I_H * C - (geom.f_H / geom.f_Z) * (geom.I[1] * C));
        for (int mu = 0; mu < 4; ++mu) {
            const double coeff = form(geom.g, geom.I[mu] * (geom.I_H * geom.Z), C) / geom.f_H +
                                 form(geom.g, geom.I[mu] * (geom.I[1] * geom.Z), C) / geom.f_Z;
            display += 0.5 * coeff * (geom.I[mu] * geom.Z);
        }
        EXPECT_LT((t.term_DZSZ - display).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((t.term_DZSZ - (geom.DZ * C + S.apply(geom.Z, C))).cwiseAbs().maxCoeff(), 1e-10);

        const LemmaTerms same = lemma_terms(geom, A, A, C);
        EXPECT_EQ(same.term_comm.cwiseAbs().maxCoeff(), 0.0);
        const LemmaTerms swapped = lemma_terms(geom, B, A, C);
        EXPECT_LT((t.term_DS + swapped.term_DS).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((t.term_comm + swapped.term_comm).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_EQ((t.term_DZSZ - lemma_terms(geom, C, B, C).term_DZSZ).cwiseAbs().maxCoeff(), 0.0);

        const Vector T = t_tensor(geom, A, B, C);
        const Vector assembled = t.term_DS + t.term_comm - (form(geom.omega_H, A, B) / geom.f_H) * t.term_DZSZ;
        EXPECT_LT((T - assembled).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((T + t_tensor(geom, B, A, C)).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT(t_tensor(geom, A, A, C).cwiseAbs().maxCoeff(), 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Family, ConnectionOracle, ::testing::Values(0, 1, 2));

TEST(Correspondence, ClosedCurvatureSymmetries) {
    const ModelParams p{1, 0.6, false};
    sampling::Rng rng(40);
    const GeometryAt geom = geometry_at(p, sampling::random_point(p, rng));
    const QuadCov R = rtilde_closed(geom);
    EXPECT_LT(oracles::curvature_symmetry_naive(R), 1e-10);
    EXPECT_LT(oracles::curvature_symmetry_naive(projective_part(geom)), 1e-10);
    EXPECT_LT(oracles::curvature_symmetry_naive(twist_part(geom)), 1e-10);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector A = sampling::gaussian_vector(8, rng);
        const Vector B = sampling::gaussian_vector(8, rng);
        const Vector C = sampling::gaussian_vector(8, rng);
        const Vector X = sampling::gaussian_vector(8, rng);
        const double bianchi = R.eval(A, B, C, X) + R.eval(B, C, A, X) + R.eval(C, A, B, X);
        EXPECT_LT(std::abs(bianchi), 1e-10);
        EXPECT_LT(std::abs(R.eval(A, B, C, X) - R.eval(C, X, A, B)), 1e-10);
    }
}

TEST(Correspondence, HyperKaehlerCurvatureIsZero) {
    const ModelParams p{1, 0.0, false};
    sampling::Rng rng(41);
    const GeometryAt geom = geometry_at(p, sampling::random_point(p, rng));
    EXPECT_EQ(hk_curvature(geom).max_abs(), 0.0);
    EXPECT_LT(max_abs_diff(rtilde_closed(geom, hk_curvature(geom)), rtilde_closed(geom)), 1e-15);
}

class CurvaturePaths : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(CurvaturePaths, DirectMatchesClosed) {
    const auto [m, c] = GetParam();
    const ModelParams p{m, c, false};
    sampling::Rng rng(60 + m);
    for (int trial = 0; trial < 5; ++trial) {
        const Vector x = sampling::random_point(p, rng);
        const GeometryAt geom = geometry_at(p, x);
        const QuadCov closed = rtilde_closed(geom);
        EXPECT_LT(max_abs_diff(t_lowered_from_lemmas(geom), closed), 1e-10);
        const CurvatureTensors viaClosed = curvature_tensors(p, x, SSource::Closed);
        EXPECT_EQ(viaClosed.R_flat.max_abs(), 0.0);
        EXPECT_LT(max_abs_diff(viaClosed.rtilde_direct, closed), 1e-4);
        EXPECT_LT(max_abs_diff(viaClosed.rtilde_closed, closed), 1e-15);
        const CurvatureTensors viaKoszul = curvature_tensors(p, x, SSource::Koszul);
        EXPECT_LT(max_abs_diff(viaKoszul.rtilde_direct, closed), 1e-4);
    }
}

INSTANTIATE_TEST_SUITE_P(Family, CurvaturePaths,
                         ::testing::Combine(::testing::Values(0, 1, 2), ::testing::Values(0.0, 1.0)));

TEST(Correspondence, FiniteDifferencesNearBoundaryThrow) {
    const ModelParams p{0, 1.0, false};
    sampling::Rng rng(70);
    const Vector x = sampling::point_with_fz(p, 2e-8, rng);
    EXPECT_THROW(s_parts(p, x), DomainViolation);
    EXPECT_THROW(s_derivatives(p, x, SSource::Closed), DomainViolation);
}
