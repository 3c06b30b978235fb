#include "hkqk/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "hkqk/correspondence.hpp"
#include "hkqk/kulkarni.hpp"

namespace hkqk::curvature {

namespace {

Matrix frame_metric(const Frame& frame) {
    Matrix eta = Matrix::Zero(frame.dim(), frame.dim());
    for (int a = 0; a < frame.dim(); ++a) eta(a, a) = frame.signs[static_cast<std::size_t>(a)];
    return eta;
}

// Removes roundoff left over from the change of basis.
QuadCov pair_antisymmetrize(const QuadCov& T) {
    const int d = T.dim();
    QuadCov out(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    out(a, b, c, e) = 0.25 * (T(a, b, c, e) - T(b, a, c, e) - T(a, b, e, c) + T(b, a, e, c));
    return out;
}

}  // namespace

Frame gh_frame(const GeometryAt& geom) { return pseudo_gram_schmidt(geom.g_H); }

Lambda2Operator curvature_operator(const GeometryAt& geom, const QuadCov& rtilde) {
    if (pair_antisymmetry_residual(rtilde) > kDegeneracyThreshold * std::max(1.0, rtilde.max_abs())) {
        throw PairAntisymmetryViolated("tensor is not antisymmetric in its index pairs");
    }
    const Frame frame = gh_frame(geom);
    return quadcov_to_lambda2_op(pair_antisymmetrize(to_frame(rtilde, frame)), frame_metric(frame));
}

double curvature_norm_frame(const GeometryAt& geom, const QuadCov& rtilde) {
    const Lambda2Operator M = curvature_operator(geom, rtilde);
    return M.trace_with(M);
}

double curvature_norm_closed(int q, double f_Z, double f_H) {
    if (!(f_Z > 0.0) || !(f_H < 0.0)) throw DomainViolation("closed norm needs f_Z > 0 and f_H < 0");
    const double n = q;
    const double t = f_Z / f_H;
    const double t2 = t * t;
    const double a = t2 * t + (n - 1.0) * t;
    return n * (5.0 * n + 1.0) + 3.0 * a * a + 3.0 * (t2 * t2 * t2 + (n - 1.0) * t2);
}

double norm_of_rho(int q, double c, double rho) { return curvature_norm_closed(q, f_z_of_rho(rho), f_h_of_rho(rho, c)); }

double trace_K_powers(const GeometryAt& geom, int power) {
    const int q = geom.params.quaternionic_dim();
    const double fz_p = std::pow(geom.f_Z, power);
    return 4.0 * ((q - 1) * fz_p + fz_p * fz_p / std::pow(geom.f_H, power));
}

KTraceCheck check_K_traces(const GeometryAt& geom, int power) {
    const int n = geom.dim();
    Matrix Kp = Matrix::Identity(n, n);
    for (int i = 0; i < power; ++i) Kp = Kp * geom.K;

    KTraceCheck out;
    out.closed = trace_K_powers(geom, power);
    out.matrix = Kp.trace();
    out.relative_residual = std::abs(out.matrix - out.closed) / std::max(1.0, std::abs(out.closed));
    out.vanishing = std::abs((Kp * geom.I_H).trace());
    for (int k = 1; k <= 3; ++k) {
        out.vanishing = std::max(out.vanishing, std::abs((Kp * geom.I[k]).trace()));
        out.vanishing = std::max(out.vanishing, std::abs((Kp * geom.I_H * geom.I[k]).trace()));
    }
    return out;
}

AlekseevskySplit alekseevsky_split(const GeometryAt& geom, const QuadCov& rtilde) {
    AlekseevskySplit out;
    out.nu = -1.0;
    QuadCov r0 = -0.125 * correspondence::projective_part(geom);
    out.R1_part = rtilde;
    out.R1_part -= out.nu * r0;
    out.R0_part = out.nu * std::move(r0);
    return out;
}

double hk_type_residual(const GeometryAt& geom, const QuadCov& r1, sampling::Rng& rng, int samples) {
    const int n = geom.dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vector A = sampling::gaussian_vector(n, rng);
        Vector B = sampling::gaussian_vector(n, rng);
        A /= std::sqrt(A.dot(geom.g_H * A));
        B /= std::sqrt(B.dot(geom.g_H * B));
        // L(c, x) = R1(A, B, c, x) = g_H(E e_c, e_x), so E = g_H^-1 L^T.
        Matrix L = Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double w = A[a] * B[b];
                if (w == 0.0) continue;
                for (int c = 0; c < n; ++c)
                    for (int x = 0; x < n; ++x) L(c, x) += w * r1(a, b, c, x);
            }
        const Matrix E = geom.g_H_inverse * L.transpose();
        for (int k = 1; k <= 3; ++k) {
            worst = std::max(worst, (E * geom.I[k] - geom.I[k] * E).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double invariance_residual(const GeometryAt& geom) {
    const QuadCov phi = correspondence::twist_part(geom);
    const int n = geom.dim();
    double worst = 0.0;
    for (int j = 1; j <= 3; ++j) {
        const Matrix& I = geom.I[j];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Matrix block(n, n);
                for (int y = 0; y < n; ++y)
                    for (int z = 0; z < n; ++z) block(y, z) = phi(a, b, y, z);
                // (c, x) -> Phi(a, b, I e_c, I e_x)
                const Matrix rotated = I.transpose() * block * I;
                worst = std::max(worst, (rotated - block).cwiseAbs().maxCoeff());
            }
    }
    return worst;
}

double scalar_curvature(const GeometryAt& geom, const QuadCov& rtilde) {
    const Frame frame = gh_frame(geom);
    const QuadCov R = to_frame(rtilde, frame);
    const int n = frame.dim();
    double scal = 0.0;
    for (int b = 0; b < n; ++b) {
        double ric = 0.0;
        for (int a = 0; a < n; ++a) ric += frame.signs[static_cast<std::size_t>(a)] * R(a, b, b, a);
        scal += frame.signs[static_cast<std::size_t>(b)] * ric;
    }
    return scal;
}

double frame_norm(const QuadCov& tensor, const Frame& frame) {
    const QuadCov components = to_frame(tensor, frame);
    double sum = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) sum += components.data()[i] * components.data()[i];
    return std::sqrt(sum);
}

NormReport norm_report(const ModelParams& params, const Vector& coords) {
    const GeometryAt geom = flat_model::geometry_at(params, coords);
    const QuadCov rtilde = correspondence::rtilde_closed(geom);
    const int q = params.quaternionic_dim();

    NormReport out;
    out.f_Z = geom.f_Z;
    out.f_H = geom.f_H;
    out.rho = 2.0 * geom.f_Z;
    const Lambda2Operator M = curvature_operator(geom, rtilde);
    out.norm_frame = M.trace_with(M);
    out.norm_closed = curvature_norm_closed(q, geom.f_Z, geom.f_H);
    out.scal = scalar_curvature(geom, rtilde);
    out.nu = out.scal / (4.0 * q * (q + 2));
    out.residuals.emplace_back("norm_relative",
                               std::abs(out.norm_frame - out.norm_closed) / std::abs(out.norm_closed));
    out.residuals.emplace_back("scal_relative",
                               std::abs(out.scal - expected_scalar_curvature(q)) / std::abs(expected_scalar_curvature(q)));
    out.residuals.emplace_back("operator_symmetry", (M.entries() - M.entries().transpose()).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace hkqk::curvature
