#pragma once

// Invariants of the quaternionic Kaehler curvature R~: the exterior-square
// curvature operator and its squared norm, the closed norm formula, the
// Alekseevsky split, scalar curvature and the trace lemma for K.

#include <string>
#include <utility>
#include <vector>

#include "hkqk/flat_model.hpp"
#include "hkqk/pseudo_linear.hpp"
#include "hkqk/sampling.hpp"

namespace hkqk::curvature {

using flat_model::GeometryAt;
using flat_model::ModelParams;

/// g_H-orthonormal frame (all signs +1 on the valid domain).
Frame gh_frame(const GeometryAt& geom);

/// R~ as a self-adjoint operator on the exterior square, in a g_H-orthonormal frame.
Lambda2Operator curvature_operator(const GeometryAt& geom, const QuadCov& rtilde);

/// trace(M^2) for the curvature operator M.
double curvature_norm_frame(const GeometryAt& geom, const QuadCov& rtilde);

/// q(5q+1) + 3 (t^3 + (q-1) t)^2 + 3 (t^6 + (q-1) t^2) with t = f_Z / f_H.
/// Throws DomainViolation unless f_Z > 0 and f_H < 0.
double curvature_norm_closed(int q, double f_Z, double f_H);

/// rho = 2 f_Z; on the model f_H = -f_Z - c.
inline double f_z_of_rho(double rho) { return 0.5 * rho; }
inline double f_h_of_rho(double rho, double c) { return -0.5 * rho - c; }
double norm_of_rho(int q, double c, double rho);

/// 4 ((q-1) f_Z^p + f_Z^{2p} / f_H^p)
double trace_K_powers(const GeometryAt& geom, int power);

struct KTraceCheck {
    double closed = 0.0;
    double matrix = 0.0;
    double relative_residual = 0.0;
    double vanishing = 0.0;  // max |tr(K^p I_k)|, |tr(K^p I_H)|, |tr(K^p I_H I_k)|
};

KTraceCheck check_K_traces(const GeometryAt& geom, int power);

struct AlekseevskySplit {
    QuadCov R0_part;  // nu * R0 with the quaternionic projective curvature R0
    QuadCov R1_part;
    double nu = -1.0;
};

AlekseevskySplit alekseevsky_split(const GeometryAt& geom, const QuadCov& rtilde);

/// max over k and `samples` random unit (A,B) of |[R1(A,B), I_k]|, with
/// R1(A,B) raised by g_H.
double hk_type_residual(const GeometryAt& geom, const QuadCov& r1, sampling::Rng& rng, int samples = 50);

/// max |Phi(A,B,I_j C,I_j X) - Phi(A,B,C,X)| over basis vectors and j, for the
/// twist group omega_H obar omega_H + sum_k omega_H(I_k.,.) owedge omega_H(I_k.,.).
double invariance_residual(const GeometryAt& geom);

/// Ric(B,C) = sum_a eps_a R~(e_a, B, C, e_a), then the g_H-trace.
double scalar_curvature(const GeometryAt& geom, const QuadCov& rtilde);

/// -4 q (q + 2)
inline double expected_scalar_curvature(int q) { return -4.0 * q * (q + 2); }

/// Frobenius norm of the frame components.
double frame_norm(const QuadCov& tensor, const Frame& frame);

struct NormReport {
    double f_Z = 0.0;
    double f_H = 0.0;
    double rho = 0.0;
    double norm_frame = 0.0;
    double norm_closed = 0.0;
    double scal = 0.0;
    double nu = -1.0;
    std::vector<std::pair<std::string, double>> residuals;
};

NormReport norm_report(const ModelParams& params, const Vector& coords);

}  // namespace hkqk::curvature
