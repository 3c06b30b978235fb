#pragma once

// The flat pseudo-hyper-Kaehler family N_m on C^{m+1} x C^{m+1} with its
// rotating circle symmetry, moment maps, and the derived elementary
// deformation.
//
// Real coordinates are ordered (x_0, y_0, ..., x_m, y_m, u_0, v_0, ..., u_m, v_m)
// with z_j = x_j + i y_j and w_j = u_j + i v_j.

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "hkqk/pseudo_linear.hpp"

namespace hkqk::flat_model {

struct ModelParams {
    int m = 0;        // family index; coordinates z_0..z_m, w_0..w_m
    double c = 0.0;   // deformation constant, c >= 0
    // Negative-control hook: flips the sign of omega_2 so that the quaternion
    // relations break. Never set outside tests and `verify --corrupt-omega2`.
    bool flip_omega2_sign = false;

    int dim() const { return 4 * (m + 1); }
    int quaternionic_dim() const { return m + 1; }
};

/// f_Z must exceed this for a point to count as valid.
inline constexpr double kDomainMargin = 1e-8;

struct Point {
    std::vector<std::complex<double>> z;
    std::vector<std::complex<double>> w;

    Vector to_real() const;
    static Point from_real(const Vector& coords);
};

int x_index(int j);
int y_index(int j);
int u_index(int j, int m);
int v_index(int j, int m);

/// Point-independent data of the model.
struct ConstantTensors {
    BilinearForm g;
    std::array<BilinearForm, 4> omega;  // omega[0] = g
    BilinearForm omega_H;
    std::array<Endomorphism, 4> I;      // I[0] = id, I[k] = g^{-1} o omega_k
    Endomorphism DZ;                    // constant Jacobian of Z
};

ConstantTensors constant_tensors(const ModelParams& params);

/// Z = -i sum_j (z_j d/dz_j - conj(z_j) d/dconj(z_j)) in real components.
Vector vector_Z(const ModelParams& params, const Vector& coords);

struct Scalars {
    double f_Z = 0.0;
    double f_H = 0.0;
    double g_ZZ = 0.0;
};

/// Throws DomainViolation when f_Z <= kDomainMargin.
Scalars scalars(const ModelParams& params, const Vector& coords);

/// f_Z without domain check.
double moment_map_Z(const ModelParams& params, const Vector& coords);

bool in_domain(const ModelParams& params, const Vector& coords);

/// Everything the correspondence needs at one point. Immutable snapshot.
struct GeometryAt {
    ModelParams params;
    Vector coords;

    BilinearForm g;
    std::array<BilinearForm, 4> omega;
    BilinearForm omega_H;
    std::array<Endomorphism, 4> I;
    Endomorphism I_H;
    Endomorphism DZ;
    Endomorphism K;

    Vector Z;
    std::array<Vector, 4> alpha;  // alpha_mu = iota_Z omega_mu, as covector components

    double f_Z = 0.0;
    double f_H = 0.0;
    double g_ZZ = 0.0;

    BilinearForm g_alpha;
    BilinearForm g_H;
    Matrix g_H_inverse;

    int dim() const { return static_cast<int>(coords.size()); }
};

GeometryAt geometry_at(const ModelParams& params, const Vector& coords);

/// f_Z id - (f_Z / f_H) sum_lambda alpha_lambda(.) I_lambda Z
Endomorphism metric_comparison_formula(const GeometryAt& geom);

/// g_H as a function of position (used for finite differences).
BilinearForm deformed_metric(const ModelParams& params, const Vector& coords);

/// Max residual of each differential / algebraic identity at one point.
struct IdentityReport {
    std::vector<std::pair<std::string, double>> residuals;

    double get(const std::string& name) const;
};

/// Evaluated over all coordinate basis vectors; derivatives by central
/// differences with step `fd_step`.
IdentityReport verify_differential_identities(const ModelParams& params, const Vector& coords,
                                              double fd_step = kDefaultFdStep);

}  // namespace hkqk::flat_model
