#include "hkqk/flat_model.hpp"

#include <algorithm>
#include <cmath>

namespace hkqk::flat_model {

namespace {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

constexpr Complex kI{0.0, 1.0};

// Complex one-forms dz_j, dconj(z_j), dw_j, dconj(w_j) as complex covectors.
ComplexVector holomorphic_covector(int dim, int re, int im, double im_sign) {
    ComplexVector v = ComplexVector::Zero(dim);
    v[re] = 1.0;
    v[im] = im_sign * kI;
    return v;
}

struct ComplexFrame {
    std::vector<ComplexVector> dz, dzbar, dw, dwbar;
};

ComplexFrame complex_frame(int m) {
    const int dim = 4 * (m + 1);
    ComplexFrame f;
    for (int j = 0; j <= m; ++j) {
        f.dz.push_back(holomorphic_covector(dim, x_index(j), y_index(j), 1.0));
        f.dzbar.push_back(holomorphic_covector(dim, x_index(j), y_index(j), -1.0));
        f.dw.push_back(holomorphic_covector(dim, u_index(j, m), v_index(j, m), 1.0));
        f.dwbar.push_back(holomorphic_covector(dim, u_index(j, m), v_index(j, m), -1.0));
    }
    return f;
}

// (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)
ComplexMatrix wedge(const ComplexVector& a, const ComplexVector& b) {
    return a * b.transpose() - b * a.transpose();
}

// Symmetric product with |dz|^2 = sym(dz, dconj z) = dx^2 + dy^2.
ComplexMatrix sym(const ComplexVector& a, const ComplexVector& b) {
    return 0.5 * (a * b.transpose() + b * a.transpose());
}

Matrix real_part(const ComplexMatrix& form) {
    // The displays define real tensors; a surviving imaginary part would be a
    // construction bug.
    if (form.imag().cwiseAbs().maxCoeff() > 1e-14) throw Error("complex form is not real");
    return form.real();
}

double signature_sign(int j) { return j == 0 ? -1.0 : 1.0; }

}  // namespace

int x_index(int j) { return 2 * j; }
int y_index(int j) { return 2 * j + 1; }
int u_index(int j, int m) { return 2 * (m + 1) + 2 * j; }
int v_index(int j, int m) { return 2 * (m + 1) + 2 * j + 1; }

Vector Point::to_real() const {
    const int m = static_cast<int>(z.size()) - 1;
    Vector coords(4 * (m + 1));
    for (int j = 0; j <= m; ++j) {
        coords[x_index(j)] = z[j].real();
        coords[y_index(j)] = z[j].imag();
        coords[u_index(j, m)] = w[j].real();
        coords[v_index(j, m)] = w[j].imag();
    }
    return coords;
}

Point Point::from_real(const Vector& coords) {
    const int m = static_cast<int>(coords.size()) / 4 - 1;
    Point p;
    for (int j = 0; j <= m; ++j) {
        p.z.emplace_back(coords[x_index(j)], coords[y_index(j)]);
        p.w.emplace_back(coords[u_index(j, m)], coords[v_index(j, m)]);
    }
    return p;
}

ConstantTensors constant_tensors(const ModelParams& params) {
    const int m = params.m;
    const int dim = params.dim();
    const ComplexFrame f = complex_frame(m);

    ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix w1 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix w2 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix w3 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix wH = ComplexMatrix::Zero(dim, dim);
    for (int j = 0; j <= m; ++j) {
        const double s = signature_sign(j);
        g += s * (sym(f.dz[j], f.dzbar[j]) + sym(f.dw[j], f.dwbar[j]));
        w1 += s * 0.5 * kI * (wedge(f.dz[j], f.dzbar[j]) + wedge(f.dw[j], f.dwbar[j]));
        w2 += 0.5 * kI * (wedge(f.dz[j], f.dw[j]) - wedge(f.dzbar[j], f.dwbar[j]));
        w3 += 0.5 * (wedge(f.dz[j], f.dw[j]) + wedge(f.dzbar[j], f.dwbar[j]));
        wH += -s * 0.5 * kI * wedge(f.dz[j], f.dzbar[j]) + s * 0.5 * kI * wedge(f.dw[j], f.dwbar[j]);
    }

    ConstantTensors t;
    t.g = real_part(g);
    t.omega[0] = t.g;
    t.omega[1] = real_part(w1);
    t.omega[2] = real_part(w2);
    t.omega[3] = real_part(w3);
    if (params.flip_omega2_sign) t.omega[2] = -t.omega[2];
    t.omega_H = real_part(wH);

    // omega(X, Y) = g(I X, Y)  <=>  omega = I^T g  <=>  I = g^{-1} omega^T
    const Matrix g_inverse = checked_inverse(t.g);
    t.I[0] = Matrix::Identity(dim, dim);
    for (int k = 1; k <= 3; ++k) t.I[k] = g_inverse * t.omega[k].transpose();

    // Z is linear in the coordinates, so its Jacobian is read off the basis.
    t.DZ.resize(dim, dim);
    for (int a = 0; a < dim; ++a) t.DZ.col(a) = vector_Z(params, Vector::Unit(dim, a));
    return t;
}

Vector vector_Z(const ModelParams& params, const Vector& coords) {
    const int m = params.m;
    const int dim = params.dim();
    ComplexVector Z = ComplexVector::Zero(dim);
    for (int j = 0; j <= m; ++j) {
        const Complex zj(coords[x_index(j)], coords[y_index(j)]);
        // d/dz = (d/dx - i d/dy) / 2, d/dconj(z) = (d/dx + i d/dy) / 2
        ComplexVector d_z = ComplexVector::Zero(dim);
        ComplexVector d_zbar = ComplexVector::Zero(dim);
        d_z[x_index(j)] = 0.5;
        d_z[y_index(j)] = -0.5 * kI;
        d_zbar[x_index(j)] = 0.5;
        d_zbar[y_index(j)] = 0.5 * kI;
        Z += -kI * (zj * d_z - std::conj(zj) * d_zbar);
    }
    if (Z.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Z.cwiseAbs().maxCoeff())) {
        throw Error("rotating vector field is not real");
    }
    return Z.real();
}

double moment_map_Z(const ModelParams& params, const Vector& coords) {
    double lorentz = 0.0;
    for (int j = 0; j <= params.m; ++j) {
        const double r2 = coords[x_index(j)] * coords[x_index(j)] + coords[y_index(j)] * coords[y_index(j)];
        lorentz += signature_sign(j) * -r2;
    }
    return 0.5 * lorentz - 0.5 * params.c;
}

bool in_domain(const ModelParams& params, const Vector& coords) {
    return moment_map_Z(params, coords) > kDomainMargin;
}

Scalars scalars(const ModelParams& params, const Vector& coords) {
    if (coords.size() != params.dim()) throw ConfigError("point has wrong dimension");
    Scalars s;
    s.f_Z = moment_map_Z(params, coords);
    if (!(s.f_Z > kDomainMargin)) {
        throw DomainViolation("f_Z = " + std::to_string(s.f_Z) + " is not positive at this point");
    }
    double lorentz = 0.0;
    for (int j = 0; j <= params.m; ++j) {
        const double r2 = coords[x_index(j)] * coords[x_index(j)] + coords[y_index(j)] * coords[y_index(j)];
        lorentz += signature_sign(j) * -r2;
    }
    s.f_H = -0.5 * lorentz - 0.5 * params.c;
    const Vector Z = vector_Z(params, coords);
    const ConstantTensors t = constant_tensors(params);
    s.g_ZZ = Z.dot(t.g * Z);
    return s;
}

GeometryAt geometry_at(const ModelParams& params, const Vector& coords) {
    const Scalars s = scalars(params, coords);
    const ConstantTensors t = constant_tensors(params);
    const int dim = params.dim();

    GeometryAt geom;
    geom.params = params;
    geom.coords = coords;
    geom.g = t.g;
    geom.omega = t.omega;
    geom.omega_H = t.omega_H;
    geom.I = t.I;
    geom.DZ = t.DZ;
    geom.I_H = t.I[1] + 2.0 * t.DZ;
    geom.Z = vector_Z(params, coords);
    for (int mu = 0; mu < 4; ++mu) geom.alpha[mu] = t.omega[mu].transpose() * geom.Z;
    geom.f_Z = s.f_Z;
    geom.f_H = s.f_H;
    geom.g_ZZ = s.g_ZZ;

    geom.g_alpha = Matrix::Zero(dim, dim);
    for (int mu = 0; mu < 4; ++mu) geom.g_alpha += geom.alpha[mu] * geom.alpha[mu].transpose();
    geom.g_H = t.g / s.f_Z + geom.g_alpha / (s.f_Z * s.f_Z);
    geom.g_H_inverse = checked_inverse(geom.g_H);
    geom.K = geom.g_H_inverse * t.g;
    return geom;
}

Endomorphism metric_comparison_formula(const GeometryAt& geom) {
    const int dim = geom.dim();
    Endomorphism K = geom.f_Z * Matrix::Identity(dim, dim);
    for (int mu = 0; mu < 4; ++mu) K -= (geom.f_Z / geom.f_H) * (geom.I[mu] * geom.Z) * geom.alpha[mu].transpose();
    return K;
}

BilinearForm deformed_metric(const ModelParams& params, const Vector& coords) {
    const double f_Z = moment_map_Z(params, coords);
    const ConstantTensors t = constant_tensors(params);
    const Vector Z = vector_Z(params, coords);
    BilinearForm g_alpha = Matrix::Zero(params.dim(), params.dim());
    for (int mu = 0; mu < 4; ++mu) {
        const Vector a = t.omega[mu].transpose() * Z;
        g_alpha += a * a.transpose();
    }
    return t.g / f_Z + g_alpha / (f_Z * f_Z);
}

double IdentityReport::get(const std::string& name) const {
    for (const auto& [key, value] : residuals)
        if (key == name) return value;
    throw Error("no identity named " + name);
}

IdentityReport verify_differential_identities(const ModelParams& params, const Vector& coords, double fd_step) {
    const GeometryAt geom = geometry_at(params, coords);
    const int dim = geom.dim();
    const DomainPredicate inside = [&](const Vector& p) { return in_domain(params, p); };
    const ConstantTensors t = constant_tensors(params);

    auto alpha_field = [&](int mu) {
        return [&, mu](const Vector& p) -> Vector { return t.omega[mu].transpose() * vector_Z(params, p); };
    };
    // Exterior derivative of a covector field: d(alpha)(e_a, e_b) = d_a alpha_b - d_b alpha_a.
    auto exterior_derivative = [&](int mu) {
        Matrix jac(dim, dim);  // jac(a, b) = d_a alpha_b
        for (int a = 0; a < dim; ++a) jac.row(a) = finite_diff(alpha_field(mu), coords, a, fd_step, inside).transpose();
        return Matrix(jac - jac.transpose());
    };

    // Jacobian of Z by differences, used for the Lie derivatives.
    Matrix DZ_fd(dim, dim);
    for (int a = 0; a < dim; ++a)
        DZ_fd.col(a) = finite_diff([&](const Vector& p) { return vector_Z(params, p); }, coords, a, fd_step, inside);

    auto lie = [&](const Matrix& form) { return Matrix(DZ_fd.transpose() * form + form * DZ_fd); };
    auto max_abs = [](const Matrix& mat) { return mat.cwiseAbs().maxCoeff(); };

    IdentityReport report;

    // d(alpha_0)(A,B) = 2 g(D_A Z, B); d(alpha_k) = omega_k(DZ ., .) + omega_k(., DZ .)
    const Matrix d_alpha0 = exterior_derivative(0);
    report.residuals.emplace_back("d_alpha_0", max_abs(d_alpha0 - 2.0 * geom.DZ.transpose() * geom.g));
    double d_alpha_k = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const Matrix expected = geom.DZ.transpose() * geom.omega[k] + geom.omega[k] * geom.DZ;
        d_alpha_k = std::max(d_alpha_k, max_abs(exterior_derivative(k) - expected));
    }
    report.residuals.emplace_back("d_alpha_k", d_alpha_k);

    // Hamiltonians: iota_Z omega_1 = -d f_Z and iota_Z omega_H = -d f_H.
    Vector grad_fZ(dim), grad_fH(dim);
    for (int a = 0; a < dim; ++a) {
        grad_fZ[a] = finite_diff([&](const Vector& p) { return moment_map_Z(params, p); }, coords, a, fd_step, inside);
        grad_fH[a] = finite_diff(
            [&](const Vector& p) {
                const Vector Z = vector_Z(params, p);
                return moment_map_Z(params, p) + Z.dot(t.g * Z);
            },
            coords, a, fd_step, inside);
    }
    report.residuals.emplace_back("moment_map_Z", (geom.alpha[1] + grad_fZ).cwiseAbs().maxCoeff());
    report.residuals.emplace_back("moment_map_H",
                                  (Vector(geom.omega_H.transpose() * geom.Z) + grad_fH).cwiseAbs().maxCoeff());

    // Rotating symmetry.
    report.residuals.emplace_back("jacobian_Z", max_abs(DZ_fd - geom.DZ));
    report.residuals.emplace_back("killing", max_abs(lie(geom.g)));
    report.residuals.emplace_back("lie_omega_1", max_abs(lie(geom.omega[1])));
    report.residuals.emplace_back("lie_omega_2", max_abs(lie(geom.omega[2]) - geom.omega[3]));
    report.residuals.emplace_back("lie_omega_3", max_abs(lie(geom.omega[3]) + geom.omega[2]));

    // omega_H = omega_1 + d(iota_Z g)
    report.residuals.emplace_back("omega_H_twist", max_abs(geom.omega_H - geom.omega[1] - d_alpha0));
    report.residuals.emplace_back("omega_H_from_I_H", max_abs(geom.omega_H - geom.I_H.transpose() * geom.g));

    // omega_mu(D_A Z, B) - omega_mu(D_B Z, A)
    //   = -1/2 (omega_mu(I_1 A, B) - omega_mu(I_1 B, A)) + delta_mu0 omega_H(A, B)
    double rotated = 0.0;
    std::array<Matrix, 4> skew_DZ;
    for (int mu = 0; mu < 4; ++mu) {
        const Matrix lhs = geom.DZ.transpose() * geom.omega[mu];
        skew_DZ[mu] = lhs - lhs.transpose();
        const Matrix i1 = geom.I[1].transpose() * geom.omega[mu];
        Matrix rhs = -0.5 * (i1 - i1.transpose());
        if (mu == 0) rhs += geom.omega_H;
        rotated = std::max(rotated, max_abs(skew_DZ[mu] - rhs));
    }
    report.residuals.emplace_back("omega_DZ_antisymmetrized", rotated);

    // Summed form, applied to every basis triple (A, B, C).
    double summed = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            Matrix lhs = Matrix::Zero(dim, dim);
            Matrix rhs = geom.omega_H(a, b) * geom.I[1];
            for (int mu = 0; mu < 4; ++mu) {
                lhs += skew_DZ[mu](a, b) * geom.I[mu] * geom.I[1];
                rhs -= 0.5 * (geom.omega[mu](a, b) - geom.omega[mu](b, a)) * geom.I[mu];
            }
            summed = std::max(summed, max_abs(lhs - rhs));
        }
    report.residuals.emplace_back("sum_identity", summed);

    // The three lines obtained from the Lie derivatives of omega_1..3.
    auto two_lie = [&](int k) { return Matrix(2.0 * (geom.DZ.transpose() * geom.omega[k] + geom.omega[k] * geom.DZ)); };
    auto via_omega1 = [&](int k) {
        const Matrix m1 = geom.I[k].transpose() * geom.omega[1];
        return Matrix(m1 - m1.transpose());
    };
    const Matrix zero = Matrix::Zero(dim, dim);
    const double line1 = std::max({max_abs(two_lie(1) - zero), max_abs(-via_omega1(1) - zero)});
    const double line2 = std::max(max_abs(two_lie(2) - 2.0 * geom.omega[3]), max_abs(via_omega1(2) - 2.0 * geom.omega[3]));
    const double line3 = std::max(max_abs(two_lie(3) + 2.0 * geom.omega[2]), max_abs(via_omega1(3) + 2.0 * geom.omega[2]));
    report.residuals.emplace_back("omega_identity_1", line1);
    report.residuals.emplace_back("omega_identity_2", line2);
    report.residuals.emplace_back("omega_identity_3", line3);
    return report;
}

}  // namespace hkqk::flat_model
