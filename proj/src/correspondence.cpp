#include "hkqk/correspondence.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hkqk/kulkarni.hpp"

namespace hkqk::correspondence {

namespace {

// Products of the structure endomorphisms that the displays keep reusing.
struct Cache {
    int dim;
    std::array<Vector, 4> IZ;         // I_mu Z
    std::array<Vector, 4> II1Z;       // I_mu I_1 Z
    std::array<Matrix, 4> II1;        // I_mu I_1
    std::array<Matrix, 4> IIH;        // I_mu I_H
    std::array<Matrix, 4> II1IH;      // I_mu I_1 I_H
    std::array<Matrix, 4> IDZ;        // I_mu DZ
    std::array<Vector, 4> gII1Z;      // G I_mu I_1 Z  (covector of g(I_mu I_1 Z, .))
    std::array<Vector, 4> gIIHZ;      // G I_mu I_H Z
    std::array<Vector, 4> zIIH;       // covector of g(I_mu I_H ., Z)
    std::array<std::array<Matrix, 4>, 4> IlIm;   // I_l I_m
    std::array<std::array<Vector, 4>, 4> IlImZ;  // I_l I_m Z
    std::array<Matrix, 4> gIIH;       // G I_mu I_H
    std::array<Matrix, 4> gI;         // G I_mu
    Vector omegaHZ;                   // covector of omega_H(Z, .)

    explicit Cache(const GeometryAt& geom) : dim(geom.dim()) {
        const Matrix& G = geom.g;
        for (int mu = 0; mu < 4; ++mu) {
            IZ[mu] = geom.I[mu] * geom.Z;
            II1[mu] = geom.I[mu] * geom.I[1];
            II1Z[mu] = II1[mu] * geom.Z;
            IIH[mu] = geom.I[mu] * geom.I_H;
            II1IH[mu] = II1[mu] * geom.I_H;
            IDZ[mu] = geom.I[mu] * geom.DZ;
            gII1Z[mu] = G * II1Z[mu];
            gIIHZ[mu] = G * (IIH[mu] * geom.Z);
            zIIH[mu] = IIH[mu].transpose() * (G * geom.Z);
            gIIH[mu] = G * IIH[mu];
            gI[mu] = G * geom.I[mu];
        }
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m) {
                IlIm[l][m] = geom.I[l] * geom.I[m];
                IlImZ[l][m] = IlIm[l][m] * geom.Z;
            }
        omegaHZ = geom.omega_H.transpose() * geom.Z;
    }
};

double form(const Matrix& B, const Vector& x, const Vector& y) { return x.dot(B * y); }

}  // namespace

ConnectionCorrection::ConnectionCorrection(int dim)
    : slots_(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)) {}

Endomorphism ConnectionCorrection::along(const Vector& A) const {
    const int n = dim();
    Endomorphism out = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        if (A[a] != 0.0) out += A[a] * slots_[static_cast<std::size_t>(a)];
    return out;
}

Vector ConnectionCorrection::apply(const Vector& A, const Vector& B) const { return along(A) * B; }

double ConnectionCorrection::max_abs() const {
    double m = 0.0;
    for (const auto& s : slots_) m = std::max(m, s.cwiseAbs().maxCoeff());
    return m;
}

ConnectionCorrection& ConnectionCorrection::operator+=(const ConnectionCorrection& other) {
    for (std::size_t a = 0; a < slots_.size(); ++a) slots_[a] += other.slots_[a];
    return *this;
}

ConnectionCorrection& ConnectionCorrection::operator-=(const ConnectionCorrection& other) {
    for (std::size_t a = 0; a < slots_.size(); ++a) slots_[a] -= other.slots_[a];
    return *this;
}

ConnectionCorrection& ConnectionCorrection::operator*=(double s) {
    for (auto& slot : slots_) slot *= s;
    return *this;
}

Vector s_closed(const GeometryAt& geom, const Vector& A, const Vector& B) {
    Vector out = Vector::Zero(geom.dim());
    for (int mu = 0; mu < 4; ++mu) {
        const Vector IZ = geom.I[mu] * geom.Z;
        const Matrix II1 = geom.I[mu] * geom.I[1];
        const double gIIH = form(geom.g, geom.I[mu] * (geom.I_H * A), B);
        out += (0.5 / geom.f_H) * gIIH * IZ;
        out -= (0.5 / geom.f_Z) * (geom.alpha[mu].dot(A) * (II1 * B) + geom.alpha[mu].dot(B) * (II1 * A));
    }
    return out;
}

ConnectionCorrection s_closed_tensor(const GeometryAt& geom) {
    const int n = geom.dim();
    const Cache cache(geom);
    ConnectionCorrection S(n);
    for (int a = 0; a < n; ++a) {
        Matrix& slot = S.slot(a);
        for (int mu = 0; mu < 4; ++mu) {
            // B -> f_H^-1 g(I_mu I_H e_a, B) I_mu Z
            const Vector row = cache.gIIH[mu].col(a);
            slot += (0.5 / geom.f_H) * cache.IZ[mu] * row.transpose();
            slot -= (0.5 / geom.f_Z) * geom.alpha[mu][a] * cache.II1[mu];
            slot -= (0.5 / geom.f_Z) * cache.II1[mu].col(a) * geom.alpha[mu].transpose();
        }
    }
    return S;
}

ConnectionParts s_parts(const ModelParams& params, const Vector& coords, double fd_step) {
    const GeometryAt geom = flat_model::geometry_at(params, coords);
    const int n = geom.dim();
    const flat_model::ModelParams p = params;
    const DomainPredicate inside = [p](const Vector& x) { return flat_model::in_domain(p, x); };

    std::vector<Matrix> dG(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        dG[static_cast<std::size_t>(a)] = finite_diff(
            [&](const Vector& x) { return flat_model::deformed_metric(params, x); }, coords, a, fd_step, inside);
    }

    const Vector gHZ = geom.g_H * geom.Z;
    const Matrix& wH = geom.omega_H;

    ConnectionParts parts{ConnectionCorrection(n), ConnectionCorrection(n)};
    Vector rhs_h(n), rhs_q(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                // 2 g_H(S^H_A B, C) = (D_A g_H)(B,C) + (D_B g_H)(C,A) - (D_C g_H)(A,B)
                rhs_h[c] = dG[static_cast<std::size_t>(a)](b, c) + dG[static_cast<std::size_t>(b)](c, a) -
                           dG[static_cast<std::size_t>(c)](a, b);
                // 2 g_H(S^Q_A B, C) = f_H^-1 (g_H(Z,C) w_H(A,B) - g_H(Z,A) w_H(B,C) - g_H(Z,B) w_H(A,C))
                rhs_q[c] = (gHZ[c] * wH(a, b) - gHZ[a] * wH(b, c) - gHZ[b] * wH(a, c)) / geom.f_H;
            }
            parts.s_h.slot(a).col(b) = 0.5 * geom.g_H_inverse * rhs_h;
            parts.s_q.slot(a).col(b) = 0.5 * geom.g_H_inverse * rhs_q;
        }
    return parts;
}

Vector s_from_parts(const ModelParams& params, const Vector& coords, const Vector& A, const Vector& B,
                    double fd_step) {
    return s_parts(params, coords, fd_step).total().apply(A, B);
}

LemmaOperators lemma_operators(const GeometryAt& geom, const Vector& A, const Vector& B) {
    const int n = geom.dim();
    const Cache cache(geom);
    const Matrix& G = geom.g;
    const double fZ = geom.f_Z;
    const double fH = geom.f_H;

    const double wHZA = cache.omegaHZ.dot(A);
    const double wHZB = cache.omegaHZ.dot(B);
    const double a1A = geom.alpha[1].dot(A);
    const double a1B = geom.alpha[1].dot(B);

    LemmaOperators out{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};

    // (D_A S)_B C - (D_B S)_A C
    Matrix& ds = out.term_DS;
    for (int mu = 0; mu < 4; ++mu) {
        const Matrix& Imu = geom.I[mu];
        const Vector gIIHB = cache.gIIH[mu] * B;  // covector of omega_mu(I_H B, .)
        const Vector gIIHA = cache.gIIH[mu] * A;
        ds += (wHZA / (fH * fH)) * cache.IZ[mu] * gIIHB.transpose();
        ds += (a1A / (fZ * fZ)) * (cache.gII1Z[mu].dot(B) * Imu + (Imu * B) * cache.gII1Z[mu].transpose());
        ds -= (wHZB / (fH * fH)) * cache.IZ[mu] * gIIHA.transpose();
        ds -= (a1B / (fZ * fZ)) * (cache.gII1Z[mu].dot(A) * Imu + (Imu * A) * cache.gII1Z[mu].transpose());
        ds += (1.0 / fH) * ((cache.IDZ[mu] * A) * gIIHB.transpose() - (cache.IDZ[mu] * B) * gIIHA.transpose());
        const Vector pa = G * (cache.II1IH[mu] * A + Imu * A);
        const Vector pb = G * (cache.II1IH[mu] * B + Imu * B);
        ds += (0.5 / fZ) * ((Imu * B) * pa.transpose() - (Imu * A) * pb.transpose());
        const double w_ab = form(geom.omega[mu], A, B) - form(geom.omega[mu], B, A);
        ds += (0.5 / fZ) * w_ab * Imu;
    }
    ds *= 0.5;
    ds -= (0.5 / fZ) * form(geom.omega_H, A, B) * geom.I[1];

    // [S_A, S_B] C
    Matrix& comm = out.term_comm;
    for (int mu = 0; mu < 4; ++mu) {
        const double zA = cache.zIIH[mu].dot(A);  // g(I_mu I_H A, Z)
        const double zB = cache.zIIH[mu].dot(B);
        const double pA = cache.gII1Z[mu].dot(A);  // g(I_mu I_1 Z, A)
        const double pB = cache.gII1Z[mu].dot(B);
        for (int la = 0; la < 4; ++la) {
            const double qA = cache.gII1Z[la].dot(A);
            const double qB = cache.gII1Z[la].dot(B);
            const Vector& IlImZ = cache.IlImZ[la][mu];
            comm += (0.25 / (fH * fH)) *
                    (zA * IlImZ * (cache.gIIH[la] * B).transpose() - zB * IlImZ * (cache.gIIH[la] * A).transpose());
            comm += (0.25 / (fZ * fZ)) *
                    ((pA * qB - pB * qA) * cache.IlIm[mu][la] +
                     pB * (cache.IlIm[la][mu] * A) * cache.gII1Z[la].transpose() -
                     pA * (cache.IlIm[la][mu] * B) * cache.gII1Z[la].transpose());
        }
    }
    const double gIHAB = form(G, geom.I_H * A, B);
    for (int mu = 0; mu < 4; ++mu) {
        comm += (0.25 / (fZ * fH)) *
                (2.0 * gIHAB * cache.IZ[mu] * cache.gII1Z[mu].transpose() -
                 geom.g_ZZ * ((cache.II1[mu] * A) * (cache.gIIH[mu] * B).transpose() -
                              (cache.II1[mu] * B) * (cache.gIIH[mu] * A).transpose()));
    }

    // D_C Z + S_Z C
    Matrix& dzsz = out.term_DZSZ;
    dzsz = 0.5 * (geom.I_H - (fH / fZ) * geom.I[1]);
    for (int mu = 0; mu < 4; ++mu) {
        dzsz += 0.5 * cache.IZ[mu] * (cache.gIIHZ[mu] / fH + cache.gII1Z[mu] / fZ).transpose();
    }
    return out;
}

LemmaTerms lemma_terms(const GeometryAt& geom, const Vector& A, const Vector& B, const Vector& C) {
    const LemmaOperators ops = lemma_operators(geom, A, B);
    return {ops.term_DS * C, ops.term_comm * C, ops.term_DZSZ * C};
}

Vector t_tensor(const GeometryAt& geom, const Vector& A, const Vector& B, const Vector& C) {
    const LemmaTerms t = lemma_terms(geom, A, B, C);
    return t.term_DS + t.term_comm - (form(geom.omega_H, A, B) / geom.f_H) * t.term_DZSZ;
}

QuadCov t_lowered_from_lemmas(const GeometryAt& geom) {
    const int n = geom.dim();
    QuadCov out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Vector A = Vector::Unit(n, a);
            const Vector B = Vector::Unit(n, b);
            const LemmaOperators ops = lemma_operators(geom, A, B);
            const Matrix T = ops.term_DS + ops.term_comm - (geom.omega_H(a, b) / geom.f_H) * ops.term_DZSZ;
            const Matrix lowered = T.transpose() * geom.g_H;
            for (int c = 0; c < n; ++c)
                for (int x = 0; x < n; ++x) out(a, b, c, x) = lowered(c, x);
        }
    return out;
}

QuadCov hk_curvature(const GeometryAt& geom) { return QuadCov(geom.dim()); }

QuadCov projective_part(const GeometryAt& geom) {
    QuadCov out = kulkarni::owedge(geom.g_H, geom.g_H);
    for (int k = 1; k <= 3; ++k) {
        const BilinearForm h = lower(geom.I[k], geom.g_H);
        out += kulkarni::obar(h, h);
    }
    return out;
}

QuadCov twist_part(const GeometryAt& geom) {
    QuadCov out = kulkarni::obar(geom.omega_H, geom.omega_H);
    for (int k = 1; k <= 3; ++k) {
        const BilinearForm s = lower(geom.I[k], geom.omega_H);
        out += kulkarni::owedge(s, s);
    }
    return out;
}

QuadCov rtilde_closed(const GeometryAt& geom, const QuadCov& hk_riemann) {
    QuadCov out = (1.0 / geom.f_Z) * hk_riemann;
    out += 0.125 * projective_part(geom);
    out -= (1.0 / (8.0 * geom.f_Z * geom.f_H)) * twist_part(geom);
    return out;
}

QuadCov rtilde_closed(const GeometryAt& geom) { return rtilde_closed(geom, hk_curvature(geom)); }

std::vector<ConnectionCorrection> s_derivatives(const ModelParams& params, const Vector& coords, SSource source,
                                                double fd_step) {
    const int n = params.dim();
    const flat_model::ModelParams p = params;
    const DomainPredicate inside = [p](const Vector& x) { return flat_model::in_domain(p, x); };
    auto evaluate = [&](const Vector& x) {
        if (source == SSource::Closed) return s_closed_tensor(flat_model::geometry_at(params, x));
        return s_parts(params, x, fd_step).total();
    };

    std::vector<ConnectionCorrection> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const double h = fd_step;
        auto shifted = [&](double t) {
            Vector x = coords;
            x[a] += t;
            if (!inside(x)) throw DomainViolation("finite-difference sample leaves the domain");
            return x;
        };
        const Vector p1 = shifted(h), m1 = shifted(-h), p2 = shifted(2.0 * h), m2 = shifted(-2.0 * h);
        ConnectionCorrection d = evaluate(p1);
        d -= evaluate(m1);
        d *= 8.0;
        d -= evaluate(p2);
        d += evaluate(m2);
        d *= 1.0 / (12.0 * h);
        out.push_back(std::move(d));
    }
    return out;
}

CurvatureTensors curvature_tensors(const ModelParams& params, const Vector& coords, SSource source, double fd_step) {
    const GeometryAt geom = flat_model::geometry_at(params, coords);
    const int n = geom.dim();
    const ConnectionCorrection S =
        source == SSource::Closed ? s_closed_tensor(geom) : s_parts(params, coords, fd_step).total();
    const std::vector<ConnectionCorrection> dS = s_derivatives(params, coords, source, fd_step);
    const Endomorphism twist = geom.DZ + S.along(geom.Z);

    CurvatureTensors out;
    out.R_flat = hk_curvature(geom);
    out.T = QuadCov(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Matrix& Sa = S.slot(a);
            const Matrix& Sb = S.slot(b);
            const Matrix T = dS[static_cast<std::size_t>(a)].slot(b) - dS[static_cast<std::size_t>(b)].slot(a) +
                             Sa * Sb - Sb * Sa - (geom.omega_H(a, b) / geom.f_H) * twist;
            const Matrix lowered = T.transpose() * geom.g_H;
            for (int c = 0; c < n; ++c)
                for (int x = 0; x < n; ++x) out.T(a, b, c, x) = lowered(c, x);
        }

    // g_H(R(A,B)C, X) from g(R(A,B)C, .): raise with g, lower with g_H.
    const Matrix transfer = checked_inverse(geom.g) * geom.g_H;
    QuadCov r_h(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int x = 0; x < n; ++x) {
                    double sum = 0.0;
                    for (int y = 0; y < n; ++y) sum += out.R_flat(a, b, c, y) * transfer(y, x);
                    r_h(a, b, c, x) = sum;
                }
    out.rtilde_direct = r_h + out.T;
    out.rtilde_closed = rtilde_closed(geom, out.R_flat);
    return out;
}

}  // namespace hkqk::correspondence
