#pragma once

// Connection correction S and the curvature R~ of the quaternionic Kaehler
// metric, computed on the hyper-Kaehler side (pointwise, in the fixed
// coordinate frame of the flat model).
//
// Every quantity has at least two independent routes:
//   S   : closed form  vs.  S^H (finite differences of g_H) + S^Q
//   D S : closed lemma display  vs.  finite differences of S
//   R~  : Kulkarni-Nomizu closed form  vs.  D S + [S,S] - twist term,
//         either from the lemma displays or from finite differences.

#include <vector>

#include "hkqk/flat_model.hpp"
#include "hkqk/pseudo_linear.hpp"

namespace hkqk::correspondence {

using flat_model::GeometryAt;
using flat_model::ModelParams;

/// (A, B) -> S_A B at one point. slot(a) is the endomorphism S_{e_a}.
class ConnectionCorrection {
public:
    ConnectionCorrection() = default;
    explicit ConnectionCorrection(int dim);

    int dim() const { return static_cast<int>(slots_.size()); }

    const Endomorphism& slot(int a) const { return slots_[static_cast<std::size_t>(a)]; }
    Endomorphism& slot(int a) { return slots_[static_cast<std::size_t>(a)]; }

    /// S_A as an endomorphism.
    Endomorphism along(const Vector& A) const;
    Vector apply(const Vector& A, const Vector& B) const;

    double max_abs() const;

    ConnectionCorrection& operator+=(const ConnectionCorrection& other);
    ConnectionCorrection& operator-=(const ConnectionCorrection& other);
    ConnectionCorrection& operator*=(double s);

    friend ConnectionCorrection operator+(ConnectionCorrection a, const ConnectionCorrection& b) { return a += b; }
    friend ConnectionCorrection operator-(ConnectionCorrection a, const ConnectionCorrection& b) { return a -= b; }

private:
    std::vector<Endomorphism> slots_;
};

/// S_A B = 1/2 sum_mu ( f_H^-1 g(I_mu I_H A, B) I_mu Z
///                      - f_Z^-1 (alpha_mu(A) I_mu I_1 B + alpha_mu(B) I_mu I_1 A) )
Vector s_closed(const GeometryAt& geom, const Vector& A, const Vector& B);
ConnectionCorrection s_closed_tensor(const GeometryAt& geom);

/// Levi-Civita correction of the elementary deformation (S^H, from finite
/// differences of g_H) and the twist correction S^Q.
struct ConnectionParts {
    ConnectionCorrection s_h;
    ConnectionCorrection s_q;

    ConnectionCorrection total() const { return s_h + s_q; }
};

ConnectionParts s_parts(const ModelParams& params, const Vector& coords, double fd_step = kDefaultFdStep);
Vector s_from_parts(const ModelParams& params, const Vector& coords, const Vector& A, const Vector& B,
                    double fd_step = kDefaultFdStep);

/// Closed displays for the three constituents of the curvature twist tensor:
///   term_DS   = (D_A S)_B C - (D_B S)_A C
///   term_comm = [S_A, S_B] C
///   term_DZSZ = D_C Z + S_Z C
/// The hyper-Kaehler curvature term R(A,B)Z is dropped: it vanishes on the
/// flat model.
struct LemmaTerms {
    Vector term_DS;
    Vector term_comm;
    Vector term_DZSZ;
};

LemmaTerms lemma_terms(const GeometryAt& geom, const Vector& A, const Vector& B, const Vector& C);

/// Same terms as maps C -> term.
struct LemmaOperators {
    Endomorphism term_DS;
    Endomorphism term_comm;
    Endomorphism term_DZSZ;
};

LemmaOperators lemma_operators(const GeometryAt& geom, const Vector& A, const Vector& B);

/// T(A,B)C = term_DS + term_comm - f_H^-1 omega_H(A,B) term_DZSZ
Vector t_tensor(const GeometryAt& geom, const Vector& A, const Vector& B, const Vector& C);

/// g_H(T(e_a, e_b) e_c, e_x) assembled from the lemma displays.
QuadCov t_lowered_from_lemmas(const GeometryAt& geom);

/// g(R(A,B)C, X) of the flat hyper-Kaehler metric (identically zero).
QuadCov hk_curvature(const GeometryAt& geom);

/// f_Z^-1 R + 1/8 (g_H owedge g_H + sum_k g_H(I_k.,.) obar g_H(I_k.,.))
///   - (8 f_Z f_H)^-1 (omega_H obar omega_H + sum_k omega_H(I_k.,.) owedge omega_H(I_k.,.))
QuadCov rtilde_closed(const GeometryAt& geom, const QuadCov& hk_riemann);
QuadCov rtilde_closed(const GeometryAt& geom);

/// The two grouped terms of rtilde_closed separately.
QuadCov projective_part(const GeometryAt& geom);   // g_H owedge g_H + sum_k g_H(I_k.,.) obar g_H(I_k.,.)
QuadCov twist_part(const GeometryAt& geom);        // omega_H obar omega_H + sum_k omega_H(I_k.,.) owedge omega_H(I_k.,.)

/// Where the connection correction comes from on the finite-difference path.
enum class SSource {
    Closed,  // closed form, one level of finite differences
    Koszul,  // S^H + S^Q, two nested levels of finite differences
};

/// Coordinate derivatives d_a S at a point, by the fourth-order central stencil
/// (8(S(x+h) - S(x-h)) - (S(x+2h) - S(x-2h))) / 12h.
std::vector<ConnectionCorrection> s_derivatives(const ModelParams& params, const Vector& coords, SSource source,
                                                double fd_step = kDefaultFdStep);

struct CurvatureTensors {
    QuadCov R_flat;         // g(R(A,B)C, X), zero for the flat model
    QuadCov T;              // g_H(T(A,B)C, X) from finite-differenced S
    QuadCov rtilde_direct;  // g_H((R + T)(A,B)C, X)
    QuadCov rtilde_closed;
};

CurvatureTensors curvature_tensors(const ModelParams& params, const Vector& coords, SSource source,
                                   double fd_step = kDefaultFdStep);

}  // namespace hkqk::correspondence
