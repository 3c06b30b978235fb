#pragma once

// The two Kulkarni-Nomizu maps on rank-4 covariant tensors, their lift to
// endomorphisms via a metric, and the closed-form trace identities for
// compositions of the resulting exterior-square operators.

#include "hkqk/pseudo_linear.hpp"

namespace hkqk::kulkarni {

/// Phi^owedge(A,B,C,X) = Phi(A,C,B,X) - Phi(A,X,B,C) + Phi(B,X,A,C) - Phi(B,C,A,X)
QuadCov kn_owedge(const QuadCov& phi);

/// Phi^obar = Phi^owedge + 2 Phi(A,B,C,X) + 2 Phi(C,X,A,B).
/// Throws PairAntisymmetryViolated unless Phi is antisymmetric in (1,2) and (3,4).
QuadCov kn_obar(const QuadCov& phi);

/// a owedge b := (a (x) b)^owedge for (0,2)-tensors.
QuadCov owedge(const BilinearForm& a, const BilinearForm& b);

/// a obar b := (a (x) b)^obar; a and b must be antisymmetric.
QuadCov obar(const BilinearForm& a, const BilinearForm& b);

/// E owedge_h F as an operator on the exterior square.
Lambda2Operator endo_owedge(const Endomorphism& E, const Endomorphism& F, const BilinearForm& metric);

/// K obar_h L; K and L must be skew-adjoint with respect to `metric`.
Lambda2Operator endo_obar(const Endomorphism& K, const Endomorphism& L, const BilinearForm& metric);

bool is_self_adjoint(const Endomorphism& E, const BilinearForm& metric, double tol = 1e-10);
bool is_skew_adjoint(const Endomorphism& E, const BilinearForm& metric, double tol = 1e-10);

/// Right-hand sides of
///   tr((E owedge E)(F owedge F)) = 2 (tr EF)^2 - 2 tr((EF)^2)
///   tr((K obar K)(L obar L))     = 6 (tr KL)^2 + 6 tr((KL)^2)
///   tr((E owedge E)(K obar K))   = 2 (tr EK)^2 - 6 tr((EK)^2)
struct TraceIdentities {
    double owedge_owedge = 0.0;
    double obar_obar = 0.0;
    double owedge_obar = 0.0;
};

/// E, F self-adjoint and K, L skew-adjoint, else AdjointnessViolated.
TraceIdentities trace_identities(const Endomorphism& E, const Endomorphism& F, const Endomorphism& K,
                                 const Endomorphism& L, const BilinearForm& metric);

/// First identity alone; it holds for arbitrary E, F.
double owedge_trace_identity(const Endomorphism& E, const Endomorphism& F);

}  // namespace hkqk::kulkarni
