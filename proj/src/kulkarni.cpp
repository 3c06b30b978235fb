#include "hkqk/kulkarni.hpp"

#include <algorithm>

#include "hkqk/kernels.hpp"

namespace hkqk::kulkarni {

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void require_antisymmetric(const BilinearForm& form) {
    if ((form + form.transpose()).cwiseAbs().maxCoeff() > kDegeneracyThreshold * scale_of(form)) {
        throw PairAntisymmetryViolated("obar needs two-forms");
    }
}

}  // namespace

QuadCov kn_owedge(const QuadCov& phi) { return kernels::owedge(phi); }

QuadCov kn_obar(const QuadCov& phi) {
    if (pair_antisymmetry_residual(phi) > kDegeneracyThreshold * std::max(1.0, phi.max_abs())) {
        throw PairAntisymmetryViolated("obar input is not antisymmetric in its index pairs");
    }
    return kernels::obar(phi);
}

QuadCov owedge(const BilinearForm& a, const BilinearForm& b) { return kernels::owedge_product(a, b); }

QuadCov obar(const BilinearForm& a, const BilinearForm& b) {
    require_antisymmetric(a);
    require_antisymmetric(b);
    return kernels::obar_product(a, b);
}

bool is_self_adjoint(const Endomorphism& E, const BilinearForm& metric, double tol) {
    const Matrix lowered = lower(E, metric);
    return (lowered - lowered.transpose()).cwiseAbs().maxCoeff() <= tol * scale_of(lowered);
}

bool is_skew_adjoint(const Endomorphism& E, const BilinearForm& metric, double tol) {
    const Matrix lowered = lower(E, metric);
    return (lowered + lowered.transpose()).cwiseAbs().maxCoeff() <= tol * scale_of(lowered);
}

Lambda2Operator endo_owedge(const Endomorphism& E, const Endomorphism& F, const BilinearForm& metric) {
    return quadcov_to_lambda2_op(owedge(lower(E, metric), lower(F, metric)), metric);
}

Lambda2Operator endo_obar(const Endomorphism& K, const Endomorphism& L, const BilinearForm& metric) {
    if (!is_skew_adjoint(K, metric) || !is_skew_adjoint(L, metric)) {
        throw NotSkewAdjoint("obar of endomorphisms needs skew-adjoint arguments");
    }
    return quadcov_to_lambda2_op(kernels::obar_product(lower(K, metric), lower(L, metric)), metric);
}

double owedge_trace_identity(const Endomorphism& E, const Endomorphism& F) {
    const Matrix EF = E * F;
    const double t = EF.trace();
    return 2.0 * t * t - 2.0 * (EF * EF).trace();
}

TraceIdentities trace_identities(const Endomorphism& E, const Endomorphism& F, const Endomorphism& K,
                                 const Endomorphism& L, const BilinearForm& metric) {
    if (!is_self_adjoint(E, metric) || !is_self_adjoint(F, metric)) {
        throw AdjointnessViolated("E and F must be self-adjoint");
    }
    if (!is_skew_adjoint(K, metric) || !is_skew_adjoint(L, metric)) {
        throw AdjointnessViolated("K and L must be skew-adjoint");
    }
    TraceIdentities out;
    out.owedge_owedge = owedge_trace_identity(E, F);

    const Matrix KL = K * L;
    const double tKL = KL.trace();
    out.obar_obar = 6.0 * tKL * tKL + 6.0 * (KL * KL).trace();

    const Matrix EK = E * K;
    const double tEK = EK.trace();
    out.owedge_obar = 2.0 * tEK * tEK - 6.0 * (EK * EK).trace();
    return out;
}

}  // namespace hkqk::kulkarni
