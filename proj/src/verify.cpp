#include "hkqk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hkqk/correspondence.hpp"
#include "hkqk/curvature.hpp"
#include "hkqk/kulkarni.hpp"
#include "hkqk/sampling.hpp"

namespace hkqk::verify {

namespace {

using correspondence::ConnectionCorrection;
using flat_model::GeometryAt;
using flat_model::ModelParams;

struct CheckSpec {
    const char* name;
    const char* anchor;
    double tolerance;
};

constexpr double kAlgebraic = 1e-10;
constexpr double kSingleFd = 1e-6;
constexpr double kKoszul = 1e-5;
constexpr double kDoubleFd = 1e-4;

// clang-format off
const std::vector<CheckSpec>& specs() {
    static const std::vector<CheckSpec> table = {
        {"quaternion_relations", "I_k^2 = -id and I_1 I_2 = I_3 (cyclic) on the flat model", kAlgebraic},
        {"complex_structures_skew", "each I_k is g-skew, omega_k = g(I_k., .)", kAlgebraic},
        {"I_H_squared", "I_H = I_1 + 2 DZ squares to -id", kAlgebraic},
        {"commutation", "K, I_mu and I_H commute pairwise", kAlgebraic},
        {"gH_positive_definite", "elementary deformation g_H is positive definite (residual: -min eigenvalue)", 0.0},
        {"fH_identity", "f_H = f_Z + g(Z,Z)", 1e-12},
        {"metric_comparison", "g_H(K., .) = g with K = f_Z id - (f_Z/f_H) sum alpha_l(.) I_l Z", kAlgebraic},
        {"d_alpha_0", "d(iota_Z g) = 2 g(DZ., .)", kSingleFd},
        {"d_alpha_k", "d(iota_Z omega_k) = L_Z omega_k", kSingleFd},
        {"moment_map_Z", "iota_Z omega_1 = -d f_Z", kSingleFd},
        {"moment_map_H", "iota_Z omega_H = -d f_H", kSingleFd},
        {"jacobian_Z", "analytic DZ matches differences of Z", kSingleFd},
        {"killing", "Z is Killing for g", kSingleFd},
        {"lie_omega_1", "L_Z omega_1 = 0", kSingleFd},
        {"lie_omega_2", "L_Z omega_2 = omega_3", kSingleFd},
        {"lie_omega_3", "L_Z omega_3 = -omega_2", kSingleFd},
        {"omega_H_twist", "omega_H = omega_1 + d(iota_Z g)", kSingleFd},
        {"omega_H_from_I_H", "omega_H = g(I_H., .)", kAlgebraic},
        {"omega_DZ_antisymmetrized", "antisymmetrized omega_mu(DZ., .) in terms of I_1 and omega_H", kAlgebraic},
        {"sum_identity", "sum over mu of the antisymmetrized DZ terms against I_mu I_1", kAlgebraic},
        {"omega_identity_1", "Lie derivative line for omega_1", kAlgebraic},
        {"omega_identity_2", "Lie derivative line for omega_2", kAlgebraic},
        {"omega_identity_3", "Lie derivative line for omega_3", kAlgebraic},
        {"kn_owedge_symmetries", "owedge of symmetric forms is an algebraic curvature tensor", 1e-12},
        {"kn_obar_symmetries", "obar of two-forms is an algebraic curvature tensor", 1e-12},
        {"trace_identities", "closed traces of owedge/obar compositions vs exterior-square traces", 1e-8},
        {"s_torsion", "S_A B - S_B A = f_H^-1 omega_H(A,B) Z", kAlgebraic},
        {"s_metric_compatibility", "D + S is g_H-compatible", kKoszul},
        {"s_koszul_oracle", "S^H + S^Q from the Koszul formulas equals the closed S", kKoszul},
        {"s_q_skew", "S^Q is g_H-skew in its last two slots", kAlgebraic},
        {"s_h_symmetric", "S^H is symmetric", kKoszul},
        {"lemma_DS_fd", "closed (D_A S)_B - (D_B S)_A display vs differences of S", kDoubleFd},
        {"lemma_comm", "closed [S_A, S_B] display vs the commutator of S", kAlgebraic},
        {"lemma_DZSZ", "closed DZ + S_Z display vs DZ + S_Z", kAlgebraic},
        {"rtilde_symmetries", "closed R~ is an algebraic curvature tensor", kAlgebraic},
        {"rtilde_grouped_symmetries", "projective and twist groups of R~ are each algebraic curvature tensors", kAlgebraic},
        {"rtilde_lemma_assembly", "R~ assembled from the closed displays equals the closed R~", kAlgebraic},
        {"rtilde_direct_path", "R~ from differences of the closed S equals the closed R~", kDoubleFd},
        {"rtilde_koszul_path", "R~ from differences of the Koszul S equals the closed R~", kDoubleFd},
        {"curvature_operator_symmetric", "exterior-square curvature operator is self-adjoint", kAlgebraic},
        {"norm_frame_vs_closed", "curvature norm from the frame equals n(5n+1) + ... closed formula", 1e-8},
        {"norm_level_set", "curvature norm depends on the point only through f_Z", 1e-9},
        {"norm_symmetric_space", "c = 0: curvature norm is 4q(2q+1)", 1e-9},
        {"scalar_curvature", "scal = -4q(q+2), reduced scalar curvature -1", 1e-8},
        {"K_traces", "tr K^p = 4((q-1) f_Z^p + f_Z^2p / f_H^p), p = 0..6", 1e-9},
        {"K_traces_vanishing", "tr K^p I_k = tr K^p I_H = tr K^p I_H I_k = 0, p = 0..6", 1e-9},
        {"hk_type", "R1 = R~ - nu R0 commutes with every I_k", 1e-8},
        {"twist_invariance", "twist group of R~ is invariant under I_j in its last two slots", kAlgebraic},
        {"rho_profile_constant", "c = 0: closed norm constant on the rho grid", 1e-9},
        {"rho_profile_monotone", "c > 0: closed norm strictly monotone on the rho grid (residual: violations)", 1.0},
    };
    return table;
}
// clang-format on

constexpr int kRhoGridPoints = 1000;
constexpr double kRhoMin = 0.01;
constexpr double kRhoMax = 100.0;
constexpr int kMaxTracePower = 6;

using Residuals = std::map<std::string, double>;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double relative(double diff, double scale) { return diff / std::max(1.0, std::abs(scale)); }

double curvature_symmetry(const QuadCov& T) {
    return std::max({pair_antisymmetry_residual(T), pair_symmetry_residual(T), first_bianchi_residual(T)});
}

Matrix random_symmetric(int n, sampling::Rng& rng) {
    const Matrix a = sampling::gaussian_matrix(n, n, rng);
    return 0.5 * (a + a.transpose());
}

Matrix random_antisymmetric(int n, sampling::Rng& rng) {
    const Matrix a = sampling::gaussian_matrix(n, n, rng);
    return 0.5 * (a - a.transpose());
}

void flat_checks(const GeometryAt& geom, const ModelParams& params, double fd_step, Residuals& r) {
    const int n = geom.dim();
    const Matrix id = Matrix::Identity(n, n);
    const auto& I = geom.I;

    double quat = 0.0;
    for (int k = 1; k <= 3; ++k) quat = std::max(quat, max_abs(I[k] * I[k] + id));
    quat = std::max({quat, max_abs(I[1] * I[2] - I[3]), max_abs(I[2] * I[3] - I[1]), max_abs(I[3] * I[1] - I[2])});
    r["quaternion_relations"] = quat;

    double skew = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const Matrix lowered = lower(I[k], geom.g);
        skew = std::max({skew, max_abs(lowered + lowered.transpose()), max_abs(lowered - geom.omega[k])});
    }
    r["complex_structures_skew"] = skew;
    r["I_H_squared"] = max_abs(geom.I_H * geom.I_H + id);

    double comm = max_abs(geom.K * geom.I_H - geom.I_H * geom.K);
    for (int mu = 0; mu < 4; ++mu) {
        comm = std::max(comm, max_abs(geom.K * I[mu] - I[mu] * geom.K));
        comm = std::max(comm, max_abs(geom.I_H * I[mu] - I[mu] * geom.I_H));
    }
    r["commutation"] = relative(comm, max_abs(geom.K));

    const Eigen::SelfAdjointEigenSolver<Matrix> eig(geom.g_H, Eigen::EigenvaluesOnly);
    r["gH_positive_definite"] = -eig.eigenvalues().minCoeff();
    r["fH_identity"] = relative(std::abs(geom.f_H - (geom.f_Z + geom.g_ZZ)), geom.f_H);

    const Matrix K_formula = flat_model::metric_comparison_formula(geom);
    r["metric_comparison"] = std::max(relative(max_abs(K_formula - geom.K), max_abs(geom.K)),
                                      relative(max_abs(geom.K.transpose() * geom.g_H - geom.g), max_abs(geom.g)));

    const flat_model::IdentityReport report = flat_model::verify_differential_identities(params, geom.coords, fd_step);
    for (const auto& [name, value] : report.residuals) r[name] = value;
}

void kulkarni_checks(const GeometryAt& geom, sampling::Rng& rng, Residuals& r) {
    const int n = geom.dim();
    const Matrix a = random_symmetric(n, rng);
    const Matrix b = random_symmetric(n, rng);
    r["kn_owedge_symmetries"] = curvature_symmetry(kulkarni::owedge(a, b));
    const Matrix w = random_antisymmetric(n, rng);
    r["kn_obar_symmetries"] = curvature_symmetry(kulkarni::obar(w, w));

    // E, F self-adjoint and K, L skew-adjoint with respect to the model metric.
    const Matrix& h = geom.g;
    const Matrix h_inv = checked_inverse(h);
    const Matrix E = h_inv * random_symmetric(n, rng);
    const Matrix F = h_inv * random_symmetric(n, rng);
    const Matrix K = h_inv * random_antisymmetric(n, rng);
    const Matrix L = h_inv * random_antisymmetric(n, rng);
    const kulkarni::TraceIdentities closed = kulkarni::trace_identities(E, F, K, L, h);

    const Lambda2Operator EE = kulkarni::endo_owedge(E, E, h);
    const Lambda2Operator FF = kulkarni::endo_owedge(F, F, h);
    const Lambda2Operator KK = kulkarni::endo_obar(K, K, h);
    const Lambda2Operator LL = kulkarni::endo_obar(L, L, h);
    r["trace_identities"] = std::max({relative(std::abs(EE.trace_with(FF) - closed.owedge_owedge), closed.owedge_owedge),
                                      relative(std::abs(KK.trace_with(LL) - closed.obar_obar), closed.obar_obar),
                                      relative(std::abs(EE.trace_with(KK) - closed.owedge_obar), closed.owedge_obar)});
}

void correspondence_checks(const GeometryAt& geom, const ModelParams& params, double fd_step, sampling::Rng& rng,
                           Residuals& r) {
    const int n = geom.dim();
    const ConnectionCorrection S = correspondence::s_closed_tensor(geom);
    const double s_scale = S.max_abs();

    double torsion = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Vector diff = S.slot(a).col(b) - S.slot(b).col(a) - (geom.omega_H(a, b) / geom.f_H) * geom.Z;
            torsion = std::max(torsion, diff.cwiseAbs().maxCoeff());
        }
    r["s_torsion"] = relative(torsion, s_scale);

    const flat_model::ModelParams p = params;
    const DomainPredicate inside = [p](const Vector& x) { return flat_model::in_domain(p, x); };
    double compat = 0.0;
    for (int a = 0; a < n; ++a) {
        const Matrix dG = finite_diff([&](const Vector& x) { return flat_model::deformed_metric(params, x); },
                                      geom.coords, a, fd_step, inside);
        // (D_a g_H)(b, c) - g_H(S_a b, c) - g_H(b, S_a c)
        const Matrix lowered = S.slot(a).transpose() * geom.g_H;
        compat = std::max(compat, max_abs(dG - lowered - lowered.transpose()));
    }
    r["s_metric_compatibility"] = relative(compat, max_abs(geom.g_H));

    const correspondence::ConnectionParts parts = correspondence::s_parts(params, geom.coords, fd_step);
    double koszul = 0.0, q_skew = 0.0, h_sym = 0.0;
    for (int a = 0; a < n; ++a) {
        koszul = std::max(koszul, max_abs(parts.s_h.slot(a) + parts.s_q.slot(a) - S.slot(a)));
        const Matrix lowered = parts.s_q.slot(a).transpose() * geom.g_H;
        q_skew = std::max(q_skew, max_abs(lowered + lowered.transpose()));
        for (int b = 0; b < n; ++b)
            h_sym = std::max(h_sym, (parts.s_h.slot(a).col(b) - parts.s_h.slot(b).col(a)).cwiseAbs().maxCoeff());
    }
    r["s_koszul_oracle"] = relative(koszul, s_scale);
    r["s_q_skew"] = relative(q_skew, max_abs(geom.g_H));
    r["s_h_symmetric"] = relative(h_sym, s_scale);

    // Lemma displays against the closed S and its differences, at random (A, B).
    const std::vector<ConnectionCorrection> dS =
        correspondence::s_derivatives(params, geom.coords, correspondence::SSource::Closed, fd_step);
    double ds = 0.0, comm = 0.0, dzsz = 0.0;
    const Matrix dzsz_direct = geom.DZ + S.along(geom.Z);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector A = sampling::gaussian_vector(n, rng);
        const Vector B = sampling::gaussian_vector(n, rng);
        const correspondence::LemmaOperators ops = correspondence::lemma_operators(geom, A, B);
        Matrix ds_fd = Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a) ds_fd += A[a] * dS[static_cast<std::size_t>(a)].along(B) - B[a] * dS[static_cast<std::size_t>(a)].along(A);
        ds = std::max(ds, relative(max_abs(ops.term_DS - ds_fd), max_abs(ds_fd)));
        const Matrix SA = S.along(A), SB = S.along(B);
        const Matrix commutator = SA * SB - SB * SA;
        comm = std::max(comm, relative(max_abs(ops.term_comm - commutator), max_abs(commutator)));
        dzsz = std::max(dzsz, relative(max_abs(ops.term_DZSZ - dzsz_direct), max_abs(dzsz_direct)));
    }
    r["lemma_DS_fd"] = ds;
    r["lemma_comm"] = comm;
    r["lemma_DZSZ"] = dzsz;

    const QuadCov rtilde = correspondence::rtilde_closed(geom);
    const double r_scale = rtilde.max_abs();
    r["rtilde_symmetries"] = relative(curvature_symmetry(rtilde), r_scale);
    const QuadCov proj = correspondence::projective_part(geom);
    const QuadCov twist = correspondence::twist_part(geom);
    r["rtilde_grouped_symmetries"] =
        std::max(relative(curvature_symmetry(proj), proj.max_abs()), relative(curvature_symmetry(twist), twist.max_abs()));
    r["rtilde_lemma_assembly"] = relative(max_abs_diff(correspondence::t_lowered_from_lemmas(geom), rtilde), r_scale);

    const auto direct = correspondence::curvature_tensors(params, geom.coords, correspondence::SSource::Closed, fd_step);
    r["rtilde_direct_path"] = relative(max_abs_diff(direct.rtilde_direct, rtilde), r_scale);
    const auto koszul_path =
        correspondence::curvature_tensors(params, geom.coords, correspondence::SSource::Koszul, fd_step);
    r["rtilde_koszul_path"] = relative(max_abs_diff(koszul_path.rtilde_direct, rtilde), r_scale);

    const Lambda2Operator M = curvature::curvature_operator(geom, rtilde);
    r["curvature_operator_symmetric"] = relative(max_abs(M.entries() - M.entries().transpose()), max_abs(M.entries()));
}

void curvature_checks(const GeometryAt& geom, const ModelParams& params, sampling::Rng& rng, Residuals& r) {
    const int q = params.quaternionic_dim();
    const QuadCov rtilde = correspondence::rtilde_closed(geom);
    const double norm_frame = curvature::curvature_norm_frame(geom, rtilde);
    const double norm_closed = curvature::curvature_norm_closed(q, geom.f_Z, geom.f_H);
    r["norm_frame_vs_closed"] = std::abs(norm_frame - norm_closed) / std::abs(norm_closed);

    // Second point on the same level set of f_Z.
    const Vector other = sampling::point_with_fz(params, geom.f_Z, rng);
    const GeometryAt geom2 = flat_model::geometry_at(params, other);
    const double norm_other = curvature::curvature_norm_frame(geom2, correspondence::rtilde_closed(geom2));
    r["norm_level_set"] = std::abs(norm_other - norm_frame) / std::abs(norm_frame);

    if (params.c == 0.0) {
        const double expected = 4.0 * q * (2 * q + 1);
        r["norm_symmetric_space"] = std::abs(norm_frame - expected) / expected;
    }

    const double scal = curvature::scalar_curvature(geom, rtilde);
    const double expected_scal = curvature::expected_scalar_curvature(q);
    r["scalar_curvature"] = std::abs(scal - expected_scal) / std::abs(expected_scal);

    double k_rel = 0.0, k_zero = 0.0;
    for (int p = 0; p <= kMaxTracePower; ++p) {
        const curvature::KTraceCheck check = curvature::check_K_traces(geom, p);
        k_rel = std::max(k_rel, check.relative_residual);
        k_zero = std::max(k_zero, check.vanishing);
    }
    r["K_traces"] = k_rel;
    r["K_traces_vanishing"] = k_zero;

    const curvature::AlekseevskySplit split = curvature::alekseevsky_split(geom, rtilde);
    r["hk_type"] = curvature::hk_type_residual(geom, split.R1_part, rng, 50);
    r["twist_invariance"] = curvature::invariance_residual(geom);
}

Residuals point_residuals(const VerifyOptions& options, std::size_t index) {
    const ModelParams& params = options.params;
    sampling::Rng rng(sampling::point_seed(options.seed, index));
    const Vector coords = sampling::random_point(params, rng);
    const GeometryAt geom = flat_model::geometry_at(params, coords);

    Residuals r;
    flat_checks(geom, params, options.fd_step, r);
    kulkarni_checks(geom, rng, r);
    correspondence_checks(geom, params, options.fd_step, rng, r);
    curvature_checks(geom, params, rng, r);
    return r;
}

// Checks that do not depend on a sample point.
Residuals global_residuals(const ModelParams& params, std::map<std::string, int>& points) {
    Residuals r;
    const int q = params.quaternionic_dim();
    std::vector<double> norms(kRhoGridPoints);
    for (int i = 0; i < kRhoGridPoints; ++i) {
        const double rho = kRhoMin + (kRhoMax - kRhoMin) * i / (kRhoGridPoints - 1);
        norms[static_cast<std::size_t>(i)] = curvature::norm_of_rho(q, params.c, rho);
    }
    if (params.c == 0.0) {
        const double expected = 4.0 * q * (2 * q + 1);
        double worst = 0.0;
        for (double v : norms) worst = std::max(worst, std::abs(v - expected) / expected);
        r["rho_profile_constant"] = worst;
        points["rho_profile_constant"] = kRhoGridPoints;
    } else {
        int up = 0, down = 0;
        for (std::size_t i = 1; i < norms.size(); ++i) {
            if (norms[i] > norms[i - 1]) ++up;
            if (norms[i] < norms[i - 1]) ++down;
        }
        const int steps = kRhoGridPoints - 1;
        r["rho_profile_monotone"] = static_cast<double>(steps - std::max(up, down));
        points["rho_profile_monotone"] = kRhoGridPoints;
    }
    return r;
}

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

double tol_scale_from_env() {
    const char* raw = std::getenv("HKQK_TOL_SCALE");
    if (raw == nullptr || *raw == '\0') return 1.0;
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string("HKQK_TOL_SCALE must be a positive number, got '") + raw + "'");
    }
    return value;
}

std::vector<std::string> check_names() {
    std::vector<std::string> names;
    for (const auto& spec : specs()) names.emplace_back(spec.name);
    return names;
}

double default_tolerance(const std::string& name) {
    for (const auto& spec : specs())
        if (name == spec.name) return spec.tolerance;
    throw ConfigError("unknown check '" + name + "'");
}

Vector sample_point(const ModelParams& params, std::uint64_t seed, std::size_t index) {
    sampling::Rng rng(sampling::point_seed(seed, index));
    return sampling::random_point(params, rng);
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    if (options.samples < 1) throw ConfigError("samples must be at least 1");
    if (!(options.fd_step > 1e-9 && options.fd_step < 1e-2)) throw ConfigError("fd_step must lie in (1e-9, 1e-2)");
    if (options.params.m < 0) throw ConfigError("m must be non-negative");
    if (!(options.params.c >= 0.0)) throw ConfigError("c must be non-negative");
    for (const auto& [name, value] : options.tol_overrides) {
        default_tolerance(name);
        if (!(value >= 0.0)) throw ConfigError("tolerance override for '" + name + "' must be non-negative");
    }

    const std::size_t count = static_cast<std::size_t>(options.samples);
    std::vector<Residuals> per_point(count);
    std::vector<std::string> failures(count);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) {
        try {
            per_point[i] = point_residuals(options, i);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }

    std::map<std::string, double> worst;
    std::map<std::string, int> points;
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i].empty()) {
            // A point that throws fails every check it would have fed.
            for (const auto& spec : specs()) {
                worst[spec.name] = std::numeric_limits<double>::infinity();
                ++points[spec.name];
            }
            continue;
        }
        for (const auto& [name, value] : per_point[i]) {
            const auto [slot, fresh] = worst.try_emplace(name, sanitize(value));
            if (!fresh) slot->second = std::max(slot->second, sanitize(value));
            ++points[name];
        }
    }
    for (const auto& [name, value] : global_residuals(options.params, points)) worst[name] = sanitize(value);

    std::vector<CheckResult> results;
    for (const auto& spec : specs()) {
        CheckResult result;
        result.name = spec.name;
        result.anchor = spec.anchor;
        const auto it = options.tol_overrides.find(spec.name);
        result.tolerance = (it != options.tol_overrides.end() ? it->second : spec.tolerance) * options.tol_scale;
        result.max_residual = worst.count(spec.name) ? worst[spec.name] : 0.0;
        result.points = points.count(spec.name) ? points[spec.name] : 0;
        result.pass = result.max_residual < result.tolerance;
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace hkqk::verify
