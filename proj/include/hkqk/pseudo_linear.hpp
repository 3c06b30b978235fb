#pragma once

// Signature-aware dense linear algebra on a single tangent space.
//
// Conventions used everywhere in the library:
//   * an Endomorphism E acts on column vectors, X -> E * X;
//   * a BilinearForm B evaluates as B(X, Y) = X^T * B * Y;
//   * the lowered form of E with respect to a metric h is h(E., .), whose
//     matrix is E^T * h;
//   * the exterior square uses the lexicographic basis e_a ^ e_b, a < b, with
//     <A^B, C^X> = h(A,C) h(B,X) - h(A,X) h(B,C).

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hkqk/errors.hpp"

namespace hkqk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using Endomorphism = Matrix;
using BilinearForm = Matrix;

inline constexpr double kDegeneracyThreshold = 1e-10;

/// Pseudo-orthonormal frame: column a of `vectors` is e_a, and
/// h(e_a, e_b) = signs[a] * delta_ab for the metric h it was built from.
struct Frame {
    Matrix vectors;
    std::vector<int> signs;

    int dim() const { return static_cast<int>(vectors.cols()); }
};

/// Dense rank-4 covariant tensor T(a, b, c, d), row-major in (a, b, c, d).
class QuadCov {
public:
    QuadCov() = default;
    explicit QuadCov(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
    double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::size_t index(int a, int b, int c, int d) const {
        const std::size_t n = static_cast<std::size_t>(dim_);
        return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
    }

    /// T(A, B, C, X) for arbitrary vectors.
    double eval(const Vector& A, const Vector& B, const Vector& C, const Vector& X) const;

    double max_abs() const;

    QuadCov& operator+=(const QuadCov& other);
    QuadCov& operator-=(const QuadCov& other);
    QuadCov& operator*=(double s);

    friend QuadCov operator+(QuadCov lhs, const QuadCov& rhs) { return lhs += rhs; }
    friend QuadCov operator-(QuadCov lhs, const QuadCov& rhs) { return lhs -= rhs; }
    friend QuadCov operator*(double s, QuadCov t) { return t *= s; }

private:
    int dim_ = 0;
    std::vector<double> data_;
};

double max_abs_diff(const QuadCov& lhs, const QuadCov& rhs);

/// Operator on the exterior square, stored in the lexicographic a<b basis.
class Lambda2Operator {
public:
    Lambda2Operator() = default;
    explicit Lambda2Operator(int dim);
    Lambda2Operator(int dim, Matrix entries);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    Matrix& entries() { return entries_; }

    double trace() const { return entries_.trace(); }
    /// trace(this * other)
    double trace_with(const Lambda2Operator& other) const;

    Lambda2Operator operator*(const Lambda2Operator& other) const;
    Lambda2Operator& operator+=(const Lambda2Operator& other);
    Lambda2Operator& operator*=(double s);

private:
    int dim_ = 0;
    Matrix entries_;
};

/// D = d(d-1)/2.
constexpr int lambda2_rank(int dim) { return dim * (dim - 1) / 2; }

/// Position of e_a ^ e_b (a < b) in the lexicographic basis.
constexpr int pair_index(int a, int b, int dim) { return a * dim - a * (a + 1) / 2 + (b - a - 1); }

std::vector<std::pair<int, int>> lambda2_pairs(int dim);

/// Gram matrix of <.,.> on the exterior square in the coordinate pair basis.
Matrix lambda2_gram(const BilinearForm& metric);

/// Inverse of a metric, throwing DegenerateMetric when it is numerically singular.
Matrix checked_inverse(const BilinearForm& metric);

/// Pivoted modified Gram-Schmidt. Columns of `seed_basis` are the candidates;
/// at every step the candidate of largest |B(v,v)| is taken next.
Frame pseudo_gram_schmidt(const BilinearForm& metric, const Matrix& seed_basis);
Frame pseudo_gram_schmidt(const BilinearForm& metric);

/// max_ab |B(e_a, e_b) - signs[a] delta_ab|
double frame_residual(const Frame& frame, const BilinearForm& metric);

/// E* with metric(E* x, y) = metric(x, E y).
Endomorphism adjoint(const Endomorphism& E, const BilinearForm& metric);

/// metric(E., .) as a matrix.
BilinearForm lower(const Endomorphism& E, const BilinearForm& metric);

/// M with <M(e_a ^ e_b), e_c ^ e_d> = T(e_a, e_b, e_c, e_d).
Lambda2Operator quadcov_to_lambda2_op(const QuadCov& T, const BilinearForm& metric);

/// Components T(e_a, e_b, e_c, e_d) of T in the given frame.
QuadCov to_frame(const QuadCov& T, const Frame& frame);

// Symmetry residuals of a rank-4 covariant tensor (max absolute violation).
double pair_antisymmetry_residual(const QuadCov& T);
double pair_symmetry_residual(const QuadCov& T);
double first_bianchi_residual(const QuadCov& T);

/// Central-difference step used by finite_diff.
inline constexpr double kDefaultFdStep = 1e-5;

using DomainPredicate = std::function<bool(const Vector&)>;

/// Central difference (f(p + h e) - f(p - h e)) / 2h with absolute step h.
/// `field` may return a scalar or an Eigen matrix/vector.
template <class Field>
auto finite_diff(Field&& field, const Vector& point, int direction, double h = kDefaultFdStep,
                 const DomainPredicate& inside = {}) {
    Vector plus = point;
    Vector minus = point;
    plus[direction] += h;
    minus[direction] -= h;
    if (inside && (!inside(plus) || !inside(minus))) {
        throw DomainViolation("finite-difference sample leaves the domain in direction " +
                              std::to_string(direction));
    }
    auto f_plus = field(plus);
    auto f_minus = field(minus);
    using Result = std::decay_t<decltype(f_plus)>;
    if constexpr (std::is_arithmetic_v<Result>) {
        return (f_plus - f_minus) / (2.0 * h);
    } else {
        return Result((f_plus - f_minus) / (2.0 * h));
    }
}

}  // namespace hkqk
