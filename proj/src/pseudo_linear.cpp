#include "hkqk/pseudo_linear.hpp"

#include <algorithm>
#include <cmath>

#include "hkqk/kernels.hpp"

namespace hkqk {

double QuadCov::eval(const Vector& A, const Vector& B, const Vector& C, const Vector& X) const {
    const int n = dim_;
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
        if (A[a] == 0.0) continue;
        for (int b = 0; b < n; ++b) {
            if (B[b] == 0.0) continue;
            double inner = 0.0;
            for (int c = 0; c < n; ++c) {
                const double* row = &data_[index(a, b, c, 0)];
                double acc = 0.0;
                for (int d = 0; d < n; ++d) acc += row[d] * X[d];
                inner += C[c] * acc;
            }
            sum += A[a] * B[b] * inner;
        }
    }
    return sum;
}

double QuadCov::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

QuadCov& QuadCov::operator+=(const QuadCov& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

QuadCov& QuadCov::operator-=(const QuadCov& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

QuadCov& QuadCov::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

double max_abs_diff(const QuadCov& lhs, const QuadCov& rhs) {
    double m = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) m = std::max(m, std::abs(lhs.data()[i] - rhs.data()[i]));
    return m;
}

Lambda2Operator::Lambda2Operator(int dim) : dim_(dim), entries_(Matrix::Zero(lambda2_rank(dim), lambda2_rank(dim))) {}

Lambda2Operator::Lambda2Operator(int dim, Matrix entries) : dim_(dim), entries_(std::move(entries)) {}

double Lambda2Operator::trace_with(const Lambda2Operator& other) const {
    return (entries_.array() * other.entries_.transpose().array()).sum();
}

Lambda2Operator Lambda2Operator::operator*(const Lambda2Operator& other) const {
    return Lambda2Operator(dim_, entries_ * other.entries_);
}

Lambda2Operator& Lambda2Operator::operator+=(const Lambda2Operator& other) {
    entries_ += other.entries_;
    return *this;
}

Lambda2Operator& Lambda2Operator::operator*=(double s) {
    entries_ *= s;
    return *this;
}

std::vector<std::pair<int, int>> lambda2_pairs(int dim) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(lambda2_rank(dim)));
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) pairs.emplace_back(a, b);
    return pairs;
}

Matrix lambda2_gram(const BilinearForm& metric) {
    const int n = static_cast<int>(metric.rows());
    const auto pairs = lambda2_pairs(n);
    const int rank = static_cast<int>(pairs.size());
    Matrix gram(rank, rank);
    for (int p = 0; p < rank; ++p) {
        const auto [a, b] = pairs[p];
        for (int q = 0; q < rank; ++q) {
            const auto [c, d] = pairs[q];
            gram(p, q) = metric(a, c) * metric(b, d) - metric(a, d) * metric(b, c);
        }
    }
    return gram;
}

Matrix checked_inverse(const BilinearForm& metric) {
    Eigen::FullPivLU<Matrix> lu(metric);
    if (!lu.isInvertible()) throw DegenerateMetric("metric is singular");
    const double smallest_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (smallest_pivot < kDegeneracyThreshold) throw DegenerateMetric("metric pivot below threshold");
    return lu.inverse();
}

Frame pseudo_gram_schmidt(const BilinearForm& metric, const Matrix& seed_basis) {
    const int n = static_cast<int>(metric.rows());
    if (metric.cols() != n || seed_basis.rows() != n) throw DegenerateMetric("dimension mismatch");
    const int count = static_cast<int>(seed_basis.cols());

    std::vector<Vector> remaining;
    remaining.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) remaining.emplace_back(seed_basis.col(i));

    Frame frame;
    frame.vectors.resize(n, count);
    frame.signs.reserve(static_cast<std::size_t>(count));

    auto form = [&](const Vector& x, const Vector& y) { return x.dot(metric * y); };

    for (int step = 0; step < count; ++step) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const double q = std::abs(form(remaining[i], remaining[i]));
            if (q > best_norm) {
                best_norm = q;
                best = i;
            }
        }
        if (best_norm < kDegeneracyThreshold) {
            // All candidates are (numerically) null; a sum u_i + u_j with
            // B(u_i, u_j) != 0 is not.
            double best_cross = 0.0;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < remaining.size(); ++i)
                for (std::size_t j = i + 1; j < remaining.size(); ++j) {
                    const double cross = std::abs(form(remaining[i], remaining[j]));
                    if (cross > best_cross) {
                        best_cross = cross;
                        bi = i;
                        bj = j;
                    }
                }
            if (best_cross < kDegeneracyThreshold) throw DegenerateMetric("pivot below threshold in Gram-Schmidt");
            remaining[bi] += remaining[bj];
            best = bi;
            best_norm = std::abs(form(remaining[bi], remaining[bi]));
        }

        Vector v = remaining[best];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        const double q = form(v, v);
        const int sign = q > 0.0 ? 1 : -1;
        v /= std::sqrt(std::abs(q));
        for (auto& u : remaining) u -= sign * form(u, v) * v;
        frame.vectors.col(step) = v;
        frame.signs.push_back(sign);
    }
    return frame;
}

Frame pseudo_gram_schmidt(const BilinearForm& metric) {
    return pseudo_gram_schmidt(metric, Matrix::Identity(metric.rows(), metric.cols()));
}

double frame_residual(const Frame& frame, const BilinearForm& metric) {
    const Matrix gram = frame.vectors.transpose() * metric * frame.vectors;
    double m = 0.0;
    for (int a = 0; a < gram.rows(); ++a)
        for (int b = 0; b < gram.cols(); ++b) {
            const double expected = a == b ? frame.signs[static_cast<std::size_t>(a)] : 0.0;
            m = std::max(m, std::abs(gram(a, b) - expected));
        }
    return m;
}

Endomorphism adjoint(const Endomorphism& E, const BilinearForm& metric) {
    const Matrix inverse = checked_inverse(metric);
    return inverse * E.transpose() * metric;
}

BilinearForm lower(const Endomorphism& E, const BilinearForm& metric) { return E.transpose() * metric; }

Lambda2Operator quadcov_to_lambda2_op(const QuadCov& T, const BilinearForm& metric) {
    const double scale = std::max(1.0, T.max_abs());
    if (pair_antisymmetry_residual(T) > kDegeneracyThreshold * scale) {
        throw PairAntisymmetryViolated("tensor is not antisymmetric in its index pairs");
    }
    const Matrix inverse = checked_inverse(metric);
    return Lambda2Operator(T.dim(), lambda2_gram(inverse) * kernels::lambda2_matrix(T));
}

QuadCov to_frame(const QuadCov& T, const Frame& frame) { return kernels::change_basis(T, frame.vectors); }

double pair_antisymmetry_residual(const QuadCov& T) {
    const int n = T.dim();
    double m = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    m = std::max(m, std::abs(T(a, b, c, d) + T(b, a, c, d)));
                    m = std::max(m, std::abs(T(a, b, c, d) + T(a, b, d, c)));
                }
    return m;
}

double pair_symmetry_residual(const QuadCov& T) {
    const int n = T.dim();
    double m = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) m = std::max(m, std::abs(T(a, b, c, d) - T(c, d, a, b)));
    return m;
}

double first_bianchi_residual(const QuadCov& T) {
    const int n = T.dim();
    double m = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    m = std::max(m, std::abs(T(a, b, c, d) + T(b, c, a, d) + T(c, a, b, d)));
    return m;
}

}  // namespace hkqk
