#include "hkqk/kernels.hpp"

#include <omp.h>

namespace hkqk::kernels {

namespace {

// Contract index `slot` (0..3) of T with the columns of `basis`.
QuadCov contract_slot(const QuadCov& T, const Matrix& basis, int slot) {
    const int n = T.dim();
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n; ++a) {
        int idx[4];
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double sum = 0.0;
                    for (int i = 0; i < n; ++i) {
                        idx[0] = a;
                        idx[1] = b;
                        idx[2] = c;
                        idx[3] = d;
                        const int target = idx[slot];
                        idx[slot] = i;
                        sum += basis(i, target) * T(idx[0], idx[1], idx[2], idx[3]);
                    }
                    out(a, b, c, d) = sum;
                }
    }
    return out;
}

}  // namespace

QuadCov outer(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double aij = a(i, j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) out(i, j, k, l) = aij * b(k, l);
        }
    return out;
}

QuadCov owedge(const QuadCov& phi) {
    const int n = phi.dim();
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B)
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X)
                    out(A, B, C, X) = phi(A, C, B, X) - phi(A, X, B, C) + phi(B, X, A, C) - phi(B, C, A, X);
    return out;
}

QuadCov obar(const QuadCov& phi) {
    const int n = phi.dim();
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B)
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X)
                    out(A, B, C, X) = phi(A, C, B, X) - phi(A, X, B, C) + phi(B, X, A, C) - phi(B, C, A, X) +
                                      2.0 * phi(A, B, C, X) + 2.0 * phi(C, X, A, B);
    return out;
}

QuadCov owedge_product(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B)
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X)
                    out(A, B, C, X) = a(A, C) * b(B, X) - a(A, X) * b(B, C) + a(B, X) * b(A, C) - a(B, C) * b(A, X);
    return out;
}

QuadCov obar_product(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    QuadCov out(n);
#pragma omp parallel for schedule(static)
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B) {
            const double aAB = a(A, B);
            const double bAB = b(A, B);
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X)
                    out(A, B, C, X) = a(A, C) * b(B, X) - a(A, X) * b(B, C) + a(B, X) * b(A, C) - a(B, C) * b(A, X) +
                                      2.0 * aAB * b(C, X) + 2.0 * a(C, X) * bAB;
        }
    return out;
}

QuadCov change_basis(const QuadCov& T, const Matrix& basis) {
    QuadCov out = contract_slot(T, basis, 0);
    out = contract_slot(out, basis, 1);
    out = contract_slot(out, basis, 2);
    return contract_slot(out, basis, 3);
}

Matrix lambda2_matrix(const QuadCov& T) {
    const int n = T.dim();
    const int rank = lambda2_rank(n);
    Matrix out(rank, rank);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const int col = pair_index(a, b, n);
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) out(pair_index(c, d, n), col) = T(a, b, c, d);
        }
    return out;
}

}  // namespace hkqk::kernels
