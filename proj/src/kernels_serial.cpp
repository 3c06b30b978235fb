#include "hkqk/kernels.hpp"

namespace hkqk::kernels::serial {

QuadCov outer(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    QuadCov out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) out(i, j, k, l) = a(i, j) * b(k, l);
    return out;
}

QuadCov owedge(const QuadCov& phi) {
    const int n = phi.dim();
    QuadCov out(n);
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B)
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X)
                    out(A, B, C, X) = phi(A, C, B, X) - phi(A, X, B, C) + phi(B, X, A, C) - phi(B, C, A, X);
    return out;
}

QuadCov obar(const QuadCov& phi) {
    const int n = phi.dim();
    QuadCov out = owedge(phi);
    for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B)
            for (int C = 0; C < n; ++C)
                for (int X = 0; X < n; ++X) out(A, B, C, X) += 2.0 * phi(A, B, C, X) + 2.0 * phi(C, X, A, B);
    return out;
}

QuadCov owedge_product(const Matrix& a, const Matrix& b) { return owedge(outer(a, b)); }

QuadCov obar_product(const Matrix& a, const Matrix& b) { return obar(outer(a, b)); }

QuadCov change_basis(const QuadCov& T, const Matrix& basis) {
    const int n = T.dim();
    QuadCov out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double sum = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int k = 0; k < n; ++k)
                                for (int l = 0; l < n; ++l)
                                    sum += basis(i, a) * basis(j, b) * basis(k, c) * basis(l, d) * T(i, j, k, l);
                    out(a, b, c, d) = sum;
                }
    return out;
}

Matrix lambda2_matrix(const QuadCov& T) {
    const int n = T.dim();
    const int rank = lambda2_rank(n);
    Matrix out(rank, rank);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) out(pair_index(c, d, n), pair_index(a, b, n)) = T(a, b, c, d);
    return out;
}

}  // namespace hkqk::kernels::serial
