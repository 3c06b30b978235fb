#pragma once

// Rank-4 tensor kernels. The functions in hkqk::kernels are OpenMP-parallel
// over the leading index; hkqk::kernels::serial holds plain loop-nest
// reference versions that the tests compare against.

#include "hkqk/pseudo_linear.hpp"

namespace hkqk::kernels {

/// (a (x) b)(A,B,C,X) = a(A,B) b(C,X)
QuadCov outer(const Matrix& a, const Matrix& b);

/// Phi(A,C,B,X) - Phi(A,X,B,C) + Phi(B,X,A,C) - Phi(B,C,A,X)
QuadCov owedge(const QuadCov& phi);

/// owedge(phi) + 2 Phi(A,B,C,X) + 2 Phi(C,X,A,B)
QuadCov obar(const QuadCov& phi);

/// (a (x) b)^owedge without materializing the outer product.
QuadCov owedge_product(const Matrix& a, const Matrix& b);

/// (a (x) b)^obar without materializing the outer product.
QuadCov obar_product(const Matrix& a, const Matrix& b);

/// T'(a,b,c,d) = sum F_ia F_jb F_kc F_ld T(i,j,k,l), F = columns of `basis`.
QuadCov change_basis(const QuadCov& T, const Matrix& basis);

/// Tmat[(cd), (ab)] = T(a,b,c,d) over lexicographic pairs a<b, c<d.
Matrix lambda2_matrix(const QuadCov& T);

namespace serial {

QuadCov outer(const Matrix& a, const Matrix& b);
QuadCov owedge(const QuadCov& phi);
QuadCov obar(const QuadCov& phi);
QuadCov owedge_product(const Matrix& a, const Matrix& b);
QuadCov obar_product(const Matrix& a, const Matrix& b);
QuadCov change_basis(const QuadCov& T, const Matrix& basis);
Matrix lambda2_matrix(const QuadCov& T);

}  // namespace serial

}  // namespace hkqk::kernels
