#pragma once

#include <algorithm>
#include <cmath>

#include "hkqk/flat_model.hpp"
#include "hkqk/pseudo_linear.hpp"
#include "hkqk/sampling.hpp"

namespace test_support {

using hkqk::Matrix;
using hkqk::Vector;

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix random_symmetric(int n, hkqk::sampling::Rng& rng) {
    const Matrix a = hkqk::sampling::gaussian_matrix(n, n, rng);
    return 0.5 * (a + a.transpose());
}

inline Matrix random_antisymmetric(int n, hkqk::sampling::Rng& rng) {
    const Matrix a = hkqk::sampling::gaussian_matrix(n, n, rng);
    return 0.5 * (a - a.transpose());
}

// Non-diagonal metric with `negative` negative directions.
inline Matrix random_metric(int n, int negative, hkqk::sampling::Rng& rng) {
    Matrix eta = Matrix::Identity(n, n);
    for (int i = 0; i < negative; ++i) eta(i, i) = -1.0;
    const Matrix q = Eigen::HouseholderQR<Matrix>(hkqk::sampling::gaussian_matrix(n, n, rng)).householderQ();
    Matrix scaled = eta;
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    for (int i = 0; i < n; ++i) scaled(i, i) *= scale(rng);
    return q.transpose() * scaled * q;
}

// The reference point z_0 = 2, everything else zero.
inline Vector reference_point(int m) {
    Vector x = Vector::Zero(4 * (m + 1));
    x[hkqk::flat_model::x_index(0)] = 2.0;
    return x;
}

}  // namespace test_support
