#include "hkqk/sampling.hpp"

#include <cmath>
#include <numbers>

namespace hkqk::sampling {

using flat_model::ModelParams;

Vector point_with_fz(const ModelParams& params, double f_Z, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const int m = params.m;
    Vector coords(params.dim());

    double others = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double x = normal(rng);
        const double y = normal(rng);
        coords[flat_model::x_index(j)] = x;
        coords[flat_model::y_index(j)] = y;
        others += x * x + y * y;
    }
    for (int j = 0; j <= m; ++j) {
        coords[flat_model::u_index(j, m)] = normal(rng);
        coords[flat_model::v_index(j, m)] = normal(rng);
    }
    // f_Z = (|z_0|^2 - others)/2 - c/2
    const double radius = std::sqrt(2.0 * f_Z + params.c + others);
    const double theta = phase(rng);
    coords[flat_model::x_index(0)] = radius * std::cos(theta);
    coords[flat_model::y_index(0)] = radius * std::sin(theta);
    return coords;
}

Vector random_point(const ModelParams& params, Rng& rng) {
    std::uniform_real_distribution<double> target(kMinSampleFz, kMaxSampleFz);
    const double f_Z = target(rng);
    return point_with_fz(params, f_Z, rng);
}

Vector gaussian_vector(int dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix mat(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) mat(i, j) = normal(rng);
    return mat;
}

}  // namespace hkqk::sampling
