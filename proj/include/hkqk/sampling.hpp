#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "hkqk/flat_model.hpp"

namespace hkqk::sampling {

using Rng = std::mt19937_64;

/// Seed for the index-th sample point; independent of evaluation order.
inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) { return seed ^ static_cast<std::uint64_t>(index); }

inline constexpr double kMinSampleFz = 0.1;
inline constexpr double kMaxSampleFz = 5.0;

/// Valid point with prescribed f_Z: z_1..z_m and w standard normal, z_0 with
/// uniform phase and modulus chosen to hit f_Z.
Vector point_with_fz(const flat_model::ModelParams& params, double f_Z, Rng& rng);

/// f_Z drawn uniformly from [kMinSampleFz, kMaxSampleFz].
Vector random_point(const flat_model::ModelParams& params, Rng& rng);

Vector gaussian_vector(int dim, Rng& rng);

/// Random matrix with standard normal entries.
Matrix gaussian_matrix(int rows, int cols, Rng& rng);

}  // namespace hkqk::sampling
