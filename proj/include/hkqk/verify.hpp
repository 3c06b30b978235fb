#pragma once

// Batch verification: every identity of the library evaluated over seeded
// random points, reduced to one CheckResult per identity.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hkqk/flat_model.hpp"

namespace hkqk::verify {

struct CheckResult {
    std::string name;
    std::string anchor;  // what the identity is, in words
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int points = 0;
};

struct VerifyOptions {
    flat_model::ModelParams params;
    std::uint64_t seed = 42;
    int samples = 20;
    double fd_step = kDefaultFdStep;
    double tol_scale = 1.0;
    std::map<std::string, double> tol_overrides;  // replaces the default, before tol_scale
};

/// HKQK_TOL_SCALE, or 1 when unset. Throws ConfigError on junk.
double tol_scale_from_env();

/// Names of all checks, in report order.
std::vector<std::string> check_names();

/// Default tolerance of a check (before overrides and scaling).
double default_tolerance(const std::string& name);

std::vector<CheckResult> run_verification(const VerifyOptions& options);

/// Sample point `index` of a run; the same for every evaluation order.
Vector sample_point(const flat_model::ModelParams& params, std::uint64_t seed, std::size_t index);

}  // namespace hkqk::verify
