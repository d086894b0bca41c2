#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zerolab/model.hpp"

namespace zlab::scenarios {

/// Names accepted by `builtin`.
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);
/// Throws ConfigError for an unknown name.
json builtin(const std::string& name);

/// Random linear problem on [0, 1]: a in [0.5, 2], |b| <= 2, |c| <= 2,
/// each side Dirichlet zero, Neumann or Robin with beta in [0, 2], and a
/// trigonometric initial profile with 1 to 6 sign changes.
json random_linear(std::uint64_t seed, int index);

/// Random radial problem on the unit ball in R^3: symmetry at r = 0,
/// Robin at r = 1, u0 a cosine sum with at least one sign change.
json random_radial(std::uint64_t seed, int index);

/// Robin problem whose initial profile changes sign close to one end, so
/// the boundary value crosses zero shortly after the start.
json robin_touch(std::uint64_t seed, int index);

}  // namespace zlab::scenarios
