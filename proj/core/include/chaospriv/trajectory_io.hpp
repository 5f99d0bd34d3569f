#pragma once

#include <string>

#include "chaospriv/integrate.hpp"

namespace chaospriv {

// CSV export: header "t,x0,...,x{n-1},output", one row per sample, floats
// with 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& t);

// Binary column format for long runs: magic "CPTJ", version byte (1), then
// little-endian u32 state dimension, u64 sample count, f64 t0, f64 dt,
// followed by sample records (state values then output, all f64).
void write_trajectory_binary(const std::string& path, const Trajectory& t);
Trajectory read_trajectory_binary(const std::string& path);

}  // namespace chaospriv
