#pragma once

#include <string>

#include "rbslip/geometry.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

/// Binary layout (native little-endian):
///   "RBNS1" | int32 n1, n2 | f64 gamma, ra, pr, time
///   | series: height (mean, count, {k, cos, sin}...), alpha bottom, alpha top
///   | f64[n1*n2] omega, psi, temp (row-major, row = x2 level)
///   | int64 step | f64 dt_prev, circulation, psi_top | u8 has_history
///   | f64[n1*n2] n_omega_prev, n_temp_prev
///   | f64 dt_next, next_sample, next_checkpoint
struct CheckpointHeader {
  int n1 = 0, n2 = 0;
  double gamma = 1.0;
  PhysicalParams params;
  double time = 0.0;
  HeightProfile profile;
  FourierSeries alpha_bottom, alpha_top;
};

struct DriverClock {
  double dt_next = 0.0;
  double next_sample = 0.0;
  double next_checkpoint = 0.0;
};

struct Checkpoint {
  CheckpointHeader header;
  FlowState state;  // u1, u2 are not stored; recover them from psi
  DriverClock clock;
};

/// Writes to path via a temporary file and rename.
void write_checkpoint(const std::string& path, const CheckpointHeader& header, const FlowState& s,
                      const DriverClock& clock = {});
Checkpoint read_checkpoint(const std::string& path);

}  // namespace rbslip
