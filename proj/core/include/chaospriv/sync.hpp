#pragma once

#include <span>
#include <utility>
#include <vector>

#include "chaospriv/integrate.hpp"
#include "chaospriv/oscillators.hpp"

namespace chaospriv {

// Synchronization diagnostics between two responder output trajectories on
// the same grid. The fitted rate is the least squares slope of ln|error|
// against time over the decaying segment: samples are used from the start up
// to the first one below `fit_floor` (after that the series sits on the
// floating point floor and would flatten the fit).
struct SyncReport {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> output_error;  // |s1 - s2| per sample
  double final_error = 0.0;
  double fitted_rate = 0.0;  // d ln(error) / dt, negative when converging
  bool fit_valid = false;
  double fit_floor = 1e-12;
  // For each requested threshold eps: first sample time with error <= eps,
  // or +inf when the series never gets there.
  std::vector<std::pair<double, double>> threshold_times;
};

SyncReport sync_report(const Trajectory& a, const Trajectory& b,
                       std::span<const double> thresholds = {},
                       double fit_floor = 1e-12);

// Integrates two copies of the responder against the same drive signal from
// the given initial states, then compares their outputs. The drive must cover
// [u.t0(), u.t0() + t_end] at step dt.
SyncReport sync_report(const AffineResponder& responder, const Trajectory& u,
                       std::span<const double> z1_0,
                       std::span<const double> z2_0, double dt, double t_end,
                       std::span<const double> thresholds = {},
                       double fit_floor = 1e-12);

}  // namespace chaospriv
